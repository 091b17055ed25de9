/*
 *   Copyright 2026 The idemconv Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/**
 * @file
 *
 * Exception types thrown by idemconv. Each category maps onto one CLI exit
 * code, see tools/idemconv_cli.cpp.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace idemconv {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A scalar or point lies outside the set an operation is defined on.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Input does not match the expected schema (JSON shape, tokens, labels).
class SchemaError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Weights fail to attain the unit exactly (or are all bottom).
class NormalizationError : public Error {
 public:
  using Error::Error;
};

class SpaceMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace idemconv
