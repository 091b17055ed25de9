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
 * Continuous maps between probe domains.
 *
 * ChartMap is the interface the probe works against: point evaluation,
 * a sound interval enclosure, and a global Lipschitz bound, all in chart
 * coordinates with the sup metric.
 *
 * ExprMap is the declarative map: one expression tree per target
 * coordinate, built from max, add (max-plus), mul (max-times), coord and
 * const. In the chart both add and mul become products of non-negative
 * numbers, so one compiled program serves both flavors.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "idemconv/barycenter.hpp"
#include "idemconv/domain.hpp"
#include "idemconv/errors.hpp"
#include "idemconv/semiring.hpp"

namespace idemconv::probe {

class ChartMap {
 public:
  virtual ~ChartMap() = default;

  virtual const Domain& source() const = 0;
  virtual const Domain& target() const = 0;
  virtual std::string description() const = 0;

  /// F(x) for x in the source chart.
  virtual void eval(std::span<const double> x, std::span<double> out) const = 0;
  /// An enclosure of F over the chart box `box`.
  virtual void eval_interval(std::span<const Interval> box, std::span<Interval> out) const = 0;
  /// Lipschitz bound in the sup metric of the charts, over the source.
  virtual double lipschitz() const = 0;

  ChartPoint operator()(std::span<const double> x) const {
    ChartPoint out(target().dim());
    eval(x, out);
    return out;
  }
};

// ---------------------------------------------------------------------------

/// Native expression tree.
struct Expr {
  enum class Op { Max, Add, Mul, Coord, Const };

  Op op = Op::Const;
  std::vector<Expr> args;
  std::size_t coord = 0;
  ExtendedReal constant = ExtendedReal(0.0);

  static Expr make_coord(std::size_t i) {
    Expr e;
    e.op = Op::Coord;
    e.coord = i;
    return e;
  }
  static Expr make_const(ExtendedReal c) {
    Expr e;
    e.op = Op::Const;
    e.constant = c;
    return e;
  }
  static Expr make(Op op, std::vector<Expr> args) {
    Expr e;
    e.op = op;
    e.args = std::move(args);
    return e;
  }
  static Expr max(Expr a, Expr b) { return make(Op::Max, {std::move(a), std::move(b)}); }
  static Expr add(Expr a, Expr b) { return make(Op::Add, {std::move(a), std::move(b)}); }
  static Expr mul(Expr a, Expr b) { return make(Op::Mul, {std::move(a), std::move(b)}); }
};

inline std::string_view op_name(Expr::Op op) {
  switch (op) {
    case Expr::Op::Max: return "max";
    case Expr::Op::Add: return "add";
    case Expr::Op::Mul: return "mul";
    case Expr::Op::Coord: return "coord";
    case Expr::Op::Const: return "const";
  }
  return "?";
}

namespace detail {

struct Instr {
  enum class Code { Coord, Const, Max, Mul };
  Code code;
  std::size_t index = 0;  // coordinate, or arity for Max/Mul
  double value = 0.0;
};

/// Stack program for one target coordinate, in chart arithmetic.
class Program {
 public:
  Program() = default;

  static Program compile(const Expr& e, Model model, std::size_t source_dim) {
    Program p;
    p.emit(e, model, source_dim);
    return p;
  }

  double eval(std::span<const double> x, std::vector<double>& stack) const {
    stack.clear();
    for (const auto& in : code_) {
      switch (in.code) {
        case Instr::Code::Coord: stack.push_back(x[in.index]); break;
        case Instr::Code::Const: stack.push_back(in.value); break;
        case Instr::Code::Max: {
          double acc = stack.back();
          stack.pop_back();
          for (std::size_t k = 1; k < in.index; ++k) {
            acc = std::max(acc, stack.back());
            stack.pop_back();
          }
          stack.push_back(acc);
          break;
        }
        case Instr::Code::Mul: {
          double acc = stack.back();
          stack.pop_back();
          for (std::size_t k = 1; k < in.index; ++k) {
            acc *= stack.back();
            stack.pop_back();
          }
          stack.push_back(acc);
          break;
        }
      }
    }
    return stack.back();
  }

  Interval eval(std::span<const Interval> x, std::vector<Interval>& stack) const {
    stack.clear();
    for (const auto& in : code_) {
      switch (in.code) {
        case Instr::Code::Coord: stack.push_back(x[in.index]); break;
        case Instr::Code::Const: stack.push_back(Interval{in.value, in.value}); break;
        case Instr::Code::Max: {
          Interval acc = stack.back();
          stack.pop_back();
          for (std::size_t k = 1; k < in.index; ++k) {
            acc.lo = std::max(acc.lo, stack.back().lo);
            acc.hi = std::max(acc.hi, stack.back().hi);
            stack.pop_back();
          }
          stack.push_back(acc);
          break;
        }
        case Instr::Code::Mul: {
          // Chart values are non-negative, so products are monotone.
          Interval acc = stack.back();
          stack.pop_back();
          for (std::size_t k = 1; k < in.index; ++k) {
            acc.lo *= stack.back().lo;
            acc.hi *= stack.back().hi;
            stack.pop_back();
          }
          stack.push_back(acc);
          break;
        }
      }
    }
    return stack.back();
  }

  /// Lipschitz bound of this coordinate given chart bounds of the inputs.
  double lipschitz(std::span<const Interval> bounds) const {
    struct Entry {
      double lip;
      double sup;
    };
    std::vector<Entry> stack;
    for (const auto& in : code_) {
      switch (in.code) {
        case Instr::Code::Coord: stack.push_back({1.0, bounds[in.index].hi}); break;
        case Instr::Code::Const: stack.push_back({0.0, in.value}); break;
        case Instr::Code::Max: {
          Entry acc = stack.back();
          stack.pop_back();
          for (std::size_t k = 1; k < in.index; ++k) {
            acc.lip = std::max(acc.lip, stack.back().lip);
            acc.sup = std::max(acc.sup, stack.back().sup);
            stack.pop_back();
          }
          stack.push_back(acc);
          break;
        }
        case Instr::Code::Mul: {
          // |ab - a'b'| <= sup|a| |b - b'| + sup|b| |a - a'|
          Entry acc = stack.back();
          stack.pop_back();
          for (std::size_t k = 1; k < in.index; ++k) {
            const Entry b = stack.back();
            stack.pop_back();
            acc = Entry{acc.sup * b.lip + b.sup * acc.lip, acc.sup * b.sup};
          }
          stack.push_back(acc);
          break;
        }
      }
    }
    return stack.back().lip;
  }

 private:
  void emit(const Expr& e, Model model, std::size_t source_dim) {
    using Op = Expr::Op;
    switch (e.op) {
      case Op::Coord:
        if (e.coord >= source_dim) throw SchemaError("expression: coord index out of range");
        code_.push_back({Instr::Code::Coord, e.coord, 0.0});
        return;
      case Op::Const: {
        double c = 0.0;
        if (model == Model::MaxPlus) {
          c = MaxPlus::chart(e.constant);
        } else {
          c = e.constant.is_bottom() ? -1.0 : e.constant.value();
          if (!(c >= 0.0 && c <= 1.0)) throw SchemaError("expression: max-times constant outside [0,1]");
        }
        code_.push_back({Instr::Code::Const, 0, c});
        return;
      }
      case Op::Max:
      case Op::Add:
      case Op::Mul: {
        if (e.op == Op::Add && model != Model::MaxPlus) {
          throw SchemaError("expression: 'add' is only defined in the max-plus flavor");
        }
        if (e.op == Op::Mul && model != Model::MaxTimes) {
          throw SchemaError("expression: 'mul' is only defined in the max-times flavor");
        }
        if (e.args.size() < 2) throw SchemaError("expression: operators take at least two arguments");
        for (auto it = e.args.rbegin(); it != e.args.rend(); ++it) emit(*it, model, source_dim);
        code_.push_back({e.op == Op::Max ? Instr::Code::Max : Instr::Code::Mul, e.args.size(), 0.0});
        return;
      }
    }
  }

  std::vector<Instr> code_;
};

}  // namespace detail

/// A map given by one expression per target coordinate.
class ExprMap final : public ChartMap {
 public:
  ExprMap(std::string name, Domain source, Domain target, std::vector<Expr> exprs)
      : name_(std::move(name)), source_(std::move(source)), target_(std::move(target)),
        exprs_(std::move(exprs)) {
    if (source_.model() != target_.model()) throw SchemaError("map: source and target flavors differ");
    if (exprs_.size() != target_.dim()) {
      throw DimensionError("map: one expression per target coordinate required");
    }
    for (const auto& e : exprs_) programs_.push_back(detail::Program::compile(e, source_.model(), source_.dim()));
    const auto b = source_.bounds();
    for (const auto& p : programs_) lipschitz_ = std::max(lipschitz_, p.lipschitz(b));
  }

  const Domain& source() const override { return source_; }
  const Domain& target() const override { return target_; }
  std::string description() const override { return name_; }
  const std::vector<Expr>& exprs() const noexcept { return exprs_; }
  Model model() const noexcept { return source_.model(); }

  void eval(std::span<const double> x, std::span<double> out) const override {
    thread_local std::vector<double> stack;
    for (std::size_t j = 0; j < programs_.size(); ++j) out[j] = programs_[j].eval(x, stack);
  }

  void eval_interval(std::span<const Interval> box, std::span<Interval> out) const override {
    thread_local std::vector<Interval> stack;
    for (std::size_t j = 0; j < programs_.size(); ++j) out[j] = programs_[j].eval(box, stack);
  }

  double lipschitz() const override { return lipschitz_; }

  /// Checks that sampled source points map into the target domain.
  void check_typing(std::size_t samples = 256, std::uint64_t seed = 1, double tol = 1e-9) const {
    DomainSampler sampler(source_, seed);
    for (std::size_t i = 0; i < samples; ++i) {
      const auto y = (*this)(sampler(i));
      if (!target_.contains(y, tol)) throw SchemaError("map '" + name_ + "' leaves its target domain");
    }
  }

 private:
  std::string name_;
  Domain source_;
  Domain target_;
  std::vector<Expr> exprs_;
  std::vector<detail::Program> programs_;
  double lipschitz_ = 0.0;
};

/// (x, y, t, p) -> barycenter of the two-atom measure t.delta_x \/ p.delta_y,
/// evaluated through the barycenter module on native coordinates.
class BaryPairMap final : public ChartMap {
 public:
  explicit BaryPairMap(Domain x) : source_(x.times(x).times(Domain::pair(x.model()))), target_(std::move(x)) {
    const auto b = source_.bounds();
    double sup_x = 0.0;
    for (std::size_t i = 0; i < 2 * target_.dim(); ++i) sup_x = std::max(sup_x, b[i].hi);
    lipschitz_ = 1.0 + sup_x;
  }

  const Domain& source() const override { return source_; }
  const Domain& target() const override { return target_; }
  std::string description() const override { return "bary-pair"; }
  double lipschitz() const override { return lipschitz_; }

  void eval(std::span<const double> c, std::span<double> out) const override {
    const std::size_t d = target_.dim();
    if (target_.model() == Model::MaxTimes) {
      const EmbeddedMeasure<MaxTimes> nu({MaxTimesPoint(c.begin(), c.begin() + d),
                                          MaxTimesPoint(c.begin() + d, c.begin() + 2 * d)},
                                         {c[2 * d], c[2 * d + 1]});
      const auto b = bary_mt(nu);
      std::copy(b.begin(), b.end(), out.begin());
    } else {
      auto native = [&](std::size_t from, std::size_t n) {
        MaxPlusPoint p;
        for (std::size_t i = from; i < from + n; ++i) p.push_back(MaxPlus::from_chart(c[i]));
        return p;
      };
      const auto w = native(2 * d, 2);
      const EmbeddedMeasure<MaxPlus> mu({native(0, d), native(d, d)}, {w[0], w[1]});
      const auto b = bary_mp(mu);
      for (std::size_t j = 0; j < d; ++j) out[j] = MaxPlus::chart(b[j]);
    }
  }

  void eval_interval(std::span<const Interval> box, std::span<Interval> out) const override {
    // The barycenter is monotone in atoms and weights.
    const std::size_t d = target_.dim();
    const Interval t = box[2 * d];
    const Interval p = box[2 * d + 1];
    for (std::size_t j = 0; j < d; ++j) {
      out[j] = Interval{std::max(t.lo * box[j].lo, p.lo * box[d + j].lo),
                        std::max(t.hi * box[j].hi, p.hi * box[d + j].hi)};
    }
  }

 private:
  Domain source_;
  Domain target_;
  double lipschitz_ = 0.0;
};

// ---------------------------------------------------------------------------
// Builders for the standard maps.

/// Combination map X x X x J -> X: s(x, y, t, p) = t.x \/ p.y in the
/// max-times flavor, (t + x) \/ (p + y) in the max-plus one.
inline ExprMap make_combination_map(const Domain& x) {
  const std::size_t d = x.dim();
  const auto op = x.model() == Model::MaxPlus ? Expr::Op::Add : Expr::Op::Mul;
  std::vector<Expr> exprs;
  for (std::size_t j = 0; j < d; ++j) {
    exprs.push_back(Expr::max(Expr::make(op, {Expr::make_coord(2 * d), Expr::make_coord(j)}),
                              Expr::make(op, {Expr::make_coord(2 * d + 1), Expr::make_coord(d + j)})));
  }
  const char* name = x.model() == Model::MaxPlus ? "p-map" : "s-map";
  return ExprMap(name, x.times(x).times(Domain::pair(x.model())), x, std::move(exprs));
}

/// (x, y) -> x \/ y on X x X.
inline ExprMap make_join_map(const Domain& x) {
  const std::size_t d = x.dim();
  std::vector<Expr> exprs;
  for (std::size_t j = 0; j < d; ++j) exprs.push_back(Expr::max(Expr::make_coord(j), Expr::make_coord(d + j)));
  return ExprMap("join-map", x.times(x), x, std::move(exprs));
}

inline ExprMap make_identity_map(const Domain& x) {
  std::vector<Expr> exprs;
  for (std::size_t j = 0; j < x.dim(); ++j) exprs.push_back(Expr::make_coord(j));
  return ExprMap("identity", x, x, std::move(exprs));
}

}  // namespace idemconv::probe
