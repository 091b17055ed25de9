#include <catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

const std::string kCli = IDEMCONV_CLI_PATH;
const std::string kFixtures = IDEMCONV_FIXTURES_DIR;

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("idemconv_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write(const std::string& name, const std::string& text) {
  const auto p = scratch() / name;
  std::ofstream(p) << text;
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Run {
  int code = -1;
  std::string out;
  json j() const { return json::parse(out); }
};

Run run(const std::string& args) {
  const auto out = (scratch() / "stdout.json").string();
  const std::string cmd = "'" + kCli + "' " + args + " > '" + out + "' 2> '" + (scratch() / "stderr.txt").string() + "'";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  return r;
}

std::string fixture(const std::string& name) { return "'" + kFixtures + "/" + name + "'"; }

}  // namespace

TEST_CASE("hull") {
  const auto poly = write("id.json", R"({"flavor": "max-plus", "generators": [[0, "-inf"], ["-inf", 0]]})");
  const auto q = write("q.json", R"({"queries": [[-1, 0], [0, "-inf"], [-1, -1]]})");
  const auto r = run("hull --polytope " + poly + " --queries " + q + " --svg " + (scratch() / "hull.svg").string());
  REQUIRE(r.code == 0);
  const auto res = r.j().at("results");
  CHECK(res[0].at("member") == true);
  CHECK(res[0].at("lambdas") == json::parse("[-1.0, 0.0]"));
  CHECK(res[1].at("member") == true);
  CHECK(res[2].at("member") == false);
  CHECK(slurp((scratch() / "hull.svg").string()).rfind("<svg", 0) == 0);

  const auto bad = write("bad.json", R"({"flavor": "max-times", "generators": [[1, "-inf"], [0, 1]]})");
  CHECK(run("hull --polytope " + bad + " --queries " + q).code == 2);

  const auto q3 = write("q3.json", R"([[0, 0, 0]])");
  CHECK(run("hull --polytope " + poly + " --queries " + q3).code == 3);
  CHECK(run("hull --polytope " + poly).code == 2);
  CHECK(run("hull --polytope /nonexistent.json --queries " + q).code == 2);
}

TEST_CASE("bary") {
  const auto two = write("two.json", R"({"flavor": "max-plus", "atoms": [[0, -3], [-2, 0]], "weights": [0, -1]})");
  auto r = run("bary --measure " + two);
  REQUIRE(r.code == 0);
  CHECK(r.j().at("barycenter") == json::parse("[0.0, -1.0]"));

  const auto dirac = write("dirac.json", R"({"flavor": "max-times", "atoms": [[0.25, 1]], "weights": [1]})");
  r = run("bary --measure " + dirac);
  REQUIRE(r.code == 0);
  CHECK(r.j().at("barycenter") == json::parse("[0.25, 1.0]"));

  const auto unnorm = write("unnorm.json", R"({"flavor": "max-times", "atoms": [[1, 0], [0, 1]], "weights": [0.5, 0.5]})");
  CHECK(run("bary --measure " + unnorm).code == 4);
}

TEST_CASE("iso") {
  const auto nu = write("nu.json", R"({"flavor": "max-times", "weights": {"a": 1, "b": 0.5, "c": 0}})");
  auto r = run("iso --measure " + nu + " --direction gx --round-trip");
  REQUIRE(r.code == 0);
  const auto w = r.j().at("weights");
  CHECK(w.at("a") == 0.0);
  CHECK(std::abs(w.at("b").get<double>() - std::log(0.5)) <= 1e-11);
  CHECK(w.at("c") == "-inf");
  CHECK(r.j().at("round_trip").at("ok") == true);

  const auto mu = write("mu.json", R"({"flavor": "max-plus", "weights": {"a": 0, "b": "-inf", "c": -1}})");
  r = run("iso --measure " + mu + " --direction gx-inv --round-trip");
  REQUIRE(r.code == 0);
  CHECK(r.j().at("weights").at("b") == 0.0);
  CHECK(std::abs(r.j().at("weights").at("c").get<double>() - std::exp(-1.0)) <= 1e-11);

  const auto emb = write("emb.json", R"({"flavor": "max-times", "atoms": [[1, 0.5], [0.25, 1]], "weights": [1, 0.5]})");
  r = run("iso --measure " + emb + " --direction lh --embedding-depth 2");
  REQUIRE(r.code == 0);
  CHECK(r.j().at("embedding_depth") == 2);
  CHECK(r.j().at("atoms").size() == 2);
  CHECK(r.j().at("atoms")[0].size() == 4);

  const auto bad = write("badmu.json", R"({"flavor": "max-times", "weights": {"a": 0.5}})");
  CHECK(run("iso --measure " + bad + " --direction gx").code == 4);
  CHECK(run("iso --measure " + nu + " --direction sideways").code == 2);
}

TEST_CASE("probe exit codes on the bundled fixtures") {
  auto r = run("probe --map " + fixture("vee-on-ID.json") + " --pin " + fixture("vee-on-ID.pins.json") + " --svg " +
               (scratch() / "vee.svg").string());
  CHECK(r.code == 10);
  const auto v = r.j();
  CHECK(v.at("summary").at("witness").get<int>() >= 1);
  const auto& pinned = v.at("records").back();
  CHECK(pinned.at("x") == json::parse("[0.0, -1.0, -1.0, 0.0]"));
  CHECK(pinned.at("kind") == "WITNESS");
  CHECK(pinned.at("certification").at("resolution") == 0.001);
  CHECK(fs::exists(scratch() / "vee.svg"));

  r = run("probe --map " + fixture("s-on-AD.json"));
  CHECK(r.code == 0);
  CHECK(r.j().at("summary").at("open_evidence") == 100);

  r = run("probe --map " + fixture("s-on-box.json"));
  CHECK(r.code == 0);
  CHECK(r.j().at("summary").at("open_evidence") == 100);
  CHECK(r.j().at("summary").at("witness") == 0);

  r = run("probe --map " + fixture("s-on-AD-x-AD.json") + " --config " + fixture("s-on-AD-x-AD.config.json"));
  CHECK(r.code == 10);
  CHECK(r.j().at("witness_search").at("candidates").get<int>() >= 1);

  const auto bad_cfg = write("cfg.json", R"({"deltas": [0.01, 0.02]})");
  CHECK(run("probe --map " + fixture("s-on-AD.json") + " --config " + bad_cfg).code == 2);
  const auto short_pin = write("pin.json", R"({"points": [[0, -1]]})");
  CHECK(run("probe --map " + fixture("vee-on-ID.json") + " --pin " + short_pin).code == 3);
}

TEST_CASE("check") {
  auto r = run("check --suite hombar --trials 500");
  REQUIRE(r.code == 0);
  const auto s = r.j().at("suites")[0];
  CHECK(s.at("passed") == true);
  CHECK(s.at("max_discrepancy").get<double>() <= 1e-9);

  r = run("check --suite prop-af --trials 500");
  REQUIRE(r.code == 0);
  CHECK(r.j().at("suites")[0].at("max_discrepancy") == 0.0);

  CHECK(run("check --suite nonsense").code == 2);
  CHECK(run("").code == 2);
}

TEST_CASE("determinism and --out") {
  const auto a = run("probe --map " + fixture("s-on-AD.json"));
  const auto b = run("probe --map " + fixture("s-on-AD.json"));
  CHECK(a.out == b.out);
  const auto out = (scratch() / "out.json").string();
  REQUIRE(run("check --suite monad --trials 200 --seed 3 -o " + out).code == 0);
  const auto c = run("check --suite monad --trials 200 --seed 3");
  CHECK(slurp(out) == c.out);
}
