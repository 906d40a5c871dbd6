#include <doctest.h>

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "chernflow/commands.hpp"
#include "helpers.hpp"

using namespace chernflow;

namespace {

struct Invocation {
  int code;
  std::string out;
  std::string err;
  std::filesystem::path dir;
};

std::filesystem::path write_config(const std::string& tag, const std::string& text) {
  const auto dir = testing::scratch_dir(tag);
  const auto path = dir / (tag + ".toml");
  std::ofstream(path) << text;
  return path;
}

template <class Cmd>
Invocation invoke(Cmd cmd, const std::string& tag, const std::string& text, bool strict = false,
                  bool canonical = false) {
  CommandOptions o;
  o.config = write_config(tag, text);
  o.out_dir = o.config.parent_path() / "out";
  o.strict = strict;
  o.canonical = canonical;
  o.jobs = 2;
  std::ostringstream out, err;
  const int code = cmd(o, out, err);
  return {code, out.str(), err.str(), o.out_dir};
}

nlohmann::json read_json(const std::filesystem::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  return nlohmann::json::parse(in);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kConstantImex = R"(
[grid]
n = 2
points = 16
[background]
preset = "constant"
[flow]
method = "imex-lagged"
dt_init = 0.05
t_max = 100
)";

}  // namespace

TEST_CASE("run converges on the constant scenario") {
  const Invocation r = invoke(cmd_run, "run", kConstantImex);
  CHECK_MESSAGE(r.code == 0, r.err);
  const auto s = read_json(r.dir / "summary.json");
  CHECK(s["termination"] == "converged");
  CHECK(s["final_residual_sup"].get<double>() <= 1e-8);
  CHECK(s["passed"] == true);
  CHECK(std::filesystem::exists(r.dir / "trajectory.csv"));
  CHECK(std::filesystem::exists(r.dir / "u_final.txt"));
}

TEST_CASE("malformed config exits 1 and names the key") {
  const Invocation r = invoke(cmd_run, "bad", "[flow]\nresidual_tolerance = 1e-8\n");
  CHECK(r.code == 1);
  CHECK(r.err.find("flow.residual_tolerance") != std::string::npos);
}

TEST_CASE("strict run with lambda above lambda_max fails") {
  const Invocation r = invoke(cmd_run, "strict", R"(
[grid]
n = 1
points = 32
[background]
preset = "case2"
f_expr = "cos(2*pi*x1) - 1"
[flow]
t_max = 0.05
[supersolution]
lambda = 5.0
)",
                              true);
  CHECK(r.code == 2);
  const auto s = read_json(r.dir / "summary.json");
  CHECK(s["certificate_error"].get<std::string>().find("LambdaTooLarge") != std::string::npos);
}

TEST_CASE("verify levels") {
  std::ostringstream out, err;
  CHECK(cmd_verify("thorough", out, err) == 1);
  CHECK(cmd_verify("quick", out, err) == 0);
  CHECK(out.str().find("criterion 1 PASS") != std::string::npos);
}

TEST_CASE("supersolution subcommand") {
  SUBCASE("case1") {
    const Invocation r = invoke(cmd_supersolution, "ss1", "[background]\npreset = \"case1\"\n");
    CHECK_MESSAGE(r.code == 0, r.err);
    const auto c = read_json(r.dir / "certificate.json");
    CHECK(c["slack_min"].get<double>() >= 0.0);
    CHECK(std::filesystem::exists(r.dir / "u_star.txt"));
    CHECK(std::filesystem::exists(r.dir / "slack.txt"));
  }
  SUBCASE("case2") {
    const Invocation r = invoke(cmd_supersolution, "ss2", R"(
[grid]
n = 1
points = 64
[background]
preset = "case2"
f_expr = "cos(2*pi*x1) - 1"
[supersolution]
case = "case2"
)");
    CHECK_MESSAGE(r.code == 0, r.err);
    const auto c = read_json(r.dir / "certificate.json");
    CHECK(c["lambda_max"].get<double>() > 0.0);
  }
  SUBCASE("case3 needs one complex dimension") {
    const Invocation r = invoke(cmd_supersolution, "ss3", "[supersolution]\ncase = \"case3\"\n");
    CHECK(r.code == 1);
  }
}

TEST_CASE("sweeps") {
  SUBCASE("grid resolution") {
    const Invocation r = invoke(cmd_sweep, "sweep", R"(
[grid]
n = 1
[background]
preset = "constant"
[flow]
method = "imex-lagged"
dt_init = 0.05
residual_tol = 5e-9
[sweep]
param = "grid.points"
values = [16, 32, 64]
)");
    CHECK_MESSAGE(r.code == 0, r.err);
    const std::string idx = slurp(r.dir / "index.csv");
    CHECK(std::count(idx.begin(), idx.end(), '\n') == 4);
    for (int i = 0; i < 3; ++i) {
      const auto s = read_json(r.dir / ("run_" + std::to_string(i)) / "summary.json");
      CHECK(s["final_residual_sup"].get<double>() <= 1e-8);
    }
  }
  SUBCASE("lambda fraction") {
    const Invocation r = invoke(cmd_sweep, "lf", R"(
[grid]
n = 1
points = 32
[background]
preset = "case2"
f_expr = "cos(2*pi*x1) - 1"
[flow]
method = "imex-lagged"
dt_init = 0.05
t_max = 200
[sweep]
param = "lambda_fraction"
values = [0.25, 0.5, 1.5]
)");
    CHECK_MESSAGE(r.code == 0, r.out << r.err);
    const std::string idx = slurp(r.dir / "index.csv");
    CHECK(idx.find("lambda above lambda_max") != std::string::npos);
  }
  SUBCASE("missing sweep section") {
    const Invocation r = invoke(cmd_sweep, "nosweep", "[background]\npreset = \"constant\"\n");
    CHECK(r.code == 1);
  }
}

TEST_CASE("canonical runs are byte-identical") {
  const Invocation a = invoke(cmd_run, "canon", kConstantImex, false, true);
  const Invocation b = invoke(cmd_run, "canon", kConstantImex, false, true);
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(slurp(a.dir / "summary.json") == slurp(b.dir / "summary.json"));
  CHECK(slurp(a.dir / "trajectory.csv") == slurp(b.dir / "trajectory.csv"));
}
