#include <doctest.h>

#include <cstdlib>
#include <sstream>
#include <sys/wait.h>

#include "commands.hpp"

using namespace eparam;
using namespace eparam::cli;

namespace {

RunOptions quick(Format f = Format::human) {
  RunOptions opt;
  opt.cfg.restarts = 1;
  opt.cfg.inner_restarts = 8;
  opt.cfg.outer_iters = 60;
  opt.cfg.validation_factor = 8;
  opt.format = f;
  return opt;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(EPARAM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("state source resolution") {
  StateSource none;
  CHECK_THROWS_AS(resolve_state(none), InputError);
  StateSource both;
  both.file = "x.json";
  both.family = "isotropic";
  CHECK_THROWS_AS(resolve_state(both), InputError);
  StateSource iso;
  iso.family = "isotropic";
  iso.p = 0.5;
  CHECK((resolve_state(iso).matrix() - isotropic(2, 0.5).matrix()).norm() == 0.0);
  StateSource bd;
  bd.family = "bell-diagonal";
  bd.weights = {0.1, 0.2, 0.3};
  CHECK_THROWS_AS(resolve_state(bd), InputError);
}

TEST_CASE("compute") {
  StateSource src;
  src.family = "max-entangled";
  std::ostringstream human;
  CHECK(cmd_compute(src, quick(), human) == kExitOk);
  CHECK(human.str().find("estimate") != std::string::npos);

  std::ostringstream machine;
  CHECK(cmd_compute(src, quick(Format::machine), machine) == kExitOk);
  const Json j = Json::parse(machine.str());
  CHECK(j["command"] == "compute");
  CHECK(j["version"] == kVersion);
  CHECK(j["config"]["restarts"] == 1);
  CHECK(j["report"]["estimate"].get<double>() == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(j["sandwich_holds"] == true);

  std::ostringstream again;
  cmd_compute(src, quick(Format::machine), again);
  CHECK(again.str() == machine.str());

  StateSource big;
  big.family = "isotropic";
  big.d = 4;
  big.p = 0.5;
  std::ostringstream sink;
  CHECK_THROWS_AS(cmd_compute(big, quick(), sink), BudgetError);
}

TEST_CASE("isotropic sweep") {
  const double root = isotropic_entropy_root(2, 1.0);
  CHECK(von_neumann_entropy(isotropic(2, root)) == doctest::Approx(1.0).epsilon(1e-3));
  std::ostringstream csv;
  CHECK(cmd_sweep_isotropic(2, 3, quick(Format::csv), csv) == kExitOk);
  const std::string s = csv.str();
  CHECK(s.rfind("p,S,analytic,estimate,separable\n", 0) == 0);
  CHECK(s.find("0.000000,2.000000,-1.000000,") != std::string::npos);
  CHECK(s.find("1.000000,0.000000,1.000000,") != std::string::npos);
  CHECK(s.find("# zero crossing") != std::string::npos);
  std::ostringstream sink;
  CHECK_THROWS_AS(cmd_sweep_isotropic(2, 1, quick(), sink), InputError);
}

TEST_CASE("negative search and oracle comparison") {
  const auto cfg = quick().cfg;
  const auto r = negative_search(3, 0.01, 5e-2, cfg);
  CHECK(r.samples.size() == 3);
  CHECK(r.violations == 0);
  auto ocfg = cfg;
  ocfg.grid_resolution = 3.14159265358979 / 20;
  const auto o = oracle_compare({2, 2}, 2, ocfg);
  CHECK(o.rows.size() == 4);
  CHECK(o.rows[0].label == "bell");
  CHECK(o.rows[0].optimizer == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(o.optimizer_not_worse);
  CHECK_THROWS_AS(oracle_compare({4, 2}, 1, cfg), BudgetError);
}

TEST_CASE("verify") {
  std::ostringstream out;
  CHECK(cmd_verify("bases", quick(Format::machine), out) == kExitOk);
  const Json j = Json::parse(out.str());
  CHECK(j["checks"].size() >= 6);
  CHECK_THROWS_AS(verify_suite("nonsense", quick().cfg, 0.05), InputError);
}

TEST_CASE("exit codes of the executable") {
  CHECK(run_cli("compute --family max-entangled --d 2 --restarts 0") == kExitOk);
  CHECK(run_cli("compute --family isotropic --d 4 --p 0.5") == kExitBudgetError);
  CHECK(run_cli("compute --family nonsense --d 2") == kExitInputError);
  CHECK(run_cli("compute --state /nonexistent.json") == kExitInputError);
  CHECK(run_cli("compute --family isotropic --d 2 --p 2") == kExitInputError);
  CHECK(run_cli("frobnicate") == kExitInputError);
  CHECK(run_cli("verify nonsense") == kExitInputError);
  CHECK(run_cli("--help") == kExitOk);
}

}  // TEST_SUITE
