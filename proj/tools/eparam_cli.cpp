// eparam: estimate the entropic entanglement parameter and run its checks.

#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace eparam;
using namespace eparam::cli;

namespace {

void add_run_options(CLI::App* app, RunOptions& opt, std::string& format, std::string& out_path) {
  app->add_option("--restarts", opt.cfg.restarts, "Random outer restarts")->check(CLI::NonNegativeNumber);
  app->add_option("--inner-restarts", opt.cfg.inner_restarts, "Inner product-state restarts")->check(CLI::PositiveNumber);
  app->add_option("--seed", opt.cfg.seed, "Base RNG seed");
  app->add_option("--tol", opt.tol, "Slack for optimizer-dependent checks")->check(CLI::NonNegativeNumber);
  app->add_option("--format", format, "Output format")->check(CLI::IsMember({"human", "machine", "csv"}));
  app->add_option("--out", out_path, "Write output to FILE instead of stdout");
}

void add_state_options(CLI::App* app, StateSource& src) {
  app->add_option("--state", src.file, "JSON state file");
  app->add_option("--family", src.family,
                  "isotropic, bell-diagonal, max-entangled, random-pure, random-separable, random-product");
  app->add_option("--d", src.d, "Local dimension")->check(CLI::PositiveNumber);
  app->add_option("--p", src.p, "Isotropic weight");
  app->add_option("--weights", src.weights, "Bell-diagonal weights")->delimiter(',');
  app->add_option("--terms", src.terms, "Product terms for random-separable");
  app->add_option("--family-seed", src.family_seed, "Seed for random families");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropic entanglement parameter estimator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  RunOptions opt;
  std::string format = "human";
  std::string out_path;
  StateSource src;
  int sweep_d = 2, sweep_points = 31;
  std::string suite;
  int samples = 200;
  double threshold = 0.01;
  std::vector<int> oracle_dims{2, 2};
  int measurements = 50;

  auto* compute = app.add_subcommand("compute", "Estimate M(rho) with bounds");
  add_state_options(compute, src);
  add_run_options(compute, opt, format, out_path);

  auto* sweep = app.add_subcommand("sweep-isotropic", "Estimate M along the isotropic family");
  sweep->add_option("--d", sweep_d, "Local dimension")->check(CLI::Range(2, 3));
  sweep->add_option("--points", sweep_points, "Grid points on [0, 1]")->check(CLI::Range(2, 10001));
  add_run_options(sweep, opt, format, out_path);

  auto* verify = app.add_subcommand("verify", "Run a property suite");
  verify->add_option("suite", suite, "signs, bounds, continuity, bases or oracle")->required();
  add_run_options(verify, opt, format, out_path);

  auto* negative = app.add_subcommand("negative-search", "Search two-qubit pure states with M != S_A");
  negative->add_option("--samples", samples, "Number of Haar-random states")->check(CLI::PositiveNumber);
  negative->add_option("--threshold", threshold, "Witness threshold on M - S_A");
  add_run_options(negative, opt, format, out_path);

  auto* oracle = app.add_subcommand("oracle-compare", "Compare inner minimization with a product grid");
  oracle->add_option("--dims", oracle_dims, "dA,dB (each <= 3)")->delimiter(',')->expected(2);
  oracle->add_option("--measurements", measurements, "Random measurements")->check(CLI::NonNegativeNumber);
  oracle->add_option("--resolution", opt.cfg.grid_resolution, "Grid step in radians")->check(CLI::PositiveNumber);
  add_run_options(oracle, opt, format, out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInputError;
  }

  static const std::map<std::string, Format> formats{
      {"human", Format::human}, {"machine", Format::machine}, {"csv", Format::csv}};
  opt.format = formats.at(format);

  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) {
      std::cerr << "error: cannot write " << out_path << '\n';
      return kExitInputError;
    }
  }
  std::ostream& out = out_path.empty() ? std::cout : file;

  try {
    if (*compute) return cmd_compute(src, opt, out);
    if (*sweep) return cmd_sweep_isotropic(sweep_d, sweep_points, opt, out);
    if (*verify) return cmd_verify(suite, opt, out);
    if (*negative) return cmd_negative_search(samples, threshold, opt, out);
    if (*oracle) return cmd_oracle_compare({oracle_dims[0], oracle_dims[1]}, measurements, opt, out);
  } catch (const BudgetError& e) {
    std::cerr << "budget error: " << e.what() << '\n';
    return kExitBudgetError;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitOk;
}
