#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>

namespace eparam::cli {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

Json run_header(const char* command, const OptimizationConfig& cfg) {
  return {{"command", command}, {"version", kVersion}, {"config", to_json(cfg)}};
}

// G G^H / Tr with a rank-r Ginibre G.
DensityMatrix random_density(Dims dims, int rank, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix g(dims.total(), rank);
  for (Eigen::Index j = 0; j < g.cols(); ++j)
    for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = {n(rng), n(rng)};
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(0.5 * (rho + rho.adjoint()), dims);
}

// Minimum entropy over n-outcome distributions with entries <= c, on a
// grid of step 1/steps.
double capped_entropy_grid(double c, int n, int steps) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> k(n, 0);
  auto rec = [&](auto&& self, int i, int left) -> void {
    if (i == n - 1) {
      k[i] = left;
      RVector p(n);
      for (int t = 0; t < n; ++t) p(t) = double(k[t]) / steps;
      if (p.maxCoeff() <= c + 1e-12) best = std::min(best, entropy_bits(p));
      return;
    }
    for (int v = 0; v <= left; ++v) {
      k[i] = v;
      self(self, i + 1, left - v);
    }
  };
  rec(rec, 0, steps);
  return best;
}

void add(std::vector<Check>& out, std::string name, bool ok, std::string detail) {
  out.push_back({std::move(name), ok, std::move(detail)});
}

std::vector<Check> suite_signs(const OptimizationConfig& cfg, double tol) {
  std::vector<Check> out;
  double worst_sep = -1e300;
  for (int k = 0; k < 10; ++k) {
    const auto r = estimate_eparam(random_separable(2, 1 + k % 4, cfg.seed + k), cfg);
    worst_sep = std::max(worst_sep, r.estimate);
  }
  add(out, "separable estimates <= tol", worst_sep <= tol, "max estimate " + num(worst_sep));

  double worst_prod = 0.0, worst_eig = 1e300;
  for (int k = 0; k < 10; ++k) {
    const auto rho = DensityMatrix::from_pure(random_product(2, cfg.seed + 100 + k));
    const auto r = estimate_eparam(rho, cfg);
    worst_prod = std::max(worst_prod, std::abs(r.estimate));
    worst_eig = std::min(worst_eig, *r.bounds.eigenbasis_lower);
  }
  add(out, "product estimates within tol of 0", worst_prod <= tol, "max |estimate| " + num(worst_prod));
  add(out, "product eigenbasis value >= 0", worst_eig >= -1e-9, "min " + num(worst_eig));

  double worst_iso = -1e300;
  for (double p : {0.0, 0.1, 0.2, 1.0 / 3.0}) worst_iso = std::max(worst_iso, estimate_eparam(isotropic(2, p), cfg).estimate);
  add(out, "separable isotropic estimates <= tol", worst_iso <= tol, "max estimate " + num(worst_iso));
  return out;
}

std::vector<DensityMatrix> bounds_corpus(std::uint64_t seed) {
  std::vector<DensityMatrix> states;
  states.push_back(DensityMatrix::from_pure(max_entangled(2)));
  states.push_back(isotropic(2, 0.0));
  for (double p : {0.2, 0.5, 0.8}) states.push_back(isotropic(2, p));
  const double w[] = {0.7, 0.3, 0.0, 0.0};
  states.push_back(bell_diagonal(2, w));
  for (std::uint64_t k = 0; k < 3; ++k) {
    auto rng = make_rng(seed, 200 + k);
    states.push_back(DensityMatrix::from_pure(haar_random_pure({2, 2}, rng)));
  }
  for (std::uint64_t k = 0; k < 2; ++k) {
    auto rng = make_rng(seed, 300 + k);
    states.push_back(random_density({2, 2}, 2, rng));
  }
  return states;
}

std::vector<Check> suite_bounds(const OptimizationConfig& cfg, double tol) {
  std::vector<Check> out;
  int consistent = 0, sandwiched = 0, n = 0;
  std::string failures;
  for (const DensityMatrix& rho : bounds_corpus(cfg.seed)) {
    const auto r = estimate_eparam(rho, cfg);
    ++n;
    if (r.bounds.consistent()) ++consistent;
    if (sandwich_holds(r, tol)) {
      ++sandwiched;
    } else {
      failures += " #" + std::to_string(n - 1);
    }
  }
  add(out, "bounds report consistent", consistent == n, std::to_string(consistent) + "/" + std::to_string(n));
  add(out, "lower <= estimate + tol, estimate <= upper", sandwiched == n,
      std::to_string(sandwiched) + "/" + std::to_string(n) + (failures.empty() ? "" : " failing:" + failures));

  const auto mm = upper_bounds(isotropic(2, 0.0));
  add(out, "maximally mixed upper bounds nonpositive",
      std::abs(*mm.info_content) < 1e-9 && *mm.dim_bound < 0.0 && std::abs(*mm.two_qubit_bound + 1.0) < 1e-9,
      "info " + num(*mm.info_content) + " dim " + num(*mm.dim_bound));
  return out;
}

std::vector<Check> suite_continuity(const OptimizationConfig& cfg, double tol) {
  std::vector<Check> out;
  double worst_fixed = 1e300;
  for (std::uint64_t k = 0; k < 200; ++k) {
    auto rng = make_rng(cfg.seed, 400 + k);
    const Dims dims{2, 2};
    const auto rho = random_density(dims, 1 + int(k % 4), rng);
    const auto sigma = random_density(dims, 1 + int((k / 4) % 4), rng);
    const double eps = std::uniform_real_distribution<double>(0.0, 0.5)(rng);
    const Measurement P(haar_random_unitary(4, rng), dims);
    worst_fixed = std::min(worst_fixed, fixed_measurement_continuity_check(rho, sigma, eps, P).slack);
  }
  add(out, "fixed-measurement admixture inequality (exact)", worst_fixed >= 0.0, "min slack " + num(worst_fixed));

  double worst = 1e300;
  for (std::uint64_t k = 0; k < 50; ++k) {
    auto rng = make_rng(cfg.seed, 700 + k);
    const Dims dims{2, 2};
    const auto rho = random_density(dims, 1 + int(k % 4), rng);
    const auto sigma = random_density(dims, 1 + int((k / 4) % 4), rng);
    const double eps = std::uniform_real_distribution<double>(0.0, 0.5)(rng);
    worst = std::min(worst, robustness_check(rho, sigma, eps, cfg).slack);
  }
  add(out, "estimator admixture inequality, slack >= -tol", worst >= -tol, "min slack " + num(worst));
  return out;
}

std::vector<Check> suite_bases(const OptimizationConfig& cfg) {
  std::vector<Check> out;
  for (int d : {2, 4, 8}) {
    double gram = 0.0, excess = -1e300;
    for (std::uint64_t k = 0; k < 100; ++k) {
      auto rng = make_rng(cfg.seed, 1000 * d + k);
      std::vector<double> a(d);
      std::normal_distribution<double> n(0.0, 1.0);
      double norm = 0.0;
      for (double& x : a) {
        x = std::abs(n(rng));
        norm += x * x;
      }
      for (double& x : a) x /= std::sqrt(norm);
      const Measurement P = schmidt_preserving_eigenbasis(a);
      gram = std::max(gram, gram_deviation(P.basis()));
      const double c = std::pow(*std::max_element(a.begin(), a.end()), 2);
      for (int i = 0; i < P.size(); ++i)
        excess = std::max(excess, max_product_overlap(PureState(P.vector(i), P.dims())) - c);
    }
    add(out, "d=" + std::to_string(d) + " Schmidt-preserving basis orthonormal", gram <= 1e-9, "gram deviation " + sci(gram));
    add(out, "d=" + std::to_string(d) + " basis vectors keep the largest Schmidt weight", excess <= 1e-9,
        "max excess " + sci(excess));
  }
  for (int d : {2, 3}) {
    const Measurement B = bell_basis(d);
    double dev = 0.0;
    for (int i = 0; i < B.size(); ++i)
      dev = std::max(dev, std::abs(max_product_overlap(PureState(B.vector(i), B.dims())) - 1.0 / d));
    add(out, "d=" + std::to_string(d) + " Bell basis maximally entangled", dev < 1e-12 && gram_deviation(B.basis()) < 1e-12,
        "max overlap deviation " + sci(dev));
  }
  double round_trip = 0.0;
  for (std::uint64_t k = 0; k < 20; ++k) {
    auto rng = make_rng(cfg.seed, 5000 + k);
    const Dims dims = k % 2 ? Dims{3, 3} : Dims{2, 2};
    const Measurement P(haar_random_unitary(dims.total(), rng), dims);
    const Measurement Q = decode_measurement(encode_measurement(P));
    if (!equal_up_to_phases(P.basis(), Q.basis(), 1e-9)) round_trip = 1.0;
  }
  add(out, "rotation-angle encoding round trip", round_trip == 0.0, "20 random bases");
  return out;
}

std::vector<Check> suite_oracle(const OptimizationConfig& cfg) {
  std::vector<Check> out;
  const auto cmp = oracle_compare({2, 2}, 20, cfg);
  add(out, "inner optimizer vs product grid, |diff| < 1e-2", cmp.max_abs_diff < 1e-2, "max |diff| " + sci(cmp.max_abs_diff));
  add(out, "inner optimizer never above grid", cmp.optimizer_not_worse, std::to_string(cmp.rows.size()) + " bases");

  double cap = 0.0;
  for (double c : {0.3, 0.4, 0.5, 0.7})
    for (int n = int(std::ceil(1.0 / c - 1e-12)); n <= 4; ++n)
      cap = std::max(cap, std::abs(min_entropy_capped(c, n) - capped_entropy_grid(c, n, 200)));
  add(out, "capped entropy vs simplex grid", cap < 5e-3, "max |diff| " + sci(cap));

  double schmidt = 0.0, residual = 0.0;
  for (std::uint64_t k = 0; k < 200; ++k) {
    auto rng = make_rng(cfg.seed, 6000 + k);
    const CMatrix u = haar_random_unitary(4, rng);
    const PureState a(u.col(0), {2, 2}), b(u.col(1), {2, 2});
    const CVector x = product_in_2d_subspace(a, b).joint();
    schmidt = std::max(schmidt, schmidt_decompose(PureState::normalized(x, {2, 2})).coefficients(1));
    const CMatrix span = u.leftCols(2);
    residual = std::max(residual, (x - span * (span.adjoint() * x)).norm());
  }
  add(out, "product in 2D subspace", schmidt < 1e-8 && residual < 1e-9,
      "max small Schmidt " + sci(schmidt) + ", residual " + sci(residual));
  return out;
}

void print_checks(const char* command, const std::vector<Check>& checks, const RunOptions& opt,
                  std::ostream& out) {
  if (opt.format == Format::machine) {
    Json j = run_header(command, opt.cfg);
    j["checks"] = Json::array();
    for (const Check& c : checks) j["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    out << j.dump(2) << '\n';
  } else if (opt.format == Format::csv) {
    out << "name,passed,detail\n";
    for (const Check& c : checks) out << '"' << c.name << "\"," << (c.passed ? 1 : 0) << ",\"" << c.detail << "\"\n";
  } else {
    for (const Check& c : checks) out << (c.passed ? "PASS  " : "FAIL  ") << c.name << "  (" << c.detail << ")\n";
  }
}

}  // namespace

DensityMatrix resolve_state(const StateSource& src) {
  if (src.file.empty() == src.family.empty()) throw InputError("give exactly one of --state or --family");
  if (!src.file.empty()) return load_state(src.file);
  Json j{{"kind", src.family}, {"d", src.d}, {"terms", src.terms}, {"seed", src.family_seed}};
  if (src.p) j["p"] = *src.p;
  if (!src.weights.empty()) j["weights"] = src.weights;
  return state_from_json(Json{{"family", j}});
}

bool sandwich_holds(const EParamReport& r, double tol) {
  return r.bounds.max_lower() <= r.estimate + tol && r.estimate <= r.bounds.min_upper() + 1e-6;
}

double isotropic_entropy_root(int d, double target, double tol) {
  auto s = [d](double p) { return von_neumann_entropy(isotropic(d, p)); };
  double lo = 0.0, hi = 1.0;
  if ((s(lo) - target) * (s(hi) - target) > 0.0) throw InputError("entropy target not bracketed");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (s(mid) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

SweepResult sweep_isotropic(int d, std::span<const double> grid, const OptimizationConfig& cfg) {
  SweepResult out;
  for (double p : grid) {
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("isotropic grid values must lie in [0, 1]");
    const DensityMatrix rho = isotropic(d, p);
    const EParamReport r = estimate_eparam(rho, cfg);
    out.rows.push_back({p, von_neumann_entropy(rho), r.analytic_value, r.estimate, p <= 1.0 / (d + 1.0)});
  }
  if (d == 2) out.zero_crossing = isotropic_entropy_root(2, 1.0);
  return out;
}

NegativeSearchResult negative_search(int samples, double threshold, double slack,
                                     const OptimizationConfig& cfg) {
  if (samples < 1) throw InputError("need at least one sample");
  NegativeSearchResult out;
  for (int k = 0; k < samples; ++k) {
    auto rng = make_rng(cfg.seed, 9000 + std::uint64_t(k));
    PureState psi = haar_random_pure({2, 2}, rng);
    const DensityMatrix rho = DensityMatrix::from_pure(psi);
    const double s_a = von_neumann_entropy(partial_trace(rho, Subsystem::A));
    const double est = estimate_eparam(rho, cfg).estimate;
    if (est - s_a > threshold) ++out.witnesses;
    if (est < s_a - slack) ++out.violations;
    out.samples.push_back({std::move(psi), est, s_a});
  }
  return out;
}

OracleCompareResult oracle_compare(Dims dims, int measurements, const OptimizationConfig& cfg) {
  if (dims.a > 3 || dims.b > 3) throw BudgetError("oracle grid supports local dimensions up to 3");
  std::vector<std::pair<std::string, Measurement>> cases;
  if (dims.a == dims.b) cases.emplace_back("bell", bell_basis(dims.a));
  cases.emplace_back("computational", computational_basis(dims));
  for (int k = 0; k < measurements; ++k) {
    auto rng = make_rng(cfg.seed, 8000 + std::uint64_t(k));
    cases.emplace_back("random " + std::to_string(k), Measurement(haar_random_unitary(dims.total(), rng), dims));
  }
  OracleCompareResult out;
  for (const auto& [label, P] : cases) {
    const InnerMinResult opt = min_klein_entropy_over_products(P, cfg);
    const GridMinResult grid = brute_force_min_products(P, cfg.grid_resolution, cfg.grid_budget);
    out.rows.push_back({label, opt.value, grid.value, grid.points});
    out.max_abs_diff = std::max(out.max_abs_diff, std::abs(opt.value - grid.value));
    if (opt.value > grid.value + 1e-9) out.optimizer_not_worse = false;
  }
  return out;
}

std::vector<Check> verify_suite(const std::string& suite, const OptimizationConfig& cfg, double tol) {
  if (suite == "signs") return suite_signs(cfg, tol);
  if (suite == "bounds") return suite_bounds(cfg, tol);
  if (suite == "continuity") return suite_continuity(cfg, tol);
  if (suite == "bases") return suite_bases(cfg);
  if (suite == "oracle") return suite_oracle(cfg);
  throw InputError("unknown suite '" + suite + "' (signs, bounds, continuity, bases, oracle)");
}

int cmd_compute(const StateSource& src, const RunOptions& opt, std::ostream& out) {
  const DensityMatrix rho = resolve_state(src);
  const EParamReport r = estimate_eparam(rho, opt.cfg);
  const bool ok = sandwich_holds(r, opt.tol) && r.bounds.consistent();
  switch (opt.format) {
    case Format::machine: {
      Json j = run_header("compute", opt.cfg);
      j["state"] = to_json(rho);
      j["report"] = to_json(r);
      j["sandwich_holds"] = ok;
      out << j.dump(2) << '\n';
      break;
    }
    case Format::csv:
      out << "estimate,analytic,inner,state_entropy,max_lower,min_upper,sandwich_holds\n"
          << num(r.estimate) << ',' << (r.analytic_value ? num(*r.analytic_value) : "") << ','
          << num(r.inner_result.value) << ',' << num(r.state_entropy) << ',' << num(r.bounds.max_lower())
          << ',' << num(r.bounds.min_upper()) << ',' << (ok ? 1 : 0) << '\n';
      break;
    case Format::human:
      out << format_report(r);
      if (!ok) out << "bounds sandwich VIOLATED\n";
      break;
  }
  return ok ? kExitOk : kExitPropertyFailure;
}

int cmd_sweep_isotropic(int d, int points, const RunOptions& opt, std::ostream& out) {
  if (points < 2) throw InputError("sweep needs at least 2 grid points");
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) grid[i] = double(i) / (points - 1);
  const SweepResult s = sweep_isotropic(d, grid, opt.cfg);
  if (opt.format == Format::machine) {
    Json j = run_header("sweep-isotropic", opt.cfg);
    j["d"] = d;
    j["rows"] = Json::array();
    for (const auto& r : s.rows) {
      j["rows"].push_back({{"p", r.p}, {"S", r.entropy}, {"analytic", r.analytic ? Json(*r.analytic) : Json(nullptr)},
                           {"estimate", r.estimate}, {"separable", r.separable}});
    }
    j["zero_crossing"] = s.zero_crossing ? Json(*s.zero_crossing) : Json(nullptr);
    out << j.dump(2) << '\n';
  } else {
    const bool csv = opt.format == Format::csv;
    out << (csv ? "p,S,analytic,estimate,separable\n" : "       p         S   analytic   estimate  separable\n");
    for (const auto& r : s.rows) {
      char line[128];
      const std::string a = r.analytic ? num(*r.analytic) : (csv ? "" : "-");
      if (csv) {
        std::snprintf(line, sizeof line, "%.6f,%.6f,%s,%.6f,%d\n", r.p, r.entropy, a.c_str(), r.estimate, r.separable ? 1 : 0);
      } else {
        std::snprintf(line, sizeof line, "%8.4f  %8.5f  %9s  %9.5f  %9s\n", r.p, r.entropy, a.c_str(), r.estimate,
                      r.separable ? "yes" : "no");
      }
      out << line;
    }
    if (s.zero_crossing) out << (csv ? "# zero crossing p = " : "zero crossing (S = 1) at p = ") << num(*s.zero_crossing) << '\n';
  }
  return kExitOk;
}

int cmd_verify(const std::string& suite, const RunOptions& opt, std::ostream& out) {
  const auto checks = verify_suite(suite, opt.cfg, opt.tol);
  print_checks("verify", checks, opt, out);
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; }) ? kExitOk
                                                                                             : kExitPropertyFailure;
}

int cmd_negative_search(int samples, double threshold, const RunOptions& opt, std::ostream& out) {
  const NegativeSearchResult r = negative_search(samples, threshold, opt.tol, opt.cfg);
  if (opt.format == Format::machine) {
    Json j = run_header("negative-search", opt.cfg);
    j["samples"] = samples;
    j["threshold"] = threshold;
    j["witnesses"] = r.witnesses;
    j["fraction"] = r.fraction();
    j["violations"] = r.violations;
    j["witness_states"] = Json::array();
    for (const auto& s : r.samples) {
      if (s.estimate - s.s_a > threshold) {
        j["witness_states"].push_back({{"state", to_json(s.psi)}, {"estimate", s.estimate}, {"S_A", s.s_a}});
      }
    }
    out << j.dump(2) << '\n';
  } else {
    const bool csv = opt.format == Format::csv;
    out << (csv ? "index,S_A,estimate,difference,witness\n" : "  index       S_A   estimate  difference\n");
    for (std::size_t k = 0; k < r.samples.size(); ++k) {
      const auto& s = r.samples[k];
      const bool w = s.estimate - s.s_a > threshold;
      char line[128];
      if (csv) {
        std::snprintf(line, sizeof line, "%zu,%.6f,%.6f,%.6f,%d\n", k, s.s_a, s.estimate, s.estimate - s.s_a, w ? 1 : 0);
        out << line;
      } else if (w) {
        std::snprintf(line, sizeof line, "%7zu  %8.5f  %9.5f  %10.5f\n", k, s.s_a, s.estimate, s.estimate - s.s_a);
        out << line;
      }
    }
    out << (csv ? "# " : "") << "witnesses " << r.witnesses << "/" << samples << " (fraction " << num(r.fraction())
        << "), violations of estimate >= S_A - tol: " << r.violations << '\n';
  }
  return r.violations == 0 ? kExitOk : kExitPropertyFailure;
}

int cmd_oracle_compare(Dims dims, int measurements, const RunOptions& opt, std::ostream& out) {
  const OracleCompareResult r = oracle_compare(dims, measurements, opt.cfg);
  if (opt.format == Format::machine) {
    Json j = run_header("oracle-compare", opt.cfg);
    j["dims"] = {dims.a, dims.b};
    j["rows"] = Json::array();
    for (const auto& row : r.rows) {
      j["rows"].push_back({{"label", row.label}, {"optimizer", row.optimizer}, {"oracle", row.oracle},
                           {"grid_points", row.grid_points}});
    }
    j["max_abs_diff"] = r.max_abs_diff;
    j["optimizer_not_worse"] = r.optimizer_not_worse;
    out << j.dump(2) << '\n';
  } else {
    const bool csv = opt.format == Format::csv;
    out << (csv ? "label,optimizer,oracle,difference\n" : "  measurement       optimizer     oracle   difference\n");
    for (const auto& row : r.rows) {
      char line[160];
      std::snprintf(line, sizeof line, csv ? "%s,%.8f,%.8f,%.3e\n" : "  %-14s  %9.6f  %9.6f  %11.3e\n",
                    row.label.c_str(), row.optimizer, row.oracle, row.optimizer - row.oracle);
      out << line;
    }
    out << (csv ? "# " : "") << "max |diff| " << r.max_abs_diff
        << (r.optimizer_not_worse ? "" : "; optimizer above oracle on some basis") << '\n';
  }
  return r.optimizer_not_worse ? kExitOk : kExitPropertyFailure;
}

}  // namespace eparam::cli
