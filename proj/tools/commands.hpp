#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eparam/io.hpp"

namespace eparam::cli {

enum class Format { human, machine, csv };

/// Exit statuses shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitPropertyFailure = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitBudgetError = 3;

/// Either a state file or a family description.
struct StateSource {
  std::string file;
  std::string family;
  int d = 2;
  std::optional<double> p;
  std::vector<double> weights;
  int terms = 4;
  std::uint64_t family_seed = 1;
};

/// Throws InputError when neither or both sources are given, or the
/// description is invalid.
DensityMatrix resolve_state(const StateSource& src);

struct RunOptions {
  OptimizationConfig cfg;
  Format format = Format::human;
  /// Slack allowed for optimizer-noise-sensitive checks.
  double tol = 5e-2;
};

// Each cmd_* writes its result to `out` and returns an exit status.

int cmd_compute(const StateSource& src, const RunOptions& opt, std::ostream& out);
int cmd_sweep_isotropic(int d, int points, const RunOptions& opt, std::ostream& out);
int cmd_verify(const std::string& suite, const RunOptions& opt, std::ostream& out);
int cmd_negative_search(int samples, double threshold, const RunOptions& opt, std::ostream& out);
int cmd_oracle_compare(Dims dims, int measurements, const RunOptions& opt, std::ostream& out);

// Data behind the commands.

/// max(lower bounds) <= estimate + tol and estimate <= min(proven upper
/// bounds) + 1e-6.
bool sandwich_holds(const EParamReport& r, double tol);

struct SweepRow {
  double p = 0.0;
  double entropy = 0.0;
  std::optional<double> analytic;
  double estimate = 0.0;
  bool separable = false;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  /// p with S(rho_iso(p)) = 1, bisected to 1e-4 (d = 2 only).
  std::optional<double> zero_crossing;
};

SweepResult sweep_isotropic(int d, std::span<const double> grid, const OptimizationConfig& cfg);

/// Root of S(rho_iso(p)) = target on [0, 1], where the entropy decreases in p.
double isotropic_entropy_root(int d, double target, double tol = 1e-4);

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Suites: signs, bounds, continuity, bases, oracle. Throws InputError for
/// an unknown suite.
std::vector<Check> verify_suite(const std::string& suite, const OptimizationConfig& cfg, double tol);

struct NegativeSample {
  PureState psi;
  double estimate = 0.0;
  double s_a = 0.0;
};

struct NegativeSearchResult {
  std::vector<NegativeSample> samples;
  int witnesses = 0;        ///< estimate - S_A > threshold
  int violations = 0;       ///< estimate < S_A - slack
  double fraction() const { return samples.empty() ? 0.0 : double(witnesses) / samples.size(); }
};

/// Haar-random two-qubit pure states; sample k uses seed (cfg.seed, k).
NegativeSearchResult negative_search(int samples, double threshold, double slack,
                                     const OptimizationConfig& cfg);

struct OracleRow {
  std::string label;
  double optimizer = 0.0;
  double oracle = 0.0;
  long long grid_points = 0;
};

struct OracleCompareResult {
  std::vector<OracleRow> rows;
  double max_abs_diff = 0.0;
  /// optimizer <= oracle + 1e-9 on every row.
  bool optimizer_not_worse = true;
};

/// Bell and computational bases (when dA == dB), then `measurements` Haar
/// random bases.
OracleCompareResult oracle_compare(Dims dims, int measurements, const OptimizationConfig& cfg);

}  // namespace eparam::cli
