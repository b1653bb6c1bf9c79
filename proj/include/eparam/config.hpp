#pragma once

#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace eparam {

inline constexpr const char* kVersion = "0.1.0";

/// Budgets for the nested sup/inf search. Every restart draws from its own
/// RNG stream derived from (seed, restart index), so results are
/// reproducible and adding restarts only extends the set of candidates.
struct OptimizationConfig {
  /// Outer (measurement) restarts.
  int restarts = 24;
  /// Inner (product-state) restarts per minimization.
  int inner_restarts = 16;
  /// Nelder-Mead iteration cap per inner restart.
  int max_iters = 2000;
  /// Nelder-Mead convergence threshold on simplex value spread.
  double f_tol = 1e-8;
  /// Angular step of the brute-force product grid.
  double grid_resolution = std::numbers::pi / 60.0;
  /// Maximum number of product states the brute-force grid may visit.
  long long grid_budget = 50'000'000;
  /// Ascent steps per outer restart.
  int outer_iters = 250;
  /// Inner restarts used to re-check each outer candidate, as a multiple of
  /// inner_restarts.
  int validation_factor = 32;
  /// Largest dA * dB the outer search accepts.
  int max_joint_dim = 9;
  std::uint64_t seed = 20070501;
};

/// Thrown when a request exceeds the configured computational budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace eparam
