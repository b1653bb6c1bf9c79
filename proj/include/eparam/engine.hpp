#pragma once

#include <optional>
#include <span>
#include <vector>

#include "eparam/config.hpp"
#include "eparam/measurement.hpp"
#include "eparam/product_opt.hpp"

namespace eparam {

/// Published numerical value of the C^3 (x) C^3 sup-inf constant. The
/// qutrit bound 1.71 - S built from it is reported but not enforced: this
/// library's own search finds measurements exceeding it.
inline constexpr double kQutritSupInf = 1.71;

/// Closed-form and numerically certified bounds on M(rho). Fields that do
/// not apply to the state (or were not requested) are empty.
struct BoundsReport {
  // Upper bounds.
  std::optional<double> info_content;          ///< 2 log2 d - S
  std::optional<double> dim_bound;             ///< log2 d + (1 - 1/d) log2(d + 1) - S
  std::optional<double> two_qubit_bound;       ///< 1 - S, d = 2 only
  std::optional<double> qutrit_numeric_bound;  ///< 1.71 - S, d = 3 only (numerically sourced)
  // Lower bounds.
  std::optional<double> eigenbasis_lower;  ///< inner minimum on the eigenbasis, minus S
  std::optional<double> bell_diag_lower;   ///< log2 d - S for Bell-diagonal states
  std::optional<double> pure_state_lower;  ///< H(c, ..., c, 1 - kc) for pure states, d in {2, 4, 8}
  /// S(Tr_A rho) - S(rho); not a bound, carried for comparison.
  std::optional<double> coherent_info;

  double max_lower() const;
  /// Minimum over the proven upper bounds; qutrit_numeric_bound is excluded.
  double min_upper() const;
  /// Every present lower bound is <= every present upper bound + tol.
  bool consistent(double tol = 1e-9) const;
};

struct EParamReport {
  double estimate = 0.0;
  Measurement best_measurement;
  InnerMinResult inner_result;
  /// Klein entropy of rho in best_measurement.
  double state_entropy = 0.0;
  BoundsReport bounds;
  std::optional<double> analytic_value;
  int restarts_used = 0;
  /// Validated value reached by each outer restart, in restart order.
  std::vector<double> restart_values;
};

struct SupInfResult {
  double value = 0.0;
  Measurement measurement;
  InnerMinResult inner;
  int restarts_used = 0;
  std::vector<double> restart_values;
};

/// H(rho, P) for the basis formed by the columns of the unitary u. If grad
/// is given it receives the anti-Hermitian gradient G for u -> u exp(A):
/// the derivative along an anti-Hermitian A is Re Tr(A^H G).
double klein_entropy_gradient(const CMatrix& rho, const CMatrix& u, CMatrix* grad);

/// Inner minimum over product states minus H(rho, P). The inner minimum
/// uses validation_factor * inner_restarts restarts plus `seeds`.
double eparam_fixed_measurement(const DensityMatrix& rho, const Measurement& P,
                                const OptimizationConfig& cfg,
                                std::span<const ProductState> seeds = {});

/// Multi-start estimate of M(rho) = sup_P (inf_products H(delta, P) - H(rho, P)).
///
/// Outer restarts begin, in order, at the eigenbasis of rho, the Bell basis,
/// the computational basis, the Schmidt-preserving eigenbasis when rho is
/// pure with d in {2, 4, 8}, any `warm_starts`, and then cfg.restarts Haar
/// random bases. Throws BudgetError when dA * dB exceeds 9 or dA != dB.
EParamReport estimate_eparam(const DensityMatrix& rho, const OptimizationConfig& cfg,
                             std::span<const Measurement> warm_starts = {});

/// sup_P inf_products H(delta, P) on C^d (x) C^d.
SupInfResult sup_inf_products(int d, const OptimizationConfig& cfg);

BoundsReport upper_bounds(const DensityMatrix& rho);
BoundsReport lower_bounds(const DensityMatrix& rho, const OptimizationConfig& cfg);
/// Union of upper_bounds and lower_bounds plus the coherent information.
BoundsReport all_bounds(const DensityMatrix& rho, const OptimizationConfig& cfg);

/// Off-diagonal elements in the Bell basis all below tol (dA == dB only).
bool is_bell_diagonal(const DensityMatrix& rho, double tol = 1e-9);

/// Exact value 1 - S(rho) for two-qubit Bell-diagonal states; empty otherwise.
std::optional<double> analytic_eparam(const DensityMatrix& rho);

/// 4 eps log2 d + H(eps) with d^2 = dA * dB.
double admixture_bound(double eps, Dims dims);

struct ContinuitySlack {
  double difference = 0.0;  ///< |value(rho) - value(mixture)|
  double bound = 0.0;
  double slack = 0.0;       ///< bound - difference
};

struct RobustnessReport {
  double m_rho = 0.0;
  double m_mix = 0.0;
  double difference = 0.0;
  double bound = 0.0;
  double slack = 0.0;
};

/// Estimates M(rho) and M((1 - eps) rho + eps sigma), each warm-started from
/// the other's best measurement. Requires 0 <= eps <= 1/2.
RobustnessReport robustness_check(const DensityMatrix& rho, const DensityMatrix& sigma,
                                  double eps, const OptimizationConfig& cfg);

/// For a fixed measurement the inner minimum is shared, so only
/// |H(mixture, P) - H(rho, P)| is compared with the admixture bound. Exact.
ContinuitySlack fixed_measurement_continuity_check(const DensityMatrix& rho,
                                                   const DensityMatrix& sigma, double eps,
                                                   const Measurement& P);

/// Heuristic two-state form: compares |M(rho1) - M(rho2)| with the admixture
/// bound evaluated at eps = ||rho1 - rho2||_1 / 2. Not a proven inequality.
ContinuitySlack heuristic_two_state_check(const DensityMatrix& rho1, const DensityMatrix& rho2,
                                          const OptimizationConfig& cfg);

}  // namespace eparam
