#pragma once

#include <vector>

#include "eparam/config.hpp"
#include "eparam/measurement.hpp"

namespace eparam {

/// |left> (x) |right>, both unit vectors.
class ProductState {
 public:
  /// |0>|0> on C^1 (x) C^1; placeholder until a real state is assigned.
  ProductState() : ProductState(CVector::Ones(1), CVector::Ones(1)) {}
  ProductState(CVector left, CVector right);

  const CVector& left() const { return left_; }
  const CVector& right() const { return right_; }
  Dims dims() const { return {static_cast<int>(left_.size()), static_cast<int>(right_.size())}; }

  CVector joint() const;
  PureState pure() const { return PureState::normalized(joint(), dims()); }

 private:
  CVector left_;
  CVector right_;
};

struct InnerMinResult {
  double value = 0.0;
  ProductState minimizer;
  int restarts_used = 0;
  bool converged = false;
};

/// Klein entropy of product states for one fixed basis.
///
/// Local states are charted by generalized spherical angles with the first
/// amplitude real and nonnegative: for C^m,
///   x_0 = cos t_1,  x_k = sin t_1 ... sin t_k cos t_{k+1} e^{i p_k},
///   x_{m-1} = sin t_1 ... sin t_{m-1} e^{i p_{m-1}},
/// giving 2(m-1) angles per side stored as [t_1, p_1, t_2, p_2, ...]. The
/// global phase of each factor is fixed, which removes flat directions.
class ProductEntropy {
 public:
  /// `basis` columns are the measurement vectors; it is not re-validated.
  ProductEntropy(const CMatrix& basis, Dims dims);
  explicit ProductEntropy(const Measurement& P) : ProductEntropy(P.basis(), P.dims()) {}

  Dims dims() const { return dims_; }
  int parameter_count() const { return 2 * (dims_.a - 1) + 2 * (dims_.b - 1); }

  double operator()(const Eigen::VectorXd& angles) const;
  double operator()(const ProductState& s) const;

  ProductState state_at(const Eigen::VectorXd& angles) const;
  Eigen::VectorXd angles_of(const ProductState& s) const;

  /// Outcome distribution for a product state.
  RVector probabilities(const ProductState& s) const;

 private:
  CMatrix adjoint_;
  Dims dims_;
};

/// Maps angles to a unit vector of C^m (see ProductEntropy).
CVector sphere_point(const double* angles, int m);
/// Inverse chart; the global phase is dropped.
void sphere_angles(const CVector& x, double* angles);

/// Square of the largest Schmidt coefficient of psi, i.e. the largest
/// overlap |<a b|psi>|^2 with a product state.
double max_product_overlap(const PureState& psi);

/// Minimum Shannon entropy over n-outcome distributions with every entry
/// at most c: k = floor(1/c) entries equal to c plus one entry 1 - kc.
/// Throws std::invalid_argument if c is outside (0, 1] or n < ceil(1/c).
double min_entropy_capped(double c, int n);

/// Multi-start Nelder-Mead over product pure states. Mixed product (and
/// separable) states need not be searched: Klein entropy is concave in the
/// state, so its minimum over a convex set sits at an extreme point.
///
/// `seeds` are extra starting points, each refined locally and competing
/// with the random restarts.
InnerMinResult min_klein_entropy_over_products(const Measurement& P,
                                               const OptimizationConfig& cfg,
                                               std::span<const ProductState> seeds = {});

/// Every restart's endpoint, in restart order. Restart r uses the RNG stream
/// (cfg.seed, stream_base + r).
std::vector<InnerMinResult> product_local_minima(const ProductEntropy& f,
                                                 const OptimizationConfig& cfg, int restarts,
                                                 std::uint64_t stream_base);

/// Single local Nelder-Mead descent started at `start`.
InnerMinResult refine_product(const ProductEntropy& f, const ProductState& start,
                              const OptimizationConfig& cfg, double initial_step);

/// Product state inside span(psi1, psi2) for two orthonormal vectors of
/// C^2 (x) C^2, found from the quadratic det(A + gamma B) = 0 in the
/// amplitude matrices. Throws std::invalid_argument for other dims or a
/// zero input.
ProductState product_in_2d_subspace(const PureState& psi1, const PureState& psi2);

struct GridMinResult {
  double value = 0.0;
  ProductState minimizer;
  long long points = 0;
};

/// Exhaustive grid over the spherical angles of both local states with step
/// `resolution` (polar angles over [0, pi/2] including both ends, phases over
/// [0, 2 pi)). Requires dA, dB <= 3; throws BudgetError when the grid would
/// exceed `budget` product states.
GridMinResult brute_force_min_products(const Measurement& P, double resolution,
                                       long long budget = 50'000'000);

}  // namespace eparam
