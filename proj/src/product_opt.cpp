#include "eparam/product_opt.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "eparam/nelder_mead.hpp"

namespace eparam {

namespace {

// Stack-allocated up to C^8 (x) C^8.
using SmallCVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1, 0, 64, 1>;

double entropy_of_amplitudes(const SmallCVector& q) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    const double p = std::norm(q(i));
    if (p > kEntropyFloor) h -= p * std::log2(p);
  }
  return h;
}

void kron_into(const CVector& left, const CVector& right, SmallCVector& out) {
  const Eigen::Index db = right.size();
  out.resize(left.size() * db);
  for (Eigen::Index i = 0; i < left.size(); ++i) out.segment(i * db, db) = left(i) * right;
}

std::vector<CVector> grid_local_states(int m, double h) {
  constexpr double pi = std::numbers::pi;
  const int n_theta = std::max(1, static_cast<int>(std::ceil(pi / 2.0 / h - 1e-9)));
  const int n_phi = std::max(1, static_cast<int>(std::ceil(2.0 * pi / h - 1e-9)));
  std::vector<CVector> out;
  if (m == 1) {
    out.push_back(CVector::Ones(1));
    return out;
  }
  if (m == 2) {
    for (int i = 0; i <= n_theta; ++i) {
      const double t = i * (pi / 2.0) / n_theta;
      // Phase is meaningless at the poles.
      const int phases = (i == 0 || i == n_theta) ? 1 : n_phi;
      for (int j = 0; j < phases; ++j) {
        const double angles[2] = {t, j * 2.0 * pi / n_phi};
        out.push_back(sphere_point(angles, 2));
      }
    }
    return out;
  }
  // m == 3: angles (t1, p1, t2, p2).
  for (int i1 = 0; i1 <= n_theta; ++i1) {
    const double t1 = i1 * (pi / 2.0) / n_theta;
    if (i1 == 0) {
      out.push_back(CVector::Unit(3, 0));
      continue;
    }
    for (int i2 = 0; i2 <= n_theta; ++i2) {
      const double t2 = i2 * (pi / 2.0) / n_theta;
      // x_1 vanishes at i2 == n_theta, x_2 at i2 == 0.
      int p1_count = i2 == n_theta ? 1 : n_phi;
      int p2_count = i2 == 0 ? 1 : n_phi;
      // With x_0 = 0 the first surviving phase is a global phase.
      if (i1 == n_theta) {
        if (i2 < n_theta) p1_count = 1;
        else p2_count = 1;
      }
      for (int j1 = 0; j1 < p1_count; ++j1)
        for (int j2 = 0; j2 < p2_count; ++j2) {
          const double angles[4] = {t1, j1 * 2.0 * pi / n_phi, t2, j2 * 2.0 * pi / n_phi};
          out.push_back(sphere_point(angles, 3));
        }
    }
  }
  return out;
}

}  // namespace

ProductState::ProductState(CVector left, CVector right)
    : left_(std::move(left)), right_(std::move(right)) {
  if (left_.size() == 0 || right_.size() == 0) {
    throw std::invalid_argument("product state factors must be nonempty");
  }
  if (std::abs(left_.norm() - 1.0) > 1e-12 || std::abs(right_.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("product state factors must be unit vectors");
  }
}

CVector ProductState::joint() const {
  SmallCVector v;
  kron_into(left_, right_, v);
  return v;
}

CVector sphere_point(const double* angles, int m) {
  CVector x(m);
  if (m == 1) {
    x(0) = 1.0;
    return x;
  }
  x(0) = std::cos(angles[0]);
  double s = std::sin(angles[0]);
  for (int k = 1; k < m - 1; ++k) {
    const double t = angles[2 * k];
    x(k) = std::polar(s * std::cos(t), angles[2 * k - 1]);
    s *= std::sin(t);
  }
  x(m - 1) = std::polar(s, angles[2 * (m - 1) - 1]);
  return x;
}

void sphere_angles(const CVector& x_in, double* angles) {
  const int m = static_cast<int>(x_in.size());
  if (m == 1) return;
  CVector x = x_in;
  const double r0 = std::abs(x(0));
  if (r0 > 0.0) x *= std::conj(x(0)) / r0;
  for (int k = 0; k < m - 1; ++k) {
    const double tail = x.tail(m - k - 1).norm();
    angles[2 * k] = std::atan2(tail, std::abs(x(k)));
    angles[2 * k + 1] = std::arg(x(k + 1));
  }
}

ProductEntropy::ProductEntropy(const CMatrix& basis, Dims dims)
    : adjoint_(basis.adjoint()), dims_(dims) {
  if (basis.rows() != dims.total() || basis.cols() != dims.total()) {
    throw std::invalid_argument("product entropy: basis does not match dims");
  }
  if (dims.total() > 64) throw std::invalid_argument("product entropy supports dA*dB <= 64");
}

double ProductEntropy::operator()(const Eigen::VectorXd& angles) const {
  const CVector a = sphere_point(angles.data(), dims_.a);
  const CVector b = sphere_point(angles.data() + 2 * (dims_.a - 1), dims_.b);
  SmallCVector v;
  kron_into(a, b, v);
  SmallCVector q(adjoint_.rows());
  q.noalias() = adjoint_ * v;
  return entropy_of_amplitudes(q);
}

double ProductEntropy::operator()(const ProductState& s) const {
  SmallCVector v;
  kron_into(s.left(), s.right(), v);
  SmallCVector q(adjoint_.rows());
  q.noalias() = adjoint_ * v;
  return entropy_of_amplitudes(q);
}

RVector ProductEntropy::probabilities(const ProductState& s) const {
  return (adjoint_ * s.joint()).cwiseAbs2();
}

ProductState ProductEntropy::state_at(const Eigen::VectorXd& angles) const {
  CVector a = sphere_point(angles.data(), dims_.a);
  CVector b = sphere_point(angles.data() + 2 * (dims_.a - 1), dims_.b);
  a.normalize();
  b.normalize();
  return ProductState(std::move(a), std::move(b));
}

Eigen::VectorXd ProductEntropy::angles_of(const ProductState& s) const {
  Eigen::VectorXd angles(parameter_count());
  sphere_angles(s.left(), angles.data());
  sphere_angles(s.right(), angles.data() + 2 * (dims_.a - 1));
  return angles;
}

double max_product_overlap(const PureState& psi) {
  return schmidt_decompose(psi).largest_weight();
}

double min_entropy_capped(double c, int n) {
  if (!(c > 0.0) || c > 1.0 + 1e-12) {
    throw std::invalid_argument("capped entropy: c must lie in (0, 1]");
  }
  c = std::min(c, 1.0);
  const int k = static_cast<int>(std::floor(1.0 / c + 1e-9));
  double rest = 1.0 - k * c;
  if (rest < 1e-12) rest = 0.0;
  const int needed = k + (rest > 0.0 ? 1 : 0);
  if (n < needed) {
    throw std::invalid_argument("capped entropy: " + std::to_string(n) +
                                " outcomes cannot host a distribution capped at " +
                                std::to_string(c));
  }
  double h = -k * c * std::log2(c);
  if (rest > 0.0) h -= rest * std::log2(rest);
  return h;
}

std::vector<InnerMinResult> product_local_minima(const ProductEntropy& f,
                                                 const OptimizationConfig& cfg, int restarts,
                                                 std::uint64_t stream_base) {
  NelderMeadOptions opt;
  opt.max_iters = cfg.max_iters;
  opt.f_tol = cfg.f_tol;
  opt.initial_step = 0.5;
  std::vector<InnerMinResult> out;
  out.reserve(restarts);
  const Dims dims = f.dims();
  for (int r = 0; r < restarts; ++r) {
    auto rng = make_rng(cfg.seed, stream_base + static_cast<std::uint64_t>(r));
    const ProductState start(haar_random_vector(dims.a, rng), haar_random_vector(dims.b, rng));
    const NelderMeadResult nm = nelder_mead(f, f.angles_of(start), opt);
    ProductState s = f.state_at(nm.x);
    const double value = f(s);
    out.push_back(InnerMinResult{value, std::move(s), 1, nm.converged});
  }
  return out;
}

InnerMinResult refine_product(const ProductEntropy& f, const ProductState& start,
                              const OptimizationConfig& cfg, double initial_step) {
  NelderMeadOptions opt;
  opt.max_iters = cfg.max_iters;
  opt.f_tol = cfg.f_tol;
  opt.initial_step = initial_step;
  const double start_value = f(start);
  const NelderMeadResult nm = nelder_mead(f, f.angles_of(start), opt);
  ProductState s = f.state_at(nm.x);
  const double value = f(s);
  if (value > start_value) return InnerMinResult{start_value, start, 1, nm.converged};
  return InnerMinResult{value, std::move(s), 1, nm.converged};
}

InnerMinResult min_klein_entropy_over_products(const Measurement& P,
                                               const OptimizationConfig& cfg,
                                               std::span<const ProductState> seeds) {
  const ProductEntropy f(P);
  const int restarts = std::max(1, cfg.inner_restarts);
  auto minima = product_local_minima(f, cfg, restarts, 0);
  for (const ProductState& s : seeds) minima.push_back(refine_product(f, s, cfg, 0.1));
  std::size_t best = 0;
  for (std::size_t i = 1; i < minima.size(); ++i)
    if (minima[i].value < minima[best].value) best = i;
  InnerMinResult out = std::move(minima[best]);
  // Restarted simplex polish of the winner well past f_tol.
  OptimizationConfig tight = cfg;
  tight.f_tol = 1e-15;
  for (double step : {1e-2, 1e-3, 1e-4}) {
    InnerMinResult r = refine_product(f, out.minimizer, tight, step);
    r.converged = out.converged;
    out = std::move(r);
  }
  out.restarts_used = restarts;
  return out;
}

ProductState product_in_2d_subspace(const PureState& psi1, const PureState& psi2) {
  const Dims two{2, 2};
  if (psi1.dims() != two || psi2.dims() != two) {
    throw std::invalid_argument("product_in_2d_subspace needs C^2 (x) C^2 states");
  }
  const CMatrix A = psi1.amplitude_matrix();
  const CMatrix B = psi2.amplitude_matrix();
  if (A.norm() < 1e-300 || B.norm() < 1e-300) {
    throw std::invalid_argument("product_in_2d_subspace: zero input");
  }

  // det(A + g B) = det(B) g^2 + lin g + det(A).
  const Complex quad = B.determinant();
  const Complex lin = A(0, 0) * B(1, 1) + A(1, 1) * B(0, 0) - A(0, 1) * B(1, 0) -
                      A(1, 0) * B(0, 1);
  const Complex cst = A.determinant();

  CMatrix m;
  if (std::abs(quad) < 1e-12) {
    // psi2 already has rank one.
    m = B;
  } else {
    const Complex disc = std::sqrt(lin * lin - 4.0 * quad * cst);
    const Complex t = std::abs(lin + disc) >= std::abs(lin - disc) ? -(lin + disc) / 2.0
                                                                   : -(lin - disc) / 2.0;
    Complex gamma;
    if (std::abs(t) == 0.0) {
      gamma = 0.0;
    } else {
      const Complex g1 = t / quad;
      const Complex g2 = cst / t;
      gamma = std::abs(g1) <= std::abs(g2) ? g1 : g2;
    }
    for (int it = 0; it < 2; ++it) {
      const Complex deriv = 2.0 * quad * gamma + lin;
      if (std::abs(deriv) < 1e-300) break;
      gamma -= (quad * gamma * gamma + lin * gamma + cst) / deriv;
    }
    m = A + gamma * B;
  }
  m /= m.norm();
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  CVector left = svd.matrixU().col(0);
  CVector right = svd.matrixV().col(0).conjugate();
  left.normalize();
  right.normalize();
  return ProductState(std::move(left), std::move(right));
}

GridMinResult brute_force_min_products(const Measurement& P, double resolution,
                                       long long budget) {
  const Dims dims = P.dims();
  if (dims.a > 3 || dims.b > 3) {
    throw BudgetError("brute-force product grid supports dA, dB <= 3");
  }
  if (!(resolution > 0.0)) throw std::invalid_argument("grid resolution must be positive");
  const std::vector<CVector> left = grid_local_states(dims.a, resolution);
  const std::vector<CVector> right = grid_local_states(dims.b, resolution);
  const long long points = static_cast<long long>(left.size()) * static_cast<long long>(right.size());
  if (points > budget) {
    throw BudgetError("product grid needs " + std::to_string(points) +
                      " points, budget is " + std::to_string(budget));
  }

  const int n = dims.total();
  const int db = dims.b;
  const CMatrix adj = P.basis().adjoint();
  GridMinResult best;
  best.value = std::numeric_limits<double>::infinity();
  best.points = points;
  std::size_t best_a = 0, best_b = 0;
  CMatrix w(n, db);
  SmallCVector q(n);
  for (std::size_t ia = 0; ia < left.size(); ++ia) {
    const CVector& a = left[ia];
    w.setZero();
    for (int k = 0; k < dims.a; ++k) w += a(k) * adj.middleCols(k * db, db);
    for (std::size_t ib = 0; ib < right.size(); ++ib) {
      q.noalias() = w * right[ib];
      const double h = entropy_of_amplitudes(q);
      if (h < best.value) {
        best.value = h;
        best_a = ia;
        best_b = ib;
      }
    }
  }
  best.minimizer = ProductState(left[best_a].normalized(), right[best_b].normalized());
  return best;
}

}  // namespace eparam
