#include "eparam/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace eparam {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// RNG stream layout: restart r owns streams [(r + 1) << 32, (r + 2) << 32).
std::uint64_t restart_stream(std::uint64_t restart, std::uint64_t sub) {
  return ((restart + 1) << 32) + (sub << 12);
}
constexpr std::uint64_t kRandomStartStream = 0xB0B0ull << 40;

// Klein entropy of an operator already rotated into the measurement frame
// (rot = U^H rho U). The Riemannian gradient with respect to right
// multiplication U -> U exp(A), A anti-Hermitian, is rot_ij (w_j - w_i) with
// w = -log2 p.
double rotated_entropy(const CMatrix& rot, CMatrix* grad) {
  const Eigen::Index n = rot.rows();
  const RVector p = rot.diagonal().real().cwiseMax(0.0);
  const double h = entropy_bits(p);
  if (grad != nullptr) {
    RVector w(n);
    for (Eigen::Index i = 0; i < n; ++i) w(i) = -std::log2(std::max(p(i), 1e-300));
    grad->resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i) (*grad)(i, j) = rot(i, j) * (w(j) - w(i));
  }
  return h;
}

double pure_entropy(const CMatrix& u, const CVector& v, CMatrix* grad) {
  const CVector q = u.adjoint() * v;
  return rotated_entropy(q * q.adjoint(), grad);
}

CMatrix exp_anti_hermitian(const CMatrix& x) {
  // x = i K with K Hermitian.
  const CMatrix k = Complex(0.0, -1.0) * x;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (k + k.adjoint()));
  const CVector phases = es.eigenvalues().unaryExpr([](double l) { return std::polar(1.0, l); });
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix orthonormalize(const CMatrix& u) {
  Eigen::JacobiSVD<CMatrix> svd(u, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

double fidelity(const ProductState& a, const ProductState& b) {
  return std::norm(a.left().dot(b.left())) * std::norm(a.right().dot(b.right()));
}

struct Active {
  ProductState state;
  double value;
};

class OuterSearch {
 public:
  OuterSearch(Dims dims, const DensityMatrix* rho, const OptimizationConfig& cfg)
      : dims_(dims), rho_(rho), cfg_(cfg) {
    track_cfg_ = cfg;
    track_cfg_.max_iters = std::min(cfg.max_iters, 300);
    validate_cfg_ = cfg;
    validate_cfg_.inner_restarts = std::max(1, cfg.inner_restarts * cfg.validation_factor);
  }

  struct Candidate {
    double value = -kInf;
    Measurement measurement;
    InnerMinResult inner;
    double state_entropy = 0.0;
  };

  Candidate run(const CMatrix& start, std::uint64_t restart) const {
    CMatrix u = orthonormalize(start);
    std::vector<Active> active;
    merge(active, product_local_minima(ProductEntropy(u, dims_), cfg_, cfg_.inner_restarts,
                                       restart_stream(restart, 0)));
    double best = min_value(active) - state_entropy(u, nullptr);
    CMatrix best_u = u;
    std::vector<Active> best_active = active;

    double tau = 0.05;
    double eta = 0.1;
    int stall = 0;
    for (int it = 1; it <= cfg_.outer_iters; ++it) {
      CMatrix grad;
      const double f0 = surrogate(u, active, tau, &grad);
      const double gnorm = grad.norm();
      if (gnorm < 1e-12) break;
      const CMatrix dir = grad / gnorm;

      bool accepted = false;
      CMatrix trial;
      for (int ls = 0; ls < 30 && eta > 1e-10; ++ls) {
        trial = u * exp_anti_hermitian(eta * dir);
        if (surrogate(trial, active, tau, nullptr) >= f0 + 1e-4 * eta * gnorm) {
          accepted = true;
          break;
        }
        eta *= 0.5;
      }
      if (!accepted) {
        if (tau <= kTauMin) break;
        tau = std::max(kTauMin, tau * 0.5);
        eta = 0.1;
        continue;
      }
      u = (it % 50 == 0) ? orthonormalize(trial) : trial;
      eta = std::min(0.5, eta * 2.0);

      const ProductEntropy f(u, dims_);
      for (Active& a : active) {
        InnerMinResult r = refine_product(f, a.state, track_cfg_, 0.05);
        a.state = std::move(r.minimizer);
        a.value = r.value;
      }
      if (it % kCheckEvery == 0 || it == cfg_.outer_iters) {
        merge(active, product_local_minima(f, cfg_, cfg_.inner_restarts,
                                           restart_stream(restart, it)));
        const double value = min_value(active) - state_entropy(u, nullptr);
        if (value > best + 1e-7) {
          best = value;
          best_u = u;
          best_active = active;
          stall = 0;
        } else if (++stall >= kMaxStall) {
          break;
        }
      }
      tau = std::max(kTauMin, tau * 0.97);
    }

    Candidate out;
    out.measurement = Measurement(orthonormalize(best_u), dims_);
    std::vector<ProductState> seeds;
    seeds.reserve(best_active.size());
    for (const Active& a : best_active) seeds.push_back(a.state);
    out.inner = min_klein_entropy_over_products(out.measurement, validate_cfg_, seeds);
    out.state_entropy = rho_ != nullptr ? klein_entropy(*rho_, out.measurement) : 0.0;
    out.value = out.inner.value - out.state_entropy;
    return out;
  }

 private:
  static constexpr double kTauMin = 1e-3;
  static constexpr int kCheckEvery = 8;
  static constexpr int kMaxStall = 4;
  static constexpr std::size_t kMaxActive = 24;
  static constexpr double kActiveMargin = 0.75;

  double state_entropy(const CMatrix& u, CMatrix* grad) const {
    if (rho_ == nullptr) {
      if (grad != nullptr) *grad = CMatrix::Zero(u.rows(), u.cols());
      return 0.0;
    }
    return rotated_entropy(u.adjoint() * rho_->matrix() * u, grad);
  }

  // Soft minimum over the tracked product states minus H(rho, U).
  double surrogate(const CMatrix& u, const std::vector<Active>& active, double tau,
                   CMatrix* grad) const {
    const std::size_t m = active.size();
    std::vector<double> g(m);
    std::vector<CMatrix> grads(grad != nullptr ? m : 0);
    for (std::size_t k = 0; k < m; ++k) {
      const CVector v = active[k].state.joint();
      g[k] = pure_entropy(u, v, grad != nullptr ? &grads[k] : nullptr);
    }
    const double gmin = *std::min_element(g.begin(), g.end());
    double z = 0.0;
    std::vector<double> weight(m);
    for (std::size_t k = 0; k < m; ++k) {
      weight[k] = std::exp(-(g[k] - gmin) / tau);
      z += weight[k];
    }
    const double soft = gmin - tau * std::log(z);
    CMatrix state_grad;
    const double h = state_entropy(u, grad != nullptr ? &state_grad : nullptr);
    if (grad != nullptr) {
      *grad = -state_grad;
      for (std::size_t k = 0; k < m; ++k) *grad += (weight[k] / z) * grads[k];
    }
    return soft - h;
  }

  static double min_value(const std::vector<Active>& active) {
    double m = kInf;
    for (const Active& a : active) m = std::min(m, a.value);
    return m;
  }

  static void merge(std::vector<Active>& active, std::vector<InnerMinResult> found) {
    for (InnerMinResult& r : found) {
      bool duplicate = false;
      for (Active& a : active) {
        if (fidelity(a.state, r.minimizer) > 1.0 - 1e-6) {
          if (r.value < a.value) {
            a.state = r.minimizer;
            a.value = r.value;
          }
          duplicate = true;
          break;
        }
      }
      if (!duplicate) active.push_back(Active{std::move(r.minimizer), r.value});
    }
    std::sort(active.begin(), active.end(),
              [](const Active& x, const Active& y) { return x.value < y.value; });
    const double cutoff = active.front().value + kActiveMargin;
    std::size_t keep = 0;
    while (keep < active.size() && keep < kMaxActive && active[keep].value <= cutoff) ++keep;
    active.resize(std::max<std::size_t>(keep, 1), active.front());
  }

  Dims dims_;
  const DensityMatrix* rho_;
  OptimizationConfig cfg_;
  OptimizationConfig track_cfg_;
  OptimizationConfig validate_cfg_;
};

void require_square(const DensityMatrix& rho, const char* what) {
  if (rho.dims().a != rho.dims().b) {
    throw std::invalid_argument(std::string(what) + " needs equal local dimensions");
  }
}

std::optional<PureState> as_pure(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.matrix());
  const Eigen::Index n = es.eigenvalues().size();
  if (es.eigenvalues()(n - 1) < 1.0 - 1e-9) return std::nullopt;
  return PureState::normalized(es.eigenvectors().col(n - 1), rho.dims());
}

}  // namespace

double klein_entropy_gradient(const CMatrix& rho, const CMatrix& u, CMatrix* grad) {
  if (rho.rows() != u.rows() || u.rows() != u.cols()) throw std::invalid_argument("gradient: dimension mismatch");
  return rotated_entropy(u.adjoint() * rho * u, grad);
}

double BoundsReport::max_lower() const {
  double m = -kInf;
  for (const auto& b : {eigenbasis_lower, bell_diag_lower, pure_state_lower})
    if (b) m = std::max(m, *b);
  return m;
}

double BoundsReport::min_upper() const {
  double m = kInf;
  for (const auto& b : {info_content, dim_bound, two_qubit_bound})
    if (b) m = std::min(m, *b);
  return m;
}

bool BoundsReport::consistent(double tol) const { return max_lower() <= min_upper() + tol; }

double eparam_fixed_measurement(const DensityMatrix& rho, const Measurement& P,
                                const OptimizationConfig& cfg,
                                std::span<const ProductState> seeds) {
  if (rho.dims() != P.dims()) throw std::invalid_argument("measurement: dimension mismatch");
  OptimizationConfig vcfg = cfg;
  vcfg.inner_restarts = std::max(1, cfg.inner_restarts * cfg.validation_factor);
  const InnerMinResult inner = min_klein_entropy_over_products(P, vcfg, seeds);
  return inner.value - klein_entropy(rho, P);
}

EParamReport estimate_eparam(const DensityMatrix& rho, const OptimizationConfig& cfg,
                             std::span<const Measurement> warm_starts) {
  const Dims dims = rho.dims();
  if (dims.a != dims.b) throw BudgetError("estimator needs equal local dimensions");
  if (dims.total() > cfg.max_joint_dim) {
    throw BudgetError("dA*dB = " + std::to_string(dims.total()) + " exceeds the budget of " +
                      std::to_string(cfg.max_joint_dim));
  }
  const int d = dims.a;

  std::vector<CMatrix> starts;
  starts.push_back(eigenbasis_measurement(rho).basis());
  starts.push_back(bell_basis(d).basis());
  starts.push_back(CMatrix::Identity(dims.total(), dims.total()));
  if (d == 2 || d == 4 || d == 8) {
    if (const auto psi = as_pure(rho)) starts.push_back(schmidt_preserving_eigenbasis(*psi).basis());
  }
  for (const Measurement& m : warm_starts) {
    if (m.dims() != dims) throw std::invalid_argument("warm start: dimension mismatch");
    starts.push_back(m.basis());
  }
  for (int r = 0; r < cfg.restarts; ++r) {
    auto rng = make_rng(cfg.seed, kRandomStartStream + static_cast<std::uint64_t>(r));
    starts.push_back(haar_random_unitary(dims.total(), rng));
  }

  const OuterSearch search(dims, &rho, cfg);
  EParamReport report;
  report.estimate = -kInf;
  for (std::size_t r = 0; r < starts.size(); ++r) {
    OuterSearch::Candidate c = search.run(starts[r], r);
    report.restart_values.push_back(c.value);
    if (c.value > report.estimate) {
      report.estimate = c.value;
      report.best_measurement = std::move(c.measurement);
      report.inner_result = std::move(c.inner);
      report.state_entropy = c.state_entropy;
    }
  }
  report.restarts_used = static_cast<int>(starts.size());
  report.bounds = all_bounds(rho, cfg);
  report.analytic_value = analytic_eparam(rho);
  return report;
}

SupInfResult sup_inf_products(int d, const OptimizationConfig& cfg) {
  const Dims dims{d, d};
  if (d < 2) throw std::invalid_argument("sup-inf needs d >= 2");
  if (dims.total() > cfg.max_joint_dim) {
    throw BudgetError("dA*dB = " + std::to_string(dims.total()) + " exceeds the budget of " +
                      std::to_string(cfg.max_joint_dim));
  }
  std::vector<CMatrix> starts;
  starts.push_back(bell_basis(d).basis());
  starts.push_back(CMatrix::Identity(dims.total(), dims.total()));
  for (int r = 0; r < cfg.restarts; ++r) {
    auto rng = make_rng(cfg.seed, kRandomStartStream + static_cast<std::uint64_t>(r));
    starts.push_back(haar_random_unitary(dims.total(), rng));
  }
  const OuterSearch search(dims, nullptr, cfg);
  SupInfResult out;
  out.value = -kInf;
  for (std::size_t r = 0; r < starts.size(); ++r) {
    OuterSearch::Candidate c = search.run(starts[r], r);
    out.restart_values.push_back(c.value);
    if (c.value > out.value) {
      out.value = c.value;
      out.measurement = std::move(c.measurement);
      out.inner = std::move(c.inner);
    }
  }
  out.restarts_used = static_cast<int>(starts.size());
  return out;
}

BoundsReport upper_bounds(const DensityMatrix& rho) {
  require_square(rho, "upper bounds");
  const int d = rho.dims().a;
  const double s = von_neumann_entropy(rho);
  const double log_d = std::log2(static_cast<double>(d));
  BoundsReport b;
  b.info_content = 2.0 * log_d - s;
  b.dim_bound = log_d + (1.0 - 1.0 / d) * std::log2(d + 1.0) - s;
  if (d == 2) b.two_qubit_bound = 1.0 - s;
  if (d == 3) b.qutrit_numeric_bound = kQutritSupInf - s;
  return b;
}

BoundsReport lower_bounds(const DensityMatrix& rho, const OptimizationConfig& cfg) {
  require_square(rho, "lower bounds");
  const int d = rho.dims().a;
  const double s = von_neumann_entropy(rho);
  BoundsReport b;
  b.eigenbasis_lower = eparam_fixed_measurement(rho, eigenbasis_measurement(rho), cfg);
  if (is_bell_diagonal(rho)) b.bell_diag_lower = std::log2(static_cast<double>(d)) - s;
  if (d == 2 || d == 4 || d == 8) {
    if (const auto psi = as_pure(rho)) {
      b.pure_state_lower = min_entropy_capped(max_product_overlap(*psi), d * d);
    }
  }
  return b;
}

BoundsReport all_bounds(const DensityMatrix& rho, const OptimizationConfig& cfg) {
  BoundsReport b = upper_bounds(rho);
  const BoundsReport lower = lower_bounds(rho, cfg);
  b.eigenbasis_lower = lower.eigenbasis_lower;
  b.bell_diag_lower = lower.bell_diag_lower;
  b.pure_state_lower = lower.pure_state_lower;
  b.coherent_info = coherent_information(rho);
  return b;
}

bool is_bell_diagonal(const DensityMatrix& rho, double tol) {
  const Dims dims = rho.dims();
  if (dims.a != dims.b || dims.a < 2) return false;
  const CMatrix b = bell_basis(dims.a).basis();
  CMatrix rot = b.adjoint() * rho.matrix() * b;
  rot.diagonal().setZero();
  return rot.cwiseAbs().maxCoeff() < tol;
}

std::optional<double> analytic_eparam(const DensityMatrix& rho) {
  if (rho.dims() != Dims{2, 2} || !is_bell_diagonal(rho)) return std::nullopt;
  return 1.0 - von_neumann_entropy(rho);
}

double admixture_bound(double eps, Dims dims) {
  return 2.0 * eps * std::log2(static_cast<double>(dims.total())) + binary_entropy(eps);
}

RobustnessReport robustness_check(const DensityMatrix& rho, const DensityMatrix& sigma,
                                  double eps, const OptimizationConfig& cfg) {
  if (eps < 0.0 || eps > 0.5) throw std::invalid_argument("admixture weight must lie in [0, 1/2]");
  const DensityMatrix mixture = mix(rho, sigma, eps);
  const EParamReport r1 = estimate_eparam(rho, cfg);
  const Measurement from_rho[] = {r1.best_measurement};
  const EParamReport r2 = estimate_eparam(mixture, cfg, from_rho);
  const ProductState seed2[] = {r2.inner_result.minimizer};

  RobustnessReport out;
  out.m_rho = std::max(r1.estimate, eparam_fixed_measurement(rho, r2.best_measurement, cfg, seed2));
  out.m_mix = r2.estimate;
  out.difference = std::abs(out.m_rho - out.m_mix);
  out.bound = admixture_bound(eps, rho.dims());
  out.slack = out.bound - out.difference;
  return out;
}

ContinuitySlack fixed_measurement_continuity_check(const DensityMatrix& rho,
                                                   const DensityMatrix& sigma, double eps,
                                                   const Measurement& P) {
  if (eps < 0.0 || eps > 0.5) throw std::invalid_argument("admixture weight must lie in [0, 1/2]");
  const DensityMatrix mixture = mix(rho, sigma, eps);
  ContinuitySlack out;
  out.difference = std::abs(klein_entropy(mixture, P) - klein_entropy(rho, P));
  out.bound = admixture_bound(eps, rho.dims());
  out.slack = out.bound - out.difference;
  return out;
}

ContinuitySlack heuristic_two_state_check(const DensityMatrix& rho1, const DensityMatrix& rho2,
                                          const OptimizationConfig& cfg) {
  const EParamReport r1 = estimate_eparam(rho1, cfg);
  const Measurement from1[] = {r1.best_measurement};
  const EParamReport r2 = estimate_eparam(rho2, cfg, from1);
  const ProductState seed2[] = {r2.inner_result.minimizer};
  const double m1 =
      std::max(r1.estimate, eparam_fixed_measurement(rho1, r2.best_measurement, cfg, seed2));
  const double eps = std::min(1.0, 0.5 * trace_norm_distance(rho1, rho2));
  ContinuitySlack out;
  out.difference = std::abs(m1 - r2.estimate);
  out.bound = admixture_bound(eps, rho1.dims());
  out.slack = out.bound - out.difference;
  return out;
}

}  // namespace eparam
