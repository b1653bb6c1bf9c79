#include "eparam/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace eparam {

namespace {

void check_dims(Dims dims) {
  if (dims.a < 1 || dims.b < 1) {
    throw std::invalid_argument("local dimensions must be positive");
  }
}

}  // namespace

PureState::PureState(CVector amplitudes, Dims dims)
    : amplitudes_(std::move(amplitudes)), dims_(dims) {
  check_dims(dims_);
  if (amplitudes_.size() != dims_.total()) {
    throw std::invalid_argument("amplitude vector length " +
                                std::to_string(amplitudes_.size()) +
                                " does not match dA*dB = " +
                                std::to_string(dims_.total()));
  }
  if (std::abs(amplitudes_.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("pure state is not normalized");
  }
}

PureState PureState::normalized(CVector amplitudes, Dims dims) {
  const double n = amplitudes.norm();
  if (n < 1e-300) throw std::invalid_argument("cannot normalize a zero vector");
  amplitudes /= n;
  return PureState(std::move(amplitudes), dims);
}

CMatrix PureState::amplitude_matrix() const {
  CMatrix m(dims_.a, dims_.b);
  for (int i = 0; i < dims_.a; ++i)
    for (int j = 0; j < dims_.b; ++j) m(i, j) = amplitudes_(i * dims_.b + j);
  return m;
}

CMatrix PureState::projector() const { return amplitudes_ * amplitudes_.adjoint(); }

DensityMatrix::DensityMatrix(CMatrix matrix, Dims dims)
    : matrix_(std::move(matrix)), dims_(dims) {
  check_dims(dims_);
  const int n = dims_.total();
  if (matrix_.rows() != n || matrix_.cols() != n) {
    throw std::invalid_argument("density matrix size does not match dA*dB");
  }
  if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("density matrix is not Hermitian");
  }
  if (std::abs(matrix_.trace() - Complex(1.0)) > 1e-12) {
    throw std::invalid_argument("density matrix trace is not 1");
  }
  matrix_ = (0.5 * (matrix_ + matrix_.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(matrix_, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("eigendecomposition failed");
  }
  if (es.eigenvalues().minCoeff() < -1e-10) {
    throw std::invalid_argument("density matrix has a negative eigenvalue");
  }
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  return DensityMatrix(psi.projector(), psi.dims());
}

RVector DensityMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(matrix_, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("eigendecomposition failed");
  }
  RVector ev = es.eigenvalues().cwiseMax(0.0);
  return ev / ev.sum();
}

CVector SchmidtDecomposition::reconstruct() const {
  const int da = static_cast<int>(left_basis.rows());
  const int db = static_cast<int>(right_basis.rows());
  CVector out = CVector::Zero(da * db);
  for (int k = 0; k < coefficients.size(); ++k) {
    for (int i = 0; i < da; ++i)
      for (int j = 0; j < db; ++j)
        out(i * db + j) += coefficients(k) * left_basis(i, k) * right_basis(j, k);
  }
  return out;
}

double entropy_bits(const Eigen::Ref<const RVector>& p) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double x = p(i);
    if (x > kEntropyFloor) h -= x * std::log2(x);
  }
  return h;
}

double shannon_entropy(const Eigen::Ref<const RVector>& p) {
  if (p.size() == 0) throw std::invalid_argument("empty probability vector");
  if (p.minCoeff() < -1e-12) {
    throw std::invalid_argument("probability vector has a negative entry");
  }
  RVector q = p.cwiseMax(0.0);
  const double total = q.sum();
  if (std::abs(total - 1.0) > 1e-6) {
    throw std::invalid_argument("probabilities sum to " + std::to_string(total));
  }
  q /= total;
  return entropy_bits(q);
}

double binary_entropy(double x) {
  RVector p(2);
  p << x, 1.0 - x;
  return shannon_entropy(p);
}

double von_neumann_entropy(const DensityMatrix& rho) {
  return entropy_bits(rho.eigenvalues());
}

DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep) {
  const auto [da, db] = rho.dims();
  const CMatrix& m = rho.matrix();
  if (keep == Subsystem::A) {
    CMatrix r = CMatrix::Zero(da, da);
    for (int i = 0; i < da; ++i)
      for (int k = 0; k < da; ++k)
        for (int j = 0; j < db; ++j) r(i, k) += m(i * db + j, k * db + j);
    return DensityMatrix(std::move(r), Dims{da, 1});
  }
  CMatrix r = CMatrix::Zero(db, db);
  for (int j = 0; j < db; ++j)
    for (int l = 0; l < db; ++l)
      for (int i = 0; i < da; ++i) r(j, l) += m(i * db + j, i * db + l);
  return DensityMatrix(std::move(r), Dims{db, 1});
}

SchmidtDecomposition schmidt_decompose(const PureState& psi) {
  Eigen::JacobiSVD<CMatrix> svd(psi.amplitude_matrix(),
                                Eigen::ComputeFullU | Eigen::ComputeFullV);
  SchmidtDecomposition out;
  out.coefficients = svd.singularValues();
  out.left_basis = svd.matrixU();
  // M = U S V^H, so psi = sum_k s_k |u_k> (x) conj(|v_k>).
  out.right_basis = svd.matrixV().conjugate();
  return out;
}

double coherent_information(const DensityMatrix& rho) {
  return von_neumann_entropy(partial_trace(rho, Subsystem::B)) -
         von_neumann_entropy(rho);
}

double trace_norm_distance(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  if (rho1.dims() != rho2.dims()) {
    throw std::invalid_argument("trace distance: dimension mismatch");
  }
  const CMatrix diff = rho1.matrix() - rho2.matrix();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(diff, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

CVector haar_random_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CVector v(n);
  for (int i = 0; i < n; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = Complex(re, im);
  }
  return v / v.norm();
}

PureState haar_random_pure(Dims dims, std::mt19937_64& rng) {
  check_dims(dims);
  return PureState::normalized(haar_random_vector(dims.total(), rng), dims);
}

PureState haar_random_pure(Dims dims, std::uint64_t seed) {
  auto rng = make_rng(seed, 0);
  return haar_random_pure(dims, rng);
}

CMatrix haar_random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix z(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(i, j) = Complex(re, im);
    }
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < n; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

DensityMatrix mix(const DensityMatrix& rho, const DensityMatrix& sigma, double eps) {
  if (rho.dims() != sigma.dims()) throw std::invalid_argument("mix: dimension mismatch");
  if (eps < 0.0 || eps > 1.0) throw std::invalid_argument("mix: weight outside [0, 1]");
  return DensityMatrix((1.0 - eps) * rho.matrix() + eps * sigma.matrix(), rho.dims());
}

}  // namespace eparam
