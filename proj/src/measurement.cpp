#include "eparam/measurement.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace eparam {

namespace {

// Signed index tables for the within-group coefficient patterns: entry k, r
// is +-(i + 1) meaning +-a_i sits at support position r of vector k.
constexpr std::array<std::array<int, 2>, 2> kPattern2{{{1, 2}, {-2, 1}}};

constexpr std::array<std::array<int, 4>, 4> kPattern4{{
    {1, 2, 3, 4},
    {-2, 1, 4, -3},
    {3, 4, -1, -2},
    {4, -3, 2, -1},
}};

constexpr std::array<std::array<int, 8>, 8> kPattern8{{
    {1, 2, 3, 4, 5, 6, 7, 8},
    {2, -1, -4, 3, -6, 5, -8, 7},
    {3, 4, -1, -2, 7, -8, -5, 6},
    {-4, 3, -2, 1, 8, 7, -6, -5},
    {-5, -6, 7, -8, 1, 2, -3, 4},
    {-6, 5, -8, -7, -2, 1, 4, 3},
    {7, 8, 5, -6, -3, 4, -1, -2},
    {-8, 7, 6, 5, -4, -3, -2, 1},
}};

template <std::size_t D>
double pattern_entry(const std::array<std::array<int, D>, D>& pattern, int k, int r,
                     std::span<const double> a) {
  const int code = pattern[k][r];
  const double v = a[std::abs(code) - 1];
  return code < 0 ? -v : v;
}

double pattern_value(int d, int k, int r, std::span<const double> a) {
  switch (d) {
    case 2: return pattern_entry(kPattern2, k, r, a);
    case 4: return pattern_entry(kPattern4, k, r, a);
    case 8: return pattern_entry(kPattern8, k, r, a);
    default: throw std::invalid_argument("Schmidt-preserving basis needs d in {2, 4, 8}");
  }
}

// Columns are basis vectors in the Schmidt product basis |e_i>|f_j>. Group g
// places its coefficients at positions r * d + (r xor g).
CMatrix schmidt_pattern_basis(std::span<const double> a) {
  const int d = static_cast<int>(a.size());
  const int n = d * d;
  CMatrix basis = CMatrix::Zero(n, n);
  for (int g = 0; g < d; ++g)
    for (int k = 0; k < d; ++k)
      for (int r = 0; r < d; ++r)
        basis(r * d + (r ^ g), g * d + k) = pattern_value(d, k, r, a);
  return basis;
}

void check_schmidt_coefficients(std::span<const double> a) {
  const auto d = a.size();
  if (d != 2 && d != 4 && d != 8) {
    throw std::invalid_argument("Schmidt-preserving basis needs d in {2, 4, 8}, got " +
                                std::to_string(d));
  }
  double norm2 = 0.0;
  for (double x : a) {
    if (!std::isfinite(x) || x < 0.0) {
      throw std::invalid_argument("Schmidt coefficients must be real and nonnegative");
    }
    norm2 += x * x;
  }
  if (std::abs(norm2 - 1.0) > 1e-10) {
    throw std::invalid_argument("Schmidt coefficients are not normalized");
  }
}

}  // namespace

Measurement::Measurement(CMatrix basis, Dims dims) : basis_(std::move(basis)), dims_(dims) {
  const int n = dims_.total();
  if (dims_.a < 1 || dims_.b < 1 || basis_.rows() != n || basis_.cols() != n) {
    throw std::invalid_argument("measurement basis must be (dA*dB) x (dA*dB)");
  }
  const CMatrix gram = basis_.adjoint() * basis_;
  for (int i = 0; i < n; ++i) {
    if (std::abs(gram(i, i).real() - 1.0) > 1e-12) {
      throw std::invalid_argument("measurement vector " + std::to_string(i) +
                                  " is not unit norm");
    }
    for (int j = 0; j < i; ++j) {
      if (std::abs(gram(i, j)) > 1e-10) {
        throw std::invalid_argument("measurement vectors are not orthogonal");
      }
    }
  }
}

RVector Measurement::probabilities(const DensityMatrix& rho) const {
  if (rho.dims() != dims_) throw std::invalid_argument("measurement: dimension mismatch");
  const CMatrix rho_u = rho.matrix() * basis_;
  return basis_.conjugate().cwiseProduct(rho_u).colwise().sum().real().transpose();
}

RVector Measurement::probabilities(const CVector& v) const {
  if (v.size() != basis_.rows()) throw std::invalid_argument("measurement: dimension mismatch");
  return (basis_.adjoint() * v).cwiseAbs2();
}

double klein_entropy(const DensityMatrix& rho, const Measurement& P) {
  return shannon_entropy(P.probabilities(rho));
}

double klein_entropy(const PureState& psi, const Measurement& P) {
  if (psi.dims() != P.dims()) throw std::invalid_argument("measurement: dimension mismatch");
  return shannon_entropy(P.probabilities(psi.amplitudes()));
}

Measurement computational_basis(Dims dims) {
  return Measurement(CMatrix::Identity(dims.total(), dims.total()), dims);
}

Measurement bell_basis(int d) {
  if (d < 2) throw std::invalid_argument("Bell basis needs d >= 2");
  const int n = d * d;
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  CMatrix basis = CMatrix::Zero(n, n);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int k = 0; k < d; ++k) {
        const double angle = 2.0 * std::numbers::pi * b * k / d;
        basis(((k + a) % d) * d + k, a * d + b) = norm * std::polar(1.0, angle);
      }
  return Measurement(std::move(basis), Dims{d, d});
}

Measurement eigenbasis_measurement(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.matrix());
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  return Measurement(es.eigenvectors(), rho.dims());
}

Measurement schmidt_preserving_eigenbasis(std::span<const double> coefficients) {
  check_schmidt_coefficients(coefficients);
  const int d = static_cast<int>(coefficients.size());
  return Measurement(schmidt_pattern_basis(coefficients), Dims{d, d});
}

Measurement schmidt_preserving_eigenbasis(const PureState& psi) {
  const auto [da, db] = psi.dims();
  if (da != db) throw std::invalid_argument("Schmidt-preserving basis needs dA == dB");
  const int d = da;
  const SchmidtDecomposition sd = schmidt_decompose(psi);
  std::vector<double> a(sd.coefficients.data(), sd.coefficients.data() + d);
  check_schmidt_coefficients(a);

  const CMatrix local = schmidt_pattern_basis(a);
  // Rotate from |e_i>|f_j> to the computational basis: (L (x) R) * local.
  const int n = d * d;
  CMatrix change(n, n);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          change(k * d + l, i * d + j) = sd.left_basis(k, i) * sd.right_basis(l, j);
  CMatrix basis = change * local;
  // Element 0 is psi exactly rather than its SVD reconstruction.
  basis.col(0) = psi.amplitudes();
  return Measurement(std::move(basis), psi.dims());
}

CMatrix givens_unitary(const Eigen::Ref<const RVector>& angles, int n) {
  if (angles.size() != n * (n - 1)) {
    throw std::invalid_argument("expected " + std::to_string(n * (n - 1)) +
                                " angles, got " + std::to_string(angles.size()));
  }
  CMatrix u = CMatrix::Identity(n, n);
  int idx = 0;
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) {
      const double c = std::cos(angles(idx));
      const double s = std::sin(angles(idx));
      const Complex e = std::polar(1.0, angles(idx + 1));
      idx += 2;
      // u <- u * G(p, q): only columns p and q change.
      const CVector col_p = u.col(p);
      const CVector col_q = u.col(q);
      u.col(p) = c * col_p + e * s * col_q;
      u.col(q) = -std::conj(e) * s * col_p + c * col_q;
    }
  return u;
}

Measurement decode_measurement(const MeasurementParams& params) {
  const int n = params.dims.total();
  return Measurement(givens_unitary(params.angles, n), params.dims);
}

MeasurementParams encode_measurement(const Measurement& P) {
  CMatrix u = P.basis();
  const int n = static_cast<int>(u.rows());
  RVector angles(n * (n - 1));
  int idx = 0;
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) {
      const Complex xp = u(p, p);
      const Complex xq = u(q, p);
      const double theta = std::atan2(std::abs(xq), std::abs(xp));
      const double phi = std::arg(xq) - std::arg(xp);
      angles(idx) = theta;
      angles(idx + 1) = phi;
      idx += 2;
      // u <- G(p, q)^H u: only rows p and q change.
      const double c = std::cos(theta);
      const double s = std::sin(theta);
      const Complex e = std::polar(1.0, phi);
      const Eigen::RowVectorXcd row_p = u.row(p);
      const Eigen::RowVectorXcd row_q = u.row(q);
      u.row(p) = c * row_p + std::conj(e) * s * row_q;
      u.row(q) = -e * s * row_p + c * row_q;
    }
  return MeasurementParams{std::move(angles), P.dims()};
}

double gram_deviation(const CMatrix& basis) {
  const CMatrix gram = basis.adjoint() * basis;
  return (gram - CMatrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

bool equal_up_to_phases(const CMatrix& a, const CMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index k = 0; k < a.cols(); ++k) {
    const Complex overlap = b.col(k).dot(a.col(k));
    const double mag = std::abs(overlap);
    if (mag < 1e-300) return false;
    if ((a.col(k) - (overlap / mag) * b.col(k)).cwiseAbs().maxCoeff() > tol) return false;
  }
  return true;
}

}  // namespace eparam
