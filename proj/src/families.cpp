#include "eparam/families.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "eparam/measurement.hpp"

namespace eparam {

namespace {

void check_d(int d) {
  if (d < 2) throw std::invalid_argument("family states need d >= 2");
}

CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

}  // namespace

FamilyKind parse_family_kind(std::string_view name) {
  std::string s(name);
  for (char& c : s)
    if (c == '_') c = '-';
  if (s == "isotropic") return FamilyKind::isotropic;
  if (s == "bell-diagonal") return FamilyKind::bell_diagonal;
  if (s == "max-entangled") return FamilyKind::max_entangled;
  if (s == "random-pure") return FamilyKind::random_pure;
  if (s == "random-separable") return FamilyKind::random_separable;
  if (s == "random-product") return FamilyKind::random_product;
  throw std::invalid_argument("unknown family '" + std::string(name) + "'");
}

std::string_view family_name(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::isotropic: return "isotropic";
    case FamilyKind::bell_diagonal: return "bell-diagonal";
    case FamilyKind::max_entangled: return "max-entangled";
    case FamilyKind::random_pure: return "random-pure";
    case FamilyKind::random_separable: return "random-separable";
    case FamilyKind::random_product: return "random-product";
  }
  return "unknown";
}

DensityMatrix isotropic(int d, double p) {
  check_d(d);
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("isotropic weight p must lie in [0, 1]");
  const int n = d * d;
  const CVector plus = max_entangled(d).amplitudes();
  CMatrix m = p * plus * plus.adjoint() + ((1.0 - p) / n) * CMatrix::Identity(n, n);
  return DensityMatrix(std::move(m), Dims{d, d});
}

DensityMatrix bell_diagonal(int d, std::span<const double> weights) {
  check_d(d);
  const int n = d * d;
  if (static_cast<int>(weights.size()) != n) {
    throw std::invalid_argument("Bell-diagonal weights need length d^2 = " + std::to_string(n));
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= -1e-12)) throw std::invalid_argument("Bell-diagonal weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("Bell-diagonal weights must sum to 1");
  const CMatrix b = bell_basis(d).basis();
  RVector w(n);
  for (int i = 0; i < n; ++i) w(i) = std::max(0.0, weights[i]);
  w /= w.sum();
  CMatrix m = b * w.cast<Complex>().asDiagonal() * b.adjoint();
  m = (0.5 * (m + m.adjoint())).eval();
  return DensityMatrix(std::move(m), Dims{d, d});
}

PureState max_entangled(int d) {
  check_d(d);
  CVector v = CVector::Zero(d * d);
  for (int i = 0; i < d; ++i) v(i * d + i) = 1.0;
  return PureState::normalized(std::move(v), Dims{d, d});
}

DensityMatrix random_separable(int d, int terms, std::uint64_t seed) {
  check_d(d);
  if (terms < 1) throw std::invalid_argument("random separable state needs at least one term");
  auto rng = make_rng(seed, 0);
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> q(terms);
  double total = 0.0;
  for (double& x : q) total += (x = expo(rng));
  const int n = d * d;
  CMatrix m = CMatrix::Zero(n, n);
  for (int k = 0; k < terms; ++k) {
    const CVector v = kron(haar_random_vector(d, rng), haar_random_vector(d, rng));
    m += (q[k] / total) * v * v.adjoint();
  }
  m = (0.5 * (m + m.adjoint())).eval();
  m /= m.trace().real();
  return DensityMatrix(std::move(m), Dims{d, d});
}

PureState random_product(int d, std::uint64_t seed) {
  check_d(d);
  auto rng = make_rng(seed, 0);
  const CVector a = haar_random_vector(d, rng);
  const CVector b = haar_random_vector(d, rng);
  return PureState::normalized(kron(a, b), Dims{d, d});
}

DensityMatrix make_state(const FamilySpec& spec) {
  switch (spec.kind) {
    case FamilyKind::isotropic: return isotropic(spec.d, spec.p);
    case FamilyKind::bell_diagonal: return bell_diagonal(spec.d, spec.weights);
    case FamilyKind::max_entangled: return DensityMatrix::from_pure(max_entangled(spec.d));
    case FamilyKind::random_pure:
      return DensityMatrix::from_pure(haar_random_pure(Dims{spec.d, spec.d}, spec.seed));
    case FamilyKind::random_separable: return random_separable(spec.d, spec.terms, spec.seed);
    case FamilyKind::random_product:
      return DensityMatrix::from_pure(random_product(spec.d, spec.seed));
  }
  throw std::invalid_argument("unknown family");
}

}  // namespace eparam
