#pragma once

#include <span>

#include "eparam/quantum.hpp"

namespace eparam {

/// Complete rank-1 von Neumann measurement: the columns of a unitary.
class Measurement {
 public:
  /// Trivial one-outcome measurement on C^1 (x) C^1.
  Measurement() : Measurement(CMatrix::Identity(1, 1), Dims{1, 1}) {}
  /// Throws std::invalid_argument unless `basis` is (dA*dB)-square with
  /// orthonormal columns (inner products within 1e-10, norms within 1e-12).
  Measurement(CMatrix basis, Dims dims);

  const CMatrix& basis() const { return basis_; }
  Dims dims() const { return dims_; }
  int size() const { return static_cast<int>(basis_.cols()); }
  CVector vector(int i) const { return basis_.col(i); }

  /// Outcome distribution Tr(rho P_i).
  RVector probabilities(const DensityMatrix& rho) const;
  /// Outcome distribution |<phi_i|v>|^2 for a unit vector v.
  RVector probabilities(const CVector& v) const;

 private:
  CMatrix basis_;
  Dims dims_;
};

/// Shannon entropy of the outcome distribution of P on rho.
double klein_entropy(const DensityMatrix& rho, const Measurement& P);
double klein_entropy(const PureState& psi, const Measurement& P);

Measurement computational_basis(Dims dims);

/// Vectors (X^a Z^b (x) I)|psi_+^d>, ordered a * d + b; element 0 is psi_+^d.
Measurement bell_basis(int d);

/// Eigenvectors of rho in the order returned by the Hermitian eigensolver.
Measurement eigenbasis_measurement(const DensityMatrix& rho);

/// Orthonormal basis of C^d (x) C^d containing psi whose every element has
/// the same Schmidt coefficients as psi, up to sign. Supported for d = 2, 4, 8.
Measurement schmidt_preserving_eigenbasis(const PureState& psi);

/// Same construction in the computational product basis for real Schmidt
/// coefficients a_1..a_d (element 0 is sum_i a_i |ii>).
Measurement schmidt_preserving_eigenbasis(std::span<const double> coefficients);

/// Angles of a product of two-level rotations with phases. For an n-outcome
/// measurement there are n(n-1)/2 (theta, phi) pairs, one per index pair
/// p < q in lexicographic order, stored as [theta_0, phi_0, theta_1, ...].
struct MeasurementParams {
  RVector angles;
  Dims dims;

  static int count(Dims dims) { return dims.total() * (dims.total() - 1); }
};

/// U = G_0 G_1 ... G_last; zero angles give the identity.
CMatrix givens_unitary(const Eigen::Ref<const RVector>& angles, int n);

Measurement decode_measurement(const MeasurementParams& params);

/// Inverse of decode up to per-vector phases: returns params whose decoded
/// basis equals P's vectors times unit phases.
MeasurementParams encode_measurement(const Measurement& P);

/// Largest absolute deviation from identity of the Gram matrix.
double gram_deviation(const CMatrix& basis);

/// True if every column of `a` equals the matching column of `b` up to a
/// phase, within tol.
bool equal_up_to_phases(const CMatrix& a, const CMatrix& b, double tol);

}  // namespace eparam
