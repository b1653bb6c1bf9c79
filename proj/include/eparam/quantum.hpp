#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace eparam {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

/// Local dimensions of a bipartite system. Joint index is `i * b + j`
/// for |i>_A |j>_B (A-major flattening).
struct Dims {
  int a = 0;
  int b = 0;

  int total() const { return a * b; }
  friend bool operator==(const Dims&, const Dims&) = default;
};

enum class Subsystem { A, B };

/// Unit vector on C^dA (x) C^dB.
class PureState {
 public:
  /// Throws std::invalid_argument unless `amplitudes` has length dA*dB and
  /// unit norm within 1e-12.
  PureState(CVector amplitudes, Dims dims);

  /// Normalizes first; throws on a zero vector.
  static PureState normalized(CVector amplitudes, Dims dims);

  const CVector& amplitudes() const { return amplitudes_; }
  Dims dims() const { return dims_; }

  /// dA x dB matrix with entry (i, j) = <ij|psi>.
  CMatrix amplitude_matrix() const;
  CMatrix projector() const;

 private:
  CVector amplitudes_;
  Dims dims_;
};

/// Positive unit-trace operator on C^dA (x) C^dB.
class DensityMatrix {
 public:
  /// Validates hermiticity (1e-12), trace (1e-12) and spectrum (>= -1e-10).
  DensityMatrix(CMatrix matrix, Dims dims);

  static DensityMatrix from_pure(const PureState& psi);

  const CMatrix& matrix() const { return matrix_; }
  Dims dims() const { return dims_; }

  /// Ascending eigenvalues, clamped at zero and renormalized.
  RVector eigenvalues() const;

 private:
  CMatrix matrix_;
  Dims dims_;
};

struct SchmidtDecomposition {
  /// Nonincreasing, nonnegative; length min(dA, dB).
  RVector coefficients;
  /// Columns are |e_i> (dA x dA) and |f_i> (dB x dB); psi = sum_i a_i |e_i>|f_i>.
  CMatrix left_basis;
  CMatrix right_basis;

  /// Square of the largest coefficient.
  double largest_weight() const { return coefficients(0) * coefficients(0); }
  CVector reconstruct() const;
};

/// Probabilities below this are treated as exactly zero by the entropies.
inline constexpr double kEntropyFloor = 1e-15;

/// Shannon entropy in bits. Tiny negatives (>= -1e-12) are clamped and the
/// vector renormalized; throws std::invalid_argument if the sum is off by
/// more than 1e-6 or an entry is more negative than -1e-12.
double shannon_entropy(const Eigen::Ref<const RVector>& p);

/// Entropy of a distribution already known to be valid. No checks, no
/// renormalization. Used on hot paths.
double entropy_bits(const Eigen::Ref<const RVector>& p);

/// Binary entropy H(x, 1 - x) in bits.
double binary_entropy(double x);

double von_neumann_entropy(const DensityMatrix& rho);

/// Reduced state on `keep`; dims of the result are (d_keep, 1).
DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep);

SchmidtDecomposition schmidt_decompose(const PureState& psi);

/// S(Tr_A rho) - S(rho).
double coherent_information(const DensityMatrix& rho);

/// Sum of singular values of rho1 - rho2.
double trace_norm_distance(const DensityMatrix& rho1, const DensityMatrix& rho2);

CVector haar_random_vector(int n, std::mt19937_64& rng);
PureState haar_random_pure(Dims dims, std::mt19937_64& rng);
PureState haar_random_pure(Dims dims, std::uint64_t seed);

/// Haar-distributed unitary (QR of a complex Ginibre matrix with phase fix).
CMatrix haar_random_unitary(int n, std::mt19937_64& rng);

/// Deterministic per-stream engine derived from (seed, stream).
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream);

/// Convex combination (1 - eps) rho + eps sigma.
DensityMatrix mix(const DensityMatrix& rho, const DensityMatrix& sigma, double eps);

}  // namespace eparam
