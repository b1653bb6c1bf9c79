#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "eparam/quantum.hpp"

namespace eparam {

enum class FamilyKind {
  isotropic,
  bell_diagonal,
  max_entangled,
  random_pure,
  random_separable,
  random_product,
};

struct FamilySpec {
  FamilyKind kind = FamilyKind::max_entangled;
  int d = 2;
  /// Isotropic mixing weight.
  double p = 1.0;
  /// Bell-diagonal weights, length d^2.
  std::vector<double> weights;
  /// Number of product terms for random_separable.
  int terms = 4;
  std::uint64_t seed = 1;
};

/// Accepts the CLI spellings ("max-entangled", "bell-diagonal", ...) and
/// their underscore forms. Throws std::invalid_argument otherwise.
FamilyKind parse_family_kind(std::string_view name);
std::string_view family_name(FamilyKind kind);

/// p P_+ + (1 - p) I / d^2.
DensityMatrix isotropic(int d, double p);

/// sum_i w_i |Bell_i><Bell_i| in the ordering of bell_basis(d).
DensityMatrix bell_diagonal(int d, std::span<const double> weights);

/// (1/sqrt d) sum_i |ii>.
PureState max_entangled(int d);

/// Dirichlet(1, ..., 1) mixture of `terms` Haar-random product pure states.
DensityMatrix random_separable(int d, int terms, std::uint64_t seed);

PureState random_product(int d, std::uint64_t seed);

DensityMatrix make_state(const FamilySpec& spec);

}  // namespace eparam
