#include <doctest.h>

#include <numbers>

#include "eparam/families.hpp"
#include "eparam/product_opt.hpp"
#include "oracles.hpp"

using namespace eparam;

namespace {

OptimizationConfig quick() {
  OptimizationConfig cfg;
  cfg.inner_restarts = 16;
  return cfg;
}

CVector unit(int n, int i) {
  CVector v = CVector::Zero(n);
  v(i) = 1.0;
  return v;
}

}  // namespace

TEST_SUITE("product-opt") {

TEST_CASE("product state") {
  const ProductState s(unit(2, 1), unit(3, 2));
  CHECK(s.dims() == Dims{2, 3});
  CHECK((s.joint() - unit(6, 5)).norm() == 0.0);
  CHECK_THROWS_AS(ProductState(2.0 * unit(2, 0), unit(2, 0)), std::invalid_argument);
  CHECK_THROWS_AS(ProductState(CVector(), unit(2, 0)), std::invalid_argument);
}

TEST_CASE("spherical chart round trip") {
  auto rng = make_rng(11, 0);
  for (int m : {2, 3, 4}) {
    CVector x = haar_random_vector(m, rng);
    x *= std::polar(1.0, -std::arg(x(0)));
    std::vector<double> angles(2 * (m - 1));
    sphere_angles(x, angles.data());
    CHECK((sphere_point(angles.data(), m) - x).norm() < 1e-12);
  }
}

TEST_CASE("angle evaluation matches Klein entropy of the state") {
  auto rng = make_rng(12, 0);
  const Measurement P(haar_random_unitary(6, rng), {2, 3});
  const ProductEntropy f(P);
  CHECK(f.parameter_count() == 6);
  Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(6, 0.1, 2.0);
  const ProductState s = f.state_at(x);
  CHECK(f(x) == doctest::Approx(klein_entropy(s.pure(), P)));
  CHECK(f(s) == doctest::Approx(f(x)));
  CHECK(f(f.angles_of(s)) == doctest::Approx(f(x)));
}

TEST_CASE("max product overlap agrees with alternating maximization") {
  auto rng = make_rng(13, 0);
  for (Dims dims : {Dims{2, 2}, Dims{2, 3}, Dims{3, 3}}) {
    const PureState psi = haar_random_pure(dims, rng);
    CHECK(max_product_overlap(psi) ==
          doctest::Approx(oracle::sampled_product_overlap(psi.amplitudes(), dims.a, dims.b, 20, 7)).epsilon(1e-9));
  }
  CHECK(max_product_overlap(max_entangled(3)) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("capped minimum entropy") {
  CHECK(min_entropy_capped(1.0, 4) == 0.0);
  CHECK(min_entropy_capped(0.5, 4) == doctest::Approx(1.0));
  CHECK(min_entropy_capped(0.25, 4) == doctest::Approx(2.0));
  CHECK(min_entropy_capped(0.7, 2) == doctest::Approx(binary_entropy(0.7)));
  CHECK(min_entropy_capped(0.4, 3) == doctest::Approx(oracle::shannon({0.4, 0.4, 0.2})));
  CHECK_THROWS_AS(min_entropy_capped(0.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(min_entropy_capped(1.2, 4), std::invalid_argument);
  CHECK_THROWS_AS(min_entropy_capped(0.3, 3), std::invalid_argument);
  for (double c : {0.3, 0.4, 0.5, 0.7}) {
    for (int n = int(std::ceil(1.0 / c)); n <= 4; ++n) {
      CHECK(min_entropy_capped(c, n) == doctest::Approx(oracle::capped_entropy_grid(c, n, 100)).epsilon(5e-3));
    }
  }
}

TEST_CASE("inner minimum on standard bases") {
  const auto cfg = quick();
  CHECK(min_klein_entropy_over_products(bell_basis(2), cfg).value == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(min_klein_entropy_over_products(bell_basis(3), cfg).value ==
        doctest::Approx(std::log2(3.0)).epsilon(1e-7));
  CHECK(min_klein_entropy_over_products(computational_basis({2, 3}), cfg).value ==
        doctest::Approx(0.0).epsilon(1e-7));
}

TEST_CASE("inner minimum is below random sampling and close to the grid") {
  const auto cfg = quick();
  auto rng = make_rng(14, 0);
  for (int k = 0; k < 5; ++k) {
    const Measurement P(haar_random_unitary(4, rng), {2, 2});
    const InnerMinResult r = min_klein_entropy_over_products(P, cfg);
    CHECK(r.value <= oracle::sampled_product_min(P.basis(), 2, 2, 20000, 100 + k) + 1e-9);
    const GridMinResult g = brute_force_min_products(P, std::numbers::pi / 40);
    CHECK(r.value <= g.value + 1e-9);
    CHECK(g.value - r.value < 2e-2);
    CHECK(klein_entropy(r.minimizer.pure(), P) == doctest::Approx(r.value));
  }
}

TEST_CASE("inner minimum is seed-deterministic and uses seeds") {
  auto rng = make_rng(15, 0);
  const Measurement P(haar_random_unitary(9, rng), {3, 3});
  auto cfg = quick();
  const auto a = min_klein_entropy_over_products(P, cfg);
  const auto b = min_klein_entropy_over_products(P, cfg);
  CHECK(a.value == b.value);
  cfg.inner_restarts = 1;
  const ProductState seeds[] = {a.minimizer};
  CHECK(min_klein_entropy_over_products(P, cfg, seeds).value <= a.value + 1e-12);
}

TEST_CASE("refinement never worsens its start") {
  auto rng = make_rng(16, 0);
  const Measurement P(haar_random_unitary(4, rng), {2, 2});
  const ProductEntropy f(P);
  const ProductState start(haar_random_vector(2, rng), haar_random_vector(2, rng));
  CHECK(refine_product(f, start, quick(), 0.1).value <= f(start));
}

TEST_CASE("grid oracle") {
  CHECK(brute_force_min_products(bell_basis(2), std::numbers::pi / 60).value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(brute_force_min_products(computational_basis({2, 2}), std::numbers::pi / 60).value ==
        doctest::Approx(0.0));
  CHECK_THROWS_AS(brute_force_min_products(computational_basis({4, 2}), 0.5), BudgetError);
  CHECK_THROWS_AS(brute_force_min_products(computational_basis({3, 3}), std::numbers::pi / 60, 1000), BudgetError);
}

TEST_CASE("product in a two-dimensional subspace") {
  auto rng = make_rng(17, 0);
  for (int k = 0; k < 200; ++k) {
    const CMatrix u = haar_random_unitary(4, rng);
    const ProductState s = product_in_2d_subspace(PureState(u.col(0), {2, 2}), PureState(u.col(1), {2, 2}));
    const CVector x = s.joint();
    CHECK(schmidt_decompose(PureState::normalized(x, {2, 2})).coefficients(1) < 1e-8);
    CHECK((x - u.leftCols(2) * (u.leftCols(2).adjoint() * x)).norm() < 1e-9);
  }
}

TEST_CASE("product in subspace: degenerate inputs") {
  const CVector e01 = unit(4, 1);
  CVector bell = CVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  // Second vector already a product state.
  CHECK((product_in_2d_subspace(PureState(bell, {2, 2}), PureState(e01, {2, 2})).joint() - e01).norm() < 1e-12);
  // First vector a product state, second entangled.
  const CVector x = product_in_2d_subspace(PureState(e01, {2, 2}), PureState(bell, {2, 2})).joint();
  CHECK(std::abs(std::abs(x.dot(e01)) - 1.0) < 1e-9);
  CHECK_THROWS_AS(product_in_2d_subspace(PureState(unit(6, 0), {2, 3}), PureState(unit(6, 1), {2, 3})),
                  std::invalid_argument);
}

}  // TEST_SUITE
