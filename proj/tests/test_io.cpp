#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "eparam/io.hpp"

using namespace eparam;

TEST_SUITE("io") {

TEST_CASE("state documents") {
  const Json mixed = Json::parse(R"({"dims": [2, 1], "matrix": [[[0.5, 0], [0, 0.5]], [[0, -0.5], [0.5, 0]]]})");
  const auto rho = state_from_json(mixed);
  CHECK(rho.dims() == Dims{2, 1});
  CHECK(rho.matrix()(0, 1) == Complex(0.0, 0.5));

  const Json pure = Json::parse(R"({"dims": [2, 2], "amplitudes": [[1, 0], [0, 0], [0, 0], [1, 0]]})");
  CHECK(von_neumann_entropy(state_from_json(pure)) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(state_from_json(pure).matrix()(0, 3).real() == doctest::Approx(0.5));

  const Json fam = Json::parse(R"({"family": {"kind": "isotropic", "d": 2, "p": 0.25}})");
  CHECK((state_from_json(fam).matrix() - isotropic(2, 0.25).matrix()).norm() == 0.0);
}

TEST_CASE("malformed state documents") {
  for (const char* text : {
           R"({"matrix": [[[1, 0]]]})",
           R"({"dims": [2, 2], "amplitudes": [[1, 0]]})",
           R"({"dims": [2], "amplitudes": [[1, 0], [0, 0]]})",
           R"({"dims": [1, 2], "matrix": [[[1, 0], [0.3, 0]], [[0, 0], [0, 0]]]})",
           R"({"dims": [1, 2], "matrix": [[[1, 0], [0, 0]], [[0, 0], "x"]]})",
           R"({"dims": [2, 2]})",
           R"({"family": {"kind": "werner", "d": 2}})",
           R"({"family": {"kind": "isotropic", "d": 2, "p": 3}})",
           R"([1, 2])"}) {
    CAPTURE(text);
    CHECK_THROWS_AS(state_from_json(Json::parse(text)), InputError);
  }
  CHECK_THROWS_AS(load_state("/nonexistent/state.json"), InputError);
}

TEST_CASE("state file round trip") {
  const auto rho = isotropic(3, 0.4);
  const std::string path = "io_roundtrip_state.json";
  std::ofstream(path) << to_json(rho).dump();
  CHECK((load_state(path).matrix() - rho.matrix()).norm() < 1e-15);
  std::ofstream(path) << "{ not json";
  CHECK_THROWS_AS(load_state(path), InputError);
  std::remove(path.c_str());

  const PureState psi = max_entangled(2);
  CHECK((state_from_json(to_json(psi)).matrix() - psi.projector()).norm() < 1e-15);
}

TEST_CASE("measurement and parameter round trips") {
  auto rng = make_rng(41, 0);
  const Measurement P(haar_random_unitary(6, rng), {2, 3});
  const Measurement Q = measurement_from_json(to_json(P));
  CHECK(Q.dims() == P.dims());
  CHECK((Q.basis() - P.basis()).norm() == 0.0);
  CHECK_THROWS_AS(measurement_from_json(Json::parse(R"({"dims": [1, 2], "vectors": [[[1, 0], [0, 0]], [[1, 0], [0, 0]]]})")),
                  InputError);

  const MeasurementParams params = encode_measurement(P);
  const MeasurementParams back = params_from_json(to_json(params));
  CHECK(back.dims == params.dims);
  CHECK((back.angles - params.angles).norm() == 0.0);
  CHECK_THROWS_AS(params_from_json(Json::parse(R"({"dims": [2, 2], "angles": [1, 2, 3]})")), InputError);
}

TEST_CASE("report serialization") {
  EParamReport r;
  r.estimate = 0.25;
  r.restarts_used = 3;
  r.restart_values = {0.1, 0.25, 0.2};
  r.bounds.info_content = 1.5;
  r.bounds.eigenbasis_lower = 0.1;
  r.bounds.coherent_info = 0.3;
  r.best_measurement = computational_basis({2, 2});
  r.inner_result.minimizer = ProductState(CVector::Unit(2, 0), CVector::Unit(2, 1));
  const Json j = to_json(r);
  CHECK(j["estimate"] == 0.25);
  CHECK(j["bounds"]["upper"]["info_content"] == 1.5);
  CHECK(j["bounds"]["upper"]["two_qubit_bound"].is_null());
  CHECK(j["bounds"]["consistent"] == true);
  CHECK(j["analytic_value"].is_null());
  CHECK(j["conjecture"]["non_normative"] == true);
  CHECK(j["conjecture"]["holds"] == false);
  CHECK(j["best_measurement"]["vectors"].size() == 4);
  CHECK(j["inner_result"]["minimizer"]["right"][1][0] == 1.0);

  const std::string text = format_report(r);
  CHECK(text.find("estimate") != std::string::npos);
  CHECK(text.find("0.250000") != std::string::npos);
  CHECK(text.find("conjecture") != std::string::npos);
  CHECK(to_json(OptimizationConfig{})["seed"] == OptimizationConfig{}.seed);
}

}  // TEST_SUITE
