#include "eparam/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace eparam {

namespace {

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw InputError("expected a complex number [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Json vector_json(const CVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
  return out;
}

CVector vector_from(const Json& j, Eigen::Index n, const char* what) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != n) {
    throw InputError(std::string(what) + ": expected " + std::to_string(n) + " entries");
  }
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = complex_from(j[i]);
  return v;
}

Json dims_json(Dims d) { return Json::array({d.a, d.b}); }

Dims dims_from(const Json& j) {
  if (!j.contains("dims")) throw InputError("missing \"dims\"");
  const Json& d = j["dims"];
  if (!d.is_array() || d.size() != 2 || !d[0].is_number_integer() || !d[1].is_number_integer()) {
    throw InputError("\"dims\" must be [dA, dB]");
  }
  const Dims dims{d[0].get<int>(), d[1].get<int>()};
  if (dims.a < 1 || dims.b < 1) throw InputError("\"dims\" entries must be positive");
  return dims;
}

Json optional_json(const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); }

template <typename F>
auto rethrow_as_input(F&& f) {
  try {
    return f();
  } catch (const InputError&) {
    throw;
  } catch (const Json::exception& e) {
    throw InputError(e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

std::string fixed(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

struct Table {
  std::vector<std::pair<std::string, std::string>> rows;

  void add(std::string key, std::string value) { rows.emplace_back(std::move(key), std::move(value)); }
  void add(std::string key, const std::optional<double>& x) {
    if (x) add(std::move(key), fixed(*x));
  }

  std::string str() const {
    std::size_t w = 0;
    for (const auto& [k, v] : rows) w = std::max(w, k.size());
    std::ostringstream os;
    for (const auto& [k, v] : rows) os << "  " << k << std::string(w - k.size() + 2, ' ') << v << '\n';
    return os.str();
  }
};

}  // namespace

FamilySpec family_from_json(const Json& j) {
  return rethrow_as_input([&] {
    if (!j.is_object() || !j.contains("kind") || !j.contains("d")) {
      throw InputError("family stanza needs \"kind\" and \"d\"");
    }
    FamilySpec spec;
    spec.kind = parse_family_kind(j["kind"].get<std::string>());
    spec.d = j["d"].get<int>();
    spec.p = j.value("p", spec.p);
    if (j.contains("weights")) spec.weights = j["weights"].get<std::vector<double>>();
    spec.terms = j.value("terms", spec.terms);
    spec.seed = j.value("seed", spec.seed);
    return spec;
  });
}

Json to_json(const FamilySpec& spec) {
  Json j{{"kind", std::string(family_name(spec.kind))}, {"d", spec.d}};
  switch (spec.kind) {
    case FamilyKind::isotropic: j["p"] = spec.p; break;
    case FamilyKind::bell_diagonal: j["weights"] = spec.weights; break;
    case FamilyKind::random_separable:
      j["terms"] = spec.terms;
      j["seed"] = spec.seed;
      break;
    case FamilyKind::random_pure:
    case FamilyKind::random_product: j["seed"] = spec.seed; break;
    case FamilyKind::max_entangled: break;
  }
  return j;
}

DensityMatrix state_from_json(const Json& j) {
  return rethrow_as_input([&]() -> DensityMatrix {
    if (!j.is_object()) throw InputError("state document must be an object");
    if (j.contains("family")) return make_state(family_from_json(j["family"]));
    const Dims dims = dims_from(j);
    const Eigen::Index n = dims.total();
    if (j.contains("amplitudes")) {
      return DensityMatrix::from_pure(
          PureState::normalized(vector_from(j["amplitudes"], n, "amplitudes"), dims));
    }
    if (!j.contains("matrix")) throw InputError("state needs \"matrix\", \"amplitudes\" or \"family\"");
    const Json& m = j["matrix"];
    if (!m.is_array() || static_cast<Eigen::Index>(m.size()) != n) {
      throw InputError("matrix: expected " + std::to_string(n) + " rows");
    }
    CMatrix rho(n, n);
    for (Eigen::Index r = 0; r < n; ++r) rho.row(r) = vector_from(m[r], n, "matrix row").transpose();
    return DensityMatrix(rho, dims);
  });
}

DensityMatrix load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
  return state_from_json(j);
}

Json to_json(const DensityMatrix& rho) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < rho.matrix().rows(); ++r) rows.push_back(vector_json(rho.matrix().row(r).transpose()));
  return {{"dims", dims_json(rho.dims())}, {"matrix", rows}};
}

Json to_json(const PureState& psi) {
  return {{"dims", dims_json(psi.dims())}, {"amplitudes", vector_json(psi.amplitudes())}};
}

Json to_json(const Measurement& P) {
  Json vecs = Json::array();
  for (int i = 0; i < P.size(); ++i) vecs.push_back(vector_json(P.vector(i)));
  return {{"dims", dims_json(P.dims())}, {"vectors", vecs}};
}

Measurement measurement_from_json(const Json& j) {
  return rethrow_as_input([&] {
    const Dims dims = dims_from(j);
    const Eigen::Index n = dims.total();
    if (!j.contains("vectors") || !j["vectors"].is_array() ||
        static_cast<Eigen::Index>(j["vectors"].size()) != n) {
      throw InputError("measurement needs " + std::to_string(n) + " \"vectors\"");
    }
    CMatrix basis(n, n);
    for (Eigen::Index i = 0; i < n; ++i) basis.col(i) = vector_from(j["vectors"][i], n, "vector");
    return Measurement(basis, dims);
  });
}

Json to_json(const MeasurementParams& params) {
  return {{"dims", dims_json(params.dims)},
          {"angles", std::vector<double>(params.angles.data(), params.angles.data() + params.angles.size())}};
}

MeasurementParams params_from_json(const Json& j) {
  return rethrow_as_input([&] {
    MeasurementParams params;
    params.dims = dims_from(j);
    const auto angles = j.at("angles").get<std::vector<double>>();
    if (static_cast<int>(angles.size()) != MeasurementParams::count(params.dims)) {
      throw InputError("expected " + std::to_string(MeasurementParams::count(params.dims)) + " angles");
    }
    params.angles = Eigen::Map<const RVector>(angles.data(), static_cast<Eigen::Index>(angles.size()));
    return params;
  });
}

Json to_json(const ProductState& s) {
  return {{"left", vector_json(s.left())}, {"right", vector_json(s.right())}};
}

Json to_json(const InnerMinResult& r) {
  return {{"value", r.value},
          {"minimizer", to_json(r.minimizer)},
          {"restarts_used", r.restarts_used},
          {"converged", r.converged}};
}

Json to_json(const OptimizationConfig& cfg) {
  return {{"restarts", cfg.restarts},
          {"inner_restarts", cfg.inner_restarts},
          {"max_iters", cfg.max_iters},
          {"f_tol", cfg.f_tol},
          {"grid_resolution", cfg.grid_resolution},
          {"grid_budget", cfg.grid_budget},
          {"outer_iters", cfg.outer_iters},
          {"validation_factor", cfg.validation_factor},
          {"max_joint_dim", cfg.max_joint_dim},
          {"seed", cfg.seed}};
}

Json to_json(const BoundsReport& b) {
  return {{"upper",
           {{"info_content", optional_json(b.info_content)},
            {"dim_bound", optional_json(b.dim_bound)},
            {"two_qubit_bound", optional_json(b.two_qubit_bound)},
            {"qutrit_numeric_bound", optional_json(b.qutrit_numeric_bound)}}},
          {"lower",
           {{"eigenbasis_lower", optional_json(b.eigenbasis_lower)},
            {"bell_diag_lower", optional_json(b.bell_diag_lower)},
            {"pure_state_lower", optional_json(b.pure_state_lower)}}},
          {"coherent_info", optional_json(b.coherent_info)},
          {"consistent", b.consistent()}};
}

Json to_json(const EParamReport& r) {
  Json j{{"estimate", r.estimate},
         {"state_entropy", r.state_entropy},
         {"best_measurement", to_json(r.best_measurement)},
         {"inner_result", to_json(r.inner_result)},
         {"bounds", to_json(r.bounds)},
         {"analytic_value", optional_json(r.analytic_value)},
         {"restarts_used", r.restarts_used},
         {"restart_values", r.restart_values}};
  Json conj{{"non_normative", true},
            {"statement", "estimate >= coherent information"}};
  if (r.bounds.coherent_info) {
    conj["coherent_info"] = *r.bounds.coherent_info;
    conj["estimate_minus_coherent_info"] = r.estimate - *r.bounds.coherent_info;
    conj["holds"] = r.estimate >= *r.bounds.coherent_info - 1e-9;
  }
  j["conjecture"] = conj;
  return j;
}

std::string format_bounds(const BoundsReport& b) {
  Table t;
  t.add("upper: info content", b.info_content);
  t.add("upper: dimension", b.dim_bound);
  t.add("upper: two-qubit", b.two_qubit_bound);
  if (b.qutrit_numeric_bound) t.add("upper: qutrit (numeric, not enforced)", fixed(*b.qutrit_numeric_bound));
  t.add("lower: eigenbasis", b.eigenbasis_lower);
  t.add("lower: Bell-diagonal", b.bell_diag_lower);
  t.add("lower: pure state", b.pure_state_lower);
  t.add("consistent", b.consistent() ? "yes" : "NO");
  return t.str();
}

std::string format_report(const EParamReport& r) {
  Table t;
  t.add("estimate", fixed(r.estimate));
  t.add("analytic", r.analytic_value);
  t.add("inner minimum", fixed(r.inner_result.value));
  t.add("state Klein entropy", fixed(r.state_entropy));
  t.add("outer restarts", std::to_string(r.restarts_used));
  std::ostringstream os;
  os << "result\n" << t.str() << "bounds\n" << format_bounds(r.bounds);
  if (r.bounds.coherent_info) {
    Table c;
    c.add("coherent information", fixed(*r.bounds.coherent_info));
    c.add("estimate - coherent information", fixed(r.estimate - *r.bounds.coherent_info));
    os << "conjecture (informational)\n" << c.str();
  }
  return os.str();
}

}  // namespace eparam
