#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "eparam/config.hpp"
#include "eparam/engine.hpp"
#include "eparam/families.hpp"

namespace eparam {

using Json = nlohmann::json;

/// Malformed or inconsistent input document.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Complex numbers are written as [re, im]. Vectors and matrices use the
// A-major joint index i * dB + j; matrices are lists of rows.

/// Accepts one of
///   {"dims": [dA, dB], "matrix": [[[re, im], ...], ...]}
///   {"dims": [dA, dB], "amplitudes": [[re, im], ...]}      (normalized on read)
///   {"family": {"kind": "isotropic", "d": 2, "p": 0.5, ...}}
/// Throws InputError on anything else or on an invalid state.
DensityMatrix state_from_json(const Json& j);
DensityMatrix load_state(const std::string& path);

/// {"kind", "d", "p", "weights", "terms", "seed"}; only "kind" and "d" are required.
FamilySpec family_from_json(const Json& j);
Json to_json(const FamilySpec& spec);

Json to_json(const DensityMatrix& rho);
Json to_json(const PureState& psi);

/// {"dims": [dA, dB], "vectors": [[[re, im], ...], ...]}; one entry per outcome.
Json to_json(const Measurement& P);
Measurement measurement_from_json(const Json& j);

/// {"dims": [dA, dB], "angles": [...]}.
Json to_json(const MeasurementParams& params);
MeasurementParams params_from_json(const Json& j);

Json to_json(const ProductState& s);
Json to_json(const InnerMinResult& r);
Json to_json(const OptimizationConfig& cfg);
Json to_json(const BoundsReport& b);

/// Report fields plus a separate "conjecture" object comparing the estimate
/// with the coherent information. That object is informational only.
Json to_json(const EParamReport& r);

/// Aligned two-column tables for terminal output.
std::string format_bounds(const BoundsReport& b);
std::string format_report(const EParamReport& r);

}  // namespace eparam
