#pragma once

#include <json.hpp>

#include <string>

#include "core/cumulants.hpp"
#include "core/matrix_lab.hpp"
#include "core/step_function.hpp"

namespace fsc {

using Json = nlohmann::json;

// {"kind": "finitely_supported"|"truncated", "values": ["p/q", ...]}
Json cumulants_to_json(const CumulantSequence& r);
CumulantSequence cumulants_from_json(const Json& j);

// {"values": ["p/q", ...]}
Json moments_to_json(const MomentSequence& m);
MomentSequence moments_from_json(const Json& j);

// {"breakpoints": ["0", "1", "2"], "values": ["1", "3"]}
Json stepfn_to_json(const StepFunction& f);
StepFunction stepfn_from_json(const Json& j);

// Accepts either the raw cumulant schema or a catalog spec such as
// {"name": "free_poisson", "rate": "1", "order": 16}.
CumulantSequence base_from_json(const Json& j);

MatrixModelConfig config_from_json(const Json& j);
Json config_to_json(const MatrixModelConfig& cfg);

Json report_to_json(const CheckReport& report, const Json& config_echo);

// Reproducible constant tensors for check configs:
// {"kind": "unit"|"random_hermitian"|"random_diagonal", "tseed": 1,
//  "scale": 1.0, "start": 0.0, "end": 1.0}
ConstantBiprocess biprocess_from_json(const Json& j, int dim);

// Runs a named check against a config document and returns the report JSON.
// Known names: ito_isometry, trace_formula, product_formula, functional_ito,
// moment_inequality, contraction, diagonal, pde_residual, spectrum_ks,
// resolvent (stretch-gated), determinism.
Json run_check(const std::string& name, const Json& config);

}  // namespace fsc
