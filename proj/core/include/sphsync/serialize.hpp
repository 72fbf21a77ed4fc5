#pragma once

#include "sphsync/certificates.hpp"
#include "sphsync/circulant.hpp"
#include "sphsync/kuramoto.hpp"
#include "sphsync/models.hpp"
#include "sphsync/optimizer.hpp"

#include <nlohmann/json.hpp>

namespace sphsync {

using Json = nlohmann::ordered_json;

/// Non-finite doubles become the strings "inf", "-inf" or "nan".
Json number_json(double x);

Json to_json(const CertificateReport& report);
Json to_json(const RankOneReference& ref);
Json to_json(const SyncCheckReport& report);
/// The configuration itself is included only when requested.
Json to_json(const SolveReport& report, bool include_configuration = false);
Json to_json(const EquilibriumReport& report, bool include_angles = false);
Json to_json(const CirculantSpectrum& spectrum);
Json to_json(const FiniteSizeStability& stability);
Json to_json(const ModelSpec& spec);

/// Reads a ModelSpec record. Unknown or malformed fields throw
/// ErrorCode::kParse with the field name in the message. With validate =
/// false the parameter range checks are skipped.
ModelSpec model_spec_from_json(const Json& j, bool validate = true);

/// Applies the known keys of `j` to SolveOptions (max_iters, grad_tol, ...).
void apply_solve_options(const Json& j, SolveOptions& opts);

}  // namespace sphsync
