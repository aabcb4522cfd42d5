// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <nlohmann/json.hpp>

#include "curlvar/nonlinearity.hpp"
#include "curlvar/refinement.hpp"

namespace curlvar::cli {

nlohmann::json to_json(const SpectralCertificate& cert);
nlohmann::json to_json(const AssumptionReport& report);
nlohmann::json to_json(const NehariRayResult& ray);
nlohmann::json to_json(const DiagnosticsReport& diag);
/// Everything except the field itself.
nlohmann::json to_json(const SolveReport& report);
nlohmann::json to_json(const EquivalenceCertificate& cert);
nlohmann::json to_json(const RefinementStudy& study);

}  // namespace curlvar::cli
