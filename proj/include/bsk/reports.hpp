#pragma once

#include <string>

#include <json.hpp>

#include "bsk/analysis.hpp"
#include "bsk/curlspec.hpp"
#include "bsk/flow.hpp"
#include "bsk/maps.hpp"
#include "bsk/s3.hpp"

// JSON-facing layer: parses map/coupling/grid specs and assembles the
// machine-readable reports behind the C API and the CLI.

namespace bsk::reports {

using json = nlohmann::json;

maps::MapS3 map_from_json(const json& spec);
analysis::Coupling coupling_from_json(const json& spec);
s3::GridSpec grid_from_json(const json& spec, const s3::GridSpec& fallback = {});

// Adds schema, subcommand and timestamp fields. Consumers comparing reports
// byte-for-byte are expected to drop the timestamp.
json finalize(json body, const std::string& subcommand);

json spectrum_report(int max_degree, double tol = 1e-9);
json energy_report(const json& map_spec, const json& coupling_spec, const s3::GridSpec& res);
json check_report(const json& map_spec, const json& coupling_spec, const s3::GridSpec& res,
                  int profile_samples = 96);
json flow_report(const json& config);
json convergence_report(const json& map_spec, const json& coupling_spec,
                        const s3::GridSpec& base);
json selftest_report();

}  // namespace bsk::reports
