#pragma once

#include "causa/calculus.hpp"
#include "causa/device.hpp"
#include "causa/simulation.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace causa {

using Json = nlohmann::json;

Json to_json(const CausalLink& link);
Json to_json(const Derivation& derivation);
Json to_json(const Device& device);
Json to_json(const DeviceTree& tree);

/// Asserted links as a graph: occurrent nodes typed by kind, edges labeled
/// by subfunction.
Json links_json(const Model& model);
std::string links_dot(const Model& model);

/// One decomposition per device root of the model.
std::vector<DeviceTree> model_devices(const Model& model, int max_depth = 8);
Json devices_json(const std::vector<DeviceTree>& trees);
std::string devices_dot(const std::vector<DeviceTree>& trees);

/// One JSON record per tick, newline terminated.
std::string trace_ldjson(const Trace& trace);
/// tick column plus one decimal column per parameter.
std::string trace_csv(const Trace& trace);

} // namespace causa
