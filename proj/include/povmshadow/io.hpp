#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include <nlohmann/json.hpp>

#include "povmshadow/dist_vector.hpp"
#include "povmshadow/lowerbound.hpp"
#include "povmshadow/qstate.hpp"
#include "povmshadow/shadow.hpp"
#include "povmshadow/threshold_search.hpp"

namespace povmshadow::io {

using Json = nlohmann::json;

// {"dim": d, "re": [...], "im": [...]}, both arrays row-major of length d^2.
Json matrix_to_json(const CMatrix& m);
// Throws Parse on a malformed object or BadDimensions on a length mismatch.
CMatrix matrix_from_json(const Json& j);

Json dist_to_json(const DistVector& p);
DistVector dist_from_json(const Json& j);

// {"epsilon", "delta", "povms": [[matrix, ...], ...], "thresholds": [[...], ...],
//  "state": matrix (optional)}
Json threshold_instance_to_json(const ThresholdInstance& instance,
                                const std::optional<DensityMatrix>& state = std::nullopt);

struct LoadedInstance {
  ThresholdInstance instance;
  std::optional<DensityMatrix> state;
};

// "thresholds" may be omitted (defaults to uniform per measurement). Library
// validation errors (NotPovm, NotPSD, ...) propagate unchanged.
LoadedInstance threshold_instance_from_json(const Json& j);

// {"b": [[...], ...], "bad_iterations", "copies": {...}, "success", "seed"}
Json shadow_result_to_json(const ShadowResult& result, std::uint64_t seed);

// {"D", "K", "L", "epsilon", "seed", "partitions": [basis matrix, ...]}
Json packing_net_to_json(const PackingNet& net, std::uint64_t seed);
PackingNet packing_net_from_json(const Json& j);

// Net metadata plus {"index", "signs", "state"}.
Json hard_instance_to_json(const PackingNet& net, const HardInstance& instance, std::uint64_t seed);

// Throws Io or Parse.
Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace povmshadow::io
