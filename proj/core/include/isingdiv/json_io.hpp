#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "isingdiv/model.hpp"

namespace isingdiv {

/// Model schema (exact keys, nothing else):
///   {"n": int, "edges": [[u, v, J], ...], "fields": [h_0, ..., h_{n-1}]}
/// Pair schema: {"nu": <model>, "mu": <model>}.
/// Violations raise InputError naming the offending key.
nlohmann::json model_to_json(const IsingModel& model);
IsingModel model_from_json(const nlohmann::json& j, const std::string& where = "model");

nlohmann::json pair_to_json(const ModelPair& pair);
ModelPair pair_from_json(const nlohmann::json& j);

/// Reads and parses a pair file; wraps JSON syntax errors in InputError.
ModelPair load_pair_file(const std::string& path);

void write_text_file(const std::string& path, const std::string& contents);

}  // namespace isingdiv
