#include "isingdiv/json_io.hpp"

#include <fstream>
#include <sstream>

#include "isingdiv/errors.hpp"

namespace isingdiv {

namespace {

void require_keys(const nlohmann::json& j, std::initializer_list<const char*> keys,
                  const std::string& where) {
  if (!j.is_object()) throw InputError(where + " must be a JSON object");
  for (const char* k : keys) {
    if (!j.contains(k)) throw InputError("missing key \"" + std::string(k) + "\" in " + where);
  }
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known) throw InputError("unexpected key \"" + key + "\" in " + where);
  }
}

}  // namespace

nlohmann::json model_to_json(const IsingModel& model) {
  nlohmann::json j;
  j["n"] = model.n();
  auto edges = nlohmann::json::array();
  for (const auto& e : model.edges()) {
    edges.push_back(nlohmann::json::array({e.u, e.v, e.coupling}));
  }
  j["edges"] = std::move(edges);
  j["fields"] = model.fields();
  return j;
}

IsingModel model_from_json(const nlohmann::json& j, const std::string& where) {
  require_keys(j, {"n", "edges", "fields"}, where);
  if (!j["n"].is_number_integer()) throw InputError("key \"n\" in " + where + " must be an integer");
  const int n = j["n"].get<int>();
  if (!j["edges"].is_array()) throw InputError("key \"edges\" in " + where + " must be an array");
  std::vector<Edge> edges;
  edges.reserve(j["edges"].size());
  for (std::size_t i = 0; i < j["edges"].size(); ++i) {
    const auto& e = j["edges"][i];
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() ||
        !e[1].is_number_integer() || !e[2].is_number()) {
      throw InputError("key \"edges\" entry " + std::to_string(i) + " in " + where +
                       " must be [u, v, coupling]");
    }
    edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
  }
  if (!j["fields"].is_array()) {
    throw InputError("key \"fields\" in " + where + " must be an array");
  }
  std::vector<double> fields;
  fields.reserve(j["fields"].size());
  for (std::size_t i = 0; i < j["fields"].size(); ++i) {
    if (!j["fields"][i].is_number()) {
      throw InputError("key \"fields\" entry " + std::to_string(i) + " in " + where +
                       " must be a number");
    }
    fields.push_back(j["fields"][i].get<double>());
  }
  return IsingModel(n, std::move(edges), std::move(fields));
}

nlohmann::json pair_to_json(const ModelPair& pair) {
  nlohmann::json j;
  j["nu"] = model_to_json(pair.nu());
  j["mu"] = model_to_json(pair.mu());
  return j;
}

ModelPair pair_from_json(const nlohmann::json& j) {
  require_keys(j, {"nu", "mu"}, "pair");
  return ModelPair(model_from_json(j["nu"], "nu"), model_from_json(j["mu"], "mu"));
}

ModelPair load_pair_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open pair file \"" + path + "\"");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("pair file \"" + path + "\": " + e.what());
  }
  return pair_from_json(j);
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write \"" + path + "\"");
  out << contents;
}

}  // namespace isingdiv
