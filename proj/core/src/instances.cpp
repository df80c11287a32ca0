#include "qaoace/instances.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "qaoace/errors.hpp"

namespace qaoace {

const std::vector<KnapsackInstance>& builtin_instances() {
  static const std::vector<KnapsackInstance> instances = {
      KnapsackInstance("A", {1, 1}, {2, 1}, 1),
      KnapsackInstance("B", {1, 1}, {1, 2}, 1),
      KnapsackInstance("C", {1, 1}, {2, 1}, 2),
      KnapsackInstance("D", {2, 3}, {2, 1}, 2),
      KnapsackInstance("E", {1, 2}, {2, 1}, 2),
  };
  return instances;
}

std::optional<KnapsackInstance> find_builtin(std::string_view label) {
  for (const auto& instance : builtin_instances()) {
    if (instance.label() == label) return instance;
  }
  return std::nullopt;
}

KnapsackInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open instance file '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError("instance file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  if (!j.contains("label")) j["label"] = path.stem().string();
  try {
    return instance_from_json(j);
  } catch (const InvalidArgument& e) {
    throw InvalidArgument("instance file '" + path.string() + "': " + e.what());
  }
}

KnapsackInstance resolve_instance(std::string_view label_or_path) {
  if (auto builtin = find_builtin(label_or_path)) return *builtin;
  const std::filesystem::path path(label_or_path);
  if (!std::filesystem::exists(path)) {
    throw InvalidArgument("'" + std::string(label_or_path) +
                          "' is neither a built-in instance (A-E) nor an existing file");
  }
  return load_instance(path);
}

}  // namespace qaoace
