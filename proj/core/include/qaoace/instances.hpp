#pragma once

#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "qaoace/knapsack.hpp"

namespace qaoace {

/// The five reference instances A-E, in label order.
const std::vector<KnapsackInstance>& builtin_instances();

std::optional<KnapsackInstance> find_builtin(std::string_view label);

/// Reads {"label", "weights", "values", "capacity"} from a JSON file. A
/// missing label defaults to the file stem.
KnapsackInstance load_instance(const std::filesystem::path& path);

/// Built-in label if one matches, otherwise a JSON file path.
KnapsackInstance resolve_instance(std::string_view label_or_path);

}  // namespace qaoace
