#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "owrf/forest.hpp"
#include "owrf/qp.hpp"

namespace owrf {

inline constexpr int kModelSchemaVersion = 1;

/// A fitted, weighted forest as stored on disk.
struct Model {
  Forest forest;
  std::vector<std::string> feature_names;
  std::optional<SolveReport> solve;
  nlohmann::json config = nlohmann::json::object();  // echo of the fit settings
};

nlohmann::json model_to_json(const Model& model);
/// Throws InputError on a schema mismatch or malformed content.
Model model_from_json(const nlohmann::json& j);

void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

}  // namespace owrf
