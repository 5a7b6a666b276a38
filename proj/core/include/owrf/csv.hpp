#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include <nlohmann/json.hpp>

#include "owrf/dataset.hpp"

namespace owrf {

/// Reads a numeric CSV with a header row. The delimiter (comma, semicolon or tab) is
/// taken from the header line. `target` names the response column; an empty target
/// selects the last column. Missing or non-numeric cells raise InputError listing up to
/// twenty offending cells as (line, column).
Dataset load_csv(const std::filesystem::path& path, const std::string& target = {});
Dataset parse_csv(const std::string& text, const std::string& target = {});

/// Predictor matrix for prediction: the named columns in the given order (all columns
/// when `names` is empty). Other columns, including the response, are ignored.
Eigen::MatrixXd load_features(const std::filesystem::path& path, const std::vector<std::string>& names);
Eigen::MatrixXd parse_features(const std::string& text, const std::vector<std::string>& names);

/// Entry of a dataset manifest: {name, path, target, expected_n, expected_p}.
struct ManifestEntry {
  std::string name;
  std::filesystem::path path;
  std::string target;
  std::optional<std::size_t> expected_n;
  std::optional<std::size_t> expected_p;
};

/// Accepts a single object or an array of objects; relative paths resolve against the
/// manifest's directory.
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path);
ManifestEntry manifest_entry(const nlohmann::json& j, const std::filesystem::path& base = {});

/// Loads the CSV and checks the expected shape when given.
Dataset load_dataset(const ManifestEntry& entry);

}  // namespace owrf
