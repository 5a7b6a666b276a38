#include "owrf/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "owrf/error.hpp"

namespace owrf {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\"");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\"");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_line(const std::string& line, char delim) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    cells.push_back(trim(std::string_view(line).substr(start, pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return cells;
}

char detect_delimiter(const std::string& header) {
  std::size_t best = 0;
  char delim = ',';
  for (char c : {',', ';', '\t'}) {
    const auto k = static_cast<std::size_t>(std::count(header.begin(), header.end(), c));
    if (k > best) {
      best = k;
      delim = c;
    }
  }
  return delim;
}

bool is_missing(const std::string& cell) {
  std::string lower(cell);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  return lower.empty() || lower == "na" || lower == "nan" || lower == "?" || lower == "null";
}

std::optional<double> parse_number(const std::string& cell) {
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  if (begin != end && *begin == '+') ++begin;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

}  // namespace

namespace {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

Table parse_table(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  Table t;
  char delim = ',';
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      delim = detect_delimiter(line);
      t.header = split_line(line, delim);
      break;
    }
  }
  if (t.header.empty()) throw InputError("csv: empty input");
  const std::size_t cols = t.header.size();

  std::vector<std::string> missing;
  std::vector<std::string> bad;
  std::size_t missing_total = 0;
  std::size_t bad_total = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> cells = split_line(line, delim);
    if (cells.size() != cols) {
      throw InputError("csv: line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                       " cells, expected " + std::to_string(cols));
    }
    std::vector<double> row(cols, 0.0);
    for (std::size_t c = 0; c < cols; ++c) {
      const std::string where = "(" + std::to_string(line_no) + ", " + t.header[c] + ")";
      if (is_missing(cells[c])) {
        if (missing.size() < 20) missing.push_back(where);
        ++missing_total;
      } else if (auto v = parse_number(cells[c])) {
        row[c] = *v;
      } else {
        if (bad.size() < 20) bad.push_back(where + " '" + cells[c] + "'");
        ++bad_total;
      }
    }
    t.rows.push_back(std::move(row));
  }
  auto join = [](const std::vector<std::string>& items) {
    std::string s;
    for (const auto& item : items) s += (s.empty() ? "" : ", ") + item;
    return s;
  };
  if (missing_total > 0) {
    throw InputError("csv: " + std::to_string(missing_total) + " missing value(s) at " + join(missing));
  }
  if (bad_total > 0) {
    throw InputError("csv: " + std::to_string(bad_total) + " non-numeric value(s) at " + join(bad));
  }
  if (t.rows.empty()) throw InputError("csv: no data rows");
  return t;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

Dataset parse_csv(const std::string& text, const std::string& target) {
  const Table t = parse_table(text);
  const std::size_t cols = t.header.size();
  if (cols < 2) throw InputError("csv: need at least one predictor and a target column");
  std::size_t target_col = cols - 1;
  if (!target.empty()) {
    const auto it = std::find(t.header.begin(), t.header.end(), target);
    if (it == t.header.end()) throw InputError("csv: target column '" + target + "' not found");
    target_col = static_cast<std::size_t>(it - t.header.begin());
  }

  const auto n = static_cast<Eigen::Index>(t.rows.size());
  Eigen::MatrixXd x(n, static_cast<Eigen::Index>(cols - 1));
  Eigen::VectorXd y(n);
  std::vector<std::string> names;
  for (std::size_t c = 0; c < cols; ++c) {
    if (c != target_col) names.push_back(t.header[c]);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = t.rows[static_cast<std::size_t>(i)];
    Eigen::Index k = 0;
    for (std::size_t c = 0; c < cols; ++c) {
      if (c == target_col) {
        y(i) = row[c];
      } else {
        x(i, k++) = row[c];
      }
    }
  }
  return Dataset(std::move(x), std::move(y), std::move(names));
}

Eigen::MatrixXd parse_features(const std::string& text, const std::vector<std::string>& names) {
  const Table t = parse_table(text);
  std::vector<std::size_t> cols;
  if (names.empty()) {
    for (std::size_t c = 0; c < t.header.size(); ++c) cols.push_back(c);
  } else {
    for (const auto& name : names) {
      const auto it = std::find(t.header.begin(), t.header.end(), name);
      if (it == t.header.end()) throw InputError("csv: feature column '" + name + "' not found");
      cols.push_back(static_cast<std::size_t>(it - t.header.begin()));
    }
  }
  Eigen::MatrixXd x(static_cast<Eigen::Index>(t.rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    for (std::size_t k = 0; k < cols.size(); ++k) {
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = t.rows[i][cols[k]];
    }
  }
  return x;
}

Eigen::MatrixXd load_features(const std::filesystem::path& path, const std::vector<std::string>& names) {
  return parse_features(read_file(path), names);
}

Dataset load_csv(const std::filesystem::path& path, const std::string& target) {
  return parse_csv(read_file(path), target);
}

ManifestEntry manifest_entry(const nlohmann::json& j, const std::filesystem::path& base) {
  ManifestEntry e;
  e.path = j.at("path").get<std::string>();
  if (e.path.is_relative() && !base.empty()) e.path = base / e.path;
  e.name = j.value("name", e.path.stem().string());
  e.target = j.value("target", std::string{});
  if (j.contains("expected_n") && !j["expected_n"].is_null()) e.expected_n = j["expected_n"].get<std::size_t>();
  if (j.contains("expected_p") && !j["expected_p"].is_null()) e.expected_p = j["expected_p"].get<std::size_t>();
  return e;
}

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open manifest " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& ex) {
    throw InputError("manifest " + path.string() + ": " + ex.what());
  }
  std::vector<ManifestEntry> out;
  const auto base = path.parent_path();
  if (j.is_array()) {
    for (const auto& item : j) out.push_back(manifest_entry(item, base));
  } else {
    out.push_back(manifest_entry(j, base));
  }
  return out;
}

Dataset load_dataset(const ManifestEntry& entry) {
  Dataset d = load_csv(entry.path, entry.target);
  if (entry.expected_n && d.rows() != *entry.expected_n) {
    throw InputError(entry.name + ": expected " + std::to_string(*entry.expected_n) + " rows, found " +
                     std::to_string(d.rows()));
  }
  if (entry.expected_p && d.cols() != *entry.expected_p) {
    throw InputError(entry.name + ": expected " + std::to_string(*entry.expected_p) + " predictors, found " +
                     std::to_string(d.cols()));
  }
  return d;
}

}  // namespace owrf
