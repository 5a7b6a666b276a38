#include "owrf/model_io.hpp"

#include <fstream>

#include "owrf/error.hpp"

namespace owrf {

nlohmann::json model_to_json(const Model& model) {
  const Forest& f = model.forest;
  f.check();
  if (f.trees.empty()) throw InputError("cannot save an empty forest");
  nlohmann::json trees = nlohmann::json::array();
  nlohmann::json counts = nlohmann::json::array();
  for (std::size_t m = 0; m < f.size(); ++m) {
    trees.push_back(f.trees[m].to_json());
    counts.push_back(f.samples[m].counts());
  }
  const WeightVector& w = f.weights_or_equal();
  std::vector<double> weights(w.values().data(), w.values().data() + w.size());
  nlohmann::json out{{"schema_version", kModelSchemaVersion},
                     {"kind", "owrf_model"},
                     {"tree_kind", to_string(f.trees.front().kind())},
                     {"method", to_string(f.method)},
                     {"features", f.features},
                     {"feature_names", model.feature_names},
                     {"weights", weights},
                     {"trees", std::move(trees)},
                     {"bootstrap_counts", std::move(counts)},
                     {"config", model.config}};
  out["solve_report"] = model.solve ? model.solve->to_json() : nlohmann::json(nullptr);
  return out;
}

Model model_from_json(const nlohmann::json& j) {
  try {
    if (j.value("kind", std::string{}) != "owrf_model") throw InputError("not a model file");
    if (j.at("schema_version").get<int>() != kModelSchemaVersion) {
      throw InputError("unsupported model schema_version " + j.at("schema_version").dump());
    }
    Model model;
    const TreeKind kind = tree_kind_from_string(j.at("tree_kind").get<std::string>());
    Forest& f = model.forest;
    for (const auto& t : j.at("trees")) f.trees.push_back(RegressionTree::from_json(t, kind));
    for (const auto& c : j.at("bootstrap_counts")) f.samples.emplace_back(c.get<std::vector<std::uint32_t>>());
    f.check();
    f.method = method_from_string(j.at("method").get<std::string>());
    f.features = j.at("features").get<std::size_t>();
    const auto w = j.at("weights").get<std::vector<double>>();
    if (w.size() != f.size()) throw InputError("weight count does not match tree count");
    f.weights = WeightVector(Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size())));
    model.feature_names = j.value("feature_names", std::vector<std::string>{});
    model.config = j.value("config", nlohmann::json::object());
    if (const auto it = j.find("solve_report"); it != j.end() && !it->is_null()) {
      const auto sw = it->at("weights").get<std::vector<double>>();
      model.solve = SolveReport{
          WeightVector(Eigen::Map<const Eigen::VectorXd>(sw.data(), static_cast<Eigen::Index>(sw.size()))),
          it->at("objective").get<double>(),
          it->at("iterations").get<std::size_t>(),
          it->at("converged").get<bool>(),
          it->value("wall_time_s", 0.0),
          it->at("method").get<std::string>()};
    }
    return model;
  } catch (const nlohmann::json::exception& ex) {
    throw InputError(std::string("malformed model: ") + ex.what());
  }
}

void save_model(const Model& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << model_to_json(model).dump(1) << '\n';
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& ex) {
    throw InputError("model " + path.string() + ": " + ex.what());
  }
  return model_from_json(j);
}

}  // namespace owrf
