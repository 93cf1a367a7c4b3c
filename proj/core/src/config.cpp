#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "tensorrank/error.hpp"
#include "tensorrank/ingest.hpp"

namespace tensorrank {

namespace {

class ConfigReader {
 public:
  explicit ConfigReader(std::string_view source) : source_(source) {}

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ValidationError(source_ + ": '" + key + "': " + what);
  }

  void require_map(const YAML::Node& node, const std::string& key) const {
    if (!node.IsMap()) fail(key, "expected a mapping");
  }

  void check_keys(const YAML::Node& node, const std::string& prefix,
                  const std::set<std::string>& allowed) const {
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.count(key)) {
        throw ValidationError(source_ + ": unknown key '" + prefix + key + "'");
      }
    }
  }

  template <typename T>
  T scalar(const YAML::Node& node, const std::string& key) const {
    if (!node.IsScalar()) fail(key, "expected a scalar");
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      fail(key, "cannot interpret '" + node.Scalar() + "'");
    }
  }

  double real(const YAML::Node& node, const std::string& key) const {
    const double v = scalar<double>(node, key);
    if (!std::isfinite(v)) fail(key, "must be finite");
    return v;
  }

  std::size_t count(const YAML::Node& node, const std::string& key) const {
    const auto v = scalar<long long>(node, key);
    if (v < 0) fail(key, "must be non-negative");
    return static_cast<std::size_t>(v);
  }

  double weight(const YAML::Node& node, const std::string& key) const {
    const double v = real(node, key);
    if (v < 0.0) fail(key, "weights must be non-negative, got " + node.Scalar());
    return v;
  }

 private:
  std::string source_;
};

void read_filter(const ConfigReader& r, const YAML::Node& node, PredictConfig& out) {
  r.require_map(node, "filter");
  r.check_keys(node, "filter.",
               {"algorithm", "order", "forgetting_factor", "forgetting_factors", "step_size",
                "regularization", "init_delta"});
  auto& f = out.filter;
  if (auto n = node["algorithm"]) {
    try {
      f.algorithm = parse_algorithm(r.scalar<std::string>(n, "filter.algorithm"));
    } catch (const ValidationError& e) {
      r.fail("filter.algorithm", e.what());
    }
  }
  if (auto n = node["order"]) {
    f.order = r.count(n, "filter.order");
    if (f.order < 1) r.fail("filter.order", "must be at least 1");
  }
  if (auto n = node["forgetting_factor"]) {
    f.forgetting_factor = r.real(n, "filter.forgetting_factor");
    if (!(f.forgetting_factor > 0.0 && f.forgetting_factor <= 1.0)) {
      r.fail("filter.forgetting_factor", "forgetting factor must lie in (0, 1]");
    }
  }
  auto positive = [&](const char* name, double& field) {
    if (auto n = node[name]) {
      const std::string key = std::string("filter.") + name;
      field = r.real(n, key);
      if (!(field > 0.0)) r.fail(key, "must be positive");
    }
  };
  positive("step_size", f.step_size);
  positive("regularization", f.regularization);
  positive("init_delta", f.init_delta);
  if (auto n = node["forgetting_factors"]) {
    r.require_map(n, "filter.forgetting_factors");
    for (const auto& kv : n) {
      const auto criterion = kv.first.as<std::string>();
      const std::string key = "filter.forgetting_factors." + criterion;
      const double rho = r.real(kv.second, key);
      if (!(rho > 0.0 && rho <= 1.0)) r.fail(key, "forgetting factor must lie in (0, 1]");
      out.forgetting_factors[criterion] = rho;
    }
  }
  try {
    f.validate();
  } catch (const ValidationError& e) {
    r.fail("filter", e.what());
  }
}

}  // namespace

std::string_view to_string(AggregationMethod m) noexcept {
  switch (m) {
    case AggregationMethod::PrometheeTensor: return "promethee-tensor";
    case AggregationMethod::PrometheeMatrix: return "promethee-matrix";
    case AggregationMethod::TopsisTensor: return "topsis-tensor";
  }
  return "promethee-tensor";
}

AggregationMethod parse_method(std::string_view text) {
  if (text == "promethee-tensor") return AggregationMethod::PrometheeTensor;
  if (text == "promethee-matrix") return AggregationMethod::PrometheeMatrix;
  if (text == "topsis-tensor") return AggregationMethod::TopsisTensor;
  throw ValidationError("unknown method '" + std::string(text) +
                        "' (expected promethee-tensor, promethee-matrix or topsis-tensor)");
}

RunConfig parse_config_text(std::string_view yaml, std::string_view source) {
  const ConfigReader r(source);
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml));
  } catch (const YAML::Exception& e) {
    throw ValidationError(std::string(source) + ": malformed YAML: " + e.what());
  }

  RunConfig cfg;
  if (root.IsNull()) return cfg;
  if (!root.IsMap()) throw ValidationError(std::string(source) + ": top level must be a mapping");
  r.check_keys(root, "",
               {"cutoff", "horizon", "window", "method", "features", "directions",
                "direction_overrides", "weights", "criterion_weights", "filter"});

  if (auto n = root["cutoff"]) cfg.cutoff = r.scalar<int>(n, "cutoff");
  if (auto n = root["horizon"]) cfg.horizon = r.count(n, "horizon");
  if (auto n = root["window"]) cfg.window = r.count(n, "window");
  if (cfg.horizon < 2) r.fail("horizon", "must be at least 2 (slope and cv need two samples)");
  if (cfg.window < 2) r.fail("window", "must be at least 2 (slope and cv need two samples)");

  if (auto n = root["method"]) {
    try {
      cfg.method = parse_method(r.scalar<std::string>(n, "method"));
    } catch (const ValidationError& e) {
      r.fail("method", e.what());
    }
  }

  if (auto n = root["features"]) {
    if (!n.IsSequence()) r.fail("features", "expected a list");
    cfg.features.clear();
    for (const auto& f : n) cfg.features.push_back(r.scalar<std::string>(f, "features"));
    try {
      FeatureSet set(cfg.features);
      for (const auto& id : set.ids()) FeatureRegistry::builtin().get(id);
    } catch (const ValidationError& e) {
      r.fail("features", e.what());
    }
  }

  if (auto n = root["directions"]) {
    r.require_map(n, "directions");
    for (const auto& kv : n) {
      const auto criterion = kv.first.as<std::string>();
      try {
        cfg.directions[criterion] =
            parse_direction(r.scalar<std::string>(kv.second, "directions." + criterion));
      } catch (const ValidationError& e) {
        r.fail("directions." + criterion, e.what());
      }
    }
  }

  if (auto n = root["direction_overrides"]) {
    if (!n.IsSequence()) r.fail("direction_overrides", "expected a list");
    for (const auto& item : n) {
      r.require_map(item, "direction_overrides");
      r.check_keys(item, "direction_overrides.", {"criterion", "feature", "direction"});
      if (!item["criterion"] || !item["feature"] || !item["direction"]) {
        r.fail("direction_overrides", "each entry needs criterion, feature and direction");
      }
      DirectionOverride o{r.scalar<std::string>(item["criterion"], "direction_overrides"),
                          r.scalar<std::string>(item["feature"], "direction_overrides"),
                          Direction::Maximize};
      try {
        o.direction =
            parse_direction(r.scalar<std::string>(item["direction"], "direction_overrides"));
      } catch (const ValidationError& e) {
        r.fail("direction_overrides", e.what());
      }
      cfg.direction_overrides.push_back(std::move(o));
    }
  }

  if (auto n = root["weights"]) {
    r.require_map(n, "weights");
    for (const auto& kv : n) {
      const auto criterion = kv.first.as<std::string>();
      r.require_map(kv.second, "weights." + criterion);
      for (const auto& fw : kv.second) {
        const auto feature = fw.first.as<std::string>();
        cfg.weights[criterion][feature] =
            r.weight(fw.second, "weights." + criterion + "." + feature);
      }
    }
  }

  if (auto n = root["criterion_weights"]) {
    r.require_map(n, "criterion_weights");
    for (const auto& kv : n) {
      const auto criterion = kv.first.as<std::string>();
      cfg.criterion_weights[criterion] = r.weight(kv.second, "criterion_weights." + criterion);
    }
  }

  if (auto n = root["filter"]) read_filter(r, n, cfg.predict);
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str(), path.string());
}

ResolvedRun resolve(const RunConfig& config, const DecisionTensor& data) {
  const auto& criteria = data.criteria();
  auto criterion_of = [&](const std::string& id, std::string_view key) {
    auto it = std::find(criteria.begin(), criteria.end(), id);
    if (it == criteria.end()) {
      throw ValidationError("config '" + std::string(key) + "' names unknown criterion '" + id +
                            "'");
    }
    return static_cast<std::size_t>(it - criteria.begin());
  };

  const int cutoff = config.cutoff.value_or(data.times().back());
  const auto cutoff_index = data.time_index(cutoff);
  if (!cutoff_index) {
    throw ValidationError("cutoff " + std::to_string(cutoff) + " is not a time label of the data");
  }
  if (config.window > *cutoff_index + 1) {
    throw ValidationError("window of " + std::to_string(config.window) + " samples reaches before " +
                          std::to_string(data.times().front()));
  }

  FeatureSet features(config.features);

  std::vector<Direction> base(criteria.size(), Direction::Maximize);
  for (const auto& [id, d] : config.directions) base[criterion_of(id, "directions")] = d;
  auto directions = derive_directions(criteria, base, features, config.direction_overrides);

  WeightScheme weights = WeightScheme::uniform(criteria.size(), features.size());
  if (!config.weights.empty()) {
    Matrix relative(criteria.size(), features.size(), 0.0);
    for (const auto& [cid, per_feature] : config.weights) {
      const auto j = criterion_of(cid, "weights");
      for (const auto& [fid, g] : per_feature) {
        auto it = std::find(features.ids().begin(), features.ids().end(), fid);
        if (it == features.ids().end()) {
          throw ValidationError("config 'weights." + cid + "' names feature '" + fid +
                                "' which is not in the feature set");
        }
        relative(j, static_cast<std::size_t>(it - features.ids().begin())) = g;
      }
    }
    weights = WeightScheme::normalized(std::move(relative));
  }

  WeightScheme criterion_weights = WeightScheme::uniform(criteria.size(), 1);
  if (!config.criterion_weights.empty()) {
    Matrix relative(criteria.size(), 1, 0.0);
    for (const auto& [cid, g] : config.criterion_weights) {
      relative(criterion_of(cid, "criterion_weights"), 0) = g;
    }
    criterion_weights = WeightScheme::normalized(std::move(relative));
  }

  for (const auto& [cid, rho] : config.predict.forgetting_factors) {
    criterion_of(cid, "filter.forgetting_factors");
    (void)rho;
  }

  return ResolvedRun{cutoff,
                     config.horizon,
                     config.window,
                     std::move(features),
                     std::move(base),
                     std::move(directions),
                     std::move(weights),
                     std::move(criterion_weights),
                     config.predict,
                     config.method};
}

}  // namespace tensorrank
