#include "tensorrank/features.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "tensorrank/error.hpp"

namespace tensorrank {

namespace {

void require_length(std::span<const double> series, std::size_t min, std::string_view feature) {
  if (series.size() < min) {
    throw ValidationError(std::string(feature) + " needs at least " + std::to_string(min) +
                          " samples, got " + std::to_string(series.size()));
  }
}

double mean_of(std::span<const double> series) {
  double s = 0.0;
  for (double v : series) s += v;
  return s / static_cast<double>(series.size());
}

}  // namespace

double feature_average(std::span<const double> series) {
  require_length(series, 1, "average");
  return mean_of(series);
}

double feature_slope(std::span<const double> series) {
  require_length(series, 2, "slope");
  const double n = static_cast<double>(series.size());
  const double t_mean = (n + 1.0) / 2.0;
  const double y_mean = mean_of(series);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t k = 0; k < series.size(); ++k) {
    const double dt = static_cast<double>(k + 1) - t_mean;
    sxy += dt * (series[k] - y_mean);
    sxx += dt * dt;
  }
  return sxy / sxx;
}

double feature_cv(std::span<const double> series) {
  require_length(series, 2, "cv");
  const double mean = mean_of(series);
  if (std::abs(mean) < 1e-12) return kCvSentinel;
  double ss = 0.0;
  for (double v : series) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(series.size())) / std::abs(mean);
}

const FeatureRegistry& FeatureRegistry::builtin() {
  static const FeatureRegistry registry = [] {
    FeatureRegistry r;
    r.add({std::string(feature_id::kAverage), 1, DirectionRule::InheritCriterion,
           feature_average});
    r.add({std::string(feature_id::kSlope), 2, DirectionRule::InheritCriterion, feature_slope});
    // Dispersion is risk: always minimized.
    r.add({std::string(feature_id::kCv), 2, DirectionRule::AlwaysMinimize, feature_cv});
    return r;
  }();
  return registry;
}

void FeatureRegistry::add(FeatureDefinition def) {
  if (def.id.empty() || !def.compute) throw ValidationError("feature needs an id and a function");
  if (contains(def.id)) throw ValidationError("feature '" + def.id + "' already registered");
  defs_.push_back(std::move(def));
}

const FeatureDefinition& FeatureRegistry::get(std::string_view id) const {
  auto it = std::find_if(defs_.begin(), defs_.end(), [&](const auto& d) { return d.id == id; });
  if (it == defs_.end()) throw ValidationError("unknown feature '" + std::string(id) + "'");
  return *it;
}

bool FeatureRegistry::contains(std::string_view id) const noexcept {
  return std::any_of(defs_.begin(), defs_.end(), [&](const auto& d) { return d.id == id; });
}

FeatureSet::FeatureSet(Labels ids) : ids_(std::move(ids)) {
  if (ids_.empty()) throw ValidationError("feature set must not be empty");
  std::unordered_set<std::string> seen;
  for (const auto& id : ids_) {
    if (!seen.insert(id).second) throw ValidationError("duplicate feature '" + id + "'");
  }
}

FeatureSet FeatureSet::standard() {
  return FeatureSet({std::string(feature_id::kAverage), std::string(feature_id::kSlope),
                     std::string(feature_id::kCv)});
}

FeatureTensor extract_features(const TimeSeriesTensor& tensor, const FeatureSet& features,
                               const FeatureRegistry& registry) {
  std::vector<const FeatureDefinition*> defs;
  for (const auto& id : features.ids()) defs.push_back(&registry.get(id));

  Tensor3 out(tensor.n(), tensor.m(), defs.size());
  for (std::size_t i = 0; i < tensor.n(); ++i) {
    for (std::size_t j = 0; j < tensor.m(); ++j) {
      const auto series = tensor.fiber(i, j);
      for (std::size_t l = 0; l < defs.size(); ++l) {
        try {
          require_length(series, defs[l]->min_length, defs[l]->id);
          out(i, j, l) = defs[l]->compute(series);
        } catch (const ValidationError& e) {
          throw ValidationError("feature '" + defs[l]->id + "' of (" + tensor.alternatives()[i] +
                                ", " + tensor.criteria()[j] + "): " + e.what());
        }
      }
    }
  }
  return FeatureTensor(tensor.alternatives(), tensor.criteria(), features.ids(), std::move(out));
}

CriterionFeatureDirections derive_directions(const Labels& criteria,
                                             const std::vector<Direction>& base,
                                             const FeatureSet& features,
                                             const std::vector<DirectionOverride>& overrides,
                                             const FeatureRegistry& registry) {
  if (base.size() != criteria.size()) {
    throw ValidationError("one base direction is required per criterion");
  }
  std::vector<Direction> cells;
  cells.reserve(criteria.size() * features.size());
  for (std::size_t j = 0; j < criteria.size(); ++j) {
    for (const auto& id : features.ids()) {
      switch (registry.get(id).rule) {
        case DirectionRule::InheritCriterion: cells.push_back(base[j]); break;
        case DirectionRule::AlwaysMinimize: cells.push_back(Direction::Minimize); break;
        case DirectionRule::AlwaysMaximize: cells.push_back(Direction::Maximize); break;
      }
    }
  }
  CriterionFeatureDirections dirs(criteria, base, features.ids(), std::move(cells));
  for (const auto& o : overrides) {
    auto jc = std::find(criteria.begin(), criteria.end(), o.criterion);
    auto lf = std::find(features.ids().begin(), features.ids().end(), o.feature);
    if (jc == criteria.end()) {
      throw ValidationError("direction override names unknown criterion '" + o.criterion + "'");
    }
    if (lf == features.ids().end()) {
      throw ValidationError("direction override names unknown feature '" + o.feature + "'");
    }
    dirs = dirs.with_override(static_cast<std::size_t>(jc - criteria.begin()),
                              static_cast<std::size_t>(lf - features.ids().begin()), o.direction);
  }
  return dirs;
}

}  // namespace tensorrank
