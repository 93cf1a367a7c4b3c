#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tensorrank/tensor.hpp"

namespace tensorrank {

/// Value reported by feature_cv when the mean is (numerically) zero. It
/// ranks strictly worse than any finite coefficient of variation.
inline constexpr double kCvSentinel = std::numeric_limits<double>::infinity();

/// Arithmetic mean. Throws ValidationError on an empty series.
double feature_average(std::span<const double> series);

/// OLS slope of the values regressed on the index 1..n. Needs n >= 2.
double feature_slope(std::span<const double> series);

/// Population standard deviation over |mean|; kCvSentinel if |mean| < 1e-12.
/// Needs n >= 2.
double feature_cv(std::span<const double> series);

namespace feature_id {
inline constexpr std::string_view kAverage = "average";
inline constexpr std::string_view kSlope = "slope";
inline constexpr std::string_view kCv = "cv";
}  // namespace feature_id

/// How a feature's orientation follows from its criterion's base direction.
enum class DirectionRule { InheritCriterion, AlwaysMinimize, AlwaysMaximize };

struct FeatureDefinition {
  std::string id;
  std::size_t min_length = 1;
  DirectionRule rule = DirectionRule::InheritCriterion;
  std::function<double(std::span<const double>)> compute;
};

/// Open set of named features. `builtin()` holds average, slope and cv.
class FeatureRegistry {
 public:
  static const FeatureRegistry& builtin();

  /// Throws ValidationError if the id is already registered.
  void add(FeatureDefinition def);
  const FeatureDefinition& get(std::string_view id) const;
  bool contains(std::string_view id) const noexcept;

 private:
  std::vector<FeatureDefinition> defs_;
};

/// Ordered, non-empty, duplicate-free list of feature ids.
class FeatureSet {
 public:
  explicit FeatureSet(Labels ids);
  /// average, slope, cv.
  static FeatureSet standard();

  const Labels& ids() const noexcept { return ids_; }
  std::size_t size() const noexcept { return ids_.size(); }

 private:
  Labels ids_;
};

/// Maps every fiber of a time-indexed tensor to its feature vector.
FeatureTensor extract_features(const TimeSeriesTensor& tensor, const FeatureSet& features,
                               const FeatureRegistry& registry = FeatureRegistry::builtin());

struct DirectionOverride {
  std::string criterion;
  std::string feature;
  Direction direction;
};

/// Applies each feature's DirectionRule to the base directions, then the
/// explicit overrides.
CriterionFeatureDirections derive_directions(
    const Labels& criteria, const std::vector<Direction>& base, const FeatureSet& features,
    const std::vector<DirectionOverride>& overrides = {},
    const FeatureRegistry& registry = FeatureRegistry::builtin());

}  // namespace tensorrank
