#include "tensorrank/mcda.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "tensorrank/error.hpp"

namespace tensorrank {

namespace {

constexpr double kWeightSumTolerance = 1e-9;

void require_shape(const FeatureTensor& s, const CriterionFeatureDirections& dirs) {
  if (dirs.criteria().size() != s.m() || dirs.features().size() != s.w()) {
    throw ValidationError("direction table is " + std::to_string(dirs.criteria().size()) + "x" +
                          std::to_string(dirs.features().size()) + " but the feature tensor has " +
                          std::to_string(s.m()) + " criteria and " + std::to_string(s.w()) +
                          " features");
  }
}

void require_weights(std::size_t m, std::size_t w, const WeightScheme& weights) {
  if (weights.criteria() != m || weights.features() != w) {
    throw ValidationError("weight scheme is " + std::to_string(weights.criteria()) + "x" +
                          std::to_string(weights.features()) + " but the data needs " +
                          std::to_string(m) + "x" + std::to_string(w));
  }
}

}  // namespace

WeightScheme::WeightScheme(Matrix cells) : cells_(std::move(cells)) {
  if (cells_.rows() == 0 || cells_.cols() == 0) throw ValidationError("weight scheme is empty");
  double sum = 0.0;
  for (std::size_t j = 0; j < cells_.rows(); ++j) {
    for (std::size_t l = 0; l < cells_.cols(); ++l) {
      const double g = cells_(j, l);
      if (!std::isfinite(g) || g < 0.0) {
        throw ValidationError("weight (" + std::to_string(j) + ", " + std::to_string(l) +
                              ") must be finite and non-negative, got " + std::to_string(g));
      }
      sum += g;
    }
  }
  if (std::abs(sum - 1.0) > kWeightSumTolerance) {
    throw ValidationError("weights must sum to 1, got " + std::to_string(sum));
  }
}

WeightScheme WeightScheme::uniform(std::size_t criteria, std::size_t features) {
  const double g = 1.0 / static_cast<double>(criteria * features);
  return WeightScheme(Matrix(criteria, features, g));
}

WeightScheme WeightScheme::per_criterion(const std::vector<double>& weights) {
  Matrix cells(weights.size(), 1);
  for (std::size_t j = 0; j < weights.size(); ++j) cells(j, 0) = weights[j];
  return WeightScheme(std::move(cells));
}

WeightScheme WeightScheme::normalized(Matrix relative) {
  double sum = 0.0;
  for (double g : relative.data()) {
    if (!std::isfinite(g) || g < 0.0) {
      throw ValidationError("weights must be finite and non-negative, got " + std::to_string(g));
    }
    sum += g;
  }
  if (!(sum > 0.0)) throw ValidationError("weights must not all be zero");
  Matrix cells(relative.rows(), relative.cols());
  for (std::size_t j = 0; j < relative.rows(); ++j) {
    for (std::size_t l = 0; l < relative.cols(); ++l) cells(j, l) = relative(j, l) / sum;
  }
  return WeightScheme(std::move(cells));
}

PairwiseTensor::PairwiseTensor(std::size_t n, std::size_t m, std::size_t w)
    : n_(n), m_(m), w_(w), data_(n * n * m * w, 0.0) {}

RankResult RankResult::from_scores(Labels alternatives, std::vector<double> scores) {
  if (alternatives.size() != scores.size()) {
    throw ValidationError("one score is required per alternative");
  }
  RankResult r;
  r.alternatives = std::move(alternatives);
  r.scores = std::move(scores);
  r.ordering.resize(r.scores.size());
  std::iota(r.ordering.begin(), r.ordering.end(), std::size_t{0});
  std::stable_sort(r.ordering.begin(), r.ordering.end(),
                   [&](std::size_t a, std::size_t b) { return r.scores[a] > r.scores[b]; });

  // Chain near-equal neighbours into tie groups, restore input order inside.
  std::size_t start = 0;
  for (std::size_t p = 1; p <= r.ordering.size(); ++p) {
    const bool breaks = p == r.ordering.size() ||
                        r.scores[r.ordering[p - 1]] - r.scores[r.ordering[p]] > kTieTolerance;
    if (!breaks) continue;
    auto first = r.ordering.begin() + static_cast<std::ptrdiff_t>(start);
    auto last = r.ordering.begin() + static_cast<std::ptrdiff_t>(p);
    std::sort(first, last);
    if (p - start > 1) r.tie_groups.emplace_back(first, last);
    start = p;
  }
  return r;
}

Labels RankResult::ordered_ids() const {
  Labels out;
  out.reserve(ordering.size());
  for (auto i : ordering) out.push_back(alternatives[i]);
  return out;
}

std::vector<std::size_t> RankResult::positions() const {
  std::vector<std::size_t> pos(ordering.size());
  for (std::size_t p = 0; p < ordering.size(); ++p) pos[ordering[p]] = p;
  return pos;
}

double usual_preference(double d) noexcept {
  if (d > 0.0) return 1.0;
  if (d < 0.0) return 0.0;
  return 0.5;
}

PairwiseTensor pairwise_differences(const FeatureTensor& s,
                                    const CriterionFeatureDirections& directions) {
  require_shape(s, directions);
  if (s.n() < 2) throw ValidationError("ranking needs at least two alternatives");
  const double inf = std::numeric_limits<double>::infinity();
  PairwiseTensor d(s.n(), s.m(), s.w());
  for (std::size_t i = 0; i < s.n(); ++i) {
    for (std::size_t k = 0; k < s.n(); ++k) {
      if (i == k) continue;
      for (std::size_t j = 0; j < s.m(); ++j) {
        for (std::size_t l = 0; l < s.w(); ++l) {
          const double a = s(i, j, l);
          const double b = s(k, j, l);
          double diff;
          if (std::isinf(a) || std::isinf(b)) {
            // Sentinel cells are worst whatever the orientation.
            diff = std::isinf(a) == std::isinf(b) ? 0.0 : (std::isinf(a) ? -inf : inf);
          } else {
            diff = directions(j, l) == Direction::Maximize ? a - b : b - a;
          }
          d(i, k, j, l) = diff;
        }
      }
    }
  }
  return d;
}

Matrix global_preference(const PairwiseTensor& pairwise, const WeightScheme& weights,
                         const PreferenceFunction& preference) {
  require_weights(pairwise.m(), pairwise.w(), weights);
  const std::size_t n = pairwise.n();
  Matrix pi(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (i == k) continue;
      double sum = 0.0;
      for (std::size_t l = 0; l < pairwise.w(); ++l) {
        for (std::size_t j = 0; j < pairwise.m(); ++j) {
          sum += weights(j, l) * preference(pairwise(i, k, j, l));
        }
      }
      pi(i, k) = sum;
    }
  }
  return pi;
}

RankResult net_flow(const Matrix& preference, const Labels& alternatives) {
  const std::size_t n = preference.rows();
  if (preference.cols() != n || alternatives.size() != n) {
    throw ValidationError("preference matrix must be square with one row per alternative");
  }
  if (n < 2) throw ValidationError("ranking needs at least two alternatives");
  std::vector<double> flows(n, 0.0);
  const double scale = 1.0 / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    double out = 0.0;
    double in = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i) continue;
      out += preference(i, k);
      in += preference(k, i);
    }
    flows[i] = scale * out - scale * in;
  }
  return RankResult::from_scores(alternatives, std::move(flows));
}

Matrix promethee_preference(const FeatureTensor& features,
                            const CriterionFeatureDirections& directions,
                            const WeightScheme& weights, const PreferenceFunction& preference) {
  return global_preference(pairwise_differences(features, directions), weights, preference);
}

RankResult promethee_tensor(const FeatureTensor& features,
                            const CriterionFeatureDirections& directions,
                            const WeightScheme& weights, const PreferenceFunction& preference) {
  return net_flow(promethee_preference(features, directions, weights, preference),
                  features.alternatives());
}

RankResult promethee_matrix(const DecisionMatrix& matrix, const std::vector<Direction>& directions,
                            const WeightScheme& weights, const PreferenceFunction& preference) {
  if (directions.size() != matrix.m()) {
    throw ValidationError("one direction is required per criterion");
  }
  Tensor3 slab(matrix.n(), matrix.m(), 1);
  for (std::size_t i = 0; i < matrix.n(); ++i) {
    for (std::size_t j = 0; j < matrix.m(); ++j) slab(i, j, 0) = matrix(i, j);
  }
  Labels feature{"value"};
  FeatureTensor s(matrix.alternatives(), matrix.criteria(), feature, std::move(slab));
  auto dirs = CriterionFeatureDirections::from_base(matrix.criteria(), directions, feature);
  return promethee_tensor(s, dirs, weights, preference);
}

RankResult topsis_tensor(const FeatureTensor& s, const CriterionFeatureDirections& directions,
                         const WeightScheme& weights) {
  require_shape(s, directions);
  require_weights(s.m(), s.w(), weights);
  if (s.n() < 2) throw ValidationError("ranking needs at least two alternatives");

  const std::size_t n = s.n();
  std::vector<double> d_plus(n, 0.0);
  std::vector<double> d_minus(n, 0.0);
  std::vector<double> v(n);
  for (std::size_t j = 0; j < s.m(); ++j) {
    for (std::size_t l = 0; l < s.w(); ++l) {
      const std::string cell = "(" + s.criteria()[j] + ", " + s.features()[l] + ")";
      double norm = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(s(i, j, l))) {
          throw ValidationError("TOPSIS cannot normalize non-finite value in cell " + cell);
        }
        norm += s(i, j, l) * s(i, j, l);
      }
      norm = std::sqrt(norm);
      if (norm == 0.0) throw ValidationError("TOPSIS column " + cell + " has zero norm");
      for (std::size_t i = 0; i < n; ++i) v[i] = weights(j, l) * s(i, j, l) / norm;
      const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
      const bool maximize = directions(j, l) == Direction::Maximize;
      const double ideal = maximize ? *hi : *lo;
      const double anti = maximize ? *lo : *hi;
      for (std::size_t i = 0; i < n; ++i) {
        d_plus[i] += (v[i] - ideal) * (v[i] - ideal);
        d_minus[i] += (v[i] - anti) * (v[i] - anti);
      }
    }
  }
  std::vector<double> closeness(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double dp = std::sqrt(d_plus[i]);
    const double dm = std::sqrt(d_minus[i]);
    // Every alternative coincides with both ideals: indifferent.
    closeness[i] = dp + dm == 0.0 ? 0.5 : dm / (dp + dm);
  }
  return RankResult::from_scores(s.alternatives(), std::move(closeness));
}

RankDistance rank_distance(const RankResult& a, const RankResult& b) {
  if (a.alternatives.size() != b.alternatives.size()) {
    throw ValidationError("rankings cover different numbers of alternatives");
  }
  std::unordered_map<std::string, std::size_t> b_index;
  for (std::size_t i = 0; i < b.alternatives.size(); ++i) b_index[b.alternatives[i]] = i;
  const auto pos_a = a.positions();
  const auto pos_b = b.positions();
  std::vector<std::size_t> mapped(a.alternatives.size());
  for (std::size_t i = 0; i < a.alternatives.size(); ++i) {
    auto it = b_index.find(a.alternatives[i]);
    if (it == b_index.end()) {
      throw ValidationError("alternative '" + a.alternatives[i] + "' missing from second ranking");
    }
    mapped[i] = pos_b[it->second];
  }

  RankDistance out;
  const std::size_t n = a.alternatives.size();
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      const bool same = (pos_a[x] < pos_a[y]) == (mapped[x] < mapped[y]);
      ++(same ? out.concordant : out.discordant);
    }
  }
  out.pairs = out.concordant + out.discordant;
  out.tau = out.pairs == 0 ? 1.0
                           : (static_cast<double>(out.concordant) -
                              static_cast<double>(out.discordant)) /
                                 static_cast<double>(out.pairs);
  return out;
}

}  // namespace tensorrank
