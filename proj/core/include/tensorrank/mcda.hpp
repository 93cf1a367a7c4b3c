#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "tensorrank/tensor.hpp"

namespace tensorrank {

/// Non-negative weights over (criterion, feature) cells summing to 1.
/// Matrix-mode (per-criterion) weights are the single-feature case.
class WeightScheme {
 public:
  /// Throws ValidationError on a negative/non-finite weight or a sum
  /// further than 1e-9 from 1.
  explicit WeightScheme(Matrix cells);

  static WeightScheme uniform(std::size_t criteria, std::size_t features);
  static WeightScheme per_criterion(const std::vector<double>& weights);
  /// Scales non-negative relative weights to sum to 1.
  static WeightScheme normalized(Matrix relative);

  std::size_t criteria() const noexcept { return cells_.rows(); }
  std::size_t features() const noexcept { return cells_.cols(); }
  double operator()(std::size_t criterion, std::size_t feature) const noexcept {
    return cells_(criterion, feature);
  }
  const Matrix& cells() const noexcept { return cells_; }

 private:
  Matrix cells_;
};

/// Signed differences d(i, k, j, l), oriented so that a positive value
/// always means alternative i is preferred to k on cell (j, l).
class PairwiseTensor {
 public:
  PairwiseTensor(std::size_t n, std::size_t m, std::size_t w);

  std::size_t n() const noexcept { return n_; }
  std::size_t m() const noexcept { return m_; }
  std::size_t w() const noexcept { return w_; }

  double& operator()(std::size_t i, std::size_t k, std::size_t j, std::size_t l) noexcept {
    return data_[((i * n_ + k) * m_ + j) * w_ + l];
  }
  double operator()(std::size_t i, std::size_t k, std::size_t j, std::size_t l) const noexcept {
    return data_[((i * n_ + k) * m_ + j) * w_ + l];
  }

 private:
  std::size_t n_, m_, w_;
  std::vector<double> data_;
};

/// Scores with the induced ordering. `ordering` lists alternative indices
/// by descending score; scores within `kTieTolerance` are tied, kept in
/// input order, and reported together in `tie_groups` (groups of size 1
/// are omitted).
struct RankResult {
  static constexpr double kTieTolerance = 1e-12;

  Labels alternatives;
  std::vector<double> scores;
  std::vector<std::size_t> ordering;
  std::vector<std::vector<std::size_t>> tie_groups;

  static RankResult from_scores(Labels alternatives, std::vector<double> scores);

  /// Alternative ids in rank order.
  Labels ordered_ids() const;
  /// 0-based position of each alternative in the ordering.
  std::vector<std::size_t> positions() const;
};

using PreferenceFunction = std::function<double(double)>;

/// (sgn(d) + 1) / 2: 1 for d > 0, 0.5 for d == 0, 0 for d < 0.
double usual_preference(double d) noexcept;

PairwiseTensor pairwise_differences(const FeatureTensor& features,
                                    const CriterionFeatureDirections& directions);

/// pi(i, k) = sum_{j,l} gamma(j,l) P(d(i,k,j,l)); zero diagonal.
Matrix global_preference(const PairwiseTensor& pairwise, const WeightScheme& weights,
                         const PreferenceFunction& preference = usual_preference);

/// Net flow: mean outgoing minus mean incoming preference.
RankResult net_flow(const Matrix& preference, const Labels& alternatives);

/// Global preference matrix of the tensor pipeline (for reporting).
Matrix promethee_preference(const FeatureTensor& features,
                            const CriterionFeatureDirections& directions,
                            const WeightScheme& weights,
                            const PreferenceFunction& preference = usual_preference);

RankResult promethee_tensor(const FeatureTensor& features,
                            const CriterionFeatureDirections& directions,
                            const WeightScheme& weights,
                            const PreferenceFunction& preference = usual_preference);

/// Classical PROMETHEE II: the tensor pipeline on a single slab equal to
/// the matrix. `weights` must be per-criterion (one feature column).
RankResult promethee_matrix(const DecisionMatrix& matrix, const std::vector<Direction>& directions,
                            const WeightScheme& weights,
                            const PreferenceFunction& preference = usual_preference);

/// Tensor TOPSIS: vector normalization per (j, l) slice, weighting,
/// Euclidean distances to ideal/anti-ideal over all cells, closeness
/// D- / (D+ + D-).
RankResult topsis_tensor(const FeatureTensor& features,
                         const CriterionFeatureDirections& directions,
                         const WeightScheme& weights);

struct RankDistance {
  double tau = 0.0;
  std::size_t concordant = 0;
  std::size_t discordant = 0;
  std::size_t pairs = 0;
};

/// Kendall tau between two orderings of the same alternative set.
RankDistance rank_distance(const RankResult& a, const RankResult& b);

}  // namespace tensorrank
