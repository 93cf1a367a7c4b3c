#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tensorrank {

using Labels = std::vector<std::string>;

enum class Direction { Maximize, Minimize };

std::string_view to_string(Direction d) noexcept;
/// Accepts "max"/"maximize"/"min"/"minimize" (case-insensitive).
Direction parse_direction(std::string_view text);

/// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }
  const std::vector<double>& data() const noexcept { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Dense three-way array, row-major with the last axis contiguous so that
/// a fiber (i, j, :) is a span.
class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(std::size_t d0, std::size_t d1, std::size_t d2, double fill = 0.0);
  Tensor3(std::size_t d0, std::size_t d1, std::size_t d2, std::vector<double> values);

  std::size_t dim0() const noexcept { return d0_; }
  std::size_t dim1() const noexcept { return d1_; }
  std::size_t dim2() const noexcept { return d2_; }
  std::size_t size() const noexcept { return data_.size(); }

  double& operator()(std::size_t i, std::size_t j, std::size_t k) noexcept {
    return data_[(i * d1_ + j) * d2_ + k];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const noexcept {
    return data_[(i * d1_ + j) * d2_ + k];
  }

  std::span<const double> fiber(std::size_t i, std::size_t j) const noexcept {
    return {data_.data() + (i * d1_ + j) * d2_, d2_};
  }
  std::span<double> fiber(std::size_t i, std::size_t j) noexcept {
    return {data_.data() + (i * d1_ + j) * d2_, d2_};
  }

  const std::vector<double>& data() const noexcept { return data_; }

 private:
  std::size_t d0_ = 0;
  std::size_t d1_ = 0;
  std::size_t d2_ = 0;
  std::vector<double> data_;
};

/// Alternatives x criteria snapshot.
class DecisionMatrix {
 public:
  DecisionMatrix(Labels alternatives, Labels criteria, Matrix values);

  const Labels& alternatives() const noexcept { return alternatives_; }
  const Labels& criteria() const noexcept { return criteria_; }
  const Matrix& values() const noexcept { return values_; }
  std::size_t n() const noexcept { return alternatives_.size(); }
  std::size_t m() const noexcept { return criteria_.size(); }
  double operator()(std::size_t i, std::size_t j) const noexcept { return values_(i, j); }

 private:
  Labels alternatives_;
  Labels criteria_;
  Matrix values_;
};

/// Alternatives x criteria x time panel with integer time labels (years).
/// Immutable after construction; the constructor enforces shape, label
/// uniqueness, strictly increasing time labels, and finite entries.
class TimeSeriesTensor {
 public:
  TimeSeriesTensor(Labels alternatives, Labels criteria, std::vector<int> times, Tensor3 values);

  const Labels& alternatives() const noexcept { return alternatives_; }
  const Labels& criteria() const noexcept { return criteria_; }
  const std::vector<int>& times() const noexcept { return times_; }
  const Tensor3& values() const noexcept { return values_; }

  std::size_t n() const noexcept { return alternatives_.size(); }
  std::size_t m() const noexcept { return criteria_.size(); }
  std::size_t length() const noexcept { return times_.size(); }

  /// Series of (alternative, criterion) in time order. Throws IndexError.
  std::span<const double> fiber(std::size_t alternative, std::size_t criterion) const;
  std::span<const double> fiber(std::string_view alternative, std::string_view criterion) const;

  double at(std::size_t i, std::size_t j, std::size_t t) const;

  std::size_t alternative_index(std::string_view id) const;
  std::size_t criterion_index(std::string_view id) const;
  std::optional<std::size_t> time_index(int label) const noexcept;

  /// Decision matrix at one time label. Throws ValidationError if unknown.
  DecisionMatrix at_time(int label) const;

 protected:
  Labels alternatives_;
  Labels criteria_;
  std::vector<int> times_;
  Tensor3 values_;
};

/// Observed evaluations.
class DecisionTensor : public TimeSeriesTensor {
 public:
  using TimeSeriesTensor::TimeSeriesTensor;

  /// Inclusive label range [from, to], order preserved.
  DecisionTensor window(int from, int to) const;
};

/// Predicted evaluations; the last axis is the prediction step, labelled
/// with the time labels it forecasts.
class PredictionTensor : public TimeSeriesTensor {
 public:
  using TimeSeriesTensor::TimeSeriesTensor;
};

/// Alternatives x criteria x features. Entries are finite except for the
/// +infinity "worst case" sentinel a feature may emit (see features.hpp).
class FeatureTensor {
 public:
  FeatureTensor(Labels alternatives, Labels criteria, Labels features, Tensor3 values);

  const Labels& alternatives() const noexcept { return alternatives_; }
  const Labels& criteria() const noexcept { return criteria_; }
  const Labels& features() const noexcept { return features_; }
  const Tensor3& values() const noexcept { return values_; }

  std::size_t n() const noexcept { return alternatives_.size(); }
  std::size_t m() const noexcept { return criteria_.size(); }
  std::size_t w() const noexcept { return features_.size(); }

  double operator()(std::size_t i, std::size_t j, std::size_t l) const noexcept {
    return values_(i, j, l);
  }

  /// Cells holding the sentinel, as (alternative, criterion, feature).
  std::vector<std::array<std::size_t, 3>> sentinel_cells() const;

 private:
  Labels alternatives_;
  Labels criteria_;
  Labels features_;
  Tensor3 values_;
};

/// Orientation of every (criterion, feature) cell, plus the per-criterion
/// base orientation used by matrix-mode aggregation.
class CriterionFeatureDirections {
 public:
  CriterionFeatureDirections(Labels criteria, std::vector<Direction> base, Labels features,
                             std::vector<Direction> cells);

  /// Every cell inherits the base direction of its criterion.
  static CriterionFeatureDirections from_base(Labels criteria, std::vector<Direction> base,
                                              Labels features);

  const Labels& criteria() const noexcept { return criteria_; }
  const Labels& features() const noexcept { return features_; }
  Direction base(std::size_t criterion) const noexcept { return base_[criterion]; }
  const std::vector<Direction>& base() const noexcept { return base_; }
  Direction operator()(std::size_t criterion, std::size_t feature) const noexcept {
    return cells_[criterion * features_.size() + feature];
  }

  CriterionFeatureDirections with_override(std::size_t criterion, std::size_t feature,
                                           Direction d) const;

 private:
  Labels criteria_;
  std::vector<Direction> base_;
  Labels features_;
  std::vector<Direction> cells_;
};

}  // namespace tensorrank
