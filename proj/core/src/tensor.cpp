#include "tensorrank/tensor.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_set>

#include "tensorrank/error.hpp"

namespace tensorrank {

namespace {

void require_unique(const Labels& labels, std::string_view axis) {
  std::unordered_set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) {
      throw ValidationError("duplicate " + std::string(axis) + " label '" + l + "'");
    }
  }
}

std::size_t find_label(const Labels& labels, std::string_view id, std::string_view axis) {
  auto it = std::find(labels.begin(), labels.end(), id);
  if (it == labels.end()) {
    throw IndexError("unknown " + std::string(axis) + " '" + std::string(id) + "'");
  }
  return static_cast<std::size_t>(it - labels.begin());
}

}  // namespace

std::string_view to_string(Direction d) noexcept {
  return d == Direction::Maximize ? "max" : "min";
}

Direction parse_direction(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "max" || lower == "maximize") return Direction::Maximize;
  if (lower == "min" || lower == "minimize") return Direction::Minimize;
  throw ValidationError("unknown direction '" + std::string(text) + "' (expected max or min)");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Tensor3::Tensor3(std::size_t d0, std::size_t d1, std::size_t d2, double fill)
    : d0_(d0), d1_(d1), d2_(d2), data_(d0 * d1 * d2, fill) {}

Tensor3::Tensor3(std::size_t d0, std::size_t d1, std::size_t d2, std::vector<double> values)
    : d0_(d0), d1_(d1), d2_(d2), data_(std::move(values)) {
  if (data_.size() != d0 * d1 * d2) {
    throw ValidationError("tensor value count " + std::to_string(data_.size()) +
                          " does not match shape " + std::to_string(d0) + "x" +
                          std::to_string(d1) + "x" + std::to_string(d2));
  }
}

DecisionMatrix::DecisionMatrix(Labels alternatives, Labels criteria, Matrix values)
    : alternatives_(std::move(alternatives)),
      criteria_(std::move(criteria)),
      values_(std::move(values)) {
  if (values_.rows() != alternatives_.size() || values_.cols() != criteria_.size()) {
    throw ValidationError("decision matrix shape does not match its labels");
  }
  for (double v : values_.data()) {
    if (!std::isfinite(v)) throw ValidationError("decision matrix has a non-finite entry");
  }
  require_unique(alternatives_, "alternative");
  require_unique(criteria_, "criterion");
}

TimeSeriesTensor::TimeSeriesTensor(Labels alternatives, Labels criteria, std::vector<int> times,
                                   Tensor3 values)
    : alternatives_(std::move(alternatives)),
      criteria_(std::move(criteria)),
      times_(std::move(times)),
      values_(std::move(values)) {
  if (alternatives_.empty() || criteria_.empty() || times_.empty()) {
    throw ValidationError("every tensor axis needs at least one label");
  }
  if (values_.dim0() != alternatives_.size() || values_.dim1() != criteria_.size() ||
      values_.dim2() != times_.size()) {
    throw ValidationError("tensor shape does not match its labels");
  }
  require_unique(alternatives_, "alternative");
  require_unique(criteria_, "criterion");
  for (std::size_t t = 1; t < times_.size(); ++t) {
    if (times_[t] <= times_[t - 1]) {
      throw ValidationError("time labels must be strictly increasing (" +
                            std::to_string(times_[t - 1]) + " then " + std::to_string(times_[t]) +
                            ")");
    }
  }
  for (std::size_t i = 0; i < n(); ++i) {
    for (std::size_t j = 0; j < m(); ++j) {
      for (std::size_t t = 0; t < length(); ++t) {
        if (!std::isfinite(values_(i, j, t))) {
          throw ValidationError("non-finite value at (" + alternatives_[i] + ", " +
                                criteria_[j] + ", " + std::to_string(times_[t]) + ")");
        }
      }
    }
  }
}

std::span<const double> TimeSeriesTensor::fiber(std::size_t alternative,
                                                std::size_t criterion) const {
  if (alternative >= n() || criterion >= m()) {
    throw IndexError("fiber index (" + std::to_string(alternative) + ", " +
                     std::to_string(criterion) + ") out of range for " + std::to_string(n()) +
                     "x" + std::to_string(m()));
  }
  return values_.fiber(alternative, criterion);
}

std::span<const double> TimeSeriesTensor::fiber(std::string_view alternative,
                                                std::string_view criterion) const {
  return fiber(alternative_index(alternative), criterion_index(criterion));
}

double TimeSeriesTensor::at(std::size_t i, std::size_t j, std::size_t t) const {
  if (t >= length()) throw IndexError("time index out of range");
  return fiber(i, j)[t];
}

std::size_t TimeSeriesTensor::alternative_index(std::string_view id) const {
  return find_label(alternatives_, id, "alternative");
}

std::size_t TimeSeriesTensor::criterion_index(std::string_view id) const {
  return find_label(criteria_, id, "criterion");
}

std::optional<std::size_t> TimeSeriesTensor::time_index(int label) const noexcept {
  auto it = std::lower_bound(times_.begin(), times_.end(), label);
  if (it == times_.end() || *it != label) return std::nullopt;
  return static_cast<std::size_t>(it - times_.begin());
}

DecisionMatrix TimeSeriesTensor::at_time(int label) const {
  auto t = time_index(label);
  if (!t) throw ValidationError("unknown time label " + std::to_string(label));
  Matrix values(n(), m());
  for (std::size_t i = 0; i < n(); ++i) {
    for (std::size_t j = 0; j < m(); ++j) values(i, j) = values_(i, j, *t);
  }
  return DecisionMatrix(alternatives_, criteria_, std::move(values));
}

DecisionTensor DecisionTensor::window(int from, int to) const {
  auto first = time_index(from);
  auto last = time_index(to);
  if (!first) throw ValidationError("unknown time label " + std::to_string(from));
  if (!last) throw ValidationError("unknown time label " + std::to_string(to));
  if (*first > *last) {
    throw ValidationError("window start " + std::to_string(from) + " is after end " +
                          std::to_string(to));
  }
  const std::size_t len = *last - *first + 1;
  Tensor3 out(n(), m(), len);
  for (std::size_t i = 0; i < n(); ++i) {
    for (std::size_t j = 0; j < m(); ++j) {
      auto src = values_.fiber(i, j).subspan(*first, len);
      std::copy(src.begin(), src.end(), out.fiber(i, j).begin());
    }
  }
  std::vector<int> labels(times_.begin() + static_cast<std::ptrdiff_t>(*first),
                          times_.begin() + static_cast<std::ptrdiff_t>(*last + 1));
  return DecisionTensor(alternatives_, criteria_, std::move(labels), std::move(out));
}

FeatureTensor::FeatureTensor(Labels alternatives, Labels criteria, Labels features,
                             Tensor3 values)
    : alternatives_(std::move(alternatives)),
      criteria_(std::move(criteria)),
      features_(std::move(features)),
      values_(std::move(values)) {
  if (alternatives_.empty() || criteria_.empty() || features_.empty()) {
    throw ValidationError("feature tensor needs at least one alternative, criterion and feature");
  }
  if (values_.dim0() != n() || values_.dim1() != m() || values_.dim2() != w()) {
    throw ValidationError("feature tensor shape does not match its labels");
  }
  require_unique(alternatives_, "alternative");
  require_unique(criteria_, "criterion");
  require_unique(features_, "feature");
  for (double v : values_.data()) {
    if (std::isnan(v) || v == -std::numeric_limits<double>::infinity()) {
      throw ValidationError("feature tensor holds a NaN or -inf entry");
    }
  }
}

std::vector<std::array<std::size_t, 3>> FeatureTensor::sentinel_cells() const {
  std::vector<std::array<std::size_t, 3>> out;
  for (std::size_t i = 0; i < n(); ++i) {
    for (std::size_t j = 0; j < m(); ++j) {
      for (std::size_t l = 0; l < w(); ++l) {
        if (std::isinf(values_(i, j, l))) out.push_back({i, j, l});
      }
    }
  }
  return out;
}

CriterionFeatureDirections::CriterionFeatureDirections(Labels criteria,
                                                       std::vector<Direction> base,
                                                       Labels features,
                                                       std::vector<Direction> cells)
    : criteria_(std::move(criteria)),
      base_(std::move(base)),
      features_(std::move(features)),
      cells_(std::move(cells)) {
  if (base_.size() != criteria_.size()) {
    throw ValidationError("one base direction is required per criterion");
  }
  if (cells_.size() != criteria_.size() * features_.size()) {
    throw ValidationError("every (criterion, feature) direction cell must be populated");
  }
}

CriterionFeatureDirections CriterionFeatureDirections::from_base(Labels criteria,
                                                                 std::vector<Direction> base,
                                                                 Labels features) {
  std::vector<Direction> cells;
  cells.reserve(base.size() * features.size());
  for (Direction d : base) cells.insert(cells.end(), features.size(), d);
  return CriterionFeatureDirections(std::move(criteria), std::move(base), std::move(features),
                                    std::move(cells));
}

CriterionFeatureDirections CriterionFeatureDirections::with_override(std::size_t criterion,
                                                                     std::size_t feature,
                                                                     Direction d) const {
  if (criterion >= criteria_.size() || feature >= features_.size()) {
    throw IndexError("direction override cell out of range");
  }
  auto copy = *this;
  copy.cells_[criterion * features_.size() + feature] = d;
  return copy;
}

}  // namespace tensorrank
