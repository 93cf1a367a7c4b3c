#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tensorrank/features.hpp"
#include "tensorrank/mcda.hpp"
#include "tensorrank/predict.hpp"
#include "tensorrank/tensor.hpp"

namespace tensorrank {

/// Exact header of the long-format time-series CSV.
inline constexpr std::string_view kTimeSeriesHeader = "alternative,criterion,time,value";

/// Reads the long CSV layout (one record per cell). Alternatives and
/// criteria keep first-appearance order, times are sorted ascending.
/// `source` names the input in error messages.
DecisionTensor parse_timeseries_csv(std::istream& in, std::string_view source = "<stream>");
DecisionTensor parse_timeseries_csv(const std::filesystem::path& path);

/// Reads a long CSV whose third column is an arbitrary label (e.g. a
/// feature id); the header is `alternative,criterion,<axis>,value`.
FeatureTensor parse_feature_csv(std::istream& in, std::string_view source = "<stream>");

/// Converts a wide layout (`alternative,criterion,<t1>,<t2>,...`, one row
/// per fiber) into the long layout.
std::string convert_wide_csv(std::istream& in, std::string_view source = "<stream>");

enum class AggregationMethod { PrometheeTensor, PrometheeMatrix, TopsisTensor };

std::string_view to_string(AggregationMethod m) noexcept;
AggregationMethod parse_method(std::string_view text);

/// Run parameters as written in the config file. Fields left unset are
/// resolved against the data by `resolve`.
struct RunConfig {
  std::optional<int> cutoff;
  std::size_t horizon = 6;
  std::size_t window = 6;
  Labels features = FeatureSet::standard().ids();
  std::map<std::string, Direction> directions;
  std::vector<DirectionOverride> direction_overrides;
  /// Relative tensor-mode weights by criterion then feature; normalized.
  std::map<std::string, std::map<std::string, double>> weights;
  /// Relative matrix-mode weights by criterion; normalized.
  std::map<std::string, double> criterion_weights;
  PredictConfig predict;
  AggregationMethod method = AggregationMethod::PrometheeTensor;
};

/// Parses a YAML config. Unknown keys, malformed values and invariant
/// violations raise ValidationError naming the offending key.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(std::string_view yaml, std::string_view source = "<config>");

/// A RunConfig checked against a data set with every default filled in.
struct ResolvedRun {
  int cutoff = 0;
  std::size_t horizon = 0;
  std::size_t window = 0;
  FeatureSet features = FeatureSet::standard();
  std::vector<Direction> base_directions;
  CriterionFeatureDirections directions;
  WeightScheme weights;
  WeightScheme criterion_weights;
  PredictConfig predict;
  AggregationMethod method = AggregationMethod::PrometheeTensor;
};

ResolvedRun resolve(const RunConfig& config, const DecisionTensor& data);

enum class Format { Table, Csv, JsonLines };

std::string_view to_string(Format f) noexcept;
Format parse_format(std::string_view text);

/// Long records with `axis` as the third column header. Machine formats
/// carry the shortest round-tripping decimal; table format 3 decimals.
std::string emit_tensor(const TimeSeriesTensor& tensor, Format format);
std::string emit_features(const FeatureTensor& features, Format format);
/// Table format lays the tensor out as one row per alternative with
/// feature-major column blocks.
std::string emit_rank(const RankResult& rank, Format format);
std::string emit_preference(const Matrix& preference, const Labels& alternatives, Format format);
std::string emit_diagnostics(const PredictionReport& report, Format format);

/// Reads the CSV produced by emit_rank(..., Format::Csv).
RankResult parse_rank_csv(std::istream& in, std::string_view source = "<stream>");

/// Shortest decimal that parses back to the same double.
std::string format_exact(double v);

}  // namespace tensorrank
