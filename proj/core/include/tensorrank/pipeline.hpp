#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tensorrank/features.hpp"
#include "tensorrank/ingest.hpp"
#include "tensorrank/mcda.hpp"
#include "tensorrank/predict.hpp"
#include "tensorrank/tensor.hpp"

namespace tensorrank {

/// Which evaluations feed the aggregation.
enum class Source {
  Predicted,   // horizon steps forecast from data up to the cutoff
  PastWindow,  // the last `window` observed samples up to the cutoff
  Current,     // the decision matrix at the cutoff
  Actual,      // observed samples for the horizon after the cutoff
};

std::string_view to_string(Source s) noexcept;
Source parse_source(std::string_view text);

struct LabeledRank {
  std::string label;  // "all" or a time label for per-time rankings
  RankResult rank;
};

struct PipelineOutput {
  std::optional<PredictionReport> prediction;
  std::optional<TimeSeriesTensor> series;  // the time tensor that was summarized
  std::optional<FeatureTensor> features;
  std::optional<Matrix> preference;        // PROMETHEE only, single-ranking runs
  /// One ranking for tensor methods and the current source; one per time
  /// label for promethee-matrix on a time-indexed source.
  std::vector<LabeledRank> rankings;
};

/// Observed data from the first label up to and including the cutoff.
DecisionTensor training_data(const DecisionTensor& data, int cutoff);

/// The `run.horizon` observed samples after the cutoff. Throws
/// ValidationError when the data stops short.
DecisionTensor actual_horizon(const DecisionTensor& data, const ResolvedRun& run);

/// The `run.window` samples ending at the cutoff.
DecisionTensor past_window(const DecisionTensor& data, const ResolvedRun& run);

PredictionReport predict_from_cutoff(const DecisionTensor& data, const ResolvedRun& run);

/// Ranks every time slice with classical PROMETHEE II.
std::vector<LabeledRank> rank_each_time(const TimeSeriesTensor& tensor,
                                        const std::vector<Direction>& directions,
                                        const WeightScheme& criterion_weights);

PipelineOutput run_pipeline(const DecisionTensor& data, const ResolvedRun& run, Source source,
                            AggregationMethod method);

}  // namespace tensorrank
