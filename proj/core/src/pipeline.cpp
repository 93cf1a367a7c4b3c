#include "tensorrank/pipeline.hpp"

#include "tensorrank/error.hpp"

namespace tensorrank {

std::string_view to_string(Source s) noexcept {
  switch (s) {
    case Source::Predicted: return "predicted";
    case Source::PastWindow: return "past-window";
    case Source::Current: return "current";
    case Source::Actual: return "actual";
  }
  return "predicted";
}

Source parse_source(std::string_view text) {
  if (text == "predicted") return Source::Predicted;
  if (text == "past-window") return Source::PastWindow;
  if (text == "current") return Source::Current;
  if (text == "actual") return Source::Actual;
  throw ValidationError("unknown source '" + std::string(text) +
                        "' (expected predicted, past-window, current or actual)");
}

DecisionTensor training_data(const DecisionTensor& data, int cutoff) {
  return data.window(data.times().front(), cutoff);
}

DecisionTensor actual_horizon(const DecisionTensor& data, const ResolvedRun& run) {
  const std::size_t c = *data.time_index(run.cutoff);
  if (c + run.horizon >= data.length()) {
    throw ValidationError("data ends at " + std::to_string(data.times().back()) + "; the " +
                          std::to_string(run.horizon) + " samples after cutoff " +
                          std::to_string(run.cutoff) + " are not all observed");
  }
  return data.window(data.times()[c + 1], data.times()[c + run.horizon]);
}

DecisionTensor past_window(const DecisionTensor& data, const ResolvedRun& run) {
  const std::size_t c = *data.time_index(run.cutoff);
  return data.window(data.times()[c + 1 - run.window], run.cutoff);
}

PredictionReport predict_from_cutoff(const DecisionTensor& data, const ResolvedRun& run) {
  return predict_tensor(training_data(data, run.cutoff), run.horizon, run.predict);
}

std::vector<LabeledRank> rank_each_time(const TimeSeriesTensor& tensor,
                                        const std::vector<Direction>& directions,
                                        const WeightScheme& criterion_weights) {
  std::vector<LabeledRank> out;
  for (int t : tensor.times()) {
    out.push_back({std::to_string(t),
                   promethee_matrix(tensor.at_time(t), directions, criterion_weights)});
  }
  return out;
}

PipelineOutput run_pipeline(const DecisionTensor& data, const ResolvedRun& run, Source source,
                            AggregationMethod method) {
  PipelineOutput out;

  if (source == Source::Current) {
    const auto matrix = data.at_time(run.cutoff);
    if (method == AggregationMethod::TopsisTensor) {
      Tensor3 slab(matrix.n(), matrix.m(), 1);
      for (std::size_t i = 0; i < matrix.n(); ++i) {
        for (std::size_t j = 0; j < matrix.m(); ++j) slab(i, j, 0) = matrix(i, j);
      }
      Labels value{"value"};
      FeatureTensor s(matrix.alternatives(), matrix.criteria(), value, std::move(slab));
      auto dirs = CriterionFeatureDirections::from_base(matrix.criteria(), run.base_directions,
                                                        value);
      out.rankings.push_back({"all", topsis_tensor(s, dirs, run.criterion_weights)});
      out.features = std::move(s);
    } else {
      out.rankings.push_back(
          {std::to_string(run.cutoff),
           promethee_matrix(matrix, run.base_directions, run.criterion_weights)});
    }
    return out;
  }

  switch (source) {
    case Source::Predicted: {
      out.prediction = predict_from_cutoff(data, run);
      out.series = out.prediction->predictions;
      break;
    }
    case Source::PastWindow: out.series = past_window(data, run); break;
    case Source::Actual: out.series = actual_horizon(data, run); break;
    case Source::Current: break;
  }

  if (method == AggregationMethod::PrometheeMatrix) {
    out.rankings = rank_each_time(*out.series, run.base_directions, run.criterion_weights);
    return out;
  }

  out.features = extract_features(*out.series, run.features);
  if (method == AggregationMethod::TopsisTensor) {
    out.rankings.push_back({"all", topsis_tensor(*out.features, run.directions, run.weights)});
  } else {
    out.preference = promethee_preference(*out.features, run.directions, run.weights);
    out.rankings.push_back({"all", net_flow(*out.preference, out.features->alternatives())});
  }
  return out;
}

}  // namespace tensorrank
