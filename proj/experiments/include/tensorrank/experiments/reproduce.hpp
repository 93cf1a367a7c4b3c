#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tensorrank/experiments/golden.hpp"
#include "tensorrank/ingest.hpp"
#include "tensorrank/pipeline.hpp"

namespace tensorrank::experiments {

/// Every strategy of the published comparison, computed on one data set.
struct Reproduction {
  PredictionReport rls;
  PredictionReport nlms;
  FeatureTensor predicted_features;  // from the RLS forecasts
  FeatureTensor nlms_features;
  FeatureTensor actual_features;     // observed horizon
  FeatureTensor past_features;       // observed window ending at the cutoff
  DecisionMatrix current;
  /// Keyed by golden case id (f_hat, f_star, g_c, g_hat_2013, ...).
  std::map<std::string, RankResult> rankings;
};

/// Runs all strategies. The NLMS variant reuses `run` with the algorithm
/// switched; the data must extend `run.horizon` samples past the cutoff.
Reproduction reproduce(const DecisionTensor& data, const ResolvedRun& run);

/// One printed feature value next to the recomputed one.
struct FeatureCheck {
  std::string alternative;
  std::string criterion;
  std::string feature;
  double printed = 0.0;
  double computed = 0.0;
  double tolerance = 0.0;
  bool within = false;
};

/// Printed values carry three decimals: a value matches within
/// max(0.5% of |printed|, 0.005).
double printed_tolerance(double printed) noexcept;

std::vector<FeatureCheck> compare_features(const FeatureTensor& computed,
                                           const FeatureTensor& printed,
                                           const PublishedTables& tables);

struct Relation {
  std::string description;
  bool holds = false;
  bool required = false;
};

struct ReproductionReport {
  std::vector<GoldenOutcome> outcomes;
  std::vector<Relation> relations;
  std::vector<FeatureCheck> past_feature_checks;        // exact policy
  std::vector<FeatureCheck> prediction_feature_checks;  // report-only
  std::vector<FeatureCheck> current_checks;             // report-only

  /// Exact cases matched, required relations hold, past-feature values in tolerance.
  bool all_required_pass() const;
  std::string text(const PublishedTables& tables) const;
};

ReproductionReport evaluate(const Reproduction& repro, const PublishedTables& tables);

/// Report for data that cannot be compared with the fixture (different
/// alternatives or criteria): lists every computed ranking and `reason`.
std::string uncompared_report(const Reproduction& repro, std::string_view reason);

}  // namespace tensorrank::experiments
