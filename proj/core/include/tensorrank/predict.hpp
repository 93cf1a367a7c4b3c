#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tensorrank/tensor.hpp"

namespace tensorrank {

enum class Algorithm { Rls, Nlms };

std::string_view to_string(Algorithm a) noexcept;
Algorithm parse_algorithm(std::string_view text);

/// Adaptive filter parameters. `forgetting_factor` is used by RLS only;
/// `step_size` and `regularization` by NLMS only.
struct FilterConfig {
  Algorithm algorithm = Algorithm::Rls;
  std::size_t order = 2;
  double forgetting_factor = 1.0;
  double step_size = 0.5;
  double regularization = 1e-6;
  double init_delta = 1e-2;

  /// Throws ValidationError when an invariant is violated.
  void validate() const;
};

/// Tap weights and (for RLS) the M x M inverse-correlation matrix, row-major.
struct FilterState {
  std::vector<double> weights;
  std::vector<double> inverse_correlation;
  std::size_t samples_seen = 0;

  /// w = 0, P = I / delta.
  static FilterState initial(const FilterConfig& config);

  std::size_t order() const noexcept { return weights.size(); }
  double output(std::span<const double> x) const;
};

/// The `order` most recent samples at lag `lag` for the sample at 0-based
/// index `t`, newest first: [h(t-lag), ..., h(t-lag-order+1)]. Empty when
/// there is not enough history.
std::optional<std::vector<double>> regressor(std::span<const double> series, std::size_t t,
                                             std::size_t lag, std::size_t order);

/// One exponentially weighted RLS update. Updates `state` in place and
/// returns the a-priori error d - w'x. Throws NumericError on a non-finite
/// intermediate, tagged with `context`.
double rls_step(FilterState& state, std::span<const double> x, double desired,
                double forgetting_factor, std::string_view context = {});

/// One normalized LMS update: w += mu * e * x / (eps + x'x).
double nlms_step(FilterState& state, std::span<const double> x, double desired, double step_size,
                 double regularization, std::string_view context = {});

struct FiberPrediction {
  double value = 0.0;
  std::vector<double> errors;  // a-priori error per adaptation step
  std::vector<double> weights;
};

/// Trains a fresh filter on `series` (direct strategy: one filter per lag)
/// and returns the `lag`-step-ahead prediction past the last sample.
FiberPrediction predict_fiber(std::span<const double> series, std::size_t lag,
                              const FilterConfig& config, std::string_view context = {});

/// Per-tensor prediction settings. Forgetting factors may be set per
/// criterion id; criteria not listed use `filter.forgetting_factor`.
struct PredictConfig {
  FilterConfig filter;
  std::map<std::string, double> forgetting_factors;

  FilterConfig for_criterion(const std::string& criterion) const;
};

struct FiberDiagnostics {
  std::size_t alternative = 0;
  std::size_t criterion = 0;
  std::size_t step = 0;  // 1-based prediction step
  std::vector<double> errors;
  std::vector<double> weights;
};

struct PredictionReport {
  PredictionTensor predictions;
  std::vector<FiberDiagnostics> diagnostics;  // ordered by (alternative, criterion, step)
};

/// Predicts steps 1..horizon for every fiber of `observed`. Horizon labels
/// continue the time labels with unit spacing.
PredictionReport predict_tensor(const DecisionTensor& observed, std::size_t horizon,
                                const PredictConfig& config);

}  // namespace tensorrank
