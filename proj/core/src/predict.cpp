#include "tensorrank/predict.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "tensorrank/error.hpp"

namespace tensorrank {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

[[noreturn]] void non_finite(std::string_view what, std::string_view context) {
  std::string msg = "non-finite ";
  msg += what;
  if (!context.empty()) {
    msg += " in ";
    msg += context;
  }
  throw NumericError(msg);
}

void check_dims(const FilterState& state, std::span<const double> x) {
  if (x.size() != state.order() || state.order() == 0) {
    throw ValidationError("regressor length " + std::to_string(x.size()) +
                          " does not match filter order " + std::to_string(state.order()));
  }
}

}  // namespace

std::string_view to_string(Algorithm a) noexcept { return a == Algorithm::Rls ? "rls" : "nlms"; }

Algorithm parse_algorithm(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "rls") return Algorithm::Rls;
  if (lower == "nlms") return Algorithm::Nlms;
  throw ValidationError("unknown algorithm '" + std::string(text) + "' (expected rls or nlms)");
}

void FilterConfig::validate() const {
  if (order < 1) throw ValidationError("filter order must be at least 1");
  if (!(forgetting_factor > 0.0 && forgetting_factor <= 1.0)) {
    throw ValidationError("forgetting factor must lie in (0, 1], got " +
                          std::to_string(forgetting_factor));
  }
  if (!(step_size > 0.0)) throw ValidationError("NLMS step size must be positive");
  if (!(regularization > 0.0)) throw ValidationError("NLMS regularization must be positive");
  if (!(init_delta > 0.0)) throw ValidationError("RLS init delta must be positive");
}

FilterState FilterState::initial(const FilterConfig& config) {
  config.validate();
  FilterState s;
  const std::size_t m = config.order;
  s.weights.assign(m, 0.0);
  if (config.algorithm == Algorithm::Rls) {
    s.inverse_correlation.assign(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) s.inverse_correlation[i * m + i] = 1.0 / config.init_delta;
  }
  return s;
}

double FilterState::output(std::span<const double> x) const { return dot(weights, x); }

std::optional<std::vector<double>> regressor(std::span<const double> series, std::size_t t,
                                             std::size_t lag, std::size_t order) {
  // Oldest sample needed is t - lag - order + 1.
  if (order == 0 || t >= series.size() || t + 1 < lag + order) return std::nullopt;
  std::vector<double> x(order);
  for (std::size_t k = 0; k < order; ++k) x[k] = series[t - lag - k];
  return x;
}

double rls_step(FilterState& state, std::span<const double> x, double desired,
                double forgetting_factor, std::string_view context) {
  check_dims(state, x);
  const std::size_t m = state.order();
  if (state.inverse_correlation.size() != m * m) {
    throw ValidationError("RLS state has no inverse-correlation matrix");
  }
  auto& p = state.inverse_correlation;

  std::vector<double> px(m, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < m; ++c) px[r] += p[r * m + c] * x[c];
  }
  const double denom = forgetting_factor + dot(x, px);
  if (!std::isfinite(denom) || denom == 0.0) non_finite("RLS gain denominator", context);

  const double error = desired - state.output(x);
  if (!std::isfinite(error)) non_finite("a-priori error", context);

  std::vector<double> gain(m);
  for (std::size_t r = 0; r < m; ++r) gain[r] = px[r] / denom;
  for (std::size_t r = 0; r < m; ++r) state.weights[r] += gain[r] * error;

  // P <- (P - k (Px)') / rho, then symmetrize; x'P == (Px)' since P is symmetric.
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      p[r * m + c] = (p[r * m + c] - gain[r] * px[c]) / forgetting_factor;
    }
  }
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = r + 1; c < m; ++c) {
      const double avg = 0.5 * (p[r * m + c] + p[c * m + r]);
      p[r * m + c] = avg;
      p[c * m + r] = avg;
    }
  }
  for (double v : state.weights) {
    if (!std::isfinite(v)) non_finite("RLS weight", context);
  }
  for (double v : p) {
    if (!std::isfinite(v)) non_finite("RLS inverse-correlation entry", context);
  }
  ++state.samples_seen;
  return error;
}

double nlms_step(FilterState& state, std::span<const double> x, double desired, double step_size,
                 double regularization, std::string_view context) {
  check_dims(state, x);
  const double error = desired - state.output(x);
  if (!std::isfinite(error)) non_finite("a-priori error", context);
  const double scale = step_size * error / (regularization + dot(x, x));
  for (std::size_t k = 0; k < x.size(); ++k) state.weights[k] += scale * x[k];
  for (double v : state.weights) {
    if (!std::isfinite(v)) non_finite("NLMS weight", context);
  }
  ++state.samples_seen;
  return error;
}

FiberPrediction predict_fiber(std::span<const double> series, std::size_t lag,
                              const FilterConfig& config, std::string_view context) {
  config.validate();
  if (lag < 1) throw ValidationError("prediction step must be at least 1");
  const std::size_t needed = lag + config.order;
  if (series.size() < needed) {
    std::string msg = "series";
    if (!context.empty()) {
      msg += " ";
      msg += context;
    }
    msg += " has " + std::to_string(series.size()) + " samples; step " + std::to_string(lag) +
           " with order " + std::to_string(config.order) + " needs at least " +
           std::to_string(needed);
    throw ValidationError(msg);
  }

  FilterState state = FilterState::initial(config);
  FiberPrediction out;
  out.errors.reserve(series.size() - needed + 1);
  for (std::size_t t = needed - 1; t < series.size(); ++t) {
    const auto x = regressor(series, t, lag, config.order);
    const double e =
        config.algorithm == Algorithm::Rls
            ? rls_step(state, *x, series[t], config.forgetting_factor, context)
            : nlms_step(state, *x, series[t], config.step_size, config.regularization, context);
    out.errors.push_back(e);
  }

  // Apply the trained weights to the newest samples: h(T), ..., h(T-M+1).
  const std::size_t last = series.size() - 1;
  double value = 0.0;
  for (std::size_t k = 0; k < config.order; ++k) value += state.weights[k] * series[last - k];
  if (!std::isfinite(value)) non_finite("prediction", context);
  out.value = value;
  out.weights = std::move(state.weights);
  return out;
}

FilterConfig PredictConfig::for_criterion(const std::string& criterion) const {
  FilterConfig cfg = filter;
  if (auto it = forgetting_factors.find(criterion); it != forgetting_factors.end()) {
    cfg.forgetting_factor = it->second;
  }
  return cfg;
}

PredictionReport predict_tensor(const DecisionTensor& observed, std::size_t horizon,
                                const PredictConfig& config) {
  if (horizon < 1) throw ValidationError("prediction horizon must be at least 1");
  for (const auto& [criterion, rho] : config.forgetting_factors) {
    observed.criterion_index(criterion);
    (void)rho;
  }

  const std::size_t n = observed.n();
  const std::size_t m = observed.m();
  Tensor3 values(n, m, horizon);
  std::vector<FiberDiagnostics> diagnostics;
  diagnostics.reserve(n * m * horizon);

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const FilterConfig cfg = config.for_criterion(observed.criteria()[j]);
      const auto series = observed.fiber(i, j);
      for (std::size_t step = 1; step <= horizon; ++step) {
        const std::string context = "(" + observed.alternatives()[i] + ", " +
                                    observed.criteria()[j] + ", step " + std::to_string(step) +
                                    ")";
        auto fp = predict_fiber(series, step, cfg, context);
        values(i, j, step - 1) = fp.value;
        diagnostics.push_back({i, j, step, std::move(fp.errors), std::move(fp.weights)});
      }
    }
  }

  std::vector<int> labels(horizon);
  for (std::size_t s = 0; s < horizon; ++s) {
    labels[s] = observed.times().back() + static_cast<int>(s + 1);
  }
  return {PredictionTensor(observed.alternatives(), observed.criteria(), std::move(labels),
                           std::move(values)),
          std::move(diagnostics)};
}

}  // namespace tensorrank
