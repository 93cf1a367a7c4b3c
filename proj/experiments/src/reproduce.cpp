#include "tensorrank/experiments/reproduce.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "tensorrank/error.hpp"

namespace tensorrank::experiments {

namespace {

PredictionReport predict_with(const DecisionTensor& data, ResolvedRun run, Algorithm algorithm) {
  run.predict.filter.algorithm = algorithm;
  return predict_from_cutoff(data, run);
}

/// Compares two orderings; a strategy that produced no ranking makes the
/// relation fail regardless of its polarity.
Relation order_relation(const Reproduction& r, std::string description, const std::string& a,
                        const std::string& b, bool equal, bool required) {
  auto ia = r.rankings.find(a);
  auto ib = r.rankings.find(b);
  if (ia == r.rankings.end() || ib == r.rankings.end()) {
    return {std::move(description) + " [not computed]", false, required};
  }
  const bool same = ia->second.ordered_ids() == ib->second.ordered_ids();
  return {std::move(description), same == equal, required};
}

std::string fmt(double v, int precision = 3) {
  if (std::isinf(v)) return "inf";
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << v;
  return os.str();
}

}  // namespace

Reproduction reproduce(const DecisionTensor& data, const ResolvedRun& run) {
  auto rls = predict_with(data, run, Algorithm::Rls);
  auto nlms = predict_with(data, run, Algorithm::Nlms);
  const auto actual = actual_horizon(data, run);
  const auto past = past_window(data, run);

  auto predicted_features = extract_features(rls.predictions, run.features);
  auto nlms_features = extract_features(nlms.predictions, run.features);
  Reproduction r{std::move(rls),
                 std::move(nlms),
                 std::move(predicted_features),
                 std::move(nlms_features),
                 extract_features(actual, run.features),
                 extract_features(past, run.features),
                 data.at_time(run.cutoff),
                 {}};

  auto& out = r.rankings;
  out.emplace("f_hat", promethee_tensor(r.predicted_features, run.directions, run.weights));
  out.emplace("f_star", promethee_tensor(r.actual_features, run.directions, run.weights));
  out.emplace("g_c", promethee_matrix(r.current, run.base_directions, run.criterion_weights));
  out.emplace("g_past", promethee_tensor(r.past_features, run.directions, run.weights));
  out.emplace("f_hat_nlms", promethee_tensor(r.nlms_features, run.directions, run.weights));

  for (auto& [label, rank] :
       rank_each_time(r.rls.predictions, run.base_directions, run.criterion_weights)) {
    out.emplace("g_hat_" + label, std::move(rank));
  }
  for (auto& [label, rank] : rank_each_time(actual, run.base_directions, run.criterion_weights)) {
    out.emplace("g_star_" + label, std::move(rank));
  }

  // TOPSIS rejects sentinel feature cells; such a strategy is left out and
  // reported as not computed.
  auto topsis = [&](const std::string& id, const FeatureTensor& f) {
    try {
      out.emplace(id, topsis_tensor(f, run.directions, run.weights));
    } catch (const ValidationError&) {
    }
  };
  topsis("fT_star", r.actual_features);
  topsis("fT_hat", r.predicted_features);
  topsis("fT_hat_nlms", r.nlms_features);
  return r;
}

double printed_tolerance(double printed) noexcept {
  return std::max(0.005 * std::abs(printed), 0.005);
}

std::vector<FeatureCheck> compare_features(const FeatureTensor& computed,
                                           const FeatureTensor& printed,
                                           const PublishedTables& tables) {
  std::vector<FeatureCheck> out;
  for (std::size_t i = 0; i < printed.n(); ++i) {
    auto ci = std::find(computed.alternatives().begin(), computed.alternatives().end(),
                        printed.alternatives()[i]);
    if (ci == computed.alternatives().end()) {
      throw ValidationError("alternative '" + printed.alternatives()[i] + "' missing from data");
    }
    for (std::size_t j = 0; j < printed.m(); ++j) {
      auto cj = std::find(computed.criteria().begin(), computed.criteria().end(),
                          printed.criteria()[j]);
      if (cj == computed.criteria().end()) {
        throw ValidationError("criterion '" + printed.criteria()[j] + "' missing from data");
      }
      for (std::size_t l = 0; l < printed.w(); ++l) {
        auto cl = std::find(computed.features().begin(), computed.features().end(),
                            printed.features()[l]);
        if (cl == computed.features().end()) {
          throw ValidationError("feature '" + printed.features()[l] + "' was not computed");
        }
        FeatureCheck c;
        c.alternative = tables.alternative_symbols[i];
        c.criterion = tables.criterion_symbols[j];
        c.feature = printed.features()[l];
        c.printed = printed(i, j, l);
        c.computed = computed(static_cast<std::size_t>(ci - computed.alternatives().begin()),
                              static_cast<std::size_t>(cj - computed.criteria().begin()),
                              static_cast<std::size_t>(cl - computed.features().begin()));
        c.tolerance = printed_tolerance(c.printed);
        c.within = std::abs(c.computed - c.printed) <= c.tolerance;
        out.push_back(std::move(c));
      }
    }
  }
  return out;
}

bool ReproductionReport::all_required_pass() const {
  return std::all_of(outcomes.begin(), outcomes.end(), [](const auto& o) { return o.pass; }) &&
         std::all_of(relations.begin(), relations.end(),
                     [](const auto& r) { return r.holds || !r.required; }) &&
         std::all_of(past_feature_checks.begin(), past_feature_checks.end(),
                     [](const auto& c) { return c.within; });
}

ReproductionReport evaluate(const Reproduction& repro, const PublishedTables& tables) {
  ReproductionReport report;
  for (const auto& golden : tables.cases) {
    auto it = repro.rankings.find(golden.id);
    if (it == repro.rankings.end()) {
      GoldenOutcome missing;
      missing.id = golden.id;
      missing.policy = golden.policy;
      missing.expected = tables.describe(golden.expected);
      missing.actual = "(not computed)";
      missing.divergence = "strategy produced no ranking";
      missing.pass = golden.policy == MatchPolicy::ReportOnly;
      report.outcomes.push_back(std::move(missing));
      continue;
    }
    report.outcomes.push_back(run_golden(golden, it->second, tables));
  }

  auto& rel = report.relations;
  rel.push_back(order_relation(repro, "f_hat = f_star (RLS forecast ranks like the observed horizon)",
                               "f_hat", "f_star", true, true));
  rel.push_back(order_relation(repro, "f_hat_nlms != f_star (NLMS forecast does not)",
                               "f_hat_nlms", "f_star", false, true));
  for (int year : {tables.horizon_years.at(0), tables.horizon_years.at(1)}) {
    const auto y = std::to_string(year);
    rel.push_back(order_relation(repro, "g_hat_" + y + " = g_star_" + y, "g_hat_" + y,
                                 "g_star_" + y, true, true));
  }
  rel.push_back(order_relation(repro, "fT_hat = fT_star (TOPSIS, RLS)", "fT_hat", "fT_star", true,
                               false));
  rel.push_back(order_relation(repro, "fT_hat_nlms != fT_star (TOPSIS, NLMS)", "fT_hat_nlms",
                               "fT_star", false, false));
  rel.push_back(order_relation(repro, "f_star != fT_star (methods disagree)", "f_star", "fT_star",
                               false, false));

  report.past_feature_checks = compare_features(repro.past_features, tables.past_features, tables);
  report.prediction_feature_checks =
      compare_features(repro.predicted_features, tables.prediction_features, tables);

  for (std::size_t i = 0; i < tables.current.n(); ++i) {
    for (std::size_t j = 0; j < tables.current.m(); ++j) {
      const auto& alts = repro.current.alternatives();
      const auto& crits = repro.current.criteria();
      const auto ri = std::find(alts.begin(), alts.end(), tables.alternatives[i]) - alts.begin();
      const auto rj = std::find(crits.begin(), crits.end(), tables.criteria[j]) - crits.begin();
      FeatureCheck c;
      c.alternative = tables.alternative_symbols[i];
      c.criterion = tables.criterion_symbols[j];
      c.feature = "value";
      c.printed = tables.current(i, j);
      c.computed = repro.current(static_cast<std::size_t>(ri), static_cast<std::size_t>(rj));
      c.tolerance = printed_tolerance(c.printed);
      c.within = std::abs(c.computed - c.printed) <= c.tolerance;
      report.current_checks.push_back(std::move(c));
    }
  }
  return report;
}

std::string ReproductionReport::text(const PublishedTables& tables) const {
  std::ostringstream os;
  os << "# Reproduction report\n\n## Rankings\n\n";
  os << "| id | policy | expected | computed | match | tau | first divergence |\n";
  os << "|---|---|---|---|---|---|---|\n";
  for (const auto& o : outcomes) {
    os << "| " << o.id << " | " << to_string(o.policy) << " | " << o.expected << " | " << o.actual
       << " | " << (o.matched ? "yes" : "no") << " | " << fmt(o.distance.tau, 2) << " | "
       << (o.divergence.empty() ? "-" : o.divergence) << " |\n";
  }

  os << "\n## Relations\n\n";
  for (const auto& r : relations) {
    os << "- [" << (r.holds ? "holds" : "FAILS") << "] " << r.description
       << (r.required ? "" : " (report-only)") << "\n";
  }

  auto block = [&](std::string_view title, const std::vector<FeatureCheck>& checks) {
    os << "\n## " << title << "\n\n| alt | criterion | feature | printed | computed | ok |\n";
    os << "|---|---|---|---|---|---|\n";
    for (const auto& c : checks) {
      os << "| " << c.alternative << " | " << c.criterion << " | " << c.feature << " | "
         << fmt(c.printed) << " | " << fmt(c.computed, 4) << " | " << (c.within ? "yes" : "no")
         << " |\n";
    }
  };
  block("Past-window features (exact within max(0.5%, 0.005))", past_feature_checks);
  block("Forecast features (report-only)", prediction_feature_checks);
  block("Decision matrix at the cutoff (report-only)", current_checks);

  os << "\nOverall: " << (all_required_pass() ? "all required rows match" : "MISMATCH")
     << " (" << tables.cases.size() << " ranking rows)\n";
  return os.str();
}

std::string uncompared_report(const Reproduction& repro, std::string_view reason) {
  std::ostringstream os;
  os << "# Reproduction report\n\nFixture comparison skipped: " << reason << "\n\n## Rankings\n\n";
  os << "| id | ordering | scores |\n|---|---|---|\n";
  for (const auto& [id, rank] : repro.rankings) {
    os << "| " << id << " | ";
    const auto ids = rank.ordered_ids();
    for (std::size_t p = 0; p < ids.size(); ++p) os << (p ? ", " : "") << ids[p];
    os << " | ";
    for (std::size_t p = 0; p < rank.ordering.size(); ++p) {
      os << (p ? ", " : "") << fmt(rank.scores[rank.ordering[p]], 4);
    }
    os << " |\n";
  }
  return os.str();
}

}  // namespace tensorrank::experiments
