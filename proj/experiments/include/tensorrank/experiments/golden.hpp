#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tensorrank/ingest.hpp"
#include "tensorrank/mcda.hpp"
#include "tensorrank/pipeline.hpp"
#include "tensorrank/tensor.hpp"

namespace tensorrank::experiments {

enum class MatchPolicy { Exact, ReportOnly };

std::string_view to_string(MatchPolicy p) noexcept;

/// One published ranking row. `expected` holds 0-based alternative
/// positions (a1 -> 0) in rank order.
struct GoldenCase {
  std::string id;
  int table = 0;
  std::string label;
  MatchPolicy policy = MatchPolicy::Exact;
  std::vector<std::size_t> expected;
};

/// The published tables, loaded from a checksummed fixture directory.
struct PublishedTables {
  Labels alternatives;         // data ids, in a1..an order
  Labels alternative_symbols;  // "a1", ...
  Labels criteria;
  Labels criterion_symbols;
  std::vector<Direction> directions;
  Labels features;
  int cutoff = 0;
  std::vector<int> horizon_years;
  std::vector<int> window_years;
  std::vector<GoldenCase> cases;
  FeatureTensor prediction_features;  // printed feature tensor of the forecasts
  DecisionMatrix current;             // printed decision matrix at the cutoff
  FeatureTensor past_features;        // printed feature tensor of the past window

  const GoldenCase& find(std::string_view id) const;
  /// Symbols of an ordering, e.g. "(a5, a4, a3, a1, a2)".
  std::string describe(const std::vector<std::size_t>& order) const;
};

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Verifies every entry of `dir/SHA256SUMS`. Throws ValidationError naming
/// the first file whose digest differs or that is missing.
void verify_checksums(const std::filesystem::path& dir);

/// Loads `dir/published_tables.json` after verifying checksums.
PublishedTables load_published_tables(const std::filesystem::path& dir);

/// Default fixture directory baked in at build time.
std::filesystem::path default_golden_dir();
/// Default dataset location baked in at build time.
std::filesystem::path default_dataset_path();

/// Maps a ranking of data alternatives to positions in the fixture's
/// alternative list. Throws ValidationError if the sets differ.
std::vector<std::size_t> to_fixture_order(const RankResult& rank, const PublishedTables& tables);

struct GoldenOutcome {
  std::string id;
  MatchPolicy policy = MatchPolicy::Exact;
  bool matched = false;
  /// Exact cases pass only when matched; report-only cases always pass.
  bool pass = false;
  std::string expected;
  std::string actual;
  /// Empty when matched, otherwise the first differing rank.
  std::string divergence;
  RankDistance distance;
};

GoldenOutcome run_golden(const GoldenCase& golden, const RankResult& actual,
                         const PublishedTables& tables);

}  // namespace tensorrank::experiments
