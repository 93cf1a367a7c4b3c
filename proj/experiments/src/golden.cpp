#include "tensorrank/experiments/golden.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <fstream>
#include <iomanip>
#include <memory>
#include <nlohmann/json.hpp>
#include <sstream>

#include "tensorrank/error.hpp"

namespace tensorrank::experiments {

namespace {

using nlohmann::json;

std::size_t symbol_index(const Labels& symbols, const std::string& symbol) {
  auto it = std::find(symbols.begin(), symbols.end(), symbol);
  if (it == symbols.end()) throw ValidationError("fixture names unknown symbol '" + symbol + "'");
  return static_cast<std::size_t>(it - symbols.begin());
}

/// Block layout: symbol -> [feature][criterion].
FeatureTensor read_feature_block(const json& block, const Labels& alternatives,
                                 const Labels& symbols, const Labels& criteria,
                                 const Labels& features) {
  Tensor3 values(alternatives.size(), criteria.size(), features.size());
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    const auto& rows = block.at(symbols[i]);
    if (rows.size() != features.size()) throw ValidationError("fixture feature block misshapen");
    for (std::size_t l = 0; l < features.size(); ++l) {
      if (rows[l].size() != criteria.size()) {
        throw ValidationError("fixture feature block misshapen");
      }
      for (std::size_t j = 0; j < criteria.size(); ++j) values(i, j, l) = rows[l][j].get<double>();
    }
  }
  return FeatureTensor(alternatives, criteria, features, std::move(values));
}

}  // namespace

std::string_view to_string(MatchPolicy p) noexcept {
  return p == MatchPolicy::Exact ? "exact" : "report-only";
}

const GoldenCase& PublishedTables::find(std::string_view id) const {
  auto it = std::find_if(cases.begin(), cases.end(), [&](const auto& c) { return c.id == id; });
  if (it == cases.end()) throw ValidationError("no golden case '" + std::string(id) + "'");
  return *it;
}

std::string PublishedTables::describe(const std::vector<std::size_t>& order) const {
  std::string out = "(";
  for (std::size_t p = 0; p < order.size(); ++p) {
    if (p) out += ", ";
    out += alternative_symbols.at(order[p]);
  }
  return out + ")";
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 initialisation failed");
  }
  std::array<char, 1 << 14> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);
  std::ostringstream hex;
  for (unsigned int k = 0; k < len; ++k) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[k]);
  }
  return hex.str();
}

void verify_checksums(const std::filesystem::path& dir) {
  const auto sums = dir / "SHA256SUMS";
  std::ifstream in(sums);
  if (!in) throw ValidationError("fixture checksum list missing: " + sums.string());
  std::string line;
  std::size_t entries = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string digest, name;
    fields >> digest >> name;
    if (name.starts_with('*')) name.erase(0, 1);
    const auto file = dir / name;
    if (!std::filesystem::exists(file)) {
      throw ValidationError("fixture missing: " + file.string());
    }
    const auto actual = sha256_file(file);
    if (actual != digest) {
      throw ValidationError("fixture " + file.string() + " was modified (sha256 " + actual +
                            ", expected " + digest + ")");
    }
    ++entries;
  }
  if (entries == 0) throw ValidationError("fixture checksum list is empty: " + sums.string());
}

PublishedTables load_published_tables(const std::filesystem::path& dir) {
  verify_checksums(dir);
  std::ifstream in(dir / "published_tables.json");
  if (!in) throw ValidationError("fixture missing: " + (dir / "published_tables.json").string());
  json doc;
  try {
    doc = json::parse(in);
    auto alternatives = doc.at("alternatives").get<Labels>();
    auto symbols = doc.at("alternative_symbols").get<Labels>();
    auto criteria = doc.at("criteria").get<Labels>();
    auto criterion_symbols = doc.at("criterion_symbols").get<Labels>();
    auto features = doc.at("features").get<Labels>();
    std::vector<Direction> directions;
    for (const auto& d : doc.at("directions")) directions.push_back(parse_direction(d.get<std::string>()));

    std::vector<GoldenCase> cases;
    for (const auto& row : doc.at("rankings")) {
      GoldenCase c;
      c.id = row.at("id").get<std::string>();
      c.table = row.at("table").get<int>();
      c.label = row.at("label").get<std::string>();
      c.policy = row.at("policy").get<std::string>() == "exact" ? MatchPolicy::Exact
                                                                 : MatchPolicy::ReportOnly;
      for (const auto& s : row.at("order")) c.expected.push_back(symbol_index(symbols, s.get<std::string>()));
      auto sorted = c.expected;
      std::sort(sorted.begin(), sorted.end());
      for (std::size_t p = 0; p < sorted.size(); ++p) {
        if (sorted.size() != symbols.size() || sorted[p] != p) {
          throw ValidationError("golden case '" + c.id + "' is not a permutation of the alternatives");
        }
      }
      cases.push_back(std::move(c));
    }

    Matrix current(alternatives.size(), criteria.size());
    for (std::size_t i = 0; i < symbols.size(); ++i) {
      const auto& row = doc.at("current_matrix").at(symbols[i]);
      for (std::size_t j = 0; j < criteria.size(); ++j) current(i, j) = row.at(j).get<double>();
    }

    auto predicted = read_feature_block(doc.at("prediction_features"), alternatives, symbols,
                                        criteria, features);
    auto past = read_feature_block(doc.at("past_features"), alternatives, symbols, criteria,
                                   features);
    return PublishedTables{alternatives,
                       symbols,
                       criteria,
                       criterion_symbols,
                       std::move(directions),
                       features,
                       doc.at("cutoff").get<int>(),
                       doc.at("horizon_years").get<std::vector<int>>(),
                       doc.at("window_years").get<std::vector<int>>(),
                       std::move(cases),
                       std::move(predicted),
                       DecisionMatrix(alternatives, criteria, std::move(current)),
                       std::move(past)};
  } catch (const json::exception& e) {
    throw ValidationError("malformed fixture " + (dir / "published_tables.json").string() + ": " +
                          e.what());
  }
}

std::filesystem::path default_golden_dir() { return TENSORRANK_GOLDEN_DIR; }

std::filesystem::path default_dataset_path() { return TENSORRANK_IMF_DATA; }

std::vector<std::size_t> to_fixture_order(const RankResult& rank, const PublishedTables& tables) {
  if (rank.alternatives.size() != tables.alternatives.size()) {
    throw ValidationError("ranking has " + std::to_string(rank.alternatives.size()) +
                          " alternatives, fixture has " +
                          std::to_string(tables.alternatives.size()));
  }
  std::vector<std::size_t> out;
  for (auto i : rank.ordering) {
    const auto& id = rank.alternatives[i];
    auto it = std::find(tables.alternatives.begin(), tables.alternatives.end(), id);
    if (it == tables.alternatives.end()) {
      throw ValidationError("alternative '" + id + "' is not part of the fixture");
    }
    out.push_back(static_cast<std::size_t>(it - tables.alternatives.begin()));
  }
  return out;
}

GoldenOutcome run_golden(const GoldenCase& golden, const RankResult& actual,
                         const PublishedTables& tables) {
  GoldenOutcome out;
  out.id = golden.id;
  out.policy = golden.policy;
  const auto order = to_fixture_order(actual, tables);
  out.expected = tables.describe(golden.expected);
  out.actual = tables.describe(order);
  out.matched = order == golden.expected;
  out.pass = out.matched || golden.policy == MatchPolicy::ReportOnly;
  for (std::size_t p = 0; p < order.size() && !out.matched; ++p) {
    if (order[p] != golden.expected[p]) {
      out.divergence = "rank " + std::to_string(p + 1) + ": expected " +
                       tables.alternative_symbols[golden.expected[p]] + ", got " +
                       tables.alternative_symbols[order[p]];
      break;
    }
  }

  // Kendall tau against the published order via positional scores.
  const std::size_t n = order.size();
  std::vector<double> expected_scores(n), actual_scores(n);
  for (std::size_t p = 0; p < n; ++p) {
    expected_scores[golden.expected[p]] = static_cast<double>(n - p);
    actual_scores[order[p]] = static_cast<double>(n - p);
  }
  out.distance = rank_distance(RankResult::from_scores(tables.alternative_symbols, actual_scores),
                               RankResult::from_scores(tables.alternative_symbols, expected_scores));
  return out;
}

}  // namespace tensorrank::experiments
