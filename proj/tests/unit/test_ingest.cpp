#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "tensorrank/error.hpp"
#include "tensorrank/ingest.hpp"

using namespace tensorrank;

namespace {

DecisionTensor parse(const std::string& text) {
  std::istringstream in(text);
  return parse_timeseries_csv(in, "test.csv");
}

}  // namespace

TEST(TimeSeriesCsv, ShapeFromSixRows) {
  auto t = parse(
      "alternative,criterion,time,value\n"
      "a1,c1,1990,1\na1,c1,1991,2\na1,c1,1992,3\n"
      "a2,c1,1990,4\na2,c1,1991,5\na2,c1,1992,6\n");
  EXPECT_EQ(t.n(), 2u);
  EXPECT_EQ(t.m(), 1u);
  EXPECT_EQ(t.length(), 3u);
  EXPECT_EQ(t.at(1, 0, 2), 6.0);
}

TEST(TimeSeriesCsv, RowOrderInsensitive) {
  auto a = parse("alternative,criterion,time,value\nx,c,2,20\ny,c,1,11\nx,c,1,10\ny,c,2,21\n");
  EXPECT_EQ(a.alternatives(), (Labels{"x", "y"}));
  EXPECT_EQ(a.times(), (std::vector<int>{1, 2}));
  EXPECT_EQ(a.at(0, 0, 0), 10.0);
  EXPECT_EQ(a.at(1, 0, 1), 21.0);
}

TEST(TimeSeriesCsv, DuplicateReportsLine) {
  try {
    parse("alternative,criterion,time,value\na1,c1,1990,1\na1,c1,1991,2\na1,c1,1990,3\n");
    FAIL() << "expected DuplicateError";
  } catch (const DuplicateError& e) {
    EXPECT_EQ(e.row(), 4u);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(TimeSeriesCsv, MissingCellsListed) {
  try {
    parse("alternative,criterion,time,value\na1,c1,1,1\na1,c1,2,2\na2,c1,1,3\n");
    FAIL() << "expected CompletenessError";
  } catch (const CompletenessError& e) {
    EXPECT_NE(std::string(e.what()).find("(a2, c1, 2)"), std::string::npos) << e.what();
  }
}

TEST(TimeSeriesCsv, NonNumericReportsRow) {
  try {
    parse("alternative,criterion,time,value\na1,c1,1,1\na1,c1,2,n/a\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 3u);
  }
}

TEST(TimeSeriesCsv, HeaderMustBeExact) {
  EXPECT_THROW(parse("alt,criterion,time,value\na,c,1,1\n"), ParseError);
  EXPECT_THROW(parse("alternative,criterion,year,value\na,c,1,1\n"), ParseError);
  EXPECT_THROW(parse(""), ParseError);
}

TEST(TimeSeriesCsv, NonIntegerTimeRejected) {
  EXPECT_THROW(parse("alternative,criterion,time,value\na,c,1990.5,1\n"), ParseError);
}

TEST(TimeSeriesCsv, QuotingBomAndCrlf) {
  auto t = parse(
      "\xEF\xBB\xBF" "alternative,criterion,time,value\r\n"
      "\"Korea, Rep.\",c1,1,1.5\r\n\r\n\"Korea, Rep.\",c1,2,2.5\r\n");
  EXPECT_EQ(t.alternatives(), (Labels{"Korea, Rep."}));
  EXPECT_EQ(t.at(0, 0, 1), 2.5);
}

TEST(TimeSeriesCsv, RoundTripIsBitExact) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> nd(0.0, 1e3);
  Tensor3 v(3, 2, 5);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t t = 0; t < 5; ++t) v(i, j, t) = nd(rng) / 7.0;
  v(0, 0, 0) = 0.1;
  v(0, 0, 1) = -0.0;
  v(0, 0, 2) = 1e-300;
  v(0, 0, 3) = 5e-324;
  DecisionTensor t({"b", "a", "c"}, {"z", "y"}, {2001, 2002, 2003, 2004, 2005}, v);
  const auto csv = emit_tensor(t, Format::Csv);
  auto back = parse(csv);
  EXPECT_EQ(back.alternatives(), t.alternatives());
  EXPECT_EQ(back.criteria(), t.criteria());
  EXPECT_EQ(back.times(), t.times());
  for (std::size_t k = 0; k < v.size(); ++k) {
    EXPECT_EQ(back.values().data()[k], v.data()[k]);
    EXPECT_EQ(std::signbit(back.values().data()[k]), std::signbit(v.data()[k]));
  }
  EXPECT_EQ(emit_tensor(back, Format::Csv), csv);
}

TEST(FeatureCsv, RoundTripKeepsSentinel) {
  Tensor3 v(2, 1, 2);
  v(0, 0, 0) = 1.25;
  v(0, 0, 1) = std::numeric_limits<double>::infinity();
  v(1, 0, 0) = -3.0;
  v(1, 0, 1) = 0.5;
  FeatureTensor f({"a", "b"}, {"c"}, {"average", "cv"}, v);
  std::istringstream in(emit_features(f, Format::Csv));
  auto back = parse_feature_csv(in);
  EXPECT_EQ(back.features(), f.features());
  for (std::size_t k = 0; k < v.size(); ++k) EXPECT_EQ(back.values().data()[k], v.data()[k]);
}

TEST(ConvertWide, ToLong) {
  std::istringstream in("alternative,criterion,2000,2001\na,c,1.5,2\nb,c,3,4\n");
  const auto text = convert_wide_csv(in);
  auto t = parse(text);
  EXPECT_EQ(t.times(), (std::vector<int>{2000, 2001}));
  EXPECT_EQ(t.at(1, 0, 0), 3.0);
  std::istringstream bad("alternative,criterion,2000\na,c,1,2\n");
  EXPECT_THROW(convert_wide_csv(bad), ParseError);
}

TEST(Emit, RankCsvRoundTrip) {
  auto r = RankResult::from_scores({"a1", "a2", "a3"}, {0.25, -0.5, 0.25});
  const auto csv = emit_rank(r, Format::Csv);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "rank,index,alternative,score");
  std::istringstream in(csv);
  auto back = parse_rank_csv(in);
  EXPECT_EQ(back.scores, r.scores);
  EXPECT_EQ(back.ordering, r.ordering);
  EXPECT_EQ(back.tie_groups, r.tie_groups);
}

TEST(Emit, TwoAlternativeRankTable) {
  auto r = RankResult::from_scores({"x", "y"}, {-1.0, 1.0});
  const auto text = emit_rank(r, Format::Table);
  EXPECT_LT(text.find("y"), text.find("x"));
  EXPECT_NE(text.find("1.000"), std::string::npos);
  EXPECT_NE(text.find("-1.000"), std::string::npos);
}

TEST(Emit, JsonLinesKeys) {
  DecisionTensor t({"a"}, {"c"}, {7}, Tensor3(1, 1, 1, 0.5));
  const auto line = emit_tensor(t, Format::JsonLines);
  EXPECT_EQ(line, "{\"alternative\":\"a\",\"criterion\":\"c\",\"axis_label\":\"7\",\"value\":0.5}\n");
}

TEST(Emit, Deterministic) {
  DecisionTensor t({"a", "b"}, {"c"}, {1, 2}, Tensor3(2, 1, 2, std::vector<double>{1, 2, 3, 4}));
  for (auto f : {Format::Table, Format::Csv, Format::JsonLines})
    EXPECT_EQ(emit_tensor(t, f), emit_tensor(t, f));
}

TEST(Emit, FormatNames) {
  EXPECT_EQ(parse_format("csv"), Format::Csv);
  EXPECT_EQ(parse_format("json-lines"), Format::JsonLines);
  EXPECT_EQ(parse_format("jsonl"), Format::JsonLines);
  EXPECT_EQ(parse_format("table"), Format::Table);
  EXPECT_THROW(parse_format("xml"), ValidationError);
}

namespace {

DecisionTensor small_panel() {
  Tensor3 v(2, 3, 10);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t t = 0; t < 10; ++t) v(i, j, t) = 1.0 + 0.5 * static_cast<double>(i + j + t);
  return DecisionTensor({"a1", "a2"}, {"c1", "c2", "c3"},
                        {2000, 2001, 2002, 2003, 2004, 2005, 2006, 2007, 2008, 2009}, v);
}

}  // namespace

TEST(Config, EmptyGivesDefaults) {
  auto cfg = parse_config_text("");
  EXPECT_FALSE(cfg.cutoff.has_value());
  EXPECT_EQ(cfg.horizon, 6u);
  EXPECT_EQ(cfg.predict.filter.order, 2u);
  EXPECT_EQ(cfg.predict.filter.init_delta, 1e-2);
  EXPECT_EQ(cfg.predict.filter.step_size, 0.5);
  EXPECT_EQ(cfg.predict.filter.regularization, 1e-6);
  auto run = resolve(cfg, small_panel());
  EXPECT_EQ(run.cutoff, 2009);
  for (std::size_t j = 0; j < 3; ++j)
    for (std::size_t l = 0; l < 3; ++l) EXPECT_DOUBLE_EQ(run.weights(j, l), 1.0 / 9.0);
  EXPECT_EQ(run.base_directions[1], Direction::Maximize);
}

TEST(Config, PerCriterionForgettingFactors) {
  auto cfg = parse_config_text(R"(
cutoff: 2006
horizon: 3
window: 4
method: promethee-tensor
directions: {c1: max, c2: min, c3: min}
filter:
  algorithm: rls
  order: 2
  forgetting_factors: {c1: 0.90, c2: 0.99, c3: 0.90}
)");
  EXPECT_EQ(*cfg.cutoff, 2006);
  EXPECT_EQ(cfg.predict.forgetting_factors.at("c2"), 0.99);
  auto run = resolve(cfg, small_panel());
  EXPECT_EQ(run.predict.for_criterion("c1").forgetting_factor, 0.90);
  EXPECT_EQ(run.directions(1, 0), Direction::Minimize);
  EXPECT_EQ(run.directions(0, 2), Direction::Minimize);
  EXPECT_EQ(run.directions(0, 1), Direction::Maximize);
}

TEST(Config, RelativeWeightsNormalize) {
  auto cfg = parse_config_text("weights: {c1: {average: 2, slope: 1}, c2: {cv: 1}}\n");
  auto run = resolve(cfg, small_panel());
  EXPECT_DOUBLE_EQ(run.weights(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(run.weights(0, 1), 0.25);
  EXPECT_DOUBLE_EQ(run.weights(1, 2), 0.25);
  EXPECT_EQ(run.weights(2, 0), 0.0);
}

TEST(Config, Rejections) {
  auto expect_key = [](const std::string& yaml, const std::string& key) {
    try {
      parse_config_text(yaml);
      FAIL() << "expected ValidationError for " << yaml;
    } catch (const ValidationError& e) {
      EXPECT_NE(std::string(e.what()).find(key), std::string::npos) << e.what();
    }
  };
  expect_key("horizonn: 3\n", "horizonn");
  expect_key("filter: {order: 2, rho: 0.9}\n", "filter.rho");
  expect_key("weights: {c1: {average: -1}}\n", "weights.c1.average");
  expect_key("horizon: 1\n", "horizon");
  expect_key("window: 1\n", "window");
  expect_key("filter: {forgetting_factor: 1.5}\n", "forgetting_factor");
  expect_key("method: simplex\n", "method");
  expect_key("features: [average, median]\n", "features");
  expect_key("directions: {c1: upward}\n", "directions.c1");
}

TEST(Config, ResolveRejectsUnknownNames) {
  EXPECT_THROW(resolve(parse_config_text("cutoff: 1999\n"), small_panel()), ValidationError);
  EXPECT_THROW(resolve(parse_config_text("directions: {c9: min}\n"), small_panel()),
               ValidationError);
  EXPECT_THROW(resolve(parse_config_text("weights: {c1: {cv: 1}}\nfeatures: [average]\n"),
                       small_panel()),
               ValidationError);
  EXPECT_THROW(resolve(parse_config_text("cutoff: 2002\nwindow: 6\n"), small_panel()),
               ValidationError);
  EXPECT_THROW(
      resolve(parse_config_text("filter: {forgetting_factors: {c7: 0.9}}\n"), small_panel()),
      ValidationError);
}
