#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "tensorrank/error.hpp"
#include "tensorrank/features.hpp"

using namespace tensorrank;

TEST(Features, Average) {
  EXPECT_EQ(feature_average(std::vector<double>{2, 4}), 3.0);
  EXPECT_THROW(feature_average(std::vector<double>{}), ValidationError);
}

TEST(Features, Slope) {
  EXPECT_DOUBLE_EQ(feature_slope(std::vector<double>{1, 2, 3}), 1.0);
  EXPECT_EQ(feature_slope(std::vector<double>{5, 5, 5, 5}), 0.0);
  EXPECT_DOUBLE_EQ(feature_slope(std::vector<double>{3, 1}), -2.0);
  EXPECT_THROW(feature_slope(std::vector<double>{1}), ValidationError);
}

TEST(Features, CoefficientOfVariation) {
  EXPECT_EQ(feature_cv(std::vector<double>{7, 7, 7}), 0.0);
  EXPECT_DOUBLE_EQ(feature_cv(std::vector<double>{1, 3}), 0.5);
  // |mean| keeps the value non-negative for negative-mean series.
  EXPECT_DOUBLE_EQ(feature_cv(std::vector<double>{-1, -3}), 0.5);
  EXPECT_EQ(feature_cv(std::vector<double>{-1, 1}), kCvSentinel);
  EXPECT_THROW(feature_cv(std::vector<double>{1}), ValidationError);
}

TEST(Features, SetValidation) {
  EXPECT_THROW(FeatureSet(Labels{}), ValidationError);
  EXPECT_THROW(FeatureSet(Labels{"average", "average"}), ValidationError);
  EXPECT_EQ(FeatureSet::standard().ids(), (Labels{"average", "slope", "cv"}));
}

TEST(Features, RegistryIsOpen) {
  FeatureRegistry reg = FeatureRegistry::builtin();
  reg.add({"last", 1, DirectionRule::InheritCriterion,
           [](std::span<const double> s) { return s.back(); }});
  EXPECT_TRUE(reg.contains("last"));
  EXPECT_THROW(reg.add({"last", 1, DirectionRule::InheritCriterion,
                        [](std::span<const double> s) { return s.front(); }}),
               ValidationError);
  EXPECT_THROW(reg.get("missing"), ValidationError);

  Tensor3 v(1, 1, 3, std::vector<double>{1, 2, 9});
  TimeSeriesTensor t({"a"}, {"c"}, {1, 2, 3}, v);
  auto f = extract_features(t, FeatureSet({"last", "average"}), reg);
  EXPECT_EQ(f(0, 0, 0), 9.0);
  EXPECT_EQ(f(0, 0, 1), 4.0);
}

TEST(Features, ExtractShapeAndValues) {
  Tensor3 v(2, 2, 4);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t t = 0; t < 4; ++t) v(i, j, t) = static_cast<double>(i + 1) * (t + 1) + j;
  TimeSeriesTensor t({"a", "b"}, {"x", "y"}, {1, 2, 3, 4}, v);
  auto f = extract_features(t, FeatureSet::standard());
  EXPECT_EQ(f.n(), 2u);
  EXPECT_EQ(f.m(), 2u);
  EXPECT_EQ(f.w(), 3u);
  EXPECT_EQ(f.features(), (Labels{"average", "slope", "cv"}));
  EXPECT_DOUBLE_EQ(f(1, 1, 0), 2.0 * 2.5 + 1.0);
  EXPECT_DOUBLE_EQ(f(1, 0, 1), 2.0);
  auto avg = extract_features(t, FeatureSet({"average"}));
  ASSERT_EQ(avg.w(), 1u);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(avg(i, j, 0), feature_average(t.fiber(i, j)));
}

TEST(Features, ExtractTooShortReportsCell) {
  TimeSeriesTensor t({"a"}, {"c"}, {1}, Tensor3(1, 1, 1, 3.0));
  try {
    extract_features(t, FeatureSet::standard());
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("slope"), std::string::npos) << e.what();
  }
}

TEST(Features, ExtractPermutationEquivariant) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(1.0, 5.0);
  Tensor3 v(3, 2, 6);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t t = 0; t < 6; ++t) v(i, j, t) = u(rng);
  Tensor3 swapped(3, 2, 6);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t t = 0; t < 6; ++t) swapped(2 - i, 1 - j, t) = v(i, j, t);
  auto a = extract_features(TimeSeriesTensor({"p", "q", "r"}, {"x", "y"}, {1, 2, 3, 4, 5, 6}, v),
                            FeatureSet::standard());
  auto b = extract_features(
      TimeSeriesTensor({"r", "q", "p"}, {"y", "x"}, {1, 2, 3, 4, 5, 6}, swapped),
      FeatureSet::standard());
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t l = 0; l < 3; ++l) EXPECT_EQ(b(2 - i, 1 - j, l), a(i, j, l));
}

TEST(Features, DeriveDirectionsDefaultRule) {
  auto d = derive_directions({"c1", "c2", "c3"},
                             {Direction::Maximize, Direction::Minimize, Direction::Minimize},
                             FeatureSet::standard());
  const Direction avg[] = {Direction::Maximize, Direction::Minimize, Direction::Minimize};
  for (std::size_t j = 0; j < 3; ++j) {
    EXPECT_EQ(d(j, 0), avg[j]);
    EXPECT_EQ(d(j, 1), avg[j]);
    EXPECT_EQ(d(j, 2), Direction::Minimize);
  }
}

TEST(Features, DeriveDirectionsCvAlwaysMinimize) {
  auto d = derive_directions({"c1", "c2"}, {Direction::Maximize, Direction::Maximize},
                             FeatureSet({"cv"}));
  EXPECT_EQ(d(0, 0), Direction::Minimize);
  EXPECT_EQ(d(1, 0), Direction::Minimize);
}

TEST(Features, DeriveDirectionsOverride) {
  auto d = derive_directions({"c1", "c2"}, {Direction::Maximize, Direction::Minimize},
                             FeatureSet::standard(), {{"c1", "slope", Direction::Minimize}});
  EXPECT_EQ(d(0, 1), Direction::Minimize);
  EXPECT_EQ(d(0, 0), Direction::Maximize);
  EXPECT_EQ(d(0, 2), Direction::Minimize);
  EXPECT_EQ(d(1, 1), Direction::Minimize);
  EXPECT_THROW(derive_directions({"c1"}, {Direction::Maximize}, FeatureSet::standard(),
                                 {{"c9", "slope", Direction::Minimize}}),
               ValidationError);
}
