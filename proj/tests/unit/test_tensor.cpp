#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "tensorrank/error.hpp"
#include "tensorrank/tensor.hpp"

using namespace tensorrank;

namespace {

DecisionTensor make_panel(std::size_t n, std::size_t m, std::vector<int> times) {
  Labels alts, crits;
  for (std::size_t i = 0; i < n; ++i) alts.push_back("a" + std::to_string(i + 1));
  for (std::size_t j = 0; j < m; ++j) crits.push_back("c" + std::to_string(j + 1));
  Tensor3 v(n, m, times.size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t t = 0; t < times.size(); ++t) v(i, j, t) = 100.0 * i + 10.0 * j + t;
  return DecisionTensor(alts, crits, std::move(times), std::move(v));
}

std::vector<int> years(int from, int to) {
  std::vector<int> out;
  for (int y = from; y <= to; ++y) out.push_back(y);
  return out;
}

}  // namespace

TEST(Tensor, FiberReadsLastElement) {
  Tensor3 v(2, 2, 3);
  v(0, 0, 2) = 5.0;
  DecisionTensor t({"a1", "a2"}, {"c1", "c2"}, {1, 2, 3}, v);
  auto f = t.fiber(0, 0);
  ASSERT_EQ(f.size(), 3u);
  EXPECT_EQ(f.back(), 5.0);
  EXPECT_EQ(t.fiber("a1", "c1").back(), 5.0);
}

TEST(Tensor, FiberLengthIsT) {
  auto t = make_panel(3, 2, years(1980, 2018));
  for (std::size_t i = 0; i < t.n(); ++i)
    for (std::size_t j = 0; j < t.m(); ++j) EXPECT_EQ(t.fiber(i, j).size(), 39u);
}

TEST(Tensor, FiberOutOfRangeThrows) {
  auto t = make_panel(2, 2, {1, 2});
  EXPECT_THROW(t.fiber(2, 0), IndexError);
  EXPECT_THROW(t.fiber(0, 2), IndexError);
  EXPECT_THROW(t.fiber("zz", "c1"), IndexError);
}

TEST(Tensor, WindowLengths) {
  auto t = make_panel(2, 2, years(1980, 2018));
  EXPECT_EQ(t.window(2007, 2012).length(), 6u);
  EXPECT_EQ(t.window(1995, 1995).length(), 1u);
  EXPECT_EQ(t.window(1980, 2012).length(), 33u);
  EXPECT_EQ(t.window(2007, 2012).times().front(), 2007);
}

TEST(Tensor, WindowRejectsUnknownOrReversedLabels) {
  auto t = make_panel(2, 2, years(2000, 2005));
  EXPECT_THROW(t.window(1999, 2003), ValidationError);
  EXPECT_THROW(t.window(2004, 2002), ValidationError);
}

TEST(Tensor, SliceWindowCommutes) {
  auto t = make_panel(3, 2, years(1990, 2000));
  auto w = t.window(1993, 1997);
  for (std::size_t i = 0; i < t.n(); ++i) {
    for (std::size_t j = 0; j < t.m(); ++j) {
      auto full = t.fiber(i, j);
      auto sub = w.fiber(i, j);
      ASSERT_EQ(sub.size(), 5u);
      for (std::size_t k = 0; k < sub.size(); ++k) EXPECT_EQ(sub[k], full[3 + k]);
    }
  }
}

TEST(Tensor, AtTimeBuildsMatrix) {
  auto t = make_panel(2, 3, {2010, 2011, 2012});
  auto m = t.at_time(2012);
  EXPECT_EQ(m.n(), 2u);
  EXPECT_EQ(m.m(), 3u);
  EXPECT_EQ(m(1, 2), 100.0 + 20.0 + 2.0);
  EXPECT_THROW(t.at_time(1999), ValidationError);
}

TEST(Tensor, ConstructorValidates) {
  EXPECT_THROW(DecisionTensor({"a", "a"}, {"c"}, {1}, Tensor3(2, 1, 1)), ValidationError);
  EXPECT_THROW(DecisionTensor({"a"}, {"c"}, {2, 1}, Tensor3(1, 1, 2)), ValidationError);
  EXPECT_THROW(DecisionTensor({"a"}, {"c"}, {1, 2}, Tensor3(1, 1, 3)), ValidationError);
  Tensor3 nan(1, 1, 1);
  nan(0, 0, 0) = std::nan("");
  EXPECT_THROW(DecisionTensor({"a"}, {"c"}, {1}, nan), ValidationError);
  EXPECT_THROW(DecisionTensor({}, {"c"}, {1}, Tensor3(0, 1, 1)), ValidationError);
}

TEST(Tensor, FeatureTensorAllowsOnlyPositiveInfinity) {
  Tensor3 v(1, 1, 2);
  v(0, 0, 1) = std::numeric_limits<double>::infinity();
  FeatureTensor f({"a"}, {"c"}, {"x", "y"}, v);
  ASSERT_EQ(f.sentinel_cells().size(), 1u);
  EXPECT_EQ(f.sentinel_cells()[0][2], 1u);
  v(0, 0, 1) = -std::numeric_limits<double>::infinity();
  EXPECT_THROW(FeatureTensor({"a"}, {"c"}, {"x", "y"}, v), ValidationError);
}

TEST(Tensor, DirectionParsing) {
  EXPECT_EQ(parse_direction("max"), Direction::Maximize);
  EXPECT_EQ(parse_direction("Minimize"), Direction::Minimize);
  EXPECT_THROW(parse_direction("up"), ValidationError);
}

TEST(Tensor, CriterionFeatureDirectionsOverride) {
  auto d = CriterionFeatureDirections::from_base({"c1", "c2"}, {Direction::Maximize, Direction::Minimize},
                                                 {"f1", "f2"});
  auto o = d.with_override(0, 1, Direction::Minimize);
  EXPECT_EQ(o(0, 1), Direction::Minimize);
  EXPECT_EQ(o(0, 0), Direction::Maximize);
  EXPECT_EQ(o(1, 0), Direction::Minimize);
  EXPECT_EQ(o.base(0), Direction::Maximize);
}
