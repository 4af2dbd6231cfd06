#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rezoner/errors.hpp"
#include "rezoner/geo.hpp"
#include "rezoner/rng.hpp"
#include "rezoner/travel.hpp"

namespace rezoner {
namespace {

using geo::MultiPolygon;
using geo::rectangle;

// Degrees of latitude spanning `meters` along a meridian.
double lat_degrees(double meters) { return meters / kEarthRadiusMeters * 180.0 / std::numbers::pi; }

TEST(AssignBlocks, UniqueContainment) {
  const auto set = geo::make_boundary_set({{"a", rectangle({0, 0}, {1, 1})}, {"b", rectangle({0, 1}, {1, 2})}});
  const auto r = geo::assign_blocks_to_schools({{"x", {0.5, 0.5}}, {"y", {0.5, 1.5}}}, set);
  EXPECT_EQ(r.plan, (AssignmentPlan{{"x", "a"}, {"y", "b"}}));
  EXPECT_TRUE(r.unassigned.empty());
  EXPECT_TRUE(r.overlapped.empty());
}

TEST(AssignBlocks, OverlapGoesToSmallerArea) {
  // About 2 km x 2 km inside about 3 km x 3 km, both at the origin.
  const double two = lat_degrees(2000.0);
  const double three = lat_degrees(3000.0);
  const auto small = rectangle({0, 0}, {two, two});
  const auto big = rectangle({0, 0}, {three, three});
  const LatLon inside{two / 2, two / 2};
  for (const auto& order : {std::vector<std::pair<SchoolId, MultiPolygon>>{{"A", small}, {"B", big}},
                            std::vector<std::pair<SchoolId, MultiPolygon>>{{"B", big}, {"A", small}}}) {
    const auto set = geo::make_boundary_set(order);
    const auto r = geo::assign_blocks_to_schools({{"x", inside}}, set);
    EXPECT_EQ(r.plan.at("x"), "A");
    EXPECT_EQ(r.overlapped, std::vector<BlockId>{"x"});
  }
  EXPECT_NEAR(geo::area_m2(small), 4.0e6, 4.0e6 * 1e-3);
  EXPECT_NEAR(geo::area_m2(big), 9.0e6, 9.0e6 * 1e-3);
}

TEST(AssignBlocks, EqualAreasTieToSmallerId) {
  const auto shape = rectangle({0, 0}, {1, 1});
  const auto set = geo::make_boundary_set({{"q", shape}, {"p", shape}});
  EXPECT_EQ(geo::assign_blocks_to_schools({{"x", {0.5, 0.5}}}, set).plan.at("x"), "p");
}

TEST(AssignBlocks, OutsideEveryZoneIsUnassigned) {
  const auto set = geo::make_boundary_set({{"a", rectangle({0, 0}, {1, 1})}});
  const auto r = geo::assign_blocks_to_schools({{"x", {5, 5}}}, set);
  EXPECT_TRUE(r.plan.empty());
  EXPECT_EQ(r.unassigned, std::vector<BlockId>{"x"});
}

TEST(AssignBlocks, HolesAreOutside) {
  MultiPolygon donut = rectangle({0, 0}, {3, 3});
  donut[0].holes.push_back(rectangle({1, 1}, {2, 2})[0].outer);
  const auto set = geo::make_boundary_set({{"a", donut}});
  const auto r = geo::assign_blocks_to_schools({{"in", {0.5, 0.5}}, {"hole", {1.5, 1.5}}}, set);
  EXPECT_EQ(r.plan.count("in"), 1u);
  EXPECT_EQ(r.unassigned, std::vector<BlockId>{"hole"});
}

TEST(AssignBlocks, SelfIntersectingZoneNamesTheSchool) {
  MultiPolygon bowtie{{{{0, 0}, {1, 1}, {1, 0}, {0, 1}, {0, 0}}, {}}};
  try {
    geo::make_boundary_set({{"bad", bowtie}});
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.subject(), "bad");
  }
}

TEST(Adjacency, SharedEdgeCornerAndDisjoint) {
  const auto a = geo::build_adjacency({
      {"a", rectangle({0, 0}, {1, 1})},
      {"b", rectangle({0, 1}, {1, 2})},    // shares a's east edge
      {"c", rectangle({1, 2}, {2, 3})},    // touches b at a corner only
      {"d", rectangle({5, 5}, {6, 6})},    // far away
      {"e", rectangle({1, 0.5}, {2, 1})},  // shares half of a's north edge
  });
  EXPECT_EQ(a.neighbors.at("a"), (std::vector<BlockId>{"b", "e"}));
  EXPECT_EQ(a.neighbors.at("b"), (std::vector<BlockId>{"a"}));
  EXPECT_TRUE(a.neighbors.at("c").empty());
  EXPECT_EQ(a.isolated, (std::vector<BlockId>{"c", "d"}));
}

TEST(Adjacency, RandomGridIsSymmetricAndIrreflexive) {
  Rng rng(8);
  std::map<BlockId, MultiPolygon> blocks;
  for (int r = 0; r < 6; ++r) {
    for (int c = 0; c < 6; ++c) {
      if (rng.unit() < 0.3) continue;
      const double x = c * 0.01;
      const double y = r * 0.01;
      blocks["b" + std::to_string(r * 6 + c)] = rectangle({y, x}, {y + 0.01, x + 0.01});
    }
  }
  const auto adj = geo::build_adjacency(blocks);
  for (const auto& [b, ns] : adj.neighbors) {
    for (const auto& n : ns) {
      EXPECT_NE(n, b);
      const auto& back = adj.neighbors.at(n);
      EXPECT_NE(std::find(back.begin(), back.end(), b), back.end());
    }
  }
}

TEST(Travel, ZeroDistanceIsZeroSeconds) {
  const LatLon p{40.7, -74.0};
  EXPECT_EQ(HaversineEstimator{}.seconds(p, p), 0.0);
}

TEST(Travel, FiveKilometersAtThirtyIsTenMinutes) {
  const LatLon a{40.0, -75.0};
  const LatLon b{40.0 + lat_degrees(5000.0), -75.0};
  EXPECT_NEAR(haversine_meters(a, b), 5000.0, 1e-6);
  EXPECT_NEAR(HaversineEstimator{30.0}.seconds(a, b), 600.0, 1e-6);
}

TEST(Travel, MatrixTakesPrecedence) {
  const LatLon a{40.0, -75.0};
  const LatLon b{40.0 + lat_degrees(5000.0), -75.0};
  const auto p = TravelTimeProvider::matrix_with_fallback({{{"b1", "s1"}, 847.0}});
  EXPECT_EQ(p.seconds("b1", a, "s1", b), 847.0);
  EXPECT_NEAR(p.seconds("b2", a, "s1", b), 600.0, 1e-6);
}

TEST(Travel, MissingPairWithoutFallback) {
  const auto p = TravelTimeProvider::matrix({{{"b1", "s1"}, 847.0}});
  try {
    p.seconds("b1", {}, "s2", {});
    FAIL();
  } catch (const TravelLookupError& e) {
    EXPECT_EQ(e.block_id(), "b1");
    EXPECT_EQ(e.school_id(), "s2");
  }
}

TEST(Travel, EstimatorIsAMetric) {
  Rng rng(9);
  const HaversineEstimator est;
  for (int i = 0; i < 500; ++i) {
    auto point = [&] { return LatLon{30.0 + rng.unit() * 15.0, -120.0 + rng.unit() * 40.0}; };
    const auto a = point();
    const auto b = point();
    const auto c = point();
    EXPECT_NEAR(est.seconds(a, b), est.seconds(b, a), 1e-9);
    EXPECT_LE(est.seconds(a, c), est.seconds(a, b) + est.seconds(b, c) + 1e-6);
  }
}

}  // namespace
}  // namespace rezoner
