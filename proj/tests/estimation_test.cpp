#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numeric>

#include "rezoner/errors.hpp"
#include "rezoner/estimation.hpp"
#include "rezoner/rng.hpp"

namespace rezoner {
namespace {

std::vector<std::int64_t> allocate(std::vector<ZoneBlock> blocks, std::int64_t enrolled) {
  return allocate_zone_group(blocks, enrolled, "s", Group::Black);
}

TEST(AllocateZoneGroup, SingleBlockTakesEverything) {
  EXPECT_EQ(allocate({{"b1", 3, 9}}, 7), (std::vector<std::int64_t>{7}));
}

TEST(AllocateZoneGroup, CeilingThenRemainder) {
  EXPECT_EQ(allocate({{"b1", 5, 10}, {"b2", 5, 10}}, 7), (std::vector<std::int64_t>{4, 3}));
}

TEST(AllocateZoneGroup, MajorityShareFallsBackToAllChildren) {
  // 6/8 > 1/2, replaced by 12/16: the same 3/4 here.
  EXPECT_EQ(allocate({{"b1", 6, 12}, {"b2", 2, 4}}, 4), (std::vector<std::int64_t>{3, 1}));
  // 6/8 replaced by 8/16: b1 gets ceil(3) = 3, b2 ceil(1.5) = 2 capped at 2,
  // and the last student goes to b1. Without the fallback b1 would get 5.
  EXPECT_EQ(allocate({{"b1", 6, 8}, {"b2", 2, 8}}, 6), (std::vector<std::int64_t>{4, 2}));
}

TEST(AllocateZoneGroup, VisitsByDescendingCountThenId) {
  // b2 has the larger count and is served first; b1/b3 tie and go by id.
  EXPECT_EQ(allocate({{"b3", 2, 5}, {"b1", 2, 5}, {"b2", 4, 5}}, 3), (std::vector<std::int64_t>{0, 1, 2}));
}

TEST(AllocateZoneGroup, NoGroupChildrenUsesTotalShares) {
  EXPECT_EQ(allocate({{"b1", 0, 3}, {"b2", 0, 1}, {"b3", 0, 0}}, 4), (std::vector<std::int64_t>{3, 1, 0}));
}

TEST(AllocateZoneGroup, ZeroEnrollmentPlacesNobody) {
  EXPECT_EQ(allocate({{"b1", 0, 0}, {"b2", 4, 5}}, 0), (std::vector<std::int64_t>{0, 0}));
}

TEST(AllocateZoneGroup, ZoneWithoutChildrenIsUnallocatable) {
  try {
    allocate_zone_group(std::vector<ZoneBlock>{{"b1", 0, 0}}, 2, "s9", Group::Asian);
    FAIL();
  } catch (const UnallocatableError& e) {
    EXPECT_EQ(e.school_id(), "s9");
    EXPECT_EQ(e.group(), "Asian");
  }
}

AllocationInput random_input(Rng& rng) {
  AllocationInput in;
  const auto schools = rng.between(1, 4);
  int block = 0;
  for (int s = 0; s < schools; ++s) {
    const auto sid = "s" + std::to_string(s);
    const auto n = rng.between(1, 8);
    GroupCounts zone_children;
    for (int i = 0; i < n; ++i) {
      const auto bid = "b" + std::to_string(block++);
      GroupCounts c;
      for (Group g : kAllGroups) c[g] = rng.unit() < 0.3 ? 0 : rng.between(0, 30);
      in.zones[sid].push_back(bid);
      in.census[bid] = c;
      zone_children += c;
    }
    GroupCounts e;
    for (Group g : kAllGroups) {
      if (zone_children.total() == 0) break;
      // Sometimes more students than census children, sometimes students
      // with no children of that group in the zone.
      e[g] = rng.between(0, zone_children[g] + 15);
    }
    in.enrollment[sid] = e;
  }
  return in;
}

TEST(AllocateStudents, ConservesEveryZoneAndGroup) {
  Rng rng(3);
  for (int i = 0; i < 300; ++i) {
    const auto in = random_input(rng);
    const auto out = allocate_students(in);
    for (const auto& [s, blocks] : in.zones) {
      GroupCounts sum;
      for (const auto& b : blocks) {
        for (Group g : kAllGroups) EXPECT_GE(out.at(b)[g], 0);
        sum += out.at(b);
      }
      EXPECT_EQ(sum, in.enrollment.at(s));
    }
    EXPECT_EQ(allocate_students(in), out);
  }
}

TEST(AllocateStudents, LargerBlocksNeverGetFewerWhenCapsAreSlack) {
  Rng rng(4);
  for (int i = 0; i < 300; ++i) {
    std::vector<ZoneBlock> blocks;
    const auto n = rng.between(2, 8);
    std::int64_t group_total = 0;
    for (int b = 0; b < n; ++b) {
      const auto c = rng.between(1, 20);
      blocks.push_back({"b" + std::to_string(b), c, c * 2});
      group_total += c;
    }
    // Keep every share at or below one half so the fallback never applies,
    // and enrollment small enough that no cap binds.
    bool small = true;
    for (const auto& b : blocks) small = small && 2 * b.group_children <= group_total;
    if (!small) continue;
    const auto got = allocate_zone_group(blocks, rng.between(0, group_total / 4), "s", Group::White);
    for (std::size_t a = 0; a < blocks.size(); ++a) {
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (blocks[a].group_children > blocks[b].group_children) {
          EXPECT_GE(got[a], got[b]);
        }
      }
    }
  }
}

TEST(EstimationCsv, ReadsLongFormat) {
  const auto dir = std::filesystem::temp_directory_path() / "rezoner_estimation_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "census.csv") << "block_id,group,under18_count\nb1,White,4\nb1,Black,2\nb2,Hispanic/Latinx,3\n";
    std::ofstream(dir / "enrollment.csv") << "school_id,group,enrollment\ns1,White,3\n";
    std::ofstream(dir / "bad.csv") << "block_id,group,under18_count\nb1,Martian,4\n";
  }
  const auto census = read_census_csv(dir / "census.csv");
  EXPECT_EQ(census.at("b1")[Group::Black], 2);
  EXPECT_EQ(census.at("b2")[Group::HispanicLatinx], 3);
  EXPECT_EQ(read_enrollment_csv(dir / "enrollment.csv").at("s1").white(), 3);
  EXPECT_THROW(read_census_csv(dir / "bad.csv"), InputError);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace rezoner
