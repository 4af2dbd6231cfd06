#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "rezoner/model.hpp"
#include "rezoner/rng.hpp"
#include "rezoner/travel.hpp"

namespace rezoner::testing {

/// Counts with only White and Black students set.
GroupCounts wb(std::int64_t white, std::int64_t black);

/// Hand-built district on a rows x cols grid with rook adjacency. Block i
/// is "b%03d", school k is "s%02d" anchored at anchors[k]. Census children
/// equal the students; enrollment is the baseline zone's sum, so the result
/// always validates.
struct GridSpec {
  std::size_t rows = 1;
  std::size_t cols = 1;
  std::vector<GroupCounts> students;     // per block
  std::vector<std::size_t> zone;         // baseline school index per block
  std::vector<std::size_t> anchors;      // anchor block per school
  std::vector<std::uint8_t> removed;     // optional: blocks dropped from the grid
};
District grid_district(const GridSpec& spec);

std::string block_name(std::size_t i);
std::string school_name(std::size_t k);

/// Random connected instance for property tests: a grid with holes, 1..max
/// schools, contiguous baseline zones grown from random anchors, random
/// counts (some blocks empty).
struct RandomSpec {
  std::size_t min_blocks = 2;
  std::size_t max_blocks = 20;
  std::size_t max_schools = 3;
  std::int64_t max_count = 12;
  double empty_block_rate = 0.15;
  /// Probability that a baseline zone gets a detached island block.
  double island_rate = 0.0;
};
District random_district(Rng& rng, const RandomSpec& spec);

/// Matrix provider built from a function of (block index, school index).
TravelTimeProvider matrix_provider(const District& d, const std::function<double(std::size_t, std::size_t)>& seconds);
/// Random integer travel seconds in [lo, hi], baseline pairs included.
TravelTimeProvider random_matrix(Rng& rng, const District& d, int lo, int hi);

}  // namespace rezoner::testing
