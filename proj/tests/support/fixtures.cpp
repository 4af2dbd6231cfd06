#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace rezoner::testing {

namespace {

LatLon cell_center(std::size_t r, std::size_t c) {
  return {40.0 + 0.003 * static_cast<double>(r), -75.0 + 0.004 * static_cast<double>(c)};
}

std::string padded(char prefix, std::size_t i, std::size_t width) {
  auto s = std::to_string(i);
  if (s.size() < width) s.insert(0, width - s.size(), '0');
  return prefix + s;
}

// Assembles a district from cells with explicit coordinates and adjacency.
District assemble(const std::vector<std::pair<std::size_t, std::size_t>>& cells,
                  const std::vector<std::vector<std::size_t>>& adjacency, const std::vector<GroupCounts>& students,
                  const std::vector<std::size_t>& zone, const std::vector<std::size_t>& anchors) {
  District d;
  d.id = "fixture";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    Block b;
    b.id = block_name(i);
    b.centroid = cell_center(cells[i].first, cells[i].second);
    for (auto n : adjacency[i]) b.adjacent_block_ids.push_back(block_name(n));
    std::sort(b.adjacent_block_ids.begin(), b.adjacent_block_ids.end());
    b.census_children = students[i];
    d.blocks.push_back(std::move(b));
    d.baseline_plan[block_name(i)] = school_name(zone[i]);
    d.students_per_block[block_name(i)] = students[i];
  }
  for (std::size_t k = 0; k < anchors.size(); ++k) {
    School s;
    s.id = school_name(k);
    s.containing_block_id = block_name(anchors[k]);
    s.location = d.blocks[anchors[k]].centroid;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (zone[i] == k) s.enrollment_by_group += students[i];
    }
    d.schools.push_back(std::move(s));
  }
  return d;
}

}  // namespace

GroupCounts wb(std::int64_t white, std::int64_t black) {
  GroupCounts c;
  c[Group::White] = white;
  c[Group::Black] = black;
  return c;
}

std::string block_name(std::size_t i) { return padded('b', i, 3); }
std::string school_name(std::size_t k) { return padded('s', k, 2); }

District grid_district(const GridSpec& spec) {
  const auto n = spec.rows * spec.cols;
  std::vector<std::uint8_t> removed = spec.removed;
  removed.resize(n, 0);
  std::vector<std::size_t> index(n, SIZE_MAX);
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t i = 0; i < n; ++i) {
    if (removed[i]) continue;
    index[i] = cells.size();
    cells.emplace_back(i / spec.cols, i % spec.cols);
  }
  std::vector<std::vector<std::size_t>> adjacency(cells.size());
  std::vector<GroupCounts> students(cells.size());
  std::vector<std::size_t> zone(cells.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (removed[i]) continue;
    const auto r = i / spec.cols;
    const auto c = i % spec.cols;
    auto link = [&](std::size_t j) {
      if (!removed[j]) adjacency[index[i]].push_back(index[j]);
    };
    if (r > 0) link(i - spec.cols);
    if (r + 1 < spec.rows) link(i + spec.cols);
    if (c > 0) link(i - 1);
    if (c + 1 < spec.cols) link(i + 1);
    students[index[i]] = spec.students[i];
    zone[index[i]] = spec.zone[i];
  }
  std::vector<std::size_t> anchors;
  for (auto a : spec.anchors) anchors.push_back(index[a]);
  return assemble(cells, adjacency, students, zone, anchors);
}

District random_district(Rng& rng, const RandomSpec& spec) {
  const auto n = static_cast<std::size_t>(
      rng.between(static_cast<std::int64_t>(spec.min_blocks), static_cast<std::int64_t>(spec.max_blocks)));
  const auto side = static_cast<std::size_t>(std::ceil(std::sqrt(2.0 * static_cast<double>(n)))) + 1;

  // Random connected set of n cells grown from the center.
  std::set<std::pair<std::size_t, std::size_t>> chosen;
  std::vector<std::pair<std::size_t, std::size_t>> frontier{{side / 2, side / 2}};
  while (chosen.size() < n) {
    const auto pick = rng.below(frontier.size());
    const auto cell = frontier[pick];
    frontier.erase(frontier.begin() + static_cast<long>(pick));
    if (!chosen.insert(cell).second) continue;
    const auto [r, c] = cell;
    if (r > 0) frontier.emplace_back(r - 1, c);
    if (r + 1 < side) frontier.emplace_back(r + 1, c);
    if (c > 0) frontier.emplace_back(r, c - 1);
    if (c + 1 < side) frontier.emplace_back(r, c + 1);
  }
  std::vector<std::pair<std::size_t, std::size_t>> cells(chosen.begin(), chosen.end());
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
  for (std::size_t i = 0; i < cells.size(); ++i) index[cells[i]] = i;
  std::vector<std::vector<std::size_t>> adjacency(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [r, c] = cells[i];
    for (auto [dr, dc] : {std::pair{-1L, 0L}, {1L, 0L}, {0L, -1L}, {0L, 1L}}) {
      const auto it = index.find({r + dr, c + dc});
      if (it != index.end()) adjacency[i].push_back(it->second);
    }
  }

  const auto k = static_cast<std::size_t>(
      rng.between(1, static_cast<std::int64_t>(std::min(spec.max_schools, n))));
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  std::vector<std::size_t> anchors(order.begin(), order.begin() + static_cast<long>(k));

  // Contiguous zones by random multi-source growth.
  std::vector<std::size_t> zone(n, SIZE_MAX);
  for (std::size_t s = 0; s < k; ++s) zone[anchors[s]] = s;
  for (std::size_t assigned = k; assigned < n;) {
    std::vector<std::pair<std::size_t, std::size_t>> options;  // (block, school)
    for (std::size_t b = 0; b < n; ++b) {
      if (zone[b] != SIZE_MAX) continue;
      for (auto m : adjacency[b]) {
        if (zone[m] != SIZE_MAX) options.emplace_back(b, zone[m]);
      }
    }
    const auto [b, s] = options[rng.below(options.size())];
    zone[b] = s;
    ++assigned;
  }
  if (k > 1 && n > k && rng.unit() < spec.island_rate) {
    const auto b = order[k + rng.below(n - k)];
    zone[b] = (zone[b] + 1 + rng.below(k - 1)) % k;
  }

  std::vector<GroupCounts> students(n);
  for (std::size_t b = 0; b < n; ++b) {
    if (rng.unit() < spec.empty_block_rate) continue;
    students[b][Group::White] = rng.between(0, spec.max_count);
    students[b][Group::Black] = rng.between(0, spec.max_count);
    students[b][Group::HispanicLatinx] = rng.between(0, spec.max_count / 2);
    if (rng.unit() < 0.3) students[b][Group::Asian] = rng.between(0, 3);
  }
  for (auto a : anchors) {
    if (students[a].total() == 0) students[a][Group::White] = 1;
  }
  std::int64_t white = 0;
  std::int64_t other = 0;
  for (const auto& c : students) {
    white += c.white();
    other += c.non_white();
  }
  if (white == 0) students[anchors[0]][Group::White] = 1;
  if (other == 0) students[anchors[0]][Group::Black] = 1;
  return assemble(cells, adjacency, students, zone, anchors);
}

TravelTimeProvider matrix_provider(const District& d, const std::function<double(std::size_t, std::size_t)>& seconds) {
  std::map<std::pair<BlockId, SchoolId>, double> m;
  for (std::size_t b = 0; b < d.blocks.size(); ++b) {
    for (std::size_t s = 0; s < d.schools.size(); ++s) m[{d.blocks[b].id, d.schools[s].id}] = seconds(b, s);
  }
  return TravelTimeProvider::matrix(std::move(m));
}

TravelTimeProvider random_matrix(Rng& rng, const District& d, int lo, int hi) {
  std::vector<double> t(d.blocks.size() * d.schools.size());
  for (auto& v : t) v = static_cast<double>(rng.between(lo, hi));
  const auto ns = d.schools.size();
  return matrix_provider(d, [&](std::size_t b, std::size_t s) { return t[b * ns + s]; });
}

}  // namespace rezoner::testing
