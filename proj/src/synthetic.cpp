#include "rezoner/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <tuple>

#include "rezoner/estimation.hpp"
#include "rezoner/geometry.hpp"
#include "rezoner/rng.hpp"
#include "rezoner/travel.hpp"

namespace rezoner {

namespace {

constexpr double kOriginLat = 40.0;
constexpr double kOriginLon = -75.0;
constexpr double kCellMeters = 300.0;

// Shares of non-White children by group (Asian, Black, Hispanic/Latinx,
// Native American).
constexpr std::array<double, 4> kNonWhiteMix = {0.15, 0.40, 0.40, 0.05};
constexpr std::array<Group, 4> kNonWhiteGroups = {Group::Asian, Group::Black, Group::HispanicLatinx,
                                                  Group::NativeAmerican};

std::string padded(char prefix, std::size_t i, int width) {
  auto digits = std::to_string(i);
  if (static_cast<int>(digits.size()) < width) digits.insert(0, static_cast<std::size_t>(width) - digits.size(), '0');
  return prefix + digits;
}

int digits(std::size_t n) {
  int d = 1;
  while (n >= 10) {
    n /= 10;
    ++d;
  }
  return d;
}

struct Grid {
  std::size_t n = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  bool exists(std::size_t r, std::size_t c) const { return r < rows && c < cols && r * cols + c < n; }
};

// Anchor blocks: centers of an even tr x tc tiling, pulled toward the grid
// center by `spread`, each snapped to the nearest unused cell. Falls back to
// evenly spaced block indices when no tiling fits.
std::vector<std::size_t> place_schools(const Grid& g, std::size_t k, double spread) {
  const double aspect = std::log(static_cast<double>(g.cols) / static_cast<double>(g.rows));
  std::size_t best_tr = 0;
  std::size_t best_tc = 0;
  double best_err = INFINITY;
  for (std::size_t tc = 1; tc <= k; ++tc) {
    if (k % tc != 0) continue;
    const std::size_t tr = k / tc;
    if (tr > g.rows || tc > g.cols) continue;
    const double err = std::abs(std::log(static_cast<double>(tc) / static_cast<double>(tr)) - aspect);
    if (err < best_err - 1e-12 || (std::abs(err - best_err) <= 1e-12 && tc > best_tc)) {
      best_err = err;
      best_tr = tr;
      best_tc = tc;
    }
  }
  std::vector<std::size_t> anchors;
  if (best_tc == 0) {
    for (std::size_t i = 0; i < k; ++i) anchors.push_back((2 * i + 1) * g.n / (2 * k));
    return anchors;
  }
  std::vector<std::uint8_t> used(g.n, 0);
  const double mid_r = static_cast<double>(g.rows) / 2.0;
  const double mid_c = static_cast<double>(g.cols) / 2.0;
  for (std::size_t i = 0; i < best_tr; ++i) {
    for (std::size_t j = 0; j < best_tc; ++j) {
      const double rc = (static_cast<double>(i) + 0.5) * static_cast<double>(g.rows) / static_cast<double>(best_tr);
      const double cc = (static_cast<double>(j) + 0.5) * static_cast<double>(g.cols) / static_cast<double>(best_tc);
      const double tr = mid_r + spread * (rc - mid_r);
      const double tcol = mid_c + spread * (cc - mid_c);
      std::size_t pick = SIZE_MAX;
      double pick_d = INFINITY;
      for (std::size_t cell = 0; cell < g.n; ++cell) {
        if (used[cell]) continue;
        const double dr = static_cast<double>(cell / g.cols) + 0.5 - tr;
        const double dc = static_cast<double>(cell % g.cols) + 0.5 - tcol;
        const double d = dr * dr + dc * dc;
        if (d < pick_d - 1e-12) {
          pick_d = d;
          pick = cell;
        }
      }
      used[pick] = 1;
      anchors.push_back(pick);
    }
  }
  return anchors;
}

// Seconds to drive between the centroids of adjacent cells a and b.
double edge_seconds(const Grid& g, const SyntheticLayout& layout, std::size_t a, std::size_t b) {
  const bool horizontal = a / g.cols == b / g.cols;
  const std::size_t line = horizontal ? a / g.cols : a % g.cols;
  const bool arterial = layout.arterial_spacing > 0 && (horizontal || layout.cross_arterials) &&
                        line % layout.arterial_spacing == layout.arterial_spacing / 2;
  const double kmh = arterial ? layout.arterial_speed_kmh : layout.street_speed_kmh;
  return kCellMeters / (kmh / 3.6);
}

// Multi-source Dijkstra over the street grid. owner[i] is the source whose
// shortest-path tree reaches cell i; equal times go to the smaller source.
std::vector<double> network_times(const Grid& g, const SyntheticLayout& layout, const std::vector<std::size_t>& sources,
                                  std::vector<std::int32_t>* owner = nullptr) {
  std::vector<double> time(g.n, INFINITY);
  std::vector<std::int32_t> own(g.n, -1);
  using Entry = std::tuple<double, std::size_t, std::size_t>;  // seconds, source, cell
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> frontier;
  for (std::size_t s = 0; s < sources.size(); ++s) frontier.emplace(0.0, s, sources[s]);
  while (!frontier.empty()) {
    auto [t, s, cell] = frontier.top();
    frontier.pop();
    if (own[cell] >= 0) continue;
    own[cell] = static_cast<std::int32_t>(s);
    time[cell] = t;
    const std::size_t r = cell / g.cols;
    const std::size_t c = cell % g.cols;
    const std::pair<long, long> offsets[] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
    for (auto [dr, dc] : offsets) {
      const long rr = static_cast<long>(r) + dr;
      const long cc = static_cast<long>(c) + dc;
      if (rr < 0 || cc < 0 || !g.exists(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc))) continue;
      const auto n = static_cast<std::size_t>(rr) * g.cols + static_cast<std::size_t>(cc);
      if (own[n] < 0) frontier.emplace(t + edge_seconds(g, layout, cell, n), s, n);
    }
  }
  if (owner != nullptr) *owner = std::move(own);
  return time;
}

Grid make_grid(std::size_t n_blocks, double aspect) {
  Grid g;
  g.n = n_blocks;
  g.cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n_blocks) * aspect) - 1e-9));
  g.cols = std::clamp<std::size_t>(g.cols, 1, n_blocks);
  g.rows = (n_blocks + g.cols - 1) / g.cols;
  return g;
}

void check_layout(const SyntheticLayout& layout) {
  if (!(layout.school_spread > 0.0 && layout.school_spread <= 1.0)) {
    throw std::invalid_argument("school_spread must be in (0, 1]");
  }
  if (!(layout.aspect > 0.0) || !std::isfinite(layout.aspect)) throw std::invalid_argument("aspect must be positive");
  if (!(layout.street_speed_kmh > 0.0) || !(layout.arterial_speed_kmh > 0.0)) {
    throw std::invalid_argument("speeds must be positive");
  }
}

double white_share(const DemographicGradient& gr, double x) {
  if (gr.shape == DemographicGradient::Shape::Step) return x < 0.5 ? gr.west_white_share : gr.east_white_share;
  return gr.west_white_share + (gr.east_white_share - gr.west_white_share) * x;
}

}  // namespace

DemographicGradient DemographicGradient::step(double west, double east) {
  DemographicGradient g;
  g.shape = Shape::Step;
  g.west_white_share = west;
  g.east_white_share = east;
  return g;
}

District generate_synthetic_district(std::size_t n_blocks, std::size_t n_schools, const DemographicGradient& gradient,
                                     std::uint64_t seed, const SyntheticLayout& layout) {
  if (n_schools < 1) throw std::invalid_argument("need at least one school");
  if (n_schools > n_blocks) throw std::invalid_argument("more schools than blocks");
  if (gradient.min_children < 0 || gradient.max_children < gradient.min_children) {
    throw std::invalid_argument("bad children range");
  }
  check_layout(layout);
  const Grid g = make_grid(n_blocks, layout.aspect);

  District d;
  d.id = "synthetic-" + std::to_string(n_blocks) + "x" + std::to_string(n_schools) + "-" + std::to_string(seed);
  const int bw = std::max(3, digits(n_blocks - 1));
  const int sw = std::max(2, digits(n_schools - 1));

  const double dlat = kCellMeters / kEarthRadiusMeters * 180.0 / std::numbers::pi;
  const double dlon = dlat / std::cos(kOriginLat * std::numbers::pi / 180.0);

  const auto anchors = place_schools(g, n_schools, layout.school_spread);
  std::vector<std::uint8_t> is_anchor(n_blocks, 0);
  for (auto a : anchors) is_anchor[a] = 1;

  Rng rng(mix_seed(seed));
  for (std::size_t i = 0; i < n_blocks; ++i) {
    const std::size_t r = i / g.cols;
    const std::size_t c = i % g.cols;
    Block b;
    b.id = padded('b', i, bw);
    const LatLon sw_corner{kOriginLat + static_cast<double>(r) * dlat, kOriginLon + static_cast<double>(c) * dlon};
    const LatLon ne_corner{sw_corner.lat + dlat, sw_corner.lon + dlon};
    b.centroid = {sw_corner.lat + dlat / 2.0, sw_corner.lon + dlon / 2.0};
    b.geometry = geo::multipolygon_to_geojson(geo::rectangle(sw_corner, ne_corner));
    const std::pair<long, long> offsets[] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
    for (auto [dr, dc] : offsets) {
      const long rr = static_cast<long>(r) + dr;
      const long cc = static_cast<long>(c) + dc;
      if (rr < 0 || cc < 0 || !g.exists(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc))) continue;
      b.adjacent_block_ids.push_back(padded('b', static_cast<std::size_t>(rr) * g.cols + static_cast<std::size_t>(cc), bw));
    }
    std::sort(b.adjacent_block_ids.begin(), b.adjacent_block_ids.end());

    std::int64_t children = rng.between(gradient.min_children, gradient.max_children);
    if (is_anchor[i]) children = std::max<std::int64_t>(children, 1);
    const double x = (static_cast<double>(c) + 0.5) / static_cast<double>(g.cols);
    double p = white_share(gradient, x);
    if (gradient.block_noise > 0.0) p += gradient.block_noise * (2.0 * rng.unit() - 1.0);
    p = std::clamp(p, 0.0, 1.0);
    if (gradient.homogeneous_blocks > 0.0 && rng.unit() < gradient.homogeneous_blocks) p = rng.unit() < p ? 1.0 : 0.0;
    for (std::int64_t k = 0; k < children; ++k) {
      if (rng.unit() < p) {
        ++b.census_children[Group::White];
        continue;
      }
      double u = rng.unit();
      std::size_t gi = 0;
      while (gi + 1 < kNonWhiteMix.size() && u >= kNonWhiteMix[gi]) {
        u -= kNonWhiteMix[gi];
        ++gi;
      }
      ++b.census_children[kNonWhiteGroups[gi]];
    }
    d.blocks.push_back(std::move(b));
  }

  // Voronoi cells by network travel time; each block joins the school of
  // its shortest-path parent, so every zone is contiguous.
  std::vector<std::int32_t> zone;
  network_times(g, layout, anchors, &zone);

  AllocationInput alloc;
  for (std::size_t s = 0; s < n_schools; ++s) {
    School sc;
    sc.id = padded('s', s, sw);
    sc.containing_block_id = d.blocks[anchors[s]].id;
    sc.location = d.blocks[anchors[s]].centroid;
    d.schools.push_back(sc);
  }
  for (std::size_t i = 0; i < n_blocks; ++i) {
    const auto& school = d.schools[zone[i]].id;
    d.baseline_plan.emplace(d.blocks[i].id, school);
    alloc.zones[school].push_back(d.blocks[i].id);
    alloc.census.emplace(d.blocks[i].id, d.blocks[i].census_children);
  }
  for (auto& sc : d.schools) {
    GroupCounts zone_children;
    for (const auto& bid : alloc.zones[sc.id]) zone_children += alloc.census[bid];
    GroupCounts enrolled;
    for (Group gr : kAllGroups) {
      enrolled[gr] = static_cast<std::int64_t>(std::floor(gradient.enrollment_rate * static_cast<double>(zone_children[gr]) + 0.5));
    }
    if (enrolled.total() == 0) {
      Group largest = Group::White;
      for (Group gr : kAllGroups) {
        if (zone_children[gr] > zone_children[largest]) largest = gr;
      }
      enrolled[largest] = 1;
    }
    sc.enrollment_by_group = enrolled;
    alloc.enrollment.emplace(sc.id, enrolled);
  }
  d.students_per_block = allocate_students(alloc);
  return d;
}

}  // namespace rezoner

namespace rezoner {

std::map<std::pair<BlockId, SchoolId>, double> synthetic_travel_times(const District& district,
                                                                      const SyntheticLayout& layout) {
  check_layout(layout);
  const Grid g = make_grid(district.blocks.size(), layout.aspect);
  std::map<BlockId, std::size_t> cell;
  for (std::size_t i = 0; i < district.blocks.size(); ++i) cell.emplace(district.blocks[i].id, i);
  std::map<std::pair<BlockId, SchoolId>, double> out;
  for (const auto& school : district.schools) {
    const auto it = cell.find(school.containing_block_id);
    if (it == cell.end()) throw std::invalid_argument("school '" + school.id + "' has no containing block");
    const auto times = network_times(g, layout, {it->second});
    for (std::size_t i = 0; i < district.blocks.size(); ++i) out[{district.blocks[i].id, school.id}] = times[i];
  }
  return out;
}

}  // namespace rezoner
