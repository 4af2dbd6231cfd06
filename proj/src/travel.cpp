#include "rezoner/travel.hpp"

#include <cmath>
#include <numbers>

#include "rezoner/csv.hpp"
#include "rezoner/errors.hpp"

namespace rezoner {

namespace {

double radians(double deg) { return deg * std::numbers::pi / 180.0; }

}  // namespace

double haversine_meters(const LatLon& a, const LatLon& b) {
  const double phi1 = radians(a.lat);
  const double phi2 = radians(b.lat);
  const double dphi = phi2 - phi1;
  const double dlambda = radians(b.lon - a.lon);
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlambda / 2.0);
  const double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  return 2.0 * kEarthRadiusMeters * std::asin(std::min(1.0, std::sqrt(h)));
}

double HaversineEstimator::seconds(const LatLon& from, const LatLon& to) const {
  return haversine_meters(from, to) / (speed_kmh * 1000.0 / 3600.0);
}

TravelTimeProvider TravelTimeProvider::estimator(double speed_kmh) {
  if (!(speed_kmh > 0.0)) throw InputError("travel speed must be > 0 km/h");
  TravelTimeProvider p;
  p.estimator_ = HaversineEstimator{speed_kmh};
  return p;
}

TravelTimeProvider TravelTimeProvider::matrix(std::map<std::pair<BlockId, SchoolId>, double> seconds) {
  TravelTimeProvider p;
  p.matrix_ = std::move(seconds);
  return p;
}

TravelTimeProvider TravelTimeProvider::matrix_with_fallback(std::map<std::pair<BlockId, SchoolId>, double> seconds,
                                                            double speed_kmh) {
  TravelTimeProvider p = estimator(speed_kmh);
  p.matrix_ = std::move(seconds);
  return p;
}

double TravelTimeProvider::seconds(const BlockId& block_id, const LatLon& centroid, const SchoolId& school_id,
                                   const LatLon& location) const {
  if (!matrix_.empty()) {
    auto it = matrix_.find({block_id, school_id});
    if (it != matrix_.end()) return it->second;
  }
  if (estimator_) return estimator_->seconds(centroid, location);
  throw TravelLookupError(block_id, school_id);
}

double TravelTimeProvider::seconds(const Block& block, const School& school) const {
  return seconds(block.id, block.centroid, school.id, school.location);
}

nlohmann::json TravelTimeProvider::describe() const {
  nlohmann::json j = {{"matrix_entries", matrix_.size()}};
  if (estimator_) {
    j["estimator"] = {{"kind", "haversine"}, {"speed_kmh", estimator_->speed_kmh}};
  } else {
    j["estimator"] = nullptr;
  }
  return j;
}

double travel_time(const Block& block, const School& school, const TravelTimeProvider& provider) {
  return provider.seconds(block, school);
}

std::map<std::pair<BlockId, SchoolId>, double> read_travel_matrix_csv(const std::filesystem::path& path) {
  const auto t = CsvTable::read(path);
  const auto cb = t.column("block_id");
  const auto cs = t.column("school_id");
  const auto ct = t.column("seconds");
  std::map<std::pair<BlockId, SchoolId>, double> out;
  for (std::size_t r = 0; r < t.rows(); ++r) {
    const double v = t.number(r, ct);
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InputError(t.source() + ": row " + std::to_string(r + 2) + ": travel seconds must be >= 0");
    }
    if (!out.emplace(std::make_pair(t.cell(r, cb), t.cell(r, cs)), v).second) {
      throw InputError(t.source() + ": duplicate travel entry for (" + t.cell(r, cb) + ", " + t.cell(r, cs) + ")");
    }
  }
  return out;
}

}  // namespace rezoner
