#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "rezoner/model.hpp"

namespace rezoner {

/// Mean Earth radius used by every great-circle computation, in meters.
inline constexpr double kEarthRadiusMeters = 6371008.8;

/// Great-circle distance in meters.
double haversine_meters(const LatLon& a, const LatLon& b);

/// Straight-line driving estimate: haversine distance at a constant speed.
struct HaversineEstimator {
  double speed_kmh = 30.0;
  double seconds(const LatLon& from, const LatLon& to) const;
};

/// Block -> school travel seconds. Explicit matrix entries win; the
/// estimator, when configured, covers everything else.
class TravelTimeProvider {
 public:
  static TravelTimeProvider estimator(double speed_kmh = 30.0);
  /// Matrix-only provider; a missing pair is an error.
  static TravelTimeProvider matrix(std::map<std::pair<BlockId, SchoolId>, double> seconds);
  /// Matrix with estimator fallback for pairs it lacks.
  static TravelTimeProvider matrix_with_fallback(std::map<std::pair<BlockId, SchoolId>, double> seconds,
                                                 double speed_kmh = 30.0);

  /// Throws TravelLookupError when no source covers the pair.
  double seconds(const Block& block, const School& school) const;
  double seconds(const BlockId& block_id, const LatLon& centroid, const SchoolId& school_id,
                 const LatLon& location) const;

  bool has_matrix() const { return !matrix_.empty(); }
  const std::optional<HaversineEstimator>& fallback() const { return estimator_; }
  std::size_t matrix_size() const { return matrix_.size(); }

  /// Human-readable description for run manifests.
  nlohmann::json describe() const;

 private:
  std::map<std::pair<BlockId, SchoolId>, double> matrix_;
  std::optional<HaversineEstimator> estimator_;
};

double travel_time(const Block& block, const School& school, const TravelTimeProvider& provider);

/// Reads {block_id, school_id, seconds} CSV. Throws InputError on bad rows
/// or negative times.
std::map<std::pair<BlockId, SchoolId>, double> read_travel_matrix_csv(const std::filesystem::path& path);

}  // namespace rezoner
