#include "rezoner/sweep.hpp"

#include <atomic>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "rezoner/csv.hpp"
#include "rezoner/metrics.hpp"

namespace rezoner {

namespace {

unsigned worker_count(unsigned requested, std::size_t jobs) {
  unsigned n = requested;
  if (n == 0) {
    if (const char* env = std::getenv("REZONER_WORKERS")) n = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

void run_row(const Instance& instance, const TravelTimeProvider& travel, SweepRow& row) {
  try {
    auto result = solve(instance, row.config, travel);
    auto outcome = outcome_report(instance, instance.baseline(), result.best_zoning, travel);
    row.dissimilarity_before = dissimilarity(instance, instance.baseline()).value;
    row.dissimilarity_after = dissimilarity(instance, result.best_zoning).value;
    row.relative_change = row.dissimilarity_before > 0.0
                              ? (row.dissimilarity_after - row.dissimilarity_before) / row.dissimilarity_before
                              : 0.0;
    row.switcher_fraction = outcome.switcher_fraction;
    row.mean_travel_delta_minutes = outcome.mean_travel_delta_minutes;
    row.result = std::move(result);
    row.outcome = std::move(outcome);
  } catch (const std::exception& e) {
    row.error = e.what();
  }
}

}  // namespace

std::vector<ConstraintConfig> sweep_configs(const ConstraintConfig& base) {
  std::vector<ConstraintConfig> out;
  for (bool contiguity : {true, false}) {
    for (double travel : {0.5, 1.0}) {
      auto c = base;
      c.max_travel_increase_fraction = travel;
      c.enforce_contiguity = contiguity;
      out.push_back(c);
    }
  }
  return out;
}

std::vector<SweepRow> sweep(const Instance& instance, const std::vector<ConstraintConfig>& configs,
                            const TravelTimeProvider& travel, unsigned workers) {
  std::vector<SweepRow> rows(configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i) rows[i].config = configs[i];

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < rows.size();) run_row(instance, travel, rows[i]);
  };
  const unsigned n = worker_count(workers, rows.size());
  if (n <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(work);
  }
  return rows;
}

nlohmann::json to_json(const std::vector<SweepRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j;
    j["config"] = r.config;
    if (!r.ok()) {
      j["error"] = r.error;
    } else {
      j["dissimilarity_before"] = r.dissimilarity_before;
      j["dissimilarity_after"] = r.dissimilarity_after;
      j["relative_change"] = r.relative_change;
      j["switcher_fraction"] = r.switcher_fraction;
      j["mean_travel_delta_minutes"] = r.mean_travel_delta_minutes;
      j["termination"] = termination_name(r.result->termination);
      j["best_objective"] = r.result->best_objective;
    }
    out.push_back(std::move(j));
  }
  return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out.precision(17);
  out << "max_travel_increase,enforce_contiguity,dissimilarity_before,dissimilarity_after,relative_change,"
         "switcher_fraction,mean_travel_delta_minutes,error\n";
  for (const auto& r : rows) {
    out << r.config.max_travel_increase_fraction << ',' << (r.config.enforce_contiguity ? "true" : "false") << ',';
    if (r.ok()) {
      out << r.dissimilarity_before << ',' << r.dissimilarity_after << ',' << r.relative_change << ','
          << r.switcher_fraction << ',' << r.mean_travel_delta_minutes << ",\n";
    } else {
      out << ",,,,," << csv_escape(r.error) << '\n';
    }
  }
  return out.str();
}

}  // namespace rezoner
