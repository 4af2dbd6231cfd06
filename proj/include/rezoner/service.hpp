#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include <nlohmann/json.hpp>

#include "rezoner/instance.hpp"
#include "rezoner/model.hpp"
#include "rezoner/solver.hpp"
#include "rezoner/travel.hpp"

namespace rezoner::service {

struct Request {
  std::string method;
  std::string path;  // may carry a query string, which is ignored
  std::string body;
};

struct Response {
  int status = 200;
  nlohmann::json body;
  std::map<std::string, std::string> headers;
};

enum class JobState { Queued, Running, Done, Failed };
std::string_view job_state_name(JobState s);
std::optional<JobState> parse_job_state(std::string_view name);

struct ServiceOptions {
  /// Holds districts/<name>.json (plus optional districts/<name>.travel.csv)
  /// and the jobs/ directory the service persists into.
  std::filesystem::path data_dir;
  /// Queued jobs beyond this are refused with 503.
  std::size_t max_queue = 16;
  /// Speed for straight-line travel estimates when a district has no matrix.
  double speed_kmh = 30.0;
  /// Tests may drive the queue by hand with run_next().
  bool start_worker = true;
};

/// Districts, solve jobs and their results behind a transport-free request
/// handler. One worker thread solves queued jobs in submission order.
/// handle() is safe to call from any number of threads and never waits on
/// a running solve.
///
/// A job's id is a digest of its district and config, so resubmitting the
/// same scenario returns the existing job. Finished jobs live under
/// jobs/<id>/ as the files the CLI writes for a solve; job.json is written
/// last, so a crash mid-write leaves the job unfinished rather than corrupt.
/// Unfinished jobs found on startup are queued again.
class ScenarioService {
 public:
  explicit ScenarioService(ServiceOptions options);
  ~ScenarioService();
  ScenarioService(const ScenarioService&) = delete;
  ScenarioService& operator=(const ScenarioService&) = delete;

  Response handle(const Request& request);

  /// Solves the oldest queued job on the calling thread. False when the
  /// queue is empty. Only for services built without a worker.
  bool run_next();
  /// Blocks until no job is queued or running.
  void wait_idle();
  /// Cancels the running solve and joins the worker. Its job stays
  /// unfinished on disk.
  void stop();

  std::size_t district_count() const { return districts_.size(); }

 private:
  struct DistrictEntry {
    District district;
    Instance instance;
    TravelTimeProvider travel;
    std::string digest;
    nlohmann::json summary;
  };
  struct Job {
    std::string id;
    std::string district_id;
    ConstraintConfig config;
    JobState state = JobState::Queued;
    std::optional<TracePoint> progress;
    std::string error;
    std::uint64_t sequence = 0;
  };

  void load_districts();
  void load_jobs();
  void worker_loop();
  void solve_job(const std::string& id);
  void persist(const Job& job) const;
  std::filesystem::path job_dir(const std::string& id) const;
  nlohmann::json job_json(const Job& job) const;

  Response list_districts() const;
  Response get_district(const std::string& id) const;
  Response submit(const std::string& district_id, const std::string& body);
  Response get_job(const std::string& id) const;
  Response get_result(const std::string& id) const;

  ServiceOptions options_;
  std::map<std::string, DistrictEntry> districts_;

  mutable std::mutex mutex_;
  std::condition_variable work_ready_;
  std::condition_variable idle_;
  std::map<std::string, Job> jobs_;
  std::deque<std::string> queue_;
  bool busy_ = false;
  std::uint64_t next_sequence_ = 0;
  std::atomic<bool> stopping_{false};
  std::thread worker_;
};

}  // namespace rezoner::service
