#include "rezoner/service.hpp"

#include <algorithm>
#include <vector>

#include "rezoner/artifacts.hpp"
#include "rezoner/district_io.hpp"
#include "rezoner/errors.hpp"
#include "rezoner/files.hpp"
#include "rezoner/outcome.hpp"
#include "rezoner/validate.hpp"

namespace rezoner::service {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* const kArtifacts[] = {"result.json", "plan.json", "report.json", "report.csv", "trace.csv"};

Response error(int status, const std::string& type, const std::string& message, json details = json::object()) {
  json e = {{"type", type}, {"message", message}};
  for (auto& [k, v] : details.items()) e[k] = v;
  return {status, {{"error", e}}, {}};
}

std::vector<std::string> split_path(const std::string& raw) {
  const auto path = raw.substr(0, raw.find('?'));
  std::vector<std::string> parts;
  std::size_t i = 0;
  while (i < path.size()) {
    const auto j = path.find('/', i);
    const auto end = j == std::string::npos ? path.size() : j;
    if (end > i) parts.push_back(path.substr(i, end - i));
    i = end + 1;
  }
  return parts;
}

json trace_point_json(const std::optional<TracePoint>& p) {
  if (!p) return nullptr;
  return {{"elapsed_seconds", p->elapsed_seconds}, {"evaluations", p->evaluations}, {"objective", p->objective}};
}

std::optional<TracePoint> trace_point_from(const json& j) {
  if (!j.is_object()) return std::nullopt;
  return TracePoint{j.at("elapsed_seconds").get<double>(), j.at("evaluations").get<std::int64_t>(),
                    j.at("objective").get<double>()};
}

}  // namespace

std::string_view job_state_name(JobState s) {
  switch (s) {
    case JobState::Queued: return "Queued";
    case JobState::Running: return "Running";
    case JobState::Done: return "Done";
    case JobState::Failed: return "Failed";
  }
  return "Failed";
}

std::optional<JobState> parse_job_state(std::string_view name) {
  for (auto s : {JobState::Queued, JobState::Running, JobState::Done, JobState::Failed}) {
    if (job_state_name(s) == name) return s;
  }
  return std::nullopt;
}

ScenarioService::ScenarioService(ServiceOptions options) : options_(std::move(options)) {
  load_districts();
  load_jobs();
  if (options_.start_worker) worker_ = std::thread([this] { worker_loop(); });
}

ScenarioService::~ScenarioService() { stop(); }

void ScenarioService::stop() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  work_ready_.notify_all();
  if (worker_.joinable()) worker_.join();
}

void ScenarioService::load_districts() {
  const auto dir = options_.data_dir / "districts";
  if (!fs::is_directory(dir)) return;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    auto district = load_district(file);
    auto instance = Instance::compile(district);
    auto travel_file = file;
    travel_file.replace_extension(".travel.csv");
    std::string travel_digest = "estimate:" + std::to_string(options_.speed_kmh);
    auto travel = TravelTimeProvider::estimator(options_.speed_kmh);
    if (fs::exists(travel_file)) {
      travel = TravelTimeProvider::matrix(read_travel_matrix_csv(travel_file));
      travel_digest = sha256_file(travel_file);
    }
    const auto digest = sha256_hex(district_to_json(district).dump() + "\n" + travel_digest);
    auto summary = baseline_summary(instance);
    const auto id = district.id;
    if (districts_.contains(id)) throw InputError(file.string() + ": duplicate district id '" + id + "'");
    districts_.emplace(id, DistrictEntry{std::move(district), std::move(instance), std::move(travel), digest,
                                         std::move(summary)});
  }
}

fs::path ScenarioService::job_dir(const std::string& id) const { return options_.data_dir / "jobs" / id; }

json ScenarioService::job_json(const Job& job) const {
  return {{"id", job.id},
          {"district_id", job.district_id},
          {"config", job.config},
          {"state", job_state_name(job.state)},
          {"progress", trace_point_json(job.progress)},
          {"error", job.error.empty() ? json() : json(job.error)},
          {"sequence", job.sequence}};
}

void ScenarioService::persist(const Job& job) const {
  write_file_atomic(job_dir(job.id) / "job.json", pretty_json(job_json(job)));
}

void ScenarioService::load_jobs() {
  const auto dir = options_.data_dir / "jobs";
  if (!fs::is_directory(dir)) return;
  std::vector<Job> pending;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto file = e.path() / "job.json";
    if (!fs::exists(file)) continue;
    Job job;
    try {
      const auto j = read_json_file(file);
      job.id = j.at("id").get<std::string>();
      job.district_id = j.at("district_id").get<std::string>();
      job.config = j.at("config").get<ConstraintConfig>();
      job.state = parse_job_state(j.at("state").get<std::string>()).value_or(JobState::Queued);
      job.progress = trace_point_from(j.value("progress", json()));
      if (j.contains("error") && j.at("error").is_string()) job.error = j.at("error").get<std::string>();
      job.sequence = j.value("sequence", std::uint64_t{0});
    } catch (const std::exception&) {
      continue;  // an unreadable record is resubmitted by its client
    }
    if (job.state == JobState::Done) {
      const bool complete = std::all_of(std::begin(kArtifacts), std::end(kArtifacts),
                                        [&](const char* f) { return fs::exists(e.path() / f); });
      if (!complete) job.state = JobState::Queued;
    }
    if (job.state == JobState::Running) job.state = JobState::Queued;
    if (job.state == JobState::Queued && !districts_.contains(job.district_id)) {
      job.state = JobState::Failed;
      job.error = "district '" + job.district_id + "' is no longer available";
    }
    next_sequence_ = std::max(next_sequence_, job.sequence + 1);
    if (job.state == JobState::Queued) {
      job.progress.reset();
      pending.push_back(job);
    }
    jobs_.emplace(job.id, std::move(job));
  }
  std::sort(pending.begin(), pending.end(), [](const Job& a, const Job& b) { return a.sequence < b.sequence; });
  for (const auto& job : pending) queue_.push_back(job.id);
}

void ScenarioService::worker_loop() {
  for (;;) {
    std::string id;
    {
      std::unique_lock lock(mutex_);
      work_ready_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
      if (stopping_) return;
      id = queue_.front();
      queue_.pop_front();
      busy_ = true;
    }
    solve_job(id);
    {
      std::lock_guard lock(mutex_);
      busy_ = false;
    }
    idle_.notify_all();
  }
}

bool ScenarioService::run_next() {
  std::string id;
  {
    std::lock_guard lock(mutex_);
    if (queue_.empty()) return false;
    id = queue_.front();
    queue_.pop_front();
    busy_ = true;
  }
  solve_job(id);
  {
    std::lock_guard lock(mutex_);
    busy_ = false;
  }
  idle_.notify_all();
  return true;
}

void ScenarioService::wait_idle() {
  std::unique_lock lock(mutex_);
  idle_.wait(lock, [&] { return (queue_.empty() || stopping_) && !busy_; });
}

void ScenarioService::solve_job(const std::string& id) {
  Job snapshot;
  {
    std::lock_guard lock(mutex_);
    auto& job = jobs_.at(id);
    job.state = JobState::Running;
    job.progress.reset();
    snapshot = job;
  }
  persist(snapshot);
  const auto& entry = districts_.at(snapshot.district_id);

  SolveOptions so;
  so.cancel = &stopping_;
  so.on_progress = [&](const TracePoint& p) {
    std::lock_guard lock(mutex_);
    jobs_.at(id).progress = p;
  };
  try {
    const auto result = solve(entry.instance, snapshot.config, entry.travel, so);
    // A cancelled solve stops early; its job stays unfinished and reruns on restart.
    if (stopping_) return;
    const auto report = outcome_report(entry.instance, entry.instance.baseline(), result.best_zoning, entry.travel);
    for (const auto& [name, content] : solve_artifacts(entry.instance, result, report)) {
      write_file_atomic(job_dir(id) / name, content);
    }
    std::lock_guard lock(mutex_);
    auto& job = jobs_.at(id);
    job.state = JobState::Done;
    if (!result.trace.empty()) job.progress = result.trace.back();
    snapshot = job;
  } catch (const std::exception& e) {
    std::lock_guard lock(mutex_);
    auto& job = jobs_.at(id);
    job.state = JobState::Failed;
    job.error = e.what();
    snapshot = job;
  }
  persist(snapshot);
}

Response ScenarioService::handle(const Request& req) {
  const auto parts = split_path(req.path);
  Response r;
  try {
    if (req.method == "OPTIONS") {
      r = {204, nullptr, {}};
    } else if (parts.size() == 1 && parts[0] == "districts") {
      r = req.method == "GET" ? list_districts() : error(405, "method_not_allowed", req.method + " " + req.path);
    } else if (parts.size() == 2 && parts[0] == "districts") {
      r = req.method == "GET" ? get_district(parts[1]) : error(405, "method_not_allowed", req.method + " " + req.path);
    } else if (parts.size() == 3 && parts[0] == "districts" && parts[2] == "jobs") {
      r = req.method == "POST" ? submit(parts[1], req.body)
                               : error(405, "method_not_allowed", req.method + " " + req.path);
    } else if (parts.size() == 2 && parts[0] == "jobs") {
      r = req.method == "GET" ? get_job(parts[1]) : error(405, "method_not_allowed", req.method + " " + req.path);
    } else if (parts.size() == 3 && parts[0] == "jobs" && parts[2] == "result") {
      r = req.method == "GET" ? get_result(parts[1]) : error(405, "method_not_allowed", req.method + " " + req.path);
    } else {
      r = error(404, "not_found", "no route for " + req.path);
    }
  } catch (const std::exception& e) {
    r = error(500, "internal_error", e.what());
  }
  r.headers["Access-Control-Allow-Origin"] = "*";
  r.headers["Access-Control-Allow-Methods"] = "GET, POST, OPTIONS";
  r.headers["Access-Control-Allow-Headers"] = "Content-Type";
  return r;
}

Response ScenarioService::list_districts() const {
  json out = json::array();
  for (const auto& [id, e] : districts_) {
    out.push_back({{"id", id},
                   {"blocks", e.instance.block_count()},
                   {"schools", e.instance.school_count()},
                   {"travel", e.travel.has_matrix() ? "matrix" : "estimate"},
                   {"baseline", e.summary}});
  }
  return {200, out, {}};
}

Response ScenarioService::get_district(const std::string& id) const {
  const auto it = districts_.find(id);
  if (it == districts_.end()) return error(404, "not_found", "unknown district '" + id + "'");
  const auto& e = it->second;
  return {200,
          {{"id", id},
           {"blocks", e.instance.block_count()},
           {"schools", e.instance.school_count()},
           {"baseline", e.summary},
           {"geometry", plan_geojson(e.district, e.district.baseline_plan)}},
          {}};
}

Response ScenarioService::submit(const std::string& district_id, const std::string& body) {
  const auto it = districts_.find(district_id);
  if (it == districts_.end()) return error(404, "not_found", "unknown district '" + district_id + "'");

  json j;
  try {
    j = body.empty() ? json::object() : json::parse(body);
  } catch (const json::parse_error& e) {
    return error(400, "malformed_json", e.what());
  }
  ConstraintConfig config;
  try {
    config = j.get<ConstraintConfig>();
  } catch (const InputError& e) {
    return error(422, "invalid_config", e.what());
  }
  if (const auto problems = config_errors(config); !problems.empty()) {
    return error(422, "invalid_config", problems.front(), {{"problems", problems}});
  }

  const auto id = sha256_hex(it->second.digest + "\n" + json(config).dump()).substr(0, 32);
  Job snapshot;
  {
    std::lock_guard lock(mutex_);
    auto existing = jobs_.find(id);
    if (existing != jobs_.end() && existing->second.state != JobState::Failed) {
      return {200, job_json(existing->second), {{"Location", "/jobs/" + id}}};
    }
    if (queue_.size() >= options_.max_queue) {
      return error(503, "queue_full", "the job queue is full; retry later", {{"max_queue", options_.max_queue}});
    }
    Job job{id, district_id, config, JobState::Queued, std::nullopt, "", next_sequence_++};
    jobs_[id] = job;
    queue_.push_back(id);
    snapshot = job;
    persist(snapshot);
  }
  work_ready_.notify_one();
  return {202, job_json(snapshot), {{"Location", "/jobs/" + id}}};
}

Response ScenarioService::get_job(const std::string& id) const {
  std::lock_guard lock(mutex_);
  const auto it = jobs_.find(id);
  if (it == jobs_.end()) return error(404, "not_found", "unknown job '" + id + "'");
  auto j = job_json(it->second);
  if (it->second.state == JobState::Queued) {
    const auto pos = std::find(queue_.begin(), queue_.end(), id);
    if (pos != queue_.end()) j["queue_position"] = pos - queue_.begin();
  }
  j["budget_seconds"] = it->second.config.time_budget_seconds;
  return {200, j, {}};
}

Response ScenarioService::get_result(const std::string& id) const {
  Job job;
  {
    std::lock_guard lock(mutex_);
    const auto it = jobs_.find(id);
    if (it == jobs_.end()) return error(404, "not_found", "unknown job '" + id + "'");
    job = it->second;
  }
  if (job.state == JobState::Failed) {
    return error(409, "job_failed", job.error, {{"state", job_state_name(job.state)}});
  }
  if (job.state != JobState::Done) {
    return error(409, "not_done", "job '" + id + "' is " + std::string(job_state_name(job.state)),
                 {{"state", job_state_name(job.state)}});
  }
  const auto dir = job_dir(id);
  const auto result = read_json_file(dir / "result.json");
  const auto& district = districts_.at(job.district_id).district;
  return {200,
          {{"job", job_json(job)},
           {"result", result},
           {"report", read_json_file(dir / "report.json")},
           {"geometry", plan_geojson(district, plan_from_json(result))}},
          {}};
}

}  // namespace rezoner::service
