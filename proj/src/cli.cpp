#include "rezoner/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "rezoner/artifacts.hpp"
#include "rezoner/constraints.hpp"
#include "rezoner/csv.hpp"
#include "rezoner/district_io.hpp"
#include "rezoner/errors.hpp"
#include "rezoner/estimation.hpp"
#include "rezoner/files.hpp"
#include "rezoner/ingest.hpp"
#include "rezoner/outcome.hpp"
#include "rezoner/solver.hpp"
#include "rezoner/sweep.hpp"
#include "rezoner/synthetic.hpp"
#include "rezoner/validate.hpp"

namespace rezoner::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// What a command produced. Files are written by the caller, so replay can
// compare them without touching the original run directory.
struct Output {
  int exit_code = 0;
  std::string stdout_text;
  std::map<std::string, std::string> files;
};

using Command = std::function<Output(const json& options)>;

std::string dump(const json& j) { return pretty_json(j); }

std::string number(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string now_utc() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Option keys holding input files, by command.
const std::map<std::string, std::vector<std::string>>& input_keys() {
  static const std::map<std::string, std::vector<std::string>> keys = {
      {"generate", {}},
      {"ingest", {"blocks", "boundaries", "schools", "census", "enrollment"}},
      {"validate", {"district"}},
      {"solve", {"district", "travel"}},
      {"sweep", {"district", "travel"}},
      {"report", {"district", "plan", "travel"}},
      {"check", {"district", "plan", "travel"}},
  };
  return keys;
}

ConstraintConfig config_of(const json& o) { return o.at("config").get<ConstraintConfig>(); }

TravelTimeProvider travel_of(const json& o) {
  const auto path = o.value("travel", std::string());
  const double speed = o.value("speed_kmh", 30.0);
  if (path.empty()) return TravelTimeProvider::estimator(speed);
  auto matrix = read_travel_matrix_csv(path);
  if (o.value("estimate_missing", false)) return TravelTimeProvider::matrix_with_fallback(std::move(matrix), speed);
  return TravelTimeProvider::matrix(std::move(matrix));
}

AssignmentPlan plan_of(const json& o) { return plan_from_json(read_json_file(o.at("plan").get<std::string>())); }

District district_of(const json& o) { return load_district(o.at("district").get<std::string>()); }

// --- commands --------------------------------------------------------------

Output cmd_generate(const json& o) {
  DemographicGradient g;
  g.shape = o.at("gradient") == "step" ? DemographicGradient::Shape::Step : DemographicGradient::Shape::Linear;
  g.west_white_share = o.at("west_white_share");
  g.east_white_share = o.at("east_white_share");
  g.block_noise = o.at("block_noise");
  g.homogeneous_blocks = o.at("homogeneous_blocks");
  g.min_children = o.at("min_children");
  g.max_children = o.at("max_children");
  g.enrollment_rate = o.at("enrollment_rate");
  SyntheticLayout layout;
  layout.aspect = o.at("aspect");
  layout.school_spread = o.at("school_spread");
  layout.arterial_spacing = o.at("arterial_spacing");
  layout.cross_arterials = o.at("cross_arterials");
  layout.street_speed_kmh = o.at("street_speed_kmh");
  layout.arterial_speed_kmh = o.at("arterial_speed_kmh");

  District d;
  try {
    d = generate_synthetic_district(o.at("blocks"), o.at("schools"), g, o.at("seed"), layout);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  if (const auto id = o.value("id", std::string()); !id.empty()) d.id = id;

  std::string csv = "block_id,school_id,seconds\n";
  for (const auto& [key, seconds] : synthetic_travel_times(d, layout)) {
    csv += csv_escape(key.first) + "," + csv_escape(key.second) + "," + number(seconds) + "\n";
  }
  Output out;
  out.files["district.json"] = dump(district_to_json(d));
  out.files["travel.csv"] = std::move(csv);
  out.stdout_text = dump({{"district", d.id}, {"blocks", d.blocks.size()}, {"schools", d.schools.size()}});
  return out;
}

Output cmd_ingest(const json& o) {
  IngestInputs in;
  in.district_id = o.at("id");
  in.blocks = geo::read_feature_collection(o.at("blocks").get<std::string>(), o.at("block_id_property"));
  in.boundaries = geo::read_feature_collection(o.at("boundaries").get<std::string>(), o.at("school_id_property"));
  in.school_locations = read_school_locations_csv(o.at("schools").get<std::string>());
  in.census = read_census_csv(o.at("census").get<std::string>());
  in.enrollment = read_enrollment_csv(o.at("enrollment").get<std::string>());
  const auto result = ingest(in);
  if (auto report = validate_district(result.district); !report.empty()) throw InvalidDistrictError(report);

  Output out;
  const auto report = to_json(result.report);
  out.files["district.json"] = dump(district_to_json(result.district));
  out.files["ingest_report.json"] = dump(report);
  out.stdout_text = dump(report);
  return out;
}

Output cmd_validate(const json& o) {
  const auto report = to_json(validate_district(district_of(o)));
  Output out;
  out.exit_code = report.empty() ? 0 : 1;
  out.files["validation.json"] = dump(report);
  out.stdout_text = dump(report);
  return out;
}

Output cmd_solve(const json& o) {
  const auto d = district_of(o);
  const auto inst = Instance::compile(d);
  const auto travel = travel_of(o);
  const auto result = solve(inst, config_of(o), travel);
  const auto report = outcome_report(inst, inst.baseline(), result.best_zoning, travel);

  Output out;
  out.files = solve_artifacts(inst, result, report);
  const auto& white = report.group(Group::White);
  out.stdout_text = dump({{"best_objective", result.best_objective},
                          {"baseline_objective", result.baseline_objective},
                          {"termination", termination_name(result.termination)},
                          {"relative_change", white.relative_change ? json(*white.relative_change) : json()},
                          {"switcher_fraction", report.switcher_fraction},
                          {"mean_travel_delta_minutes", report.mean_travel_delta_minutes}});
  return out;
}

Output cmd_sweep(const json& o) {
  const auto inst = Instance::compile(district_of(o));
  const auto rows = sweep(inst, sweep_configs(config_of(o)), travel_of(o));
  Output out;
  for (const auto& r : rows) {
    if (!r.ok()) out.exit_code = 1;
  }
  out.files["sweep.json"] = dump(to_json(rows));
  out.files["sweep.csv"] = sweep_csv(rows);
  out.stdout_text = out.files["sweep.csv"];
  return out;
}

Output cmd_report(const json& o) {
  const auto d = district_of(o);
  const auto report = outcome_report(d, d.baseline_plan, plan_of(o), travel_of(o));
  Output out;
  out.files["report.json"] = dump(to_json(report));
  out.files["report.csv"] = to_csv(report);
  out.stdout_text = o.at("format") == "json" ? out.files["report.json"] : out.files["report.csv"];
  return out;
}

Output cmd_check(const json& o) {
  const auto d = district_of(o);
  const auto plan = plan_of(o);
  if (auto invalid = validate_plan(d, plan); !invalid.empty()) throw InvalidPlanError(invalid);
  const auto violations = check_feasibility(d, plan, config_of(o), travel_of(o));
  Output out;
  out.exit_code = violations.empty() ? 0 : 1;
  const json j = {{"feasible", violations.empty()}, {"violations", to_json(violations)}};
  out.files["violations.json"] = dump(j);
  out.stdout_text = dump(j);
  return out;
}

const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> table = {
      {"generate", cmd_generate}, {"ingest", cmd_ingest}, {"validate", cmd_validate}, {"solve", cmd_solve},
      {"sweep", cmd_sweep},       {"report", cmd_report}, {"check", cmd_check},
  };
  return table;
}

// --- manifests ---------------------------------------------------------------

json input_digests(const std::string& command, const json& options) {
  json inputs = json::array();
  for (const auto& key : input_keys().at(command)) {
    const auto path = options.value(key, std::string());
    if (path.empty()) continue;
    inputs.push_back({{"role", key}, {"path", path}, {"sha256", sha256_file(path)}});
  }
  return inputs;
}

json output_digests(const Output& out) {
  json files = json::object();
  for (const auto& [name, content] : out.files) files[name] = sha256_hex(content);
  return files;
}

void write_outputs(const fs::path& dir, const Output& out) {
  for (const auto& [name, content] : out.files) write_file_atomic(dir / name, content);
}

int execute(const std::string& command, const json& options, const std::string& out_dir,
            const std::vector<std::string>& argv, std::ostream& out) {
  const auto started = now_utc();
  const auto inputs = input_digests(command, options);
  const auto result = commands().at(command)(options);
  if (!out_dir.empty()) {
    write_outputs(out_dir, result);
    const json manifest = {{"tool", "rezoner"},
                           {"version", kVersion},
                           {"command", command},
                           {"argv", argv},
                           {"options", options},
                           {"config", options.contains("config") ? options.at("config") : json()},
                           {"inputs", inputs},
                           {"outputs", output_digests(result)},
                           {"exit_code", result.exit_code},
                           {"started_at", started},
                           {"finished_at", now_utc()}};
    write_file_atomic(fs::path(out_dir) / "manifest.json", dump(manifest));
  }
  out << result.stdout_text;
  return result.exit_code;
}

int replay(const std::string& manifest_path, const std::string& out_dir, std::ostream& out) {
  const auto manifest = read_json_file(manifest_path);
  std::string command;
  json options;
  json recorded;
  try {
    command = manifest.at("command").get<std::string>();
    options = manifest.at("options");
    recorded = manifest.at("outputs");
  } catch (const json::exception& e) {
    throw InputError(manifest_path + ": not a run manifest (" + e.what() + ")");
  }
  if (!commands().contains(command)) throw InputError(manifest_path + ": unknown command '" + command + "'");

  for (const auto& input : manifest.value("inputs", json::array())) {
    const auto path = input.at("path").get<std::string>();
    if (sha256_file(path) != input.at("sha256").get<std::string>()) {
      throw DomainError("input '" + path + "' changed since the recorded run");
    }
  }
  const auto result = commands().at(command)(options);
  if (!out_dir.empty()) write_outputs(out_dir, result);

  const auto replayed = output_digests(result);
  bool identical = replayed == recorded && result.exit_code == manifest.value("exit_code", 0);
  json files = json::array();
  for (const auto& [name, digest] : recorded.items()) {
    const auto now = replayed.value(name, std::string());
    files.push_back({{"file", name}, {"recorded", digest}, {"replayed", now}, {"identical", now == digest}});
  }
  out << dump({{"command", command}, {"identical", identical}, {"outputs", files}});
  return identical ? 0 : 1;
}

// --- errors ------------------------------------------------------------------

int report_error(std::ostream& err, int code, const std::string& type, const std::string& message,
                 json details = json::object()) {
  json j = {{"type", type}, {"message", message}};
  for (auto& [k, v] : details.items()) j[k] = v;
  err << json{{"error", j}}.dump() << "\n";
  return code;
}

// --- argument parsing ----------------------------------------------------------

struct ConfigFlags {
  double travel = 0.5;
  double size = 0.15;
  bool contiguity = true;
  std::string objective = "dissimilarity";
  std::uint64_t seed = 0;
  double budget = 60.0;
  int restarts = 4;

  void attach(CLI::App* app) {
    app->add_option("--max-travel-increase", travel, "Largest allowed travel increase per block, as a fraction")
        ->capture_default_str();
    app->add_option("--max-size-increase", size, "Largest allowed school growth, as a fraction")
        ->capture_default_str();
    app->add_flag("--contiguity,!--no-contiguity", contiguity, "Keep every zone connected to its school's block");
    app->add_option("--objective", objective, "dissimilarity | interaction | leximin")->capture_default_str();
    app->add_option("--seed", seed, "Random seed")->capture_default_str();
    app->add_option("--budget", budget, "Search budget in nominal seconds")->capture_default_str();
    app->add_option("--restarts", restarts, "Annealing rounds")->capture_default_str();
  }

  json to_config() const {
    ConstraintConfig c;
    c.max_travel_increase_fraction = travel;
    c.max_size_increase_fraction = size;
    c.enforce_contiguity = contiguity;
    const auto mode = parse_objective(objective);
    if (!mode) throw InputError("unknown objective '" + objective + "'");
    c.objective_mode = *mode;
    c.seed = seed;
    c.time_budget_seconds = budget;
    c.restarts = restarts;
    if (const auto errors = config_errors(c); !errors.empty()) {
      std::string msg = "invalid constraint config:";
      for (const auto& e : errors) msg += " " + e + ";";
      msg.pop_back();
      throw InputError(msg);
    }
    return c;
  }
};

struct TravelFlags {
  std::string travel;
  double speed = 30.0;
  bool estimate_missing = false;

  void attach(CLI::App* app) {
    app->add_option("--travel", travel, "Travel matrix CSV {block_id, school_id, seconds}")
        ->check(CLI::ExistingFile);
    app->add_option("--speed", speed, "Straight-line driving speed in km/h for estimated times")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app->add_flag("--estimate-missing", estimate_missing, "Estimate pairs missing from the travel matrix");
  }

  void into(json& o) const {
    o["travel"] = travel.empty() ? std::string() : fs::absolute(travel).string();
    o["speed_kmh"] = speed;
    o["estimate_missing"] = estimate_missing;
  }
};

std::string absolute(const std::string& p) { return fs::absolute(p).string(); }

}  // namespace

int run(int argc, const char* const argv[], std::ostream& out, std::ostream& err) {
  CLI::App app{"School rezoning toolkit", "rezoner"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  std::string out_dir;
  auto add_out = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("-o,--out", out_dir, "Run directory for outputs and manifest.json");
    if (required) opt->required();
  };

  // generate
  auto* gen = app.add_subcommand("generate", "Write a synthetic district and its travel matrix");
  struct {
    std::size_t blocks = 400, schools = 8;
    std::string gradient = "linear", id;
    double west = 0.9, east = 0.1, noise = 0.0, homogeneous = 0.0, rate = 1.0;
    std::int64_t min_children = 5, max_children = 40;
    double aspect = 1.0, spread = 1.0, street = 30.0, arterial = 80.0;
    std::size_t spacing = 0;
    bool cross = true;
    std::uint64_t seed = 0;
  } g;
  gen->add_option("--blocks", g.blocks, "Number of blocks")->capture_default_str();
  gen->add_option("--schools", g.schools, "Number of schools")->capture_default_str();
  gen->add_option("--gradient", g.gradient, "step | linear")
      ->capture_default_str()
      ->check(CLI::IsMember({"step", "linear"}));
  gen->add_option("--west-white-share", g.west, "White share at the west edge")->capture_default_str();
  gen->add_option("--east-white-share", g.east, "White share at the east edge")->capture_default_str();
  gen->add_option("--noise", g.noise, "Per-block share noise")->capture_default_str();
  gen->add_option("--homogeneous", g.homogeneous, "Fraction of single-race blocks")->capture_default_str();
  gen->add_option("--min-children", g.min_children)->capture_default_str();
  gen->add_option("--max-children", g.max_children)->capture_default_str();
  gen->add_option("--enrollment-rate", g.rate, "Fraction of children enrolled")->capture_default_str();
  gen->add_option("--aspect", g.aspect, "Grid columns per row")->capture_default_str();
  gen->add_option("--school-spread", g.spread, "1 = even tiling, smaller = clustered")->capture_default_str();
  gen->add_option("--arterial-spacing", g.spacing, "Rows between arterials, 0 = none")->capture_default_str();
  gen->add_flag("--cross-arterials,!--no-cross-arterials", g.cross, "Arterial columns as well as rows");
  gen->add_option("--street-speed", g.street, "km/h")->capture_default_str();
  gen->add_option("--arterial-speed", g.arterial, "km/h")->capture_default_str();
  gen->add_option("--seed", g.seed)->capture_default_str();
  gen->add_option("--id", g.id, "District id");
  add_out(gen, true);

  // ingest
  auto* ing = app.add_subcommand("ingest", "Build a district from GeoJSON boundaries and census tables");
  struct {
    std::string blocks, boundaries, schools, census, enrollment, id = "district";
    std::string block_prop = "block_id", school_prop = "school_id";
  } in;
  ing->add_option("--blocks", in.blocks, "Census block polygons (GeoJSON)")->required()->check(CLI::ExistingFile);
  ing->add_option("--boundaries", in.boundaries, "Attendance zones (GeoJSON)")->required()->check(CLI::ExistingFile);
  ing->add_option("--schools", in.schools, "School locations CSV")->required()->check(CLI::ExistingFile);
  ing->add_option("--census", in.census, "Census children CSV")->required()->check(CLI::ExistingFile);
  ing->add_option("--enrollment", in.enrollment, "Enrollment CSV")->required()->check(CLI::ExistingFile);
  ing->add_option("--id", in.id, "District id")->capture_default_str();
  ing->add_option("--block-id-property", in.block_prop)->capture_default_str();
  ing->add_option("--school-id-property", in.school_prop)->capture_default_str();
  add_out(ing, true);

  std::string district, plan, format = "csv", manifest;
  ConfigFlags config;
  TravelFlags travel;

  auto* val = app.add_subcommand("validate", "Check a district's invariants");
  val->add_option("--district", district)->required()->check(CLI::ExistingFile);
  add_out(val, false);

  auto* sol = app.add_subcommand("solve", "Search for a less segregated zoning");
  sol->add_option("--district", district)->required()->check(CLI::ExistingFile);
  config.attach(sol);
  travel.attach(sol);
  add_out(sol, true);

  auto* swp = app.add_subcommand("sweep", "Solve the four standard travel/contiguity configurations");
  swp->add_option("--district", district)->required()->check(CLI::ExistingFile);
  config.attach(swp);
  travel.attach(swp);
  add_out(swp, false);

  auto* rep = app.add_subcommand("report", "Compare a plan to the baseline");
  rep->add_option("--district", district)->required()->check(CLI::ExistingFile);
  rep->add_option("--plan", plan, "Plan JSON (plan.json or result.json)")->required()->check(CLI::ExistingFile);
  rep->add_option("--format", format)->capture_default_str()->check(CLI::IsMember({"csv", "json"}));
  travel.attach(rep);
  add_out(rep, false);

  auto* chk = app.add_subcommand("check", "List constraint violations of a plan");
  chk->add_option("--district", district)->required()->check(CLI::ExistingFile);
  chk->add_option("--plan", plan)->required()->check(CLI::ExistingFile);
  config.attach(chk);
  travel.attach(chk);
  add_out(chk, false);

  auto* rpl = app.add_subcommand("replay", "Re-run a recorded command and compare its outputs");
  rpl->add_option("--manifest", manifest, "manifest.json of an earlier run")->required()->check(CLI::ExistingFile);
  add_out(rpl, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    return report_error(err, 2, "usage_error", e.what());
  }

  std::vector<std::string> recorded_argv(argv + 1, argv + argc);
  try {
    if (rpl->parsed()) return replay(manifest, out_dir, out);

    json o;
    std::string command;
    if (gen->parsed()) {
      command = "generate";
      o = {{"blocks", g.blocks},
           {"schools", g.schools},
           {"gradient", g.gradient},
           {"west_white_share", g.west},
           {"east_white_share", g.east},
           {"block_noise", g.noise},
           {"homogeneous_blocks", g.homogeneous},
           {"min_children", g.min_children},
           {"max_children", g.max_children},
           {"enrollment_rate", g.rate},
           {"aspect", g.aspect},
           {"school_spread", g.spread},
           {"arterial_spacing", g.spacing},
           {"cross_arterials", g.cross},
           {"street_speed_kmh", g.street},
           {"arterial_speed_kmh", g.arterial},
           {"seed", g.seed},
           {"id", g.id}};
    } else if (ing->parsed()) {
      command = "ingest";
      o = {{"blocks", absolute(in.blocks)},
           {"boundaries", absolute(in.boundaries)},
           {"schools", absolute(in.schools)},
           {"census", absolute(in.census)},
           {"enrollment", absolute(in.enrollment)},
           {"id", in.id},
           {"block_id_property", in.block_prop},
           {"school_id_property", in.school_prop}};
    } else {
      o["district"] = absolute(district);
      if (val->parsed()) command = "validate";
      if (sol->parsed()) command = "solve";
      if (swp->parsed()) command = "sweep";
      if (rep->parsed()) command = "report";
      if (chk->parsed()) command = "check";
      if (sol->parsed() || swp->parsed() || chk->parsed()) o["config"] = config.to_config();
      if (!val->parsed()) travel.into(o);
      if (rep->parsed() || chk->parsed()) o["plan"] = absolute(plan);
      if (rep->parsed()) o["format"] = format;
    }
    return execute(command, o, out_dir, recorded_argv, out);
  } catch (const InvalidDistrictError& e) {
    return report_error(err, 1, "invalid_district", e.what(), {{"violations", to_json(e.report())}});
  } catch (const InvalidPlanError& e) {
    return report_error(err, 1, "invalid_plan", e.what(), {{"violations", to_json(e.report())}});
  } catch (const TravelLookupError& e) {
    return report_error(err, 1, "travel_lookup", e.what(), {{"block_id", e.block_id()}, {"school_id", e.school_id()}});
  } catch (const UnallocatableError& e) {
    return report_error(err, 1, "unallocatable", e.what(), {{"school_id", e.school_id()}, {"group", e.group()}});
  } catch (const GeometryError& e) {
    return report_error(err, 2, "geometry_error", e.what(), {{"subject", e.subject()}});
  } catch (const InputError& e) {
    return report_error(err, 2, "input_error", e.what());
  } catch (const json::exception& e) {
    return report_error(err, 2, "input_error", e.what());
  } catch (const DomainError& e) {
    return report_error(err, 1, "domain_error", e.what());
  } catch (const fs::filesystem_error& e) {
    return report_error(err, 2, "input_error", e.what());
  } catch (const std::exception& e) {
    return report_error(err, 1, "internal_error", e.what());
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"rezoner"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace rezoner::cli
