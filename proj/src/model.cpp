#include "rezoner/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "rezoner/errors.hpp"

namespace rezoner {

namespace {

std::string normalize(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  return out;
}

}  // namespace

std::string_view group_name(Group g) {
  switch (g) {
    case Group::Asian: return "Asian";
    case Group::Black: return "Black";
    case Group::HispanicLatinx: return "HispanicLatinx";
    case Group::NativeAmerican: return "NativeAmerican";
    case Group::White: return "White";
  }
  return "?";
}

std::optional<Group> parse_group(std::string_view name) {
  const std::string n = normalize(name);
  if (n == "asian") return Group::Asian;
  if (n == "black" || n == "africanamerican") return Group::Black;
  if (n == "hispaniclatinx" || n == "hispanic" || n == "latinx" || n == "hispanicorlatino") {
    return Group::HispanicLatinx;
  }
  if (n == "nativeamerican" || n == "americanindian" || n == "americanindianalaskanative") {
    return Group::NativeAmerican;
  }
  if (n == "white") return Group::White;
  return std::nullopt;
}

std::int64_t GroupCounts::total() const {
  std::int64_t t = 0;
  for (auto v : by_group) t += v;
  return t;
}

GroupCounts& GroupCounts::operator+=(const GroupCounts& o) {
  for (std::size_t i = 0; i < kGroupCount; ++i) by_group[i] += o.by_group[i];
  return *this;
}

GroupCounts& GroupCounts::operator-=(const GroupCounts& o) {
  for (std::size_t i = 0; i < kGroupCount; ++i) by_group[i] -= o.by_group[i];
  return *this;
}

const Block* District::find_block(std::string_view id) const {
  auto it = std::find_if(blocks.begin(), blocks.end(), [&](const Block& b) { return b.id == id; });
  return it == blocks.end() ? nullptr : &*it;
}

const School* District::find_school(std::string_view id) const {
  auto it = std::find_if(schools.begin(), schools.end(), [&](const School& s) { return s.id == id; });
  return it == schools.end() ? nullptr : &*it;
}

GroupCounts District::students_in(std::string_view block_id) const {
  auto it = students_per_block.find(std::string(block_id));
  return it == students_per_block.end() ? GroupCounts{} : it->second;
}

std::string_view objective_name(ObjectiveMode m) {
  switch (m) {
    case ObjectiveMode::Dissimilarity: return "dissimilarity";
    case ObjectiveMode::InteractionExposure: return "interaction";
    case ObjectiveMode::Leximin: return "leximin";
  }
  return "?";
}

std::optional<ObjectiveMode> parse_objective(std::string_view name) {
  const std::string n = normalize(name);
  if (n == "dissimilarity") return ObjectiveMode::Dissimilarity;
  if (n == "interaction" || n == "interactionexposure" || n == "exposure") {
    return ObjectiveMode::InteractionExposure;
  }
  if (n == "leximin" || n == "minmax") return ObjectiveMode::Leximin;
  return std::nullopt;
}

std::vector<std::string> config_errors(const ConstraintConfig& c) {
  std::vector<std::string> errors;
  if (!(c.max_travel_increase_fraction >= 0.0) || !std::isfinite(c.max_travel_increase_fraction)) {
    errors.emplace_back("max_travel_increase_fraction must be a finite value >= 0");
  }
  if (!(c.max_size_increase_fraction >= 0.0) || !std::isfinite(c.max_size_increase_fraction)) {
    errors.emplace_back("max_size_increase_fraction must be a finite value >= 0");
  }
  if (!(c.time_budget_seconds > 0.0) || !std::isfinite(c.time_budget_seconds)) {
    errors.emplace_back("time_budget_seconds must be > 0");
  }
  if (c.restarts < 1) errors.emplace_back("restarts must be >= 1");
  return errors;
}

void to_json(nlohmann::json& j, const ConstraintConfig& c) {
  j = nlohmann::json{
      {"max_travel_increase_fraction", c.max_travel_increase_fraction},
      {"max_size_increase_fraction", c.max_size_increase_fraction},
      {"enforce_contiguity", c.enforce_contiguity},
      {"objective_mode", std::string(objective_name(c.objective_mode))},
      {"time_budget_seconds", c.time_budget_seconds},
      {"seed", c.seed},
      {"restarts", c.restarts},
  };
}

void from_json(const nlohmann::json& j, ConstraintConfig& c) {
  if (!j.is_object()) throw InputError("constraint config must be a JSON object");
  try {
    if (j.contains("max_travel_increase_fraction")) {
      c.max_travel_increase_fraction = j.at("max_travel_increase_fraction").get<double>();
    }
    if (j.contains("max_size_increase_fraction")) {
      c.max_size_increase_fraction = j.at("max_size_increase_fraction").get<double>();
    }
    if (j.contains("enforce_contiguity")) c.enforce_contiguity = j.at("enforce_contiguity").get<bool>();
    if (j.contains("objective_mode")) {
      const auto name = j.at("objective_mode").get<std::string>();
      auto mode = parse_objective(name);
      if (!mode) throw InputError("unknown objective_mode '" + name + "'");
      c.objective_mode = *mode;
    }
    if (j.contains("time_budget_seconds")) c.time_budget_seconds = j.at("time_budget_seconds").get<double>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("restarts")) c.restarts = j.at("restarts").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bad constraint config: ") + e.what());
  }
}

nlohmann::json group_counts_to_json(const GroupCounts& counts) {
  nlohmann::json j = nlohmann::json::object();
  for (Group g : kAllGroups) j[std::string(group_name(g))] = counts[g];
  return j;
}

GroupCounts group_counts_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("group counts must be an object keyed by group name");
  GroupCounts out;
  for (const auto& [key, value] : j.items()) {
    auto g = parse_group(key);
    if (!g) throw InputError("unknown demographic group '" + key + "'");
    if (!value.is_number_integer()) throw InputError("count for group '" + key + "' must be an integer");
    out[*g] = value.get<std::int64_t>();
  }
  return out;
}

}  // namespace rezoner
