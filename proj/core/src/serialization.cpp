#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ultralevy/process.hpp"
#include "ultralevy/tower.hpp"

namespace ultralevy {

namespace {

using nlohmann::json;

std::uint64_t as_u64(const json& value, const char* field) {
  if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<std::int64_t>() >= 0)) {
    throw ValidationError(std::string("profile field '") + field + "' must be a nonnegative integer");
  }
  return value.get<std::uint64_t>();
}

std::string join_digits(const std::vector<Natural>& digits) {
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i) out += ':';
    out += digits[i].str();
  }
  return out;
}

std::string format_time(double t) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", t);
  return buffer;
}

}  // namespace

RawProfile parse_profile_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("profile is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("profile must be a JSON object");
  if (!doc.contains("p")) throw ValidationError("profile is missing 'p'");
  RawProfile raw;
  raw.p = as_u64(doc["p"], "p");
  raw.kappa = static_cast<unsigned>(doc.contains("kappa") ? as_u64(doc["kappa"], "kappa") : 1);
  const bool has_m = doc.contains("m");
  const bool has_rule = doc.contains("m_rule");
  if (has_m == has_rule) throw ValidationError("profile needs exactly one of 'm' and 'm_rule'");
  if (has_m) {
    if (!doc["m"].is_array()) throw ValidationError("profile field 'm' must be an array");
    for (const auto& v : doc["m"]) raw.m.push_back(as_u64(v, "m"));
  } else {
    const json& rule = doc["m_rule"];
    if (!rule.is_object() || !rule.contains("ratio") || !rule.contains("count")) {
      throw ValidationError("profile field 'm_rule' needs 'ratio' and 'count'");
    }
    raw.rule = GrowthRule{as_u64(rule["ratio"], "ratio"), static_cast<std::size_t>(as_u64(rule["count"], "count"))};
  }
  return raw;
}

TowerProfile load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open profile file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return validate_profile(parse_profile_json(buffer.str()));
}

std::string profile_to_json(const TowerProfile& profile) {
  json doc = {{"p", profile.p()}, {"kappa", profile.kappa()}, {"m", profile.ramification()}};
  return doc.dump();
}

std::string trajectory_to_csv(const Trajectory& path) {
  json header = {{"profile", json::parse(profile_to_json(path.profile))},
                 {"alpha", to_string(path.alpha)},
                 {"N", path.levels},
                 {"seed", path.seed},
                 {"path_index", path.path_index},
                 {"t_end", path.t_end},
                 {"lambda_N", path.total_rate},
                 {"initial", join_digits(path.initial.digits)}};
  std::string out = "# " + header.dump() + "\n";
  out += "event_index,time,shell,digits_changed_from,digits_changed_to\n";
  for (std::size_t i = 0; i < path.events.size(); ++i) {
    const auto& e = path.events[i];
    out += std::to_string(i) + ',' + format_time(e.time) + ',' + std::to_string(e.shell) + ',' +
           join_digits(e.before) + ',' + join_digits(e.after) + '\n';
  }
  return out;
}

}  // namespace ultralevy
