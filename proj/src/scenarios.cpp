#include "pdw/scenarios.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <iterator>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

namespace pdw {

namespace {

using nlohmann::json;

SpeedProfile alternating_profile() {
  return SpeedProfile({{0, 600}, {10, 650}, {20, 600}, {30, 650}, {40, 600}, {50, 650}},
                      kBuiltinHorizonMin);
}

SpeedProfile step_down_profile() {
  return SpeedProfile({{0, 700}, {30, 670}}, kBuiltinHorizonMin);
}

// Line and column (1-based) of a byte offset.
std::pair<std::size_t, std::size_t> locate(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  const auto head = text.substr(0, offset);
  const std::size_t line = 1 + static_cast<std::size_t>(std::count(head.begin(), head.end(), '\n'));
  const auto nl = head.rfind('\n');
  const std::size_t column = nl == std::string_view::npos ? offset + 1 : offset - nl;
  return {line, column};
}

void reject_unknown(const json& obj, std::span<const std::string_view> allowed,
                    const std::string& prefix) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ValidationError(prefix + key, "unknown field");
    }
  }
}

double number_field(const json& obj, const char* key, const std::string& prefix,
                    std::optional<double> fallback = {}) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    if (fallback) return *fallback;
    throw ValidationError(prefix + key, "missing required field");
  }
  if (!it->is_number()) throw ValidationError(prefix + key, "expected a number");
  return it->get<double>();
}

SpeedProfile profile_field(const json& root, const char* key, double t_end) {
  const auto it = root.find(key);
  if (it == root.end()) throw ValidationError(key, "missing required field");
  if (!it->is_array()) throw ValidationError(key, "expected an array of breakpoints");

  static constexpr std::array<std::string_view, 2> kAllowed{"t_min", "v_kmh"};
  std::vector<Breakpoint> bps;
  for (std::size_t i = 0; i < it->size(); ++i) {
    const auto prefix = fmt::format("{}[{}].", key, i);
    const auto& entry = (*it)[i];
    if (!entry.is_object()) throw ValidationError(fmt::format("{}[{}]", key, i), "expected an object");
    reject_unknown(entry, kAllowed, prefix);
    bps.push_back({number_field(entry, "t_min", prefix), number_field(entry, "v_kmh", prefix)});
  }
  try {
    return SpeedProfile(std::move(bps), t_end);
  } catch (const ValidationError& e) {
    // Rewrite "breakpoints[i].x" as "<key>[i].x".
    std::string field = e.field();
    const std::string_view stem = "breakpoints";
    if (field.starts_with(stem)) field = key + field.substr(stem.size());
    const std::string what = e.what();
    throw ValidationError(field, what.substr(what.find(": ") + 2));
  }
}

nlohmann::ordered_json profile_json(const SpeedProfile& profile) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& bp : profile.breakpoints()) {
    out.push_back({{"t_min", bp.t_start_min}, {"v_kmh", bp.v_kmh}});
  }
  return out;
}

}  // namespace

PairScenario builtin_scenario(BuiltinId id) {
  switch (id) {
    case BuiltinId::kS1:
      return {"s1",
              alternating_profile(),
              step_down_profile(),
              kBuiltinD0ConvergingKm,
              kBuiltinHorizonMin,
              kBuiltinDdotMaxKmh};
    case BuiltinId::kS2:
      return {"s2",
              step_down_profile(),
              alternating_profile(),
              kBuiltinD0DivergingKm,
              kBuiltinHorizonMin,
              kBuiltinDdotMaxKmh};
  }
  throw DomainError("unknown built-in scenario id");
}

std::optional<BuiltinId> parse_builtin_id(std::string_view text) {
  if (text == "s1") return BuiltinId::kS1;
  if (text == "s2") return BuiltinId::kS2;
  return std::nullopt;
}

PairScenario parse_scenario(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, column] = locate(text, e.byte > 0 ? e.byte - 1 : 0);
    // nlohmann prefixes its messages with "[json.exception.parse_error.N] ".
    std::string message = e.what();
    if (const auto pos = message.find("] "); pos != std::string::npos) message = message.substr(pos + 2);
    throw ParseError(message, line, column);
  }
  if (!root.is_object()) throw ParseError("scenario document must be a JSON object", 1, 1);

  static constexpr std::array<std::string_view, 8> kAllowed{
      "name",        "t_f_min",       "d0_km",     "ddot_max_kmh",
      "sample_dt_min", "unsafe_separation_km", "predecessor", "follower"};
  reject_unknown(root, kAllowed, "");

  const auto name_it = root.find("name");
  if (name_it == root.end()) throw ValidationError("name", "missing required field");
  if (!name_it->is_string()) throw ValidationError("name", "expected a string");

  const double t_f = number_field(root, "t_f_min", "");
  PairScenario scenario{
      name_it->get<std::string>(),
      profile_field(root, "predecessor", t_f),
      profile_field(root, "follower", t_f),
      number_field(root, "d0_km", ""),
      t_f,
      number_field(root, "ddot_max_kmh", ""),
      number_field(root, "sample_dt_min", "", kDefaultSampleDtMin),
      number_field(root, "unsafe_separation_km", "", kDefaultUnsafeSeparationKm),
  };
  validate_scenario(scenario);
  return scenario;
}

PairScenario parse_scenario(std::istream& in) {
  const std::string text(std::istreambuf_iterator<char>(in), {});
  return parse_scenario(std::string_view(text));
}

PairScenario parse_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open scenario file", {}, {}, path.string());
  try {
    return parse_scenario(in);
  } catch (const ParseError& e) {
    throw ParseError(e.detail(), e.line(), e.column(), path.string());
  }
}

std::string serialize_scenario(const PairScenario& scenario) {
  nlohmann::ordered_json root;
  root["name"] = scenario.name;
  root["t_f_min"] = scenario.t_f_min;
  root["d0_km"] = scenario.d0_km;
  root["ddot_max_kmh"] = scenario.ddot_max_kmh;
  root["sample_dt_min"] = scenario.sample_dt_min;
  root["unsafe_separation_km"] = scenario.unsafe_separation_km;
  root["predecessor"] = profile_json(scenario.predecessor);
  root["follower"] = profile_json(scenario.follower);
  return root.dump(2) + "\n";
}

}  // namespace pdw
