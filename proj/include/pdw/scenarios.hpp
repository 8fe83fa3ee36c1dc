#pragma once

// Built-in converging/diverging scenarios and the JSON scenario-file format.
// The grammar is documented in docs/scenario-format.md.

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>

#include "pdw/core_model.hpp"

namespace pdw {

enum class BuiltinId { kS1, kS2 };

inline constexpr double kBuiltinHorizonMin = 60.0;
inline constexpr double kBuiltinDdotMaxKmh = 200.0;
inline constexpr double kBuiltinD0ConvergingKm = 150.0;
inline constexpr double kBuiltinD0DivergingKm = 90.0;

/// s1: follower faster than predecessor (converging).
/// s2: the same two profiles with the roles swapped (diverging).
PairScenario builtin_scenario(BuiltinId id);

/// "s1" / "s2"; nullopt for anything else.
std::optional<BuiltinId> parse_builtin_id(std::string_view text);

/// Throws ParseError (with line/column) for malformed documents and
/// ValidationError (with a field path) for invariant violations.
PairScenario parse_scenario(std::string_view text);
PairScenario parse_scenario(std::istream& in);
PairScenario parse_scenario_file(const std::filesystem::path& path);

/// Inverse of parse_scenario; doubles are written with round-trip precision.
std::string serialize_scenario(const PairScenario& scenario);

}  // namespace pdw
