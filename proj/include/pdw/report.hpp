#pragma once

// Scenario pipeline and its CSV/SVG renderings.

#include <string>

#include "pdw/core_model.hpp"
#include "pdw/metrics.hpp"

namespace pdw {

struct RunResult {
  PairScenario scenario;
  SeparationTrace separation;
  MetricTrace pdw;
  MetricTrace dd;
};

/// Validates the scenario, integrates the separation and evaluates both
/// metrics. With `merge` the pre-event samples are dropped before the
/// metrics (and their normalization) are computed.
RunResult run_pipeline(const PairScenario& scenario, const DdParams& dd_params, bool merge = false);

inline constexpr const char* kCsvHeader = "t_min,d_km,ddot_kmh,pdw_raw,pdw_norm,dd_raw,dd_norm";

/// 9 significant digits, '.' separator, independent of the global locale.
std::string format_number(double value);

std::string format_csv(const RunResult& result);

/// True when both runs have the same time grid and the same dd_raw values.
bool dd_identical(const RunResult& a, const RunResult& b);

/// Normalized PDW and DD against time.
std::string render_metrics_svg(const RunResult& result);

/// Airspeed profiles of both aircraft against time.
std::string render_speed_svg(const PairScenario& scenario);

}  // namespace pdw
