#pragma once

// Pairwise dynamic workload (PDW) and the simplified dynamic-density baseline.
//
//   chi = (1 / d) * (1 - ddot / ddot_max)
//
// with d in km and ddot, ddot_max in km/h; chi is reported in 1/km.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pdw/core_model.hpp"

namespace pdw {

struct PdwParams {
  double ddot_max_kmh;
};

struct DdParams {
  double window_min = 2.0;
  double speed_threshold_kmh = 1.0;
};

struct MetricSample {
  double t_min;
  double raw;
  double normalized;
};

struct MetricTrace {
  std::string metric_name;
  std::string units;
  std::vector<MetricSample> samples;
};

/// Throws DomainError for d <= 0 and ParameterViolation for |ddot| >= ddot_max.
double pdw(double d_km, double ddot_kmh, const PdwParams& params);

/// d chi / d d = -(1 - ddot/ddot_max) / d^2. Always negative.
double pdw_partial_d(double d_km, double ddot_kmh, const PdwParams& params);

/// d chi / d ddot = -1 / (d * ddot_max). Always negative, independent of ddot.
double pdw_partial_ddot(double d_km, const PdwParams& params);

/// d chi / dt within a constant-rate segment, in 1/km per hour:
/// -ddot * (1 - ddot/ddot_max) / d^2.
double pdw_time_slope(double d_km, double ddot_kmh, const PdwParams& params);

enum class Coordinate { kSeparation, kSeparationRate };

/// Central finite difference of pdw along one coordinate. The default step
/// is 1e-5 * max(1, |x|). Throws DomainError if the stencil leaves the
/// valid domain.
double fd_partial(Coordinate which, double d_km, double ddot_kmh, const PdwParams& params,
                  std::optional<double> step = {});

/// (x - min) / (max - min); a constant series maps to all zeros.
std::vector<double> minmax_normalize(std::span<const double> series);

MetricTrace pdw_trace(const SeparationTrace& trace, const PdwParams& params);

/// Times of breakpoints where the speed changes by more than `threshold_kmh`.
std::vector<double> speed_change_events(const SpeedProfile& profile, double threshold_kmh);

/// Count of aircraft (0, 1 or 2) with a speed change in the trailing window
/// (t - window, t], truncated at 0. A pre-event sample sits just before its
/// breakpoint, so the change at that instant is not yet counted.
MetricTrace dynamic_density(const PairScenario& scenario, const SeparationTrace& trace,
                            const DdParams& params);

struct GradcheckPoint {
  double d_km;
  double ddot_kmh;
  double analytic_d = 0.0;
  double fd_d = 0.0;
  double analytic_ddot = 0.0;
  double fd_ddot = 0.0;
  double rel_error = 0.0;
  /// Set when the point is outside the domain or a sign or tolerance check failed.
  std::optional<std::string> violation;
};

struct GradcheckReport {
  double ddot_max_kmh;
  double tolerance;
  double max_rel_error = 0.0;
  std::vector<GradcheckPoint> points;

  bool ok() const;
};

inline constexpr double kGradcheckTolerance = 1e-6;

/// Compares both analytic partials with fd_partial over the Cartesian grid.
GradcheckReport gradient_check(std::span<const double> d_values_km,
                               std::span<const double> ddot_values_kmh, double ddot_max_kmh,
                               double tolerance = kGradcheckTolerance);

}  // namespace pdw
