#pragma once

// Pairwise predecessor/follower kinematics under piecewise-constant airspeeds.
//
// Units at every interface: distance km, speed km/h, time minutes.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pdw/errors.hpp"

namespace pdw {

inline constexpr double kMinutesPerHour = 60.0;
inline constexpr double kDefaultSampleDtMin = 0.1;
/// Advisory threshold, roughly 5 NM.
inline constexpr double kDefaultUnsafeSeparationKm = 9.26;

struct Breakpoint {
  double t_start_min;
  double v_kmh;

  bool operator==(const Breakpoint&) const = default;
};

/// Right-continuous step function of airspeed over [0, t_end].
/// Segment k covers [t_k, t_{k+1}); the last one also owns t_end.
class SpeedProfile {
 public:
  /// Throws ValidationError naming `breakpoints[i]` fields on bad input.
  SpeedProfile(std::vector<Breakpoint> breakpoints, double t_end_min);

  static SpeedProfile constant(double v_kmh, double t_end_min);

  std::span<const Breakpoint> breakpoints() const noexcept { return breakpoints_; }
  double t_end() const noexcept { return t_end_min_; }

  /// Speed of the segment containing t. Throws DomainError outside [0, t_end].
  double speed_at(double t_min) const;
  /// Left limit v(t-) for t in (0, t_end]; at t = 0 returns v(0).
  double speed_before(double t_min) const;

  bool operator==(const SpeedProfile&) const = default;

 private:
  std::vector<Breakpoint> breakpoints_;
  double t_end_min_;
};

double speed_at(const SpeedProfile& profile, double t_min);

/// v_pred - v_fol. Negative means the pair is converging.
double separation_rate(double v_pred_kmh, double v_fol_kmh);

struct PairScenario {
  std::string name;
  SpeedProfile predecessor;
  SpeedProfile follower;
  double d0_km;
  double t_f_min;
  double ddot_max_kmh;
  double sample_dt_min = kDefaultSampleDtMin;
  double unsafe_separation_km = kDefaultUnsafeSeparationKm;

  bool operator==(const PairScenario&) const = default;
};

/// Checks every PairScenario invariant, including ddot_max > |v_pred - v_fol|
/// on each segment. Throws ValidationError.
void validate_scenario(const PairScenario& scenario);

/// Largest |v_pred - v_fol| over all segments.
double max_abs_separation_rate(const PairScenario& scenario);

/// Sorted, de-duplicated interior breakpoint times of both aircraft.
std::vector<double> event_times(const PairScenario& scenario);

struct GridPoint {
  double t_min;
  /// True for the left-limit sample emitted at an interior breakpoint.
  bool pre_event = false;

  bool operator==(const GridPoint&) const = default;
};

/// Uniform `sample_dt` grid plus t_f, augmented with every interior breakpoint.
/// Each breakpoint appears twice: the pre-event sample first, then the
/// post-event sample. Uniform points within 1e-9 * max(1, t_f) of a
/// breakpoint are absorbed into it.
std::vector<GridPoint> sample_grid(const PairScenario& scenario);

struct SeparationSample {
  double t_min;
  double d_km;
  double ddot_kmh;
  bool pre_event = false;
};

struct SeparationTrace {
  std::vector<SeparationSample> samples;
  double ddot_max_kmh = 0.0;
  double min_separation_km = 0.0;
  /// Earliest time at which d drops below the scenario's advisory threshold.
  std::optional<double> unsafe_since_min;
};

/// Exact piecewise-affine integration of d(t) = d0 + integral of ddot.
/// Throws ConflictError (earliest crossing) if d reaches <= 0 and
/// ParameterViolation if |ddot| >= ddot_max on any segment.
SeparationTrace integrate_separation(const PairScenario& scenario);

/// Forward-stepping oracle for integrate_separation. Requires
/// dt_fine <= sample_dt / 100.
SeparationTrace brute_force_separation(const PairScenario& scenario, double dt_fine_min);

/// Drops pre-event samples so time is strictly increasing.
SeparationTrace merge_jumps(SeparationTrace trace);

}  // namespace pdw
