#include "pdw/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include <fmt/format.h>

namespace pdw {

namespace {

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

double grid_tolerance(double t_f_min) { return 1e-9 * std::max(1.0, t_f_min); }

std::string bp_field(std::size_t i, const char* member) {
  return fmt::format("breakpoints[{}].{}", i, member);
}

// Structural invariants only; the ddot_max bound is checked by the callers so
// that each can raise its own error type.
void check_structure(const PairScenario& s) {
  if (!finite_positive(s.d0_km)) throw ValidationError("d0_km", "d0 must be positive");
  if (!finite_positive(s.t_f_min)) throw ValidationError("t_f_min", "t_f must be positive");
  if (!finite_positive(s.ddot_max_kmh)) {
    throw ValidationError("ddot_max_kmh", "ddot_max must be positive");
  }
  if (!finite_positive(s.sample_dt_min)) {
    throw ValidationError("sample_dt_min", "sample_dt must be positive");
  }
  if (!std::isfinite(s.unsafe_separation_km) || s.unsafe_separation_km < 0.0) {
    throw ValidationError("unsafe_separation_km", "unsafe separation threshold must be >= 0");
  }
  if (s.predecessor.t_end() != s.t_f_min) {
    throw ValidationError("predecessor", fmt::format("profile ends at {} min, horizon is {} min",
                                                     s.predecessor.t_end(), s.t_f_min));
  }
  if (s.follower.t_end() != s.t_f_min) {
    throw ValidationError("follower", fmt::format("profile ends at {} min, horizon is {} min",
                                                  s.follower.t_end(), s.t_f_min));
  }
}

// Segment boundaries [0, e_1, ..., e_n, t_f] where e_k are interior events.
std::vector<double> segment_bounds(const PairScenario& s) {
  std::vector<double> bounds{0.0};
  auto events = event_times(s);
  bounds.insert(bounds.end(), events.begin(), events.end());
  bounds.push_back(s.t_f_min);
  return bounds;
}

}  // namespace

SpeedProfile::SpeedProfile(std::vector<Breakpoint> breakpoints, double t_end_min)
    : breakpoints_(std::move(breakpoints)), t_end_min_(t_end_min) {
  if (!finite_positive(t_end_min_)) throw ValidationError("t_end", "profile end must be positive");
  if (breakpoints_.empty()) throw ValidationError("breakpoints", "profile has no breakpoints");
  if (breakpoints_.front().t_start_min != 0.0) {
    throw ValidationError(bp_field(0, "t_min"), "first breakpoint must start at t = 0");
  }
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    const auto& bp = breakpoints_[i];
    if (!std::isfinite(bp.t_start_min) || bp.t_start_min >= t_end_min_) {
      throw ValidationError(bp_field(i, "t_min"), "breakpoint must lie before the profile end");
    }
    if (i > 0 && !(bp.t_start_min > breakpoints_[i - 1].t_start_min)) {
      throw ValidationError(bp_field(i, "t_min"), "breakpoint times must be strictly increasing");
    }
    if (!finite_positive(bp.v_kmh)) {
      throw ValidationError(bp_field(i, "v_kmh"), "airspeed must be positive");
    }
  }
}

SpeedProfile SpeedProfile::constant(double v_kmh, double t_end_min) {
  return SpeedProfile({{0.0, v_kmh}}, t_end_min);
}

double SpeedProfile::speed_at(double t_min) const {
  if (!(t_min >= 0.0 && t_min <= t_end_min_)) {
    throw DomainError(fmt::format("t = {} min outside profile domain [0, {}]", t_min, t_end_min_));
  }
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t_min,
                             [](double t, const Breakpoint& bp) { return t < bp.t_start_min; });
  return std::prev(it)->v_kmh;
}

double SpeedProfile::speed_before(double t_min) const {
  if (!(t_min >= 0.0 && t_min <= t_end_min_)) {
    throw DomainError(fmt::format("t = {} min outside profile domain [0, {}]", t_min, t_end_min_));
  }
  auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), t_min,
                             [](const Breakpoint& bp, double t) { return bp.t_start_min < t; });
  if (it == breakpoints_.begin()) return breakpoints_.front().v_kmh;
  return std::prev(it)->v_kmh;
}

double speed_at(const SpeedProfile& profile, double t_min) { return profile.speed_at(t_min); }

double separation_rate(double v_pred_kmh, double v_fol_kmh) { return v_pred_kmh - v_fol_kmh; }

std::vector<double> event_times(const PairScenario& scenario) {
  std::vector<double> times;
  for (const auto* profile : {&scenario.predecessor, &scenario.follower}) {
    for (const auto& bp : profile->breakpoints()) {
      if (bp.t_start_min > 0.0) times.push_back(bp.t_start_min);
    }
  }
  std::sort(times.begin(), times.end());
  const double tol = grid_tolerance(scenario.t_f_min);
  times.erase(std::unique(times.begin(), times.end(),
                          [tol](double a, double b) { return b - a <= tol; }),
              times.end());
  return times;
}

double max_abs_separation_rate(const PairScenario& scenario) {
  const auto bounds = segment_bounds(scenario);
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
    const double rate = separation_rate(scenario.predecessor.speed_at(bounds[k]),
                                        scenario.follower.speed_at(bounds[k]));
    worst = std::max(worst, std::abs(rate));
  }
  return worst;
}

void validate_scenario(const PairScenario& scenario) {
  check_structure(scenario);
  const double worst = max_abs_separation_rate(scenario);
  if (!(scenario.ddot_max_kmh > worst)) {
    throw ValidationError("ddot_max_kmh",
                          fmt::format("ddot_max exceeded: |v_pred - v_fol| reaches {} km/h, "
                                      "ddot_max is {} km/h",
                                      worst, scenario.ddot_max_kmh));
  }
}

std::vector<GridPoint> sample_grid(const PairScenario& scenario) {
  check_structure(scenario);
  const double t_f = scenario.t_f_min;
  const double dt = scenario.sample_dt_min;
  const double tol = grid_tolerance(t_f);
  const auto events = event_times(scenario);

  std::vector<GridPoint> grid;
  auto next_event = events.begin();
  auto emit_events_through = [&](double t) {
    while (next_event != events.end() && *next_event <= t + tol) {
      grid.push_back({*next_event, true});
      grid.push_back({*next_event, false});
      ++next_event;
    }
  };

  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * dt;
    if (t >= t_f - tol) break;
    emit_events_through(t);
    const bool absorbed = !grid.empty() && std::abs(grid.back().t_min - t) <= tol;
    if (!absorbed) grid.push_back({t, false});
  }
  emit_events_through(t_f);
  grid.push_back({t_f, false});
  return grid;
}

SeparationTrace integrate_separation(const PairScenario& scenario) {
  const auto grid = sample_grid(scenario);
  const auto bounds = segment_bounds(scenario);

  // Separation and rate at the start of each segment.
  std::vector<double> d_start(bounds.size() - 1);
  std::vector<double> rate(bounds.size() - 1);
  std::optional<double> unsafe_since;
  double d = scenario.d0_km;
  for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
    const double a = bounds[k];
    const double b = bounds[k + 1];
    const double r = separation_rate(scenario.predecessor.speed_at(a), scenario.follower.speed_at(a));
    if (!(std::abs(r) < scenario.ddot_max_kmh)) {
      throw ParameterViolation(fmt::format(
          "|ddot| = {} km/h on [{}, {}) min is not below ddot_max = {} km/h", std::abs(r), a, b,
          scenario.ddot_max_kmh));
    }
    d_start[k] = d;
    rate[k] = r;
    const double d_end = d + r * (b - a) / kMinutesPerHour;
    if (d_end <= 0.0) throw ConflictError(a + d / -r * kMinutesPerHour);
    const double threshold = scenario.unsafe_separation_km;
    if (!unsafe_since && d_end < threshold) {
      unsafe_since = d < threshold ? a : a + (d - threshold) / -r * kMinutesPerHour;
    }
    d = d_end;
  }

  SeparationTrace trace;
  trace.ddot_max_kmh = scenario.ddot_max_kmh;
  trace.unsafe_since_min = unsafe_since;
  trace.samples.reserve(grid.size());
  std::size_t seg = 0;
  for (const auto& gp : grid) {
    // Pre-event samples belong to the segment that ends at the breakpoint.
    while (seg + 2 < bounds.size() &&
           (gp.pre_event ? gp.t_min > bounds[seg + 1] : gp.t_min >= bounds[seg + 1])) {
      ++seg;
    }
    const double sep = d_start[seg] + rate[seg] * (gp.t_min - bounds[seg]) / kMinutesPerHour;
    trace.samples.push_back({gp.t_min, sep, rate[seg], gp.pre_event});
  }
  trace.min_separation_km =
      std::min_element(trace.samples.begin(), trace.samples.end(),
                       [](const auto& x, const auto& y) { return x.d_km < y.d_km; })
          ->d_km;
  return trace;
}

SeparationTrace brute_force_separation(const PairScenario& scenario, double dt_fine_min) {
  if (!(dt_fine_min > 0.0 && dt_fine_min <= scenario.sample_dt_min / 100.0)) {
    throw DomainError(fmt::format("dt_fine = {} min must lie in (0, sample_dt / 100]", dt_fine_min));
  }
  const auto grid = sample_grid(scenario);
  const double threshold = scenario.unsafe_separation_km;

  SeparationTrace trace;
  trace.ddot_max_kmh = scenario.ddot_max_kmh;
  trace.samples.reserve(grid.size());
  double tau = 0.0;
  double d = scenario.d0_km;
  for (const auto& gp : grid) {
    while (tau < gp.t_min) {
      const double h = std::min(dt_fine_min, gp.t_min - tau);
      const double mid = tau + 0.5 * h;
      const double r =
          separation_rate(scenario.predecessor.speed_at(mid), scenario.follower.speed_at(mid));
      if (!(std::abs(r) < scenario.ddot_max_kmh)) {
        throw ParameterViolation(fmt::format("|ddot| = {} km/h at t = {} min is not below "
                                             "ddot_max = {} km/h",
                                             std::abs(r), mid, scenario.ddot_max_kmh));
      }
      const double d_next = d + r * h / kMinutesPerHour;
      if (d_next <= 0.0) throw ConflictError(tau + h * d / (d - d_next));
      if (!trace.unsafe_since_min && d_next < threshold) {
        trace.unsafe_since_min = d < threshold ? tau : tau + h * (d - threshold) / (d - d_next);
      }
      d = d_next;
      tau = (h == gp.t_min - tau) ? gp.t_min : tau + h;
    }
    const double v_pred = gp.pre_event ? scenario.predecessor.speed_before(gp.t_min)
                                       : scenario.predecessor.speed_at(gp.t_min);
    const double v_fol = gp.pre_event ? scenario.follower.speed_before(gp.t_min)
                                      : scenario.follower.speed_at(gp.t_min);
    trace.samples.push_back({gp.t_min, d, separation_rate(v_pred, v_fol), gp.pre_event});
  }
  trace.min_separation_km =
      std::min_element(trace.samples.begin(), trace.samples.end(),
                       [](const auto& x, const auto& y) { return x.d_km < y.d_km; })
          ->d_km;
  return trace;
}

SeparationTrace merge_jumps(SeparationTrace trace) {
  std::erase_if(trace.samples, [](const SeparationSample& s) { return s.pre_event; });
  return trace;
}

}  // namespace pdw
