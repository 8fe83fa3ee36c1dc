#include "pdw/metrics.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace pdw {

namespace {

void check_params(const PdwParams& params) {
  if (!(std::isfinite(params.ddot_max_kmh) && params.ddot_max_kmh > 0.0)) {
    throw ParameterViolation(fmt::format("ddot_max = {} km/h must be positive", params.ddot_max_kmh));
  }
}

void check_separation(double d_km) {
  if (!(std::isfinite(d_km) && d_km > 0.0)) {
    throw DomainError(fmt::format("separation d = {} km must be positive", d_km));
  }
}

void check_rate(double ddot_kmh, const PdwParams& params) {
  if (!(std::abs(ddot_kmh) < params.ddot_max_kmh)) {
    throw ParameterViolation(fmt::format("|ddot| = {} km/h is not below ddot_max = {} km/h",
                                         std::abs(ddot_kmh), params.ddot_max_kmh));
  }
}

double relative_error(double analytic, double approx) {
  return std::abs(analytic - approx) / std::max(std::abs(analytic), 1e-12);
}

}  // namespace

double pdw(double d_km, double ddot_kmh, const PdwParams& params) {
  check_params(params);
  check_separation(d_km);
  check_rate(ddot_kmh, params);
  return (1.0 / d_km) * (1.0 - ddot_kmh / params.ddot_max_kmh);
}

double pdw_partial_d(double d_km, double ddot_kmh, const PdwParams& params) {
  check_params(params);
  check_separation(d_km);
  check_rate(ddot_kmh, params);
  return -(1.0 - ddot_kmh / params.ddot_max_kmh) / (d_km * d_km);
}

double pdw_partial_ddot(double d_km, const PdwParams& params) {
  check_params(params);
  check_separation(d_km);
  return -1.0 / (d_km * params.ddot_max_kmh);
}

double pdw_time_slope(double d_km, double ddot_kmh, const PdwParams& params) {
  check_params(params);
  check_separation(d_km);
  check_rate(ddot_kmh, params);
  return -ddot_kmh * (1.0 - ddot_kmh / params.ddot_max_kmh) / (d_km * d_km);
}

double fd_partial(Coordinate which, double d_km, double ddot_kmh, const PdwParams& params,
                  std::optional<double> step) {
  check_params(params);
  const double x = which == Coordinate::kSeparation ? d_km : ddot_kmh;
  const double h = step.value_or(1e-5 * std::max(1.0, std::abs(x)));
  if (!(std::isfinite(h) && h > 0.0)) {
    throw DomainError(fmt::format("finite-difference step {} must be positive", h));
  }
  if (which == Coordinate::kSeparation) {
    if (!(std::isfinite(d_km) && d_km - h > 0.0)) {
      throw DomainError(fmt::format("stencil d = {} +/- {} leaves d > 0", d_km, h));
    }
    check_rate(ddot_kmh, params);
    return (pdw(d_km + h, ddot_kmh, params) - pdw(d_km - h, ddot_kmh, params)) / (2.0 * h);
  }
  check_separation(d_km);
  if (!(std::abs(ddot_kmh) + h < params.ddot_max_kmh)) {
    throw DomainError(fmt::format("stencil ddot = {} +/- {} leaves |ddot| < {}", ddot_kmh, h,
                                  params.ddot_max_kmh));
  }
  return (pdw(d_km, ddot_kmh + h, params) - pdw(d_km, ddot_kmh - h, params)) / (2.0 * h);
}

std::vector<double> minmax_normalize(std::span<const double> series) {
  if (series.empty()) throw DomainError("cannot normalize an empty series");
  if (!std::all_of(series.begin(), series.end(), [](double x) { return std::isfinite(x); })) {
    throw DomainError("cannot normalize a series containing non-finite values");
  }
  const auto [lo_it, hi_it] = std::minmax_element(series.begin(), series.end());
  const double lo = *lo_it;
  const double range = *hi_it - lo;
  std::vector<double> out(series.size(), 0.0);
  if (range == 0.0) return out;
  for (std::size_t i = 0; i < series.size(); ++i) {
    // Clamp guards the last ulp; the extremes map to exactly 0 and 1.
    out[i] = std::clamp((series[i] - lo) / range, 0.0, 1.0);
  }
  return out;
}

MetricTrace pdw_trace(const SeparationTrace& trace, const PdwParams& params) {
  if (trace.ddot_max_kmh > 0.0 && trace.ddot_max_kmh != params.ddot_max_kmh) {
    throw ParameterViolation(fmt::format("ddot_max = {} km/h does not match the scenario bound {} km/h",
                                         params.ddot_max_kmh, trace.ddot_max_kmh));
  }
  std::vector<double> raw;
  raw.reserve(trace.samples.size());
  for (const auto& s : trace.samples) raw.push_back(pdw(s.d_km, s.ddot_kmh, params));
  const auto norm = minmax_normalize(raw);

  MetricTrace out{"pdw", "1/km", {}};
  out.samples.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    out.samples.push_back({trace.samples[i].t_min, raw[i], norm[i]});
  }
  return out;
}

std::vector<double> speed_change_events(const SpeedProfile& profile, double threshold_kmh) {
  std::vector<double> events;
  const auto bps = profile.breakpoints();
  for (std::size_t k = 1; k < bps.size(); ++k) {
    if (std::abs(bps[k].v_kmh - bps[k - 1].v_kmh) > threshold_kmh) {
      events.push_back(bps[k].t_start_min);
    }
  }
  return events;
}

MetricTrace dynamic_density(const PairScenario& scenario, const SeparationTrace& trace,
                            const DdParams& params) {
  if (!(std::isfinite(params.window_min) && params.window_min > 0.0)) {
    throw DomainError(fmt::format("DD window {} min must be positive", params.window_min));
  }
  if (!(params.window_min <= scenario.t_f_min)) {
    throw DomainError(fmt::format("DD window {} min exceeds the horizon {} min", params.window_min,
                                  scenario.t_f_min));
  }
  if (!(std::isfinite(params.speed_threshold_kmh) && params.speed_threshold_kmh >= 0.0)) {
    throw DomainError(
        fmt::format("DD speed threshold {} km/h must be >= 0", params.speed_threshold_kmh));
  }

  const double tol = 1e-9 * std::max(1.0, scenario.t_f_min);
  const std::vector<std::vector<double>> events{
      speed_change_events(scenario.predecessor, params.speed_threshold_kmh),
      speed_change_events(scenario.follower, params.speed_threshold_kmh)};

  std::vector<double> raw;
  raw.reserve(trace.samples.size());
  for (const auto& s : trace.samples) {
    const double lower = std::max(0.0, s.t_min - params.window_min) + tol;
    const double upper = s.pre_event ? s.t_min - tol : s.t_min + tol;
    int count = 0;
    for (const auto& aircraft : events) {
      const bool changed = std::any_of(aircraft.begin(), aircraft.end(),
                                       [&](double e) { return e > lower && e <= upper; });
      if (changed) ++count;
    }
    raw.push_back(count);
  }
  const auto norm = minmax_normalize(raw);

  MetricTrace out{"dd", "aircraft", {}};
  out.samples.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    out.samples.push_back({trace.samples[i].t_min, raw[i], norm[i]});
  }
  return out;
}

bool GradcheckReport::ok() const {
  return std::none_of(points.begin(), points.end(),
                      [](const GradcheckPoint& p) { return p.violation.has_value(); }) &&
         max_rel_error < tolerance;
}

GradcheckReport gradient_check(std::span<const double> d_values_km,
                               std::span<const double> ddot_values_kmh, double ddot_max_kmh,
                               double tolerance) {
  GradcheckReport report{ddot_max_kmh, tolerance, 0.0, {}};
  const PdwParams params{ddot_max_kmh};
  for (double d : d_values_km) {
    for (double ddot : ddot_values_kmh) {
      GradcheckPoint p{d, ddot, 0, 0, 0, 0, 0, std::nullopt};
      try {
        p.analytic_d = pdw_partial_d(d, ddot, params);
        p.fd_d = fd_partial(Coordinate::kSeparation, d, ddot, params);
        p.analytic_ddot = pdw_partial_ddot(d, params);
        p.fd_ddot = fd_partial(Coordinate::kSeparationRate, d, ddot, params);
        p.rel_error = std::max(relative_error(p.analytic_d, p.fd_d),
                               relative_error(p.analytic_ddot, p.fd_ddot));
        report.max_rel_error = std::max(report.max_rel_error, p.rel_error);
        if (!(p.analytic_d < 0.0)) {
          p.violation = "d chi/d d is not negative";
        } else if (!(p.analytic_ddot < 0.0)) {
          p.violation = "d chi/d ddot is not negative";
        } else if (!(p.rel_error < tolerance)) {
          p.violation = fmt::format("relative error {:.3e} exceeds {:.1e}", p.rel_error, tolerance);
        }
      } catch (const Error& e) {
        p.violation = fmt::format("domain error: {}", e.what());
      }
      report.points.push_back(std::move(p));
    }
  }
  return report;
}

}  // namespace pdw
