#include "pdw/report.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace pdw {

RunResult run_pipeline(const PairScenario& scenario, const DdParams& dd_params, bool merge) {
  validate_scenario(scenario);
  auto separation = integrate_separation(scenario);
  if (merge) separation = merge_jumps(std::move(separation));
  auto pdw = pdw_trace(separation, PdwParams{scenario.ddot_max_kmh});
  auto dd = dynamic_density(scenario, separation, dd_params);
  return {scenario, std::move(separation), std::move(pdw), std::move(dd)};
}

std::string format_number(double value) {
  if (value == 0.0) value = 0.0;  // no "-0"
  return fmt::format("{:.9g}", value);
}

std::string format_csv(const RunResult& result) {
  std::string out = kCsvHeader;
  out += '\n';
  const auto& sep = result.separation.samples;
  for (std::size_t i = 0; i < sep.size(); ++i) {
    const auto& p = result.pdw.samples[i];
    const auto& d = result.dd.samples[i];
    out += fmt::format("{},{},{},{},{},{},{}\n", format_number(sep[i].t_min),
                       format_number(sep[i].d_km), format_number(sep[i].ddot_kmh),
                       format_number(p.raw), format_number(p.normalized), format_number(d.raw),
                       format_number(d.normalized));
  }
  return out;
}

bool dd_identical(const RunResult& a, const RunResult& b) {
  return std::equal(a.dd.samples.begin(), a.dd.samples.end(), b.dd.samples.begin(),
                    b.dd.samples.end(), [](const MetricSample& x, const MetricSample& y) {
                      return x.t_min == y.t_min && x.raw == y.raw;
                    });
}

}  // namespace pdw
