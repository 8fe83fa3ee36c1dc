#include "pdw/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "pdw/report.hpp"
#include "pdw/scenarios.hpp"

namespace pdw::cli {

namespace {

namespace fs = std::filesystem;

// Thrown for output failures; maps to kExitIo.
class IoError : public Error {
 public:
  using Error::Error;
};

struct Overrides {
  std::optional<double> dt;
  std::optional<double> d0;
  std::optional<double> ddot_max;
  std::optional<double> unsafe_km;
};

struct MetricOptions {
  DdParams dd;
  bool merge = false;
};

void diag(const Terminal& term, std::string_view level, std::string_view ansi,
          std::string_view message) {
  if (term.color) {
    term.err << "\x1b[" << ansi << "m" << level << ":\x1b[0m " << message << '\n';
  } else {
    term.err << level << ": " << message << '\n';
  }
}

void error(const Terminal& term, std::string_view message) { diag(term, "error", "1;31", message); }
void warning(const Terminal& term, std::string_view message) { diag(term, "warning", "1;33", message); }

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  out << content;
  out.flush();
  if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

PairScenario load_scenario(const std::string& ref) {
  if (auto id = parse_builtin_id(ref)) return builtin_scenario(*id);
  return parse_scenario_file(ref);
}

PairScenario apply(PairScenario s, const Overrides& o) {
  if (o.dt) s.sample_dt_min = *o.dt;
  if (o.d0) s.d0_km = *o.d0;
  if (o.ddot_max) s.ddot_max_kmh = *o.ddot_max;
  if (o.unsafe_km) s.unsafe_separation_km = *o.unsafe_km;
  return s;
}

RunResult run_one(const PairScenario& scenario, const MetricOptions& opts, const Terminal& term) {
  auto result = run_pipeline(scenario, opts.dd, opts.merge);
  if (const auto t = result.separation.unsafe_since_min) {
    warning(term, fmt::format("{}: separation below {} km from t = {} min (minimum {} km)",
                              scenario.name, format_number(scenario.unsafe_separation_km),
                              format_number(*t), format_number(result.separation.min_separation_km)));
  }
  return result;
}

std::string file_stem(std::string_view name) {
  std::string out;
  for (char c : name) {
    const bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    out += keep ? c : '_';
  }
  return out.empty() ? "scenario" : out;
}

void add_overrides(CLI::App& cmd, Overrides& o, bool with_d0) {
  cmd.add_option("--dt", o.dt, "Output sampling step (min)");
  if (with_d0) cmd.add_option("--d0", o.d0, "Initial separation (km)");
  cmd.add_option("--ddot-max", o.ddot_max, "Separation-rate bound (km/h)");
  cmd.add_option("--unsafe-km", o.unsafe_km, "Advisory unsafe-separation threshold (km)");
}

void add_metric_options(CLI::App& cmd, MetricOptions& m) {
  cmd.add_option("--dd-window", m.dd.window_min, "DD trailing window (min)")->capture_default_str();
  cmd.add_option("--dd-threshold", m.dd.speed_threshold_kmh, "DD speed-change threshold (km/h)")
      ->capture_default_str();
  cmd.add_flag("--merge-jumps", m.merge, "Keep only post-event rows at breakpoints");
}

struct RunArgs {
  std::string scenario;
  Overrides overrides;
  MetricOptions metrics;
  std::optional<std::string> out;
  std::optional<std::string> svg;
  std::optional<std::string> svg_speeds;
};

int cmd_run(const RunArgs& a, const Terminal& term) {
  const auto scenario = apply(load_scenario(a.scenario), a.overrides);
  const auto result = run_one(scenario, a.metrics, term);
  const auto csv = format_csv(result);
  if (a.out) {
    write_file(*a.out, csv);
  } else {
    term.out << csv;
  }
  if (a.svg) write_file(*a.svg, render_metrics_svg(result));
  if (a.svg_speeds) write_file(*a.svg_speeds, render_speed_svg(scenario));
  return kExitOk;
}

struct CompareArgs {
  std::string out_dir = ".";
  std::vector<std::string> extra;
  Overrides overrides;
  MetricOptions metrics;
  std::optional<std::string> svg_dir;
};

int cmd_compare(const CompareArgs& a, const Terminal& term) {
  std::vector<PairScenario> scenarios{apply(builtin_scenario(BuiltinId::kS1), a.overrides),
                                      apply(builtin_scenario(BuiltinId::kS2), a.overrides)};
  for (const auto& ref : a.extra) scenarios.push_back(apply(load_scenario(ref), a.overrides));

  std::vector<RunResult> results;
  for (const auto& s : scenarios) results.push_back(run_one(s, a.metrics, term));

  std::error_code ec;
  for (const auto* dir : {&a.out_dir, a.svg_dir ? &*a.svg_dir : nullptr}) {
    if (dir == nullptr) continue;
    fs::create_directories(*dir, ec);
    if (ec) throw IoError(fmt::format("cannot create directory '{}': {}", *dir, ec.message()));
  }
  for (const auto& r : results) {
    const auto stem = file_stem(r.scenario.name);
    write_file(fs::path(a.out_dir) / (stem + ".csv"), format_csv(r));
    if (a.svg_dir) write_file(fs::path(*a.svg_dir) / (stem + ".svg"), render_metrics_svg(r));
  }

  term.out << "DD identical: " << (dd_identical(results[0], results[1]) ? "true" : "false") << '\n';
  for (std::size_t i = 2; i < results.size(); ++i) {
    double dd_max = 0;
    for (const auto& m : results[i].dd.samples) dd_max = std::max(dd_max, m.raw);
    term.out << results[i].scenario.name << ": dd_raw max = " << format_number(dd_max) << '\n';
  }
  return kExitOk;
}

struct GradcheckArgs {
  std::vector<double> d;
  std::vector<double> ddot{-150, -100, -50, 0, 50, 100, 150};
  double ddot_max = kBuiltinDdotMaxKmh;
};

std::vector<double> default_d_grid() {
  std::vector<double> d;
  for (int k = 1; k <= 30; ++k) d.push_back(10.0 * k);
  return d;
}

int cmd_gradcheck(GradcheckArgs a, const Terminal& term) {
  if (a.d.empty()) a.d = default_d_grid();
  const auto report = gradient_check(a.d, a.ddot, a.ddot_max);
  term.out << fmt::format("gradcheck: {} points, ddot_max = {} km/h, tolerance {:.0e}\n",
                          report.points.size(), format_number(a.ddot_max), report.tolerance);
  if (report.points.size() <= 10) {
    for (const auto& p : report.points) {
      if (p.violation) continue;
      term.out << fmt::format(
          "  d = {} km, ddot = {} km/h: dchi/dd analytic {:.9e} fd {:.9e}; "
          "dchi/dddot analytic {:.9e} fd {:.9e}; rel error {:.3e}\n",
          format_number(p.d_km), format_number(p.ddot_kmh), p.analytic_d, p.fd_d, p.analytic_ddot,
          p.fd_ddot, p.rel_error);
    }
  }
  term.out << fmt::format("max relative error: {:.3e}\n", report.max_rel_error);
  for (const auto& p : report.points) {
    if (!p.violation) continue;
    term.out << fmt::format("violation at d = {} km, ddot = {} km/h: {}\n", format_number(p.d_km),
                            format_number(p.ddot_kmh), *p.violation);
  }
  const bool ok = report.ok();
  term.out << "result: " << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? kExitOk : kExitInvalid;
}

}  // namespace

int run(std::span<const std::string> args, const Terminal& term) {
  CLI::App app{"Pairwise dynamic workload (PDW) and dynamic density for predecessor-follower pairs",
               "pdw"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Simulate one scenario and write its metric trace");
  run_cmd->add_option("--scenario", run_args.scenario, "s1, s2 or a scenario file path")->required();
  run_cmd->add_option("--out", run_args.out, "CSV output path (default: stdout)");
  run_cmd->add_option("--svg", run_args.svg, "SVG plot of the normalized metrics");
  run_cmd->add_option("--svg-speeds", run_args.svg_speeds, "SVG plot of the airspeed profiles");
  add_overrides(*run_cmd, run_args.overrides, true);
  add_metric_options(*run_cmd, run_args.metrics);

  CompareArgs cmp_args;
  auto* cmp_cmd = app.add_subcommand("compare", "Run s1 and s2 and compare their DD traces");
  cmp_cmd->add_option("--out-dir", cmp_args.out_dir, "Directory for <name>.csv files")
      ->capture_default_str();
  cmp_cmd->add_option("--scenario", cmp_args.extra, "Additional scenario file (repeatable)");
  cmp_cmd->add_option("--svg-dir", cmp_args.svg_dir, "Directory for <name>.svg plots");
  add_overrides(*cmp_cmd, cmp_args.overrides, false);
  add_metric_options(*cmp_cmd, cmp_args.metrics);

  GradcheckArgs grad_args;
  auto* grad_cmd =
      app.add_subcommand("gradcheck", "Check analytic PDW partials against finite differences");
  grad_cmd->add_option("--d", grad_args.d, "Separations (km), comma separated (default 10..300)")
      ->delimiter(',');
  grad_cmd->add_option("--ddot", grad_args.ddot, "Separation rates (km/h), comma separated")
      ->delimiter(',')
      ->capture_default_str();
  grad_cmd->add_option("--ddot-max", grad_args.ddot_max, "Separation-rate bound (km/h)")
      ->capture_default_str();

  std::vector<const char*> argv{"pdw"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    return app.exit(e, term.out, term.err);
  } catch (const CLI::ParseError& e) {
    error(term, e.what());
    return kExitInvalid;
  }

  try {
    if (*run_cmd) return cmd_run(run_args, term);
    if (*cmp_cmd) return cmd_compare(cmp_args, term);
    return cmd_gradcheck(grad_args, term);
  } catch (const ConflictError& e) {
    error(term, e.what());
    return kExitConflict;
  } catch (const IoError& e) {
    error(term, e.what());
    return kExitIo;
  } catch (const Error& e) {
    error(term, e.what());
    return kExitInvalid;
  }
}

}  // namespace pdw::cli
