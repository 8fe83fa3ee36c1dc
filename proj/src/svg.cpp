#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "pdw/report.hpp"

namespace pdw {

namespace {

constexpr double kWidth = 800;
constexpr double kHeight = 420;
constexpr double kLeft = 70;
constexpr double kRight = 150;
constexpr double kTop = 40;
constexpr double kBottom = 50;

struct Point {
  double x;
  double y;
};

struct Series {
  std::string label;
  std::string color;
  std::vector<Point> points;
};

class Plot {
 public:
  Plot(std::string title, std::string y_label, double x_max, double y_min, double y_max)
      : title_(std::move(title)),
        y_label_(std::move(y_label)),
        x_max_(x_max),
        y_min_(y_min),
        y_max_(y_max) {}

  void add(Series s) { series_.push_back(std::move(s)); }

  std::string render(std::span<const double> y_ticks) const {
    std::string svg = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
        "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n"
        "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        "<text x=\"{2:.2f}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{3}</text>\n",
        kWidth, kHeight, kLeft + plot_w() / 2, title_);

    // Axes and grid.
    svg += fmt::format(
        "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"none\" "
        "stroke=\"black\"/>\n",
        kLeft, kTop, plot_w(), plot_h());
    const double x_step = x_max_ <= 20 ? 2 : (x_max_ <= 120 ? 10 : std::ceil(x_max_ / 60) * 10);
    for (double t = 0; t <= x_max_ + 1e-9; t += x_step) {
      svg += fmt::format(
          "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"#ddd\"/>\n"
          "<text x=\"{0:.2f}\" y=\"{3:.2f}\" text-anchor=\"middle\">{4}</text>\n",
          sx(t), kTop, kTop + plot_h(), kTop + plot_h() + 18, format_number(t));
    }
    for (double v : y_ticks) {
      svg += fmt::format(
          "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"#ddd\"/>\n"
          "<text x=\"{3:.2f}\" y=\"{4:.2f}\" text-anchor=\"end\">{5}</text>\n",
          kLeft, sy(v), kLeft + plot_w(), kLeft - 6, sy(v) + 4, format_number(v));
    }
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">time (min)</text>\n",
                       kLeft + plot_w() / 2, kHeight - 12);
    svg += fmt::format(
        "<text x=\"18\" y=\"{0:.2f}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {0:.2f})\">"
        "{1}</text>\n",
        kTop + plot_h() / 2, y_label_);

    for (std::size_t i = 0; i < series_.size(); ++i) {
      const auto& s = series_[i];
      svg += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"2\" points=\"",
                         s.color);
      for (std::size_t k = 0; k < s.points.size(); ++k) {
        if (k > 0) svg += ' ';
        svg += fmt::format("{:.2f},{:.2f}", sx(s.points[k].x), sy(s.points[k].y));
      }
      svg += "\"/>\n";
      const double ly = kTop + 16 + 20 * static_cast<double>(i);
      const double lx = kLeft + plot_w() + 14;
      svg += fmt::format(
          "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"{3}\" "
          "stroke-width=\"2\"/>\n<text x=\"{4:.2f}\" y=\"{5:.2f}\">{6}</text>\n",
          lx, ly, lx + 24, s.color, lx + 30, ly + 4, s.label);
    }
    svg += "</svg>\n";
    return svg;
  }

 private:
  double plot_w() const { return kWidth - kLeft - kRight; }
  double plot_h() const { return kHeight - kTop - kBottom; }
  double sx(double t) const { return kLeft + plot_w() * t / x_max_; }
  double sy(double v) const { return kTop + plot_h() * (1 - (v - y_min_) / (y_max_ - y_min_)); }

  std::string title_;
  std::string y_label_;
  double x_max_;
  double y_min_;
  double y_max_;
  std::vector<Series> series_;
};

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

Series metric_series(const MetricTrace& trace, std::string label, std::string color) {
  Series s{std::move(label), std::move(color), {}};
  for (const auto& m : trace.samples) s.points.push_back({m.t_min, m.normalized});
  return s;
}

Series speed_series(const SpeedProfile& profile, std::string label, std::string color) {
  Series s{std::move(label), std::move(color), {}};
  const auto bps = profile.breakpoints();
  for (std::size_t k = 0; k < bps.size(); ++k) {
    const double end = k + 1 < bps.size() ? bps[k + 1].t_start_min : profile.t_end();
    s.points.push_back({bps[k].t_start_min, bps[k].v_kmh});
    s.points.push_back({end, bps[k].v_kmh});
  }
  return s;
}

}  // namespace

std::string render_metrics_svg(const RunResult& result) {
  Plot plot(escape(fmt::format("PDW vs DD, {}", result.scenario.name)), "normalized value",
            result.scenario.t_f_min, -0.05, 1.05);
  plot.add(metric_series(result.pdw, "PDW", "#1f77b4"));
  plot.add(metric_series(result.dd, "DD", "#ff7f0e"));
  const std::vector<double> ticks{0, 0.25, 0.5, 0.75, 1};
  return plot.render(ticks);
}

std::string render_speed_svg(const PairScenario& scenario) {
  double lo = 1e300;
  double hi = 0;
  for (const auto* profile : {&scenario.predecessor, &scenario.follower}) {
    for (const auto& bp : profile->breakpoints()) {
      lo = std::min(lo, bp.v_kmh);
      hi = std::max(hi, bp.v_kmh);
    }
  }
  const double step = std::max(10.0, std::pow(10.0, std::floor(std::log10(std::max(hi - lo, 1.0)))));
  const double y_min = std::floor(lo / step) * step - step;
  const double y_max = std::ceil(hi / step) * step + step;
  Plot plot(escape(fmt::format("Airspeed, {}", scenario.name)), "airspeed (km/h)",
            scenario.t_f_min, y_min, y_max);
  plot.add(speed_series(scenario.predecessor, "predecessor", "#2ca02c"));
  plot.add(speed_series(scenario.follower, "follower", "#d62728"));
  std::vector<double> ticks;
  for (double v = y_min; v <= y_max + 1e-9; v += step) ticks.push_back(v);
  return plot.render(ticks);
}

}  // namespace pdw
