#include "saturation/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>

namespace saturation::plot {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

struct Frame {
  double left = 56, right = 20, top = 36, bottom = 44;
  double width, height, x_max;

  double x(double seq) const { return left + seq / x_max * (width - left - right); }
  double y(double p) const { return top + (1.0 - p) * (height - top - bottom); }
};

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
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

}  // namespace

std::string km_svg(const KmCurve& curve, const SaturationSummary& summary,
                   const SvgOptions& options) {
  const double total = static_cast<double>(curve.points.size());
  // Extrapolated landmarks can sit far beyond J; cap the axis at 4J.
  double x_max = std::max(total, 1.0);
  for (auto landmark : {summary.km_extrapolated_zero, summary.upper_ci_extrapolated_zero})
    if (landmark && std::isfinite(*landmark)) x_max = std::max(x_max, std::min(*landmark, 4.0 * total));
  x_max = std::ceil(x_max);

  Frame f{56, 20, 36, 44, static_cast<double>(options.width), static_cast<double>(options.height), x_max};

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(options.width) +
         "\" height=\"" + std::to_string(options.height) + "\" viewBox=\"0 0 " +
         std::to_string(options.width) + " " + std::to_string(options.height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + num(f.width / 2) + "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" +
         escape_xml(options.title) + "</text>\n";

  // Axes and ticks.
  svg += "<g stroke=\"black\" stroke-width=\"1\">\n";
  svg += "<line x1=\"" + num(f.x(0)) + "\" y1=\"" + num(f.y(0)) + "\" x2=\"" + num(f.x(x_max)) +
         "\" y2=\"" + num(f.y(0)) + "\"/>\n";
  svg += "<line x1=\"" + num(f.x(0)) + "\" y1=\"" + num(f.y(0)) + "\" x2=\"" + num(f.x(0)) +
         "\" y2=\"" + num(f.y(1)) + "\"/>\n";
  svg += "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int i = 0; i <= 4; ++i) {
    double p = i / 4.0;
    svg += "<text x=\"" + num(f.x(0) - 6) + "\" y=\"" + num(f.y(p) + 4) + "\" text-anchor=\"end\">" +
           num(p) + "</text>\n";
  }
  const double step = std::max(1.0, std::ceil(x_max / 10.0));
  for (double s = 0; s <= x_max; s += step)
    svg += "<text x=\"" + num(f.x(s)) + "\" y=\"" + num(f.y(0) + 16) + "\" text-anchor=\"middle\">" +
           std::to_string(static_cast<long>(s)) + "</text>\n";
  svg += "<text x=\"" + num(f.x(x_max / 2)) + "\" y=\"" + num(f.height - 8) +
         "\" text-anchor=\"middle\">Interview</text>\n</g>\n";

  // CI band as a step polygon over estimable points.
  std::string upper, lower;
  double prev_high = 1.0, prev_low = 1.0, prev_x = 0.0;
  std::vector<std::pair<double, double>> low_pts;
  for (const auto& p : curve.points) {
    if (!p.ci_high || !p.ci_low) break;
    double xs = static_cast<double>(p.seq);
    upper += num(f.x(prev_x)) + "," + num(f.y(prev_high)) + " " + num(f.x(xs)) + "," + num(f.y(prev_high)) + " ";
    low_pts.emplace_back(prev_x, prev_low);
    low_pts.emplace_back(xs, prev_low);
    prev_high = *p.ci_high;
    prev_low = *p.ci_low;
    prev_x = xs;
  }
  if (!low_pts.empty()) {
    upper += num(f.x(prev_x)) + "," + num(f.y(prev_high)) + " ";
    low_pts.emplace_back(prev_x, prev_low);
    for (auto it = low_pts.rbegin(); it != low_pts.rend(); ++it)
      lower += num(f.x(it->first)) + "," + num(f.y(it->second)) + " ";
    svg += "<polygon class=\"ci-band\" fill=\"#4c78a8\" fill-opacity=\"0.2\" stroke=\"none\" points=\"" +
           upper + lower + "\"/>\n";
  }

  // KM step function.
  std::string path = "M" + num(f.x(0)) + "," + num(f.y(1));
  double level = 1.0;
  for (const auto& p : curve.points) {
    path += " H" + num(f.x(static_cast<double>(p.seq)));
    if (p.survival != level) {
      level = p.survival;
      path += " V" + num(f.y(level));
    }
  }
  svg += "<path class=\"km\" d=\"" + path + "\" fill=\"none\" stroke=\"#4c78a8\" stroke-width=\"2\"/>\n";

  // Censoring ticks.
  for (const auto& p : curve.points) {
    if (p.event) continue;
    double cx = f.x(static_cast<double>(p.seq)), cy = f.y(p.survival);
    svg += "<line class=\"censor\" x1=\"" + num(cx) + "\" y1=\"" + num(cy - 5) + "\" x2=\"" + num(cx) +
           "\" y2=\"" + num(cy + 5) + "\" stroke=\"#4c78a8\"/>\n";
  }

  // Extrapolation lines from the last event point.
  std::optional<KmPoint> last_event;
  for (const auto& p : curve.points)
    if (p.event && p.ci_high) last_event = p;
  auto dashed = [&](double y0, double zero, const char* cls, const char* colour) {
    double x1 = last_event ? static_cast<double>(last_event->seq) : 0.0;
    double x2 = std::min(zero, x_max);
    double y2 = zero > x_max ? y0 * (zero - x_max) / (zero - x1) : 0.0;
    svg += std::string("<line class=\"") + cls + "\" x1=\"" + num(f.x(x1)) + "\" y1=\"" + num(f.y(y0)) +
           "\" x2=\"" + num(f.x(x2)) + "\" y2=\"" + num(f.y(y2)) + "\" stroke=\"" + colour +
           "\" stroke-dasharray=\"6,4\"/>\n";
  };
  if (last_event) {
    if (summary.km_extrapolated_zero) dashed(last_event->survival, *summary.km_extrapolated_zero, "km-extrapolation", "#4c78a8");
    if (summary.upper_ci_extrapolated_zero)
      dashed(*last_event->ci_high, *summary.upper_ci_extrapolated_zero, "ci-extrapolation", "#e45756");
  }

  svg += "</svg>\n";
  return svg;
}

}  // namespace saturation::plot
