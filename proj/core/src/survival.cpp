#include "saturation/survival.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <limits>

namespace saturation {

std::optional<EventCoding> parse_event_coding(std::string_view name) {
  if (name == "table5") return EventCoding::NewCodeIsEvent;
  if (name == "prose") return EventCoding::ZeroCodeIsEvent;
  return std::nullopt;
}

std::string_view to_string(EventCoding coding) {
  return coding == EventCoding::NewCodeIsEvent ? "table5" : "prose";
}

std::optional<CiTransform> parse_ci_transform(std::string_view name) {
  if (name == "log") return CiTransform::Log;
  if (name == "plain") return CiTransform::Plain;
  return std::nullopt;
}

std::string_view to_string(CiTransform transform) {
  return transform == CiTransform::Log ? "log" : "plain";
}

double normal_quantile_two_sided(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), 1.0 - alpha / 2.0);
}

KmCurve km_estimate(const InterviewSequence& sequence, const KmOptions& options) {
  KmCurve curve;
  curve.alpha = options.alpha;
  curve.z = normal_quantile_two_sided(options.alpha);
  curve.coding = options.coding;
  curve.transform = options.transform;

  const std::size_t total = sequence.size();
  curve.points.reserve(total);
  double survival = 1.0;
  double variance = 0.0;
  for (std::size_t row = 0; row < total; ++row) {
    KmPoint p;
    p.seq = row + 1;
    p.at_risk = total - row;
    const bool has_new = sequence[row] >= 1;
    p.event = options.coding == EventCoding::NewCodeIsEvent ? has_new : !has_new;
    if (p.event) {
      const auto n = static_cast<double>(p.at_risk);
      survival *= 1.0 - 1.0 / n;
      variance = p.at_risk > 1 ? variance + 1.0 / (n * (n - 1.0))
                               : std::numeric_limits<double>::infinity();
    }
    p.survival = survival;
    p.variance = variance;
    if (survival > 0.0) {
      const double se = std::sqrt(variance);
      if (options.transform == CiTransform::Log) {
        const double factor = std::exp(curve.z * se);
        p.ci_low = survival / factor;
        p.ci_high = std::min(1.0, survival * factor);
      } else {
        const double half = curve.z * survival * se;
        p.ci_low = std::max(0.0, survival - half);
        p.ci_high = std::min(1.0, survival + half);
      }
    }
    curve.points.push_back(p);
  }
  return curve;
}

double fit_line_x_intercept(std::span<const PlotPoint> points) {
  if (points.size() < 2) throw ExtrapolationError("fewer than 2 points");
  const auto n = static_cast<double>(points.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (const auto& p : points) {
    mean_x += p.x;
    mean_y += p.y;
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& p : points) {
    sxx += (p.x - mean_x) * (p.x - mean_x);
    sxy += (p.x - mean_x) * (p.y - mean_y);
  }
  if (sxx == 0.0) throw ExtrapolationError("points share a single x value");
  const double slope = sxy / sxx;
  if (!(slope < 0.0)) throw ExtrapolationError("non-negative slope: no extrapolated saturation");
  const double intercept = mean_y - slope * mean_x;
  return -intercept / slope;
}

std::vector<PlotPoint> event_survival_points(const KmCurve& curve) {
  std::vector<PlotPoint> out;
  for (const auto& p : curve.points)
    if (p.event) out.push_back({static_cast<double>(p.seq), p.survival});
  return out;
}

std::vector<PlotPoint> event_upper_ci_points(const KmCurve& curve) {
  std::vector<PlotPoint> out;
  for (const auto& p : curve.points)
    if (p.event && p.ci_high) out.push_back({static_cast<double>(p.seq), *p.ci_high});
  return out;
}

SaturationSummary saturation_summary(const KmCurve& curve) {
  SaturationSummary s;
  for (const auto& p : curve.points) {
    if (p.survival == 0.0) {
      s.km_zero_seq = p.seq;
      break;
    }
  }
  auto try_fit = [](const std::vector<PlotPoint>& pts) -> std::optional<double> {
    try {
      return fit_line_x_intercept(pts);
    } catch (const ExtrapolationError&) {
      return std::nullopt;
    }
  };
  if (!s.km_zero_seq) s.km_extrapolated_zero = try_fit(event_survival_points(curve));
  s.upper_ci_extrapolated_zero = try_fit(event_upper_ci_points(curve));
  return s;
}

}  // namespace saturation
