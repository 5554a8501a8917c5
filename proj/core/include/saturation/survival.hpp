#pragma once

// Kaplan-Meier estimate of the probability that saturation has not yet
// been reached, with Greenwood confidence intervals and straight-line
// extrapolation of the curve to zero.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "saturation/dataset.hpp"

namespace saturation {

/// Which interviews count as KM events.
enum class EventCoding {
  NewCodeIsEvent,   // interview with >= 1 new code is an event (default)
  ZeroCodeIsEvent,  // interview with no new codes is an event
};

enum class CiTransform {
  Log,    // S * exp(+-z sqrt(V))
  Plain,  // S +- z * S * sqrt(V), clipped to [0, 1]
};

std::optional<EventCoding> parse_event_coding(std::string_view name);  // "table5" | "prose"
std::string_view to_string(EventCoding coding);
std::optional<CiTransform> parse_ci_transform(std::string_view name);  // "log" | "plain"
std::string_view to_string(CiTransform transform);

struct KmOptions {
  double alpha = 0.05;
  EventCoding coding = EventCoding::NewCodeIsEvent;
  CiTransform transform = CiTransform::Log;
};

struct KmPoint {
  std::size_t seq = 0;
  std::size_t at_risk = 0;
  bool event = false;
  double survival = 1.0;
  double variance = 0.0;  // Greenwood sum on the log scale; +inf once S = 0
  std::optional<double> ci_low;   // absent when S = 0
  std::optional<double> ci_high;  // capped at 1
};

struct KmCurve {
  std::vector<KmPoint> points;
  double alpha = 0.05;
  double z = 0.0;
  EventCoding coding = EventCoding::NewCodeIsEvent;
  CiTransform transform = CiTransform::Log;

  const KmPoint& final_point() const { return points.back(); }
};

/// Two-sided standard normal quantile for level alpha, i.e. Phi^-1(1 - alpha/2).
double normal_quantile_two_sided(double alpha);

/// One observation per interview, all times distinct: at interview j the
/// risk set is J - j + 1. Throws std::invalid_argument for alpha outside
/// (0, 1).
KmCurve km_estimate(const InterviewSequence& sequence, const KmOptions& options = {});

struct PlotPoint {
  double x = 0.0;
  double y = 0.0;
};

class ExtrapolationError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Ordinary least squares line through `points`, returning the x where the
/// line crosses zero. Throws ExtrapolationError for fewer than two points,
/// all-equal x, or a non-negative slope.
double fit_line_x_intercept(std::span<const PlotPoint> points);

struct SaturationSummary {
  std::optional<std::size_t> km_zero_seq;
  std::optional<double> km_extrapolated_zero;
  std::optional<double> upper_ci_extrapolated_zero;
};

/// Landmarks where the curve reaches zero. Line fits use event interviews
/// only; the KM extrapolation is omitted once the curve has hit zero.
SaturationSummary saturation_summary(const KmCurve& curve);

/// (seq, S) and (seq, ci_high) at event interviews, the points the
/// extrapolation lines are fitted to.
std::vector<PlotPoint> event_survival_points(const KmCurve& curve);
std::vector<PlotPoint> event_upper_ci_points(const KmCurve& curve);

}  // namespace saturation
