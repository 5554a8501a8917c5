#pragma once

#include <string>

#include "saturation/survival.hpp"

namespace saturation::plot {

struct SvgOptions {
  int width = 720;
  int height = 420;
  std::string title = "Probability of not being saturated";
};

/// Static SVG: right-continuous KM step line, shaded CI band, censoring
/// ticks at non-event interviews and dashed extrapolation lines from the
/// last event point to each extrapolated zero.
std::string km_svg(const KmCurve& curve, const SaturationSummary& summary,
                   const SvgOptions& options = {});

}  // namespace saturation::plot
