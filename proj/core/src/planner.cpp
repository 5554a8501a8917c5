#include "saturation/planner.hpp"

#include <charconv>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace saturation {

namespace {

std::optional<std::size_t> parse_suffix_count(std::string_view text, std::string_view prefix) {
  if (!text.starts_with(prefix)) return std::nullopt;
  text.remove_prefix(prefix.size());
  std::size_t k = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), k);
  if (ec != std::errc{} || ptr != text.data() + text.size() || k == 0) return std::nullopt;
  return k;
}

std::size_t trailing_zeros(std::span<const std::size_t> pattern) {
  std::size_t run = 0;
  for (auto it = pattern.rbegin(); it != pattern.rend() && *it == 0; ++it) ++run;
  return run;
}

// Unbiased draw in [0, bound) from the raw generator output, so results do
// not depend on the standard library's distribution implementation.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace

StoppingRule StoppingRule::consecutive_zero(std::size_t k) {
  if (k == 0) throw std::invalid_argument("consecutive_zero requires k >= 1");
  return StoppingRule(Kind::ConsecutiveZero, k);
}

std::optional<StoppingRule> StoppingRule::parse(std::string_view text) {
  if (text == "first_zero") return first_zero();
  if (text == "ten_plus_three") return ten_plus_three();
  if (auto k = parse_suffix_count(text, "consecutive_zero:")) return consecutive_zero(*k);
  return std::nullopt;
}

std::string StoppingRule::name() const {
  switch (kind_) {
    case Kind::FirstZero:
      return "first_zero";
    case Kind::ConsecutiveZero:
      return "consecutive_zero:" + std::to_string(run_);
    case Kind::TenPlusThree:
      return "ten_plus_three";
  }
  return {};
}

StopDecision apply_rule(const InterviewSequence& sequence, const StoppingRule& rule) {
  const std::size_t min_seq = rule.kind() == StoppingRule::Kind::TenPlusThree ? 10 : 1;
  std::size_t run = 0;
  for (std::size_t row = 0; row < sequence.size(); ++row) {
    run = sequence[row] == 0 ? run + 1 : 0;
    if (run >= rule.run_length() && row + 1 >= min_seq) return {row + 1};
  }
  return {};
}

Type1Report type1_assess(const InterviewSequence& sequence, const StoppingRule& rule) {
  Type1Report report{rule, apply_rule(sequence, rule)};
  if (!report.decision.stopped()) return report;
  const std::size_t stop = *report.decision.stop_seq;
  for (std::size_t row = stop; row < sequence.size(); ++row) report.missed_codes += sequence[row];
  report.is_type1 = report.missed_codes >= 1;
  report.extra_interviews_needed = sequence.size() - stop;
  return report;
}

InterviewSequence impute_grouped(const GroupedCounts& groups, Seed seed) {
  std::mt19937_64 rng(seed.value);
  std::vector<std::size_t> counts;
  counts.reserve(groups.interview_count());
  for (const auto& g : groups.groups()) {
    const std::size_t width = g.width();
    std::vector<std::size_t> block(width, 0);
    if (g.codes_count >= width) {
      std::fill(block.begin(), block.end(), 1);
      block.front() += g.codes_count - width;
    } else {
      // Partial Fisher-Yates: the first codes_count slots of a shuffled
      // index list receive one code each.
      std::vector<std::size_t> slots(width);
      std::iota(slots.begin(), slots.end(), 0);
      for (std::size_t i = 0; i < g.codes_count; ++i) {
        auto pick = i + draw_below(rng, width - i);
        std::swap(slots[i], slots[pick]);
        block[slots[i]] = 1;
      }
    }
    counts.insert(counts.end(), block.begin(), block.end());
  }
  return InterviewSequence(std::move(counts));
}

std::optional<ProjectionMethod> ProjectionMethod::parse(std::string_view text) {
  if (text == "extrapolation") return extrapolation();
  if (auto k = parse_suffix_count(text, "rule_completion:")) return rule_completion(*k);
  return std::nullopt;
}

std::string ProjectionMethod::name() const {
  return kind == Kind::Extrapolation ? "extrapolation"
                                     : "rule_completion:" + std::to_string(run_length);
}

ScenarioRow scenario_eval(std::span<const std::size_t> pattern, const KmOptions& options,
                          std::span<const ProjectionMethod> methods) {
  ScenarioRow row;
  row.pattern.assign(pattern.begin(), pattern.end());
  for (auto v : row.pattern)
    if (v > 1) throw std::invalid_argument("pattern entries must be 0 or 1");

  const InterviewSequence sequence(row.pattern);
  const auto curve = km_estimate(sequence, options);
  const auto& last = curve.final_point();
  row.km_final = last.survival;
  row.ci_low = last.ci_low;
  row.ci_high = last.ci_high;

  const std::size_t total = sequence.size();
  const bool saturated = last.survival == 0.0;
  for (const auto& method : methods) {
    Projection p{method, std::nullopt};
    if (saturated) {
      p.additional_interviews = 0;
    } else if (method.kind == ProjectionMethod::Kind::Extrapolation) {
      if (auto zero = saturation_summary(curve).upper_ci_extrapolated_zero) {
        const double needed = std::ceil(*zero) - static_cast<double>(total);
        p.additional_interviews = needed > 0.0 ? static_cast<std::size_t>(needed) : 0;
      }
    } else {
      const std::size_t run = trailing_zeros(row.pattern);
      p.additional_interviews = run >= method.run_length ? 0 : method.run_length - run;
    }
    row.projections.push_back(p);
  }
  return row;
}

std::vector<Preset> presets() {
  return {
      {"ethnography", 30, 60},
      {"grounded_theory", 30, 50},
      {"phenomenology", 5, 25},
      {"all_qualitative", 15, std::nullopt},
      {"funded_research", 1, 95},
  };
}

}  // namespace saturation
