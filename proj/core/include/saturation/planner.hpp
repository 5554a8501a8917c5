#pragma once

// Deterministic stopping rules and their Type I error, imputation of
// grouped published counts, and sample-size scenario projections.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "saturation/dataset.hpp"
#include "saturation/survival.hpp"

namespace saturation {

class StoppingRule {
 public:
  enum class Kind { FirstZero, ConsecutiveZero, TenPlusThree };

  static StoppingRule first_zero() { return StoppingRule(Kind::FirstZero, 1); }
  /// Throws std::invalid_argument for k = 0.
  static StoppingRule consecutive_zero(std::size_t k);
  /// At least 10 interviews and 3 consecutive zero-new-code interviews.
  static StoppingRule ten_plus_three() { return StoppingRule(Kind::TenPlusThree, 3); }

  /// "first_zero", "consecutive_zero:<k>" or "ten_plus_three".
  static std::optional<StoppingRule> parse(std::string_view text);

  Kind kind() const noexcept { return kind_; }
  std::size_t run_length() const noexcept { return run_; }
  std::string name() const;

  bool operator==(const StoppingRule&) const = default;

 private:
  StoppingRule(Kind kind, std::size_t run) : kind_(kind), run_(run) {}
  Kind kind_;
  std::size_t run_;
};

struct StopDecision {
  std::optional<std::size_t> stop_seq;  // first interview at which the rule fires

  bool stopped() const noexcept { return stop_seq.has_value(); }
};

StopDecision apply_rule(const InterviewSequence& sequence, const StoppingRule& rule);

struct Type1Report {
  StoppingRule rule;
  StopDecision decision;
  bool is_type1 = false;                    // stopped, yet new codes appeared later
  std::size_t missed_codes = 0;             // new codes after stop_seq
  std::size_t extra_interviews_needed = 0;  // J - stop_seq
};

/// Judges the rule against the full observed sequence as ground truth.
Type1Report type1_assess(const InterviewSequence& sequence, const StoppingRule& rule);

struct Seed {
  std::uint64_t value = 0;
};

/// Expands grouped counts to one new-code count per interview. A group of
/// width w with c >= w codes gives every interview one code and the first
/// interview the surplus; with c < w, c interviews drawn uniformly without
/// replacement get one code each and the rest get none.
InterviewSequence impute_grouped(const GroupedCounts& groups, Seed seed);

struct ProjectionMethod {
  enum class Kind { Extrapolation, RuleCompletion };
  Kind kind = Kind::Extrapolation;
  std::size_t run_length = 3;  // RuleCompletion only

  static ProjectionMethod extrapolation() { return {Kind::Extrapolation, 0}; }
  static ProjectionMethod rule_completion(std::size_t k) { return {Kind::RuleCompletion, k}; }
  /// "extrapolation" or "rule_completion:<k>".
  static std::optional<ProjectionMethod> parse(std::string_view text);
  std::string name() const;

  bool operator==(const ProjectionMethod&) const = default;
};

struct Projection {
  ProjectionMethod method;
  std::optional<std::size_t> additional_interviews;  // absent when no line fit exists
};

struct ScenarioRow {
  std::vector<std::size_t> pattern;
  double km_final = 1.0;
  std::optional<double> ci_low;
  std::optional<double> ci_high;
  std::vector<Projection> projections;
};

/// Evaluates a 0/1 pattern: final KM value and CI, plus additional
/// interviews per method. Extrapolation: max(0, ceil(upper-CI zero) - J).
/// Rule completion(k): 0 when S(J) = 0 or the pattern already ends in >= k
/// zeros, else k minus the trailing zero run.
ScenarioRow scenario_eval(std::span<const std::size_t> pattern, const KmOptions& options,
                          std::span<const ProjectionMethod> methods);

struct Preset {
  std::string methodology;
  std::size_t min_interviews = 0;
  std::optional<std::size_t> max_interviews;
};

/// Published deterministic interview-count recommendations.
std::vector<Preset> presets();

}  // namespace saturation
