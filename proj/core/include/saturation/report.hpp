#pragma once

// Renderers for every result type. Machine formats (CSV, JSON) carry full
// round-trip precision; the text renderers round to 4 significant digits.
// Absent values are written as NA in CSV/text and null in JSON.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "saturation/crc.hpp"
#include "saturation/dataset.hpp"
#include "saturation/planner.hpp"
#include "saturation/survival.hpp"

namespace saturation::report {

/// Shortest decimal that round-trips to the same double.
std::string full_precision(double value);
/// Four significant digits.
std::string display(double value);
std::string full_precision(const std::optional<double>& value);
std::string display(const std::optional<double>& value);

nlohmann::json to_json(const InterviewSequence& sequence);
nlohmann::json to_json(const KmCurve& curve);
nlohmann::json to_json(const SaturationSummary& summary);
nlohmann::json to_json(const CrcEstimate& estimate);
nlohmann::json to_json(std::span<const CrcEstimate> series);
nlohmann::json to_json(const DescriptiveStats& stats, const ElicitationMatrix& matrix);
nlohmann::json to_json(const StopDecision& decision);
nlohmann::json to_json(const Type1Report& report);
nlohmann::json to_json(const ScenarioRow& row);
nlohmann::json to_json(std::span<const Preset> presets);

// CSV layouts (header row first):
//   sequence:  seq,new_codes
//   curve:     seq,n_at_risk,event,S,V,ci_low,ci_high
//   crc:       seq,M,C,R,D,lp,chapman,good_turing,remaining_lp,
//              remaining_chapman,remaining_good_turing
//   describe:  section,item,value
//   scenarios: pattern,km_final,ci_low,ci_high,additional_<method>...
//   wide:      interview_id,seq,<codes...>
std::string sequence_csv(const InterviewSequence& sequence);
std::string curve_csv(const KmCurve& curve);
std::string crc_csv(std::span<const CrcEstimate> series);
std::string describe_csv(const DescriptiveStats& stats, const ElicitationMatrix& matrix);
std::string scenarios_csv(std::span<const ScenarioRow> rows,
                          std::span<const ProjectionMethod> methods);
std::string wide_csv(const ElicitationMatrix& matrix);

std::string curve_text(const KmCurve& curve, const SaturationSummary& summary);
std::string summary_text(const SaturationSummary& summary);
std::string crc_text(std::span<const CrcEstimate> series);
std::string describe_text(const DescriptiveStats& stats, const ElicitationMatrix& matrix);
std::string scenarios_text(std::span<const ScenarioRow> rows,
                           std::span<const ProjectionMethod> methods);

/// Pattern as printed in scenario reports, e.g. "(1,0,1)".
std::string pattern_string(std::span<const std::size_t> pattern);

}  // namespace saturation::report
