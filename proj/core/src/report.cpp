#include "saturation/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "saturation/csv.hpp"

namespace saturation::report {

using nlohmann::json;

namespace {

json number_or_null(double value) {
  if (!std::isfinite(value)) return nullptr;
  return value;
}

json number_or_null(const std::optional<double>& value) {
  return value ? number_or_null(*value) : json(nullptr);
}

template <typename T>
json value_or_null(const std::optional<T>& value) {
  return value ? json(*value) : json(nullptr);
}

std::string count_or_na(const std::optional<std::size_t>& value) {
  return value ? std::to_string(*value) : "NA";
}

// Left-aligned first column, right-aligned others.
std::string table(const std::vector<std::vector<std::string>>& rows) {
  if (rows.empty()) return {};
  std::vector<std::size_t> width(rows.front().size(), 0);
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size() && c < width.size(); ++c)
      width[c] = std::max(width[c], row[c].size());
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      const auto pad = std::string(width[c] - row[c].size(), ' ');
      if (c > 0) out += "  ";
      out += c == 0 ? row[c] + pad : pad + row[c];
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += '\n';
  }
  return out;
}

}  // namespace

std::string full_precision(double value) {
  if (std::isnan(value)) return "NA";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string display(double value) {
  if (std::isnan(value)) return "NA";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", value);
  return buf;
}

std::string full_precision(const std::optional<double>& value) {
  return value ? full_precision(*value) : "NA";
}

std::string display(const std::optional<double>& value) {
  return value ? display(*value) : "NA";
}

std::string pattern_string(std::span<const std::size_t> pattern) {
  std::string out = "(";
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(pattern[i]);
  }
  return out + ")";
}

json to_json(const InterviewSequence& sequence) {
  return json{{"J", sequence.size()}, {"new_codes", sequence.new_codes()}};
}

json to_json(const KmCurve& curve) {
  json points = json::array();
  for (const auto& p : curve.points) {
    points.push_back({{"seq", p.seq},
                      {"n_at_risk", p.at_risk},
                      {"event", p.event},
                      {"S", p.survival},
                      {"V", number_or_null(p.variance)},
                      {"ci_low", number_or_null(p.ci_low)},
                      {"ci_high", number_or_null(p.ci_high)}});
  }
  return json{{"alpha", curve.alpha},
              {"z", curve.z},
              {"coding", to_string(curve.coding)},
              {"ci_transform", to_string(curve.transform)},
              {"points", std::move(points)}};
}

json to_json(const SaturationSummary& summary) {
  return json{{"km_zero_seq", value_or_null(summary.km_zero_seq)},
              {"km_extrapolated_zero", number_or_null(summary.km_extrapolated_zero)},
              {"upper_ci_extrapolated_zero", number_or_null(summary.upper_ci_extrapolated_zero)}};
}

json to_json(const CrcEstimate& e) {
  return json{{"seq", e.seq},
              {"M", e.marked},
              {"C", e.captured},
              {"R", e.recaptured},
              {"D", e.distinct},
              {"lp", number_or_null(e.lincoln_petersen)},
              {"chapman", number_or_null(e.chapman)},
              {"good_turing", number_or_null(e.good_turing)},
              {"remaining_lp", number_or_null(e.remaining_lincoln_petersen)},
              {"remaining_chapman", number_or_null(e.remaining_chapman)},
              {"remaining_good_turing", number_or_null(e.remaining_good_turing)}};
}

json to_json(std::span<const CrcEstimate> series) {
  json out = json::array();
  for (const auto& e : series) out.push_back(to_json(e));
  return out;
}

json to_json(const DescriptiveStats& stats, const ElicitationMatrix& matrix) {
  auto summary = [](const SampleSummary& s) {
    return json{{"n", s.n}, {"mean", s.mean}, {"median", s.median}, {"sd", number_or_null(s.sd)}};
  };
  json interviews = json::array();
  for (std::size_t r = 0; r < matrix.interview_count(); ++r) {
    interviews.push_back({{"seq", matrix.interviews()[r].seq},
                          {"interview_id", matrix.interviews()[r].id},
                          {"marked", stats.marked_per_interview[r]},
                          {"recaptured", stats.recaptured_per_interview[r]},
                          {"elicited", stats.elicited_per_interview[r]}});
  }
  json codes = json::array();
  for (std::size_t k = 0; k < matrix.code_count(); ++k)
    codes.push_back({{"code_id", matrix.codes()[k]}, {"recaptures", stats.recaptures_per_code[k]}});
  json freq = json::array();
  for (const auto& [count, n] : stats.recapture_frequency)
    freq.push_back({{"recaptures", count}, {"codes", n}});
  return json{{"interviews", std::move(interviews)},
              {"codes", std::move(codes)},
              {"marked_summary", summary(stats.marked)},
              {"recapture_summary", summary(stats.recaptures)},
              {"recapture_frequency", std::move(freq)}};
}

json to_json(const StopDecision& decision) {
  return json{{"stopped", decision.stopped()}, {"stop_seq", value_or_null(decision.stop_seq)}};
}

json to_json(const Type1Report& r) {
  return json{{"rule", r.rule.name()},
              {"stopped", r.decision.stopped()},
              {"stop_seq", value_or_null(r.decision.stop_seq)},
              {"is_type1", r.is_type1},
              {"missed_codes", r.missed_codes},
              {"extra_interviews_needed", r.extra_interviews_needed}};
}

json to_json(const ScenarioRow& row) {
  json additional = json::object();
  for (const auto& p : row.projections)
    additional[p.method.name()] = value_or_null(p.additional_interviews);
  return json{{"pattern", row.pattern},
              {"km_final", row.km_final},
              {"ci_low", number_or_null(row.ci_low)},
              {"ci_high", number_or_null(row.ci_high)},
              {"additional_interviews", std::move(additional)}};
}

json to_json(std::span<const Preset> presets) {
  json out = json::array();
  for (const auto& p : presets)
    out.push_back({{"methodology", p.methodology},
                   {"min_interviews", p.min_interviews},
                   {"max_interviews", value_or_null(p.max_interviews)}});
  return out;
}

std::string sequence_csv(const InterviewSequence& sequence) {
  std::string out = "seq,new_codes\n";
  for (std::size_t r = 0; r < sequence.size(); ++r)
    out += std::to_string(r + 1) + "," + std::to_string(sequence[r]) + "\n";
  return out;
}

std::string curve_csv(const KmCurve& curve) {
  std::string out = "seq,n_at_risk,event,S,V,ci_low,ci_high\n";
  for (const auto& p : curve.points) {
    out += std::to_string(p.seq) + "," + std::to_string(p.at_risk) + "," +
           (p.event ? "1" : "0") + "," + full_precision(p.survival) + "," +
           full_precision(p.variance) + "," + full_precision(p.ci_low) + "," +
           full_precision(p.ci_high) + "\n";
  }
  return out;
}

std::string crc_csv(std::span<const CrcEstimate> series) {
  std::string out =
      "seq,M,C,R,D,lp,chapman,good_turing,remaining_lp,remaining_chapman,remaining_good_turing\n";
  for (const auto& e : series) {
    out += std::to_string(e.seq) + "," + std::to_string(e.marked) + "," +
           std::to_string(e.captured) + "," + std::to_string(e.recaptured) + "," +
           std::to_string(e.distinct) + "," + full_precision(e.lincoln_petersen) + "," +
           full_precision(e.chapman) + "," + full_precision(e.good_turing) + "," +
           full_precision(e.remaining_lincoln_petersen) + "," +
           full_precision(e.remaining_chapman) + "," +
           full_precision(e.remaining_good_turing) + "\n";
  }
  return out;
}

std::string describe_csv(const DescriptiveStats& stats, const ElicitationMatrix& matrix) {
  std::string out = "section,item,value\n";
  auto row = [&out](std::string_view section, const std::string& item, const std::string& value) {
    out += std::string(section) + "," + csv::escape(item) + "," + value + "\n";
  };
  for (std::size_t r = 0; r < matrix.interview_count(); ++r)
    row("marked", std::to_string(r + 1), std::to_string(stats.marked_per_interview[r]));
  for (std::size_t r = 0; r < matrix.interview_count(); ++r)
    row("recaptured", std::to_string(r + 1), std::to_string(stats.recaptured_per_interview[r]));
  for (std::size_t r = 0; r < matrix.interview_count(); ++r)
    row("elicited", std::to_string(r + 1), std::to_string(stats.elicited_per_interview[r]));
  for (std::size_t k = 0; k < matrix.code_count(); ++k)
    row("code_recaptures", matrix.codes()[k], std::to_string(stats.recaptures_per_code[k]));
  auto summary = [&](std::string_view section, const SampleSummary& s) {
    row(section, "n", std::to_string(s.n));
    row(section, "mean", full_precision(s.mean));
    row(section, "median", full_precision(s.median));
    row(section, "sd", full_precision(s.sd));
  };
  summary("marked_summary", stats.marked);
  summary("recapture_summary", stats.recaptures);
  for (const auto& [count, n] : stats.recapture_frequency)
    row("recapture_frequency", std::to_string(count), std::to_string(n));
  return out;
}

std::string scenarios_csv(std::span<const ScenarioRow> rows,
                          std::span<const ProjectionMethod> methods) {
  std::string out = "pattern,km_final,ci_low,ci_high";
  for (const auto& m : methods) out += ",additional_" + m.name();
  out += "\n";
  for (const auto& r : rows) {
    out += csv::escape(pattern_string(r.pattern)) + "," + full_precision(r.km_final) + "," +
           full_precision(r.ci_low) + "," + full_precision(r.ci_high);
    for (const auto& p : r.projections) out += "," + count_or_na(p.additional_interviews);
    out += "\n";
  }
  return out;
}

std::string wide_csv(const ElicitationMatrix& matrix) {
  std::string out = "interview_id,seq";
  for (const auto& code : matrix.codes()) out += "," + csv::escape(code);
  out += "\n";
  for (std::size_t r = 0; r < matrix.interview_count(); ++r) {
    out += csv::escape(matrix.interviews()[r].id) + "," + std::to_string(matrix.interviews()[r].seq);
    for (std::size_t k = 0; k < matrix.code_count(); ++k) out += matrix.elicited(r, k) ? ",1" : ",0";
    out += "\n";
  }
  return out;
}

std::string summary_text(const SaturationSummary& summary) {
  std::string out;
  out += "KM reaches zero at interview: " + count_or_na(summary.km_zero_seq) + "\n";
  out += "KM line extrapolated to zero: " + display(summary.km_extrapolated_zero) + "\n";
  out += "Upper CI line extrapolated to zero: " + display(summary.upper_ci_extrapolated_zero) + "\n";
  return out;
}

std::string curve_text(const KmCurve& curve, const SaturationSummary& summary) {
  std::vector<std::vector<std::string>> rows{
      {"seq", "at_risk", "event", "S", "ci_low", "ci_high"}};
  for (const auto& p : curve.points)
    rows.push_back({std::to_string(p.seq), std::to_string(p.at_risk), p.event ? "1" : "0",
                    display(p.survival), display(p.ci_low), display(p.ci_high)});
  return table(rows) + "\n" + summary_text(summary);
}

std::string crc_text(std::span<const CrcEstimate> series) {
  std::vector<std::vector<std::string>> rows{
      {"seq", "M", "C", "R", "D", "LP", "Chapman", "GT", "rem_LP", "rem_Chapman", "rem_GT"}};
  for (const auto& e : series)
    rows.push_back({std::to_string(e.seq), std::to_string(e.marked), std::to_string(e.captured),
                    std::to_string(e.recaptured), std::to_string(e.distinct),
                    display(e.lincoln_petersen), display(e.chapman), display(e.good_turing),
                    display(e.remaining_lincoln_petersen), display(e.remaining_chapman),
                    display(e.remaining_good_turing)});
  return table(rows);
}

std::string describe_text(const DescriptiveStats& stats, const ElicitationMatrix& matrix) {
  std::vector<std::vector<std::string>> per_interview{
      {"interview", "seq", "marked", "recaptured", "elicited"}};
  for (std::size_t r = 0; r < matrix.interview_count(); ++r)
    per_interview.push_back({matrix.interviews()[r].id, std::to_string(r + 1),
                             std::to_string(stats.marked_per_interview[r]),
                             std::to_string(stats.recaptured_per_interview[r]),
                             std::to_string(stats.elicited_per_interview[r])});
  std::vector<std::vector<std::string>> summary{{"", "N", "mean", "median", "SD"}};
  auto add = [&summary](const std::string& label, const SampleSummary& s) {
    summary.push_back({label, std::to_string(s.n), display(s.mean), display(s.median), display(s.sd)});
  };
  add("marked per interview", stats.marked);
  add("recaptures per code", stats.recaptures);
  std::vector<std::vector<std::string>> freq{{"recaptures", "codes"}};
  for (const auto& [count, n] : stats.recapture_frequency)
    freq.push_back({std::to_string(count), std::to_string(n)});
  return table(per_interview) + "\n" + table(summary) + "\n" + table(freq);
}

std::string scenarios_text(std::span<const ScenarioRow> rows,
                           std::span<const ProjectionMethod> methods) {
  std::vector<std::vector<std::string>> out{{"pattern", "KM (CI)"}};
  for (const auto& m : methods) out.front().push_back("additional " + m.name());
  for (const auto& r : rows) {
    std::string km = display(r.km_final) + " (" + display(r.ci_low) + ", " + display(r.ci_high) + ")";
    out.push_back({pattern_string(r.pattern), km});
    for (const auto& p : r.projections) out.back().push_back(count_or_na(p.additional_interviews));
  }
  return table(out);
}

}  // namespace saturation::report
