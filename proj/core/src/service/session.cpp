#include "saturation/service/session.hpp"

#include <stdexcept>

#include "saturation/crc.hpp"
#include "saturation/planner.hpp"
#include "saturation/report.hpp"
#include "saturation/survival.hpp"

namespace saturation::service {

using nlohmann::json;

json header_to_json(const SessionHeader& h) {
  return json{{"type", "create"}, {"id", h.id}, {"name", h.name}, {"alpha", h.alpha}, {"created", h.created}};
}

SessionHeader header_from_json(const json& j) {
  if (j.at("type") != "create") throw std::runtime_error("session log must start with a create record");
  return {j.at("id").get<std::string>(), j.at("name").get<std::string>(), j.at("alpha").get<double>(),
          j.at("created").get<std::string>()};
}

json event_to_json(const SessionEvent& e) {
  if (e.type == SessionEvent::Type::Undo) return json{{"type", "undo"}};
  json j{{"type", "append"}, {"interview_id", e.entry.interview_id}};
  if (e.entry.counts_only)
    j["new_code_count"] = e.entry.codes.size();
  else
    j["codes"] = e.entry.codes;
  return j;
}

SessionEvent event_from_json(const json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "undo") return {SessionEvent::Type::Undo, {}};
  if (type != "append") throw std::runtime_error("unknown session event '" + type + "'");
  SessionEvent e;
  e.entry.interview_id = j.at("interview_id").get<std::string>();
  if (j.contains("new_code_count")) {
    e.entry.counts_only = true;
    e.entry.codes = auto_codes(e.entry.interview_id, j.at("new_code_count").get<std::size_t>());
  } else {
    e.entry.codes = j.at("codes").get<std::vector<std::string>>();
  }
  return e;
}

std::vector<InterviewEntry> replay(const std::vector<SessionEvent>& events) {
  std::vector<InterviewEntry> live;
  for (const auto& e : events) {
    if (e.type == SessionEvent::Type::Append)
      live.push_back(e.entry);
    else if (!live.empty())
      live.pop_back();
  }
  return live;
}

std::vector<std::string> auto_codes(const std::string& interview_id, std::size_t count) {
  std::vector<std::string> codes;
  codes.reserve(count);
  for (std::size_t i = 1; i <= count; ++i)
    codes.push_back(std::string(kAutoCodePrefix) + interview_id + ":" + std::to_string(i));
  return codes;
}

ElicitationMatrix to_matrix(const std::vector<InterviewEntry>& interviews) {
  std::vector<InterviewCodes> rows;
  rows.reserve(interviews.size());
  for (const auto& iv : interviews) rows.push_back({iv.interview_id, iv.codes});
  return ElicitationMatrix::from_interviews(rows);
}

namespace {

json rule_statuses(const InterviewSequence& sequence) {
  json rules = json::object();
  for (const auto& rule : {StoppingRule::first_zero(), StoppingRule::consecutive_zero(3),
                           StoppingRule::ten_plus_three()})
    rules[rule.name()] = report::to_json(apply_rule(sequence, rule));
  return rules;
}

json empty_rules() {
  json rules = json::object();
  for (const auto& rule : {StoppingRule::first_zero(), StoppingRule::consecutive_zero(3),
                           StoppingRule::ten_plus_three()})
    rules[rule.name()] = report::to_json(StopDecision{});
  return rules;
}

}  // namespace

json session_state(const SessionHeader& header, const std::vector<InterviewEntry>& interviews) {
  json state{{"id", header.id},
             {"name", header.name},
             {"alpha", header.alpha},
             {"created", header.created},
             {"J", interviews.size()}};

  bool degraded = false;
  json entries = json::array();
  for (const auto& iv : interviews) {
    degraded = degraded || iv.counts_only;
    json e{{"interview_id", iv.interview_id}, {"counts_only", iv.counts_only}};
    if (iv.counts_only)
      e["new_code_count"] = iv.codes.size();
    else
      e["codes"] = iv.codes;
    entries.push_back(std::move(e));
  }
  state["interviews"] = std::move(entries);
  state["crc_degraded"] = degraded;

  if (interviews.empty()) {
    state["N_J"] = nullptr;
    state["sequence"] = json::array();
    state["current"] = {{"S", 1.0}, {"ci_low", nullptr}, {"ci_high", nullptr}};
    state["km"] = nullptr;
    state["summary"] = report::to_json(SaturationSummary{});
    state["crc"] = json::array();
    state["rules"] = empty_rules();
    return state;
  }

  const auto matrix = to_matrix(interviews);
  const auto sequence = derive_sequence(matrix);
  const auto curve = km_estimate(sequence, KmOptions{header.alpha});
  const auto series = per_interview_series(matrix);
  const auto km = report::to_json(curve);
  const auto& last = km["points"].back();

  state["N_J"] = sequence.new_codes().back();
  state["sequence"] = sequence.new_codes();
  state["current"] = {{"S", last["S"]}, {"ci_low", last["ci_low"]}, {"ci_high", last["ci_high"]}};
  state["km"] = km;
  state["summary"] = report::to_json(saturation_summary(curve));
  state["crc"] = report::to_json(series);
  state["rules"] = rule_statuses(sequence);
  return state;
}

json whatif_projection(const SessionHeader& header, const std::vector<InterviewEntry>& interviews,
                       const std::vector<std::size_t>& pattern, std::size_t rule_k) {
  std::vector<std::size_t> full;
  if (!interviews.empty()) {
    for (auto n : derive_sequence(to_matrix(interviews)).new_codes()) full.push_back(n >= 1 ? 1 : 0);
  }
  for (auto v : pattern) {
    if (v > 1) throw std::invalid_argument("pattern entries must be 0 or 1");
    full.push_back(v);
  }
  if (full.empty()) throw std::invalid_argument("no realized or hypothetical interviews");

  const std::vector<ProjectionMethod> methods{ProjectionMethod::extrapolation(),
                                              ProjectionMethod::rule_completion(rule_k)};
  const KmOptions options{header.alpha};
  const auto row = scenario_eval(full, options, methods);
  const auto curve = km_estimate(InterviewSequence(full), options);

  json out = report::to_json(row);
  out["realized_J"] = interviews.size();
  out["hypothetical"] = pattern;
  out["km"] = report::to_json(curve);
  out["summary"] = report::to_json(saturation_summary(curve));
  return out;
}

}  // namespace saturation::service
