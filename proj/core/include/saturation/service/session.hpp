#pragma once

// Event-sourced interview sessions. A session is its append-only event log;
// everything served (matrix, KM curve, CRC series, rule statuses) is
// recomputed from the log by the core modules.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "saturation/dataset.hpp"

namespace saturation::service {

/// Prefix reserved for code ids generated by counts-only entries.
inline constexpr std::string_view kAutoCodePrefix = "~auto:";

struct InterviewEntry {
  std::string interview_id;
  std::vector<std::string> codes;  // generated ids when counts_only
  bool counts_only = false;
};

struct SessionEvent {
  enum class Type { Append, Undo };
  Type type = Type::Append;
  InterviewEntry entry;  // Append only
};

struct SessionHeader {
  std::string id;
  std::string name;
  double alpha = 0.05;
  std::string created;  // ISO-8601 UTC
};

/// The persisted form: header line then one JSON object per event.
nlohmann::json header_to_json(const SessionHeader& header);
SessionHeader header_from_json(const nlohmann::json& j);
nlohmann::json event_to_json(const SessionEvent& event);
SessionEvent event_from_json(const nlohmann::json& j);

/// Live interviews after applying every append and undo in order.
std::vector<InterviewEntry> replay(const std::vector<SessionEvent>& events);

/// Generated code ids for a counts-only interview; never collide with
/// user-entered ids, which may not use kAutoCodePrefix.
std::vector<std::string> auto_codes(const std::string& interview_id, std::size_t count);

ElicitationMatrix to_matrix(const std::vector<InterviewEntry>& interviews);

/// Full derived state as served by GET /api/sessions/{id}.
nlohmann::json session_state(const SessionHeader& header,
                             const std::vector<InterviewEntry>& interviews);

/// Hypothetical continuation: the realized new-code pattern (as 0/1)
/// followed by `pattern`. Includes the projected curve.
nlohmann::json whatif_projection(const SessionHeader& header,
                                 const std::vector<InterviewEntry>& interviews,
                                 const std::vector<std::size_t>& pattern, std::size_t rule_k);

}  // namespace saturation::service
