#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "saturation/service/session.hpp"

namespace saturation::service {

/// An API-level failure carrying the HTTP status to report.
class ApiError : public std::runtime_error {
 public:
  ApiError(int status, const std::string& message) : std::runtime_error(message), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

/// Sessions persisted as one JSON-lines file each under a data directory.
/// Mutations on a session are serialized by a per-session lock and written
/// to disk before the in-memory log changes; reads share the lock.
class SessionStore {
 public:
  /// Loads every *.jsonl session found in `data_dir` (created if missing).
  explicit SessionStore(std::filesystem::path data_dir);

  std::string create(const std::string& name, double alpha);
  nlohmann::json state(const std::string& id) const;

  /// Appends an interview with explicit code ids (possibly none).
  nlohmann::json append(const std::string& id, const std::string& interview_id,
                        const std::vector<std::string>& codes);
  /// Appends an interview recorded only as a count of new codes.
  nlohmann::json append_count(const std::string& id, const std::string& interview_id,
                              std::size_t new_code_count);
  nlohmann::json undo(const std::string& id);
  nlohmann::json whatif(const std::string& id, const std::vector<std::size_t>& pattern,
                        std::size_t rule_k = 3) const;

  std::string export_csv(const std::string& id) const;

  std::filesystem::path log_path(const std::string& id) const;
  std::vector<std::string> ids() const;

 private:
  struct Session {
    SessionHeader header;
    std::vector<SessionEvent> events;
    std::vector<InterviewEntry> live;
    mutable std::shared_mutex mutex;
  };

  std::shared_ptr<Session> find(const std::string& id) const;
  nlohmann::json append_entry(const std::string& id, InterviewEntry entry);
  void persist(const std::string& id, const nlohmann::json& record) const;

  std::filesystem::path data_dir_;
  mutable std::shared_mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

}  // namespace saturation::service
