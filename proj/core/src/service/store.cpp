#include "saturation/service/store.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <mutex>
#include <random>
#include <unordered_set>

#include "saturation/error.hpp"
#include "saturation/report.hpp"

namespace saturation::service {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string now_iso8601() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string random_id() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  static constexpr char hex[] = "0123456789abcdef";
  std::string id;
  auto bits = rng();
  for (int i = 0; i < 16; ++i, bits >>= 4) id.push_back(hex[bits & 0xF]);
  return id;
}

void validate_codes(const std::vector<std::string>& codes) {
  std::unordered_set<std::string> seen;
  for (const auto& code : codes) {
    if (code.empty()) throw ApiError(422, "empty code id");
    if (std::string_view(code).starts_with(kAutoCodePrefix))
      throw ApiError(422, "code ids may not start with '" + std::string(kAutoCodePrefix) + "'");
    if (!seen.insert(code).second) throw ApiError(422, "code '" + code + "' repeated in interview");
  }
}

}  // namespace

SessionStore::SessionStore(fs::path data_dir) : data_dir_(std::move(data_dir)) {
  fs::create_directories(data_dir_);
  for (const auto& file : fs::directory_iterator(data_dir_)) {
    if (file.path().extension() != ".jsonl") continue;
    std::ifstream in(file.path());
    std::string line;
    auto session = std::make_shared<Session>();
    bool have_header = false;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto record = json::parse(line);
      if (!have_header) {
        session->header = header_from_json(record);
        have_header = true;
      } else {
        session->events.push_back(event_from_json(record));
      }
    }
    if (!have_header) continue;
    session->live = replay(session->events);
    sessions_[session->header.id] = std::move(session);
  }
}

fs::path SessionStore::log_path(const std::string& id) const { return data_dir_ / (id + ".jsonl"); }

std::vector<std::string> SessionStore::ids() const {
  std::shared_lock lock(sessions_mutex_);
  std::vector<std::string> out;
  for (const auto& [id, _] : sessions_) out.push_back(id);
  return out;
}

void SessionStore::persist(const std::string& id, const json& record) const {
  std::ofstream out(log_path(id), std::ios::app);
  out << record.dump() << '\n';
  out.flush();
  if (!out) throw ApiError(500, "failed to write session log");
}

std::shared_ptr<SessionStore::Session> SessionStore::find(const std::string& id) const {
  std::shared_lock lock(sessions_mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ApiError(404, "unknown session '" + id + "'");
  return it->second;
}

std::string SessionStore::create(const std::string& name, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ApiError(422, "alpha must lie in (0, 1)");
  auto session = std::make_shared<Session>();
  session->header = {"", name, alpha, now_iso8601()};

  std::unique_lock lock(sessions_mutex_);
  do {
    session->header.id = random_id();
  } while (sessions_.contains(session->header.id) || fs::exists(log_path(session->header.id)));
  persist(session->header.id, header_to_json(session->header));
  sessions_[session->header.id] = session;
  return session->header.id;
}

json SessionStore::state(const std::string& id) const {
  auto session = find(id);
  std::shared_lock lock(session->mutex);
  return session_state(session->header, session->live);
}

json SessionStore::append_entry(const std::string& id, InterviewEntry entry) {
  if (entry.interview_id.empty()) throw ApiError(422, "interview_id is required");
  auto session = find(id);
  std::unique_lock lock(session->mutex);
  for (const auto& iv : session->live)
    if (iv.interview_id == entry.interview_id)
      throw ApiError(409, "interview '" + entry.interview_id + "' already recorded");

  SessionEvent event{SessionEvent::Type::Append, std::move(entry)};
  persist(id, event_to_json(event));
  session->live.push_back(event.entry);
  session->events.push_back(std::move(event));
  return session_state(session->header, session->live);
}

json SessionStore::append(const std::string& id, const std::string& interview_id,
                          const std::vector<std::string>& codes) {
  validate_codes(codes);
  return append_entry(id, {interview_id, codes, false});
}

json SessionStore::append_count(const std::string& id, const std::string& interview_id,
                                std::size_t new_code_count) {
  return append_entry(id, {interview_id, auto_codes(interview_id, new_code_count), true});
}

json SessionStore::undo(const std::string& id) {
  auto session = find(id);
  std::unique_lock lock(session->mutex);
  if (session->live.empty()) throw ApiError(409, "nothing to undo");
  SessionEvent event{SessionEvent::Type::Undo, {}};
  persist(id, event_to_json(event));
  session->events.push_back(std::move(event));
  session->live.pop_back();
  return session_state(session->header, session->live);
}

json SessionStore::whatif(const std::string& id, const std::vector<std::size_t>& pattern,
                          std::size_t rule_k) const {
  if (rule_k == 0) throw ApiError(422, "rule_k must be >= 1");
  for (auto v : pattern)
    if (v > 1) throw ApiError(422, "pattern entries must be 0 or 1");
  auto session = find(id);
  std::shared_lock lock(session->mutex);
  if (session->live.empty() && pattern.empty())
    throw ApiError(422, "empty session and empty pattern");
  return whatif_projection(session->header, session->live, pattern, rule_k);
}

std::string SessionStore::export_csv(const std::string& id) const {
  auto session = find(id);
  std::shared_lock lock(session->mutex);
  return report::wide_csv(to_matrix(session->live));
}

}  // namespace saturation::service
