#pragma once

#include <string>

#include "saturation/service/store.hpp"

namespace httplib {
class Server;
}

namespace saturation::service {

// Routes (all bodies JSON; errors are {"code": <status>, "message": ...}):
//
//   POST /api/sessions                      {"name", "alpha"?}
//   GET  /api/sessions/{id}
//   POST /api/sessions/{id}/interviews      {"interview_id", "codes": [...]}
//                                         | {"interview_id", "new_code_count": n}
//   POST /api/sessions/{id}/undo
//   POST /api/sessions/{id}/whatif          {"pattern": [0|1...], "rule_k"?}
//   GET  /api/sessions/{id}/export?format=csv|json
void register_routes(httplib::Server& server, SessionStore& store);

/// Blocks serving on host:port until the server is stopped.
bool serve(SessionStore& store, const std::string& host, int port);

}  // namespace saturation::service
