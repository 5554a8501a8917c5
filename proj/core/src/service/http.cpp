#include "saturation/service/http.hpp"

#include <httplib.h>

namespace saturation::service {

using nlohmann::json;

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, json{{"code", status}, {"message", message}});
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  auto body = json::parse(req.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) throw ApiError(400, "request body must be a JSON object");
  return body;
}

// Runs a handler, mapping exceptions onto JSON error responses.
template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const ApiError& e) {
      send_error(res, e.status(), e.what());
    } catch (const json::exception& e) {
      send_error(res, 422, std::string("invalid field: ") + e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, e.what());
    }
  };
}

std::vector<std::size_t> read_pattern(const json& body) {
  std::vector<std::size_t> pattern;
  if (!body.contains("pattern")) return pattern;
  const auto& p = body.at("pattern");
  if (!p.is_array()) throw ApiError(422, "pattern must be an array");
  for (const auto& v : p) {
    if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<long long>() > 1)
      throw ApiError(422, "pattern entries must be 0 or 1, got " + v.dump());
    pattern.push_back(v.get<std::size_t>());
  }
  return pattern;
}

}  // namespace

void register_routes(httplib::Server& server, SessionStore& store) {
  server.Post("/api/sessions", guarded([&store](const httplib::Request& req, httplib::Response& res) {
    auto body = parse_body(req);
    auto name = body.value("name", std::string{});
    const auto& alpha = body.contains("alpha") ? body.at("alpha") : json(0.05);
    if (!alpha.is_number()) throw ApiError(422, "alpha must be a number");
    auto id = store.create(name, alpha.get<double>());
    send_json(res, 201, store.state(id));
  }));

  server.Get(R"(/api/sessions/([^/]+))", guarded([&store](const httplib::Request& req, httplib::Response& res) {
    send_json(res, 200, store.state(req.matches[1]));
  }));

  server.Post(R"(/api/sessions/([^/]+)/interviews)",
              guarded([&store](const httplib::Request& req, httplib::Response& res) {
                auto body = parse_body(req);
                std::string id = req.matches[1];
                if (!body.contains("interview_id") || !body.at("interview_id").is_string())
                  throw ApiError(422, "interview_id is required");
                auto interview_id = body.at("interview_id").get<std::string>();
                const bool has_codes = body.contains("codes");
                const bool has_count = body.contains("new_code_count");
                if (has_codes == has_count)
                  throw ApiError(422, "provide exactly one of codes or new_code_count");
                if (has_count) {
                  const auto& n = body.at("new_code_count");
                  if (!n.is_number_integer() || n.get<long long>() < 0)
                    throw ApiError(422, "new_code_count must be a non-negative integer");
                  send_json(res, 200, store.append_count(id, interview_id, n.get<std::size_t>()));
                } else {
                  const auto& codes = body.at("codes");
                  if (!codes.is_array()) throw ApiError(422, "codes must be an array of strings");
                  std::vector<std::string> list;
                  for (const auto& c : codes) {
                    if (!c.is_string()) throw ApiError(422, "codes must be an array of strings");
                    list.push_back(c.get<std::string>());
                  }
                  send_json(res, 200, store.append(id, interview_id, list));
                }
              }));

  server.Post(R"(/api/sessions/([^/]+)/undo)", guarded([&store](const httplib::Request& req, httplib::Response& res) {
    send_json(res, 200, store.undo(req.matches[1]));
  }));

  server.Post(R"(/api/sessions/([^/]+)/whatif)",
              guarded([&store](const httplib::Request& req, httplib::Response& res) {
                auto body = parse_body(req);
                auto pattern = read_pattern(body);
                std::size_t rule_k = 3;
                if (body.contains("rule_k")) {
                  const auto& k = body.at("rule_k");
                  if (!k.is_number_integer() || k.get<long long>() < 1)
                    throw ApiError(422, "rule_k must be a positive integer");
                  rule_k = k.get<std::size_t>();
                }
                send_json(res, 200, store.whatif(req.matches[1], pattern, rule_k));
              }));

  server.Get(R"(/api/sessions/([^/]+)/export)", guarded([&store](const httplib::Request& req, httplib::Response& res) {
    auto format = req.has_param("format") ? req.get_param_value("format") : std::string("json");
    if (format == "csv") {
      res.status = 200;
      res.set_content(store.export_csv(req.matches[1]), "text/csv");
    } else if (format == "json") {
      send_json(res, 200, store.state(req.matches[1]));
    } else {
      throw ApiError(422, "format must be csv or json");
    }
  }));

  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) send_error(res, res.status, res.status == 404 ? "not found" : "error");
  });
}

bool serve(SessionStore& store, const std::string& host, int port) {
  httplib::Server server;
  register_routes(server, store);
  return server.listen(host, port);
}

}  // namespace saturation::service
