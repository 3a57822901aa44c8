#include "satbot/http_api.hpp"

#include <iostream>

#include "satbot/error.hpp"

namespace satbot {

int http_status(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::Unauthorized: return 401;
        case ErrorCode::UnknownParticipant: return 404;
        case ErrorCode::Busy:
        case ErrorCode::TerminalState:
        case ErrorCode::AlreadyAssigned: return 409;
        case ErrorCode::InvalidInput:
        case ErrorCode::InvalidDate: return 400;
        case ErrorCode::GatewayTimeout:
        case ErrorCode::GatewayRejected:
        case ErrorCode::ScriptExhausted: return 503;
        default: return 500;
    }
}

namespace {

void send_json(httplib::Response& res, int status, const nlohmann::json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

// Messages that could carry internal details (state names, purposes) are
// replaced by fixed text.
void send_error(httplib::Response& res, const Error& e) {
    const int status = http_status(e.code());
    std::string message = e.what();
    if (status == 503) message = "the assistant is temporarily unavailable; please retry";
    if (status == 500) message = "internal error";
    send_json(res, status, {{"error", std::string(to_string(e.code()))}, {"message", message}});
}

std::string bearer(const httplib::Request& req) {
    const auto h = req.get_header_value("Authorization");
    constexpr std::string_view prefix = "Bearer ";
    if (h.size() <= prefix.size() || h.compare(0, prefix.size(), prefix) != 0) return {};
    return h.substr(prefix.size());
}

nlohmann::json public_message(const Message& m) {
    return {{"role", std::string(to_string(m.role))}, {"text", m.text}, {"timestamp", format_timestamp(m.timestamp)}};
}

// Runs `fn` for an authenticated participant route.
template <typename Fn>
void participant_route(TrialService& service, const httplib::Request& req, httplib::Response& res, Fn&& fn) {
    try {
        const std::string id = req.matches[1];
        if (!service.authenticate(id, bearer(req))) {
            if (!service.has_participant(id)) throw Error(ErrorCode::UnknownParticipant, "unknown participant");
            throw Error(ErrorCode::Unauthorized, "missing or invalid token");
        }
        fn(id);
    } catch (const Error& e) {
        send_error(res, e);
    } catch (const nlohmann::json::exception&) {
        send_json(res, 400, {{"error", "InvalidInput"}, {"message", "malformed JSON body"}});
    } catch (const std::exception&) {
        send_json(res, 500, {{"error", "Internal"}, {"message", "internal error"}});
    }
}

}  // namespace

void install_routes(httplib::Server& server, TrialService& service, bool log_debug) {
    server.Post("/participants", [&service](const httplib::Request&, httplib::Response& res) {
        try {
            const auto reg = service.register_participant();
            send_json(res, 201,
                      {{"participant_id", reg.participant_id}, {"token", reg.token}, {"session_day", reg.session_day}});
        } catch (const Error& e) {
            send_error(res, e);
        }
    });

    server.Post(R"(/participants/([^/]+)/messages)",
                [&service, log_debug](const httplib::Request& req, httplib::Response& res) {
                    participant_route(service, req, res, [&](const std::string& id) {
                        const auto body = nlohmann::json::parse(req.body);
                        if (!body.is_object() || !body.contains("text") || !body.at("text").is_string()) {
                            throw Error(ErrorCode::InvalidInput, "body must be {\"text\": string}");
                        }
                        const auto turn = service.handle_turn(id, body.at("text").get<std::string>());
                        if (log_debug && turn.debug) std::cerr << "turn " << id << ' ' << turn.debug->dump() << '\n';
                        nlohmann::json msgs = nlohmann::json::array();
                        for (const auto& m : turn.agent_messages) {
                            msgs.push_back({{"text", m.text}, {"timestamp", format_timestamp(m.timestamp)}});
                        }
                        send_json(res, 200, {{"agent_messages", msgs}, {"session_day", turn.session_day}});
                    });
                });

    server.Post(R"(/participants/([^/]+)/restart)", [&service](const httplib::Request& req, httplib::Response& res) {
        participant_route(service, req, res, [&](const std::string& id) {
            const auto s = service.restart_conversation(id);
            send_json(res, 200, {{"session_day", s.protocol_day}, {"messages", nlohmann::json::array()}});
        });
    });

    server.Get(R"(/participants/([^/]+)/history)", [&service](const httplib::Request& req, httplib::Response& res) {
        participant_route(service, req, res, [&](const std::string& id) {
            const auto s = service.current_session(id);
            nlohmann::json msgs = nlohmann::json::array();
            for (const auto& m : s.transcript) msgs.push_back(public_message(m));
            send_json(res, 200, {{"session_day", s.protocol_day}, {"messages", msgs}});
        });
    });

    server.Get("/admin/export", [&service](const httplib::Request& req, httplib::Response& res) {
        try {
            ExportFilter filter;
            if (req.has_param("variant") && !req.get_param_value("variant").empty()) {
                filter.variant = parse_variant(req.get_param_value("variant"));
            }
            if (req.has_param("from") && !req.get_param_value("from").empty()) {
                filter.from = parse_date(req.get_param_value("from"));
            }
            if (req.has_param("to") && !req.get_param_value("to").empty()) {
                filter.to = parse_date(req.get_param_value("to"));
            }
            const auto rows = service.export_logs(filter, bearer(req));
            res.status = 200;
            res.set_content(to_ndjson(rows), "application/x-ndjson");
        } catch (const Error& e) {
            send_error(res, e);
        }
    });
}

}  // namespace satbot
