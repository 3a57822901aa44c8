#include "satbot/remote_backend.hpp"

#include <cstdlib>
#include <thread>

#include "httplib.h"

#include "satbot/error.hpp"

namespace satbot {

namespace {

std::string env_or_empty(const char* name) {
    const char* v = std::getenv(name);
    return v ? std::string(v) : std::string();
}

}  // namespace

RemoteBackendConfig RemoteBackendConfig::from_env() {
    RemoteBackendConfig c;
    c.api_base = env_or_empty("LLM_API_BASE");
    c.api_key = env_or_empty("LLM_API_KEY");
    c.model = env_or_empty("LLM_MODEL");
    if (c.api_base.empty() || c.model.empty()) {
        throw Error(ErrorCode::ConfigInvalid, "LLM_API_BASE and LLM_MODEL must be set for the remote backend");
    }
    return c;
}

RemoteBackend::RemoteBackend(RemoteBackendConfig config) : config_(std::move(config)) {
    const auto scheme_end = config_.api_base.find("://");
    if (scheme_end == std::string::npos) {
        throw Error(ErrorCode::ConfigInvalid, "api_base must include a scheme: " + config_.api_base);
    }
    const auto path_start = config_.api_base.find('/', scheme_end + 3);
    origin_ = config_.api_base.substr(0, path_start);
    path_prefix_ = path_start == std::string::npos ? "" : config_.api_base.substr(path_start);
    while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
}

nlohmann::json RemoteBackend::request_body(const ChatRequest& req) const {
    nlohmann::json messages = nlohmann::json::array();
    messages.push_back({{"role", "system"}, {"content", req.system_prompt}});
    for (const auto& m : req.messages) {
        messages.push_back({{"role", to_string(m.role)}, {"content", m.text}});
    }
    return {
        {"model", config_.model},
        {"temperature", req.determinism == Determinism::Deterministic ? 0.0 : config_.sampled_temperature},
        {"messages", std::move(messages)},
    };
}

ChatResponse RemoteBackend::complete(const ChatRequest& req) {
    httplib::Client client(origin_);
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);
    client.set_write_timeout(config_.timeout);
    if (!config_.api_key.empty()) client.set_bearer_token_auth(config_.api_key);

    const std::string body = request_body(req).dump();
    const std::string path = path_prefix_ + "/chat/completions";
    const auto started = std::chrono::steady_clock::now();

    std::string last_failure;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        if (attempt > 0) std::this_thread::sleep_for(std::chrono::milliseconds(200 * attempt));
        auto res = client.Post(path, body, "application/json");
        if (!res) {
            last_failure = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 429 || res->status >= 500) {
            last_failure = "HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status < 200 || res->status >= 300) {
            throw Error(ErrorCode::GatewayRejected, "HTTP " + std::to_string(res->status) + ": " + res->body);
        }
        nlohmann::json reply;
        try {
            reply = nlohmann::json::parse(res->body);
            ChatResponse out;
            out.text = reply.at("choices").at(0).at("message").at("content").get<std::string>();
            out.latency = std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - started);
            out.backend_id = id();
            return out;
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::GatewayRejected, std::string("unparseable completion: ") + e.what());
        }
    }
    throw Error(ErrorCode::GatewayTimeout,
                "gave up after " + std::to_string(config_.max_retries + 1) + " attempts (" + last_failure + ")");
}

}  // namespace satbot
