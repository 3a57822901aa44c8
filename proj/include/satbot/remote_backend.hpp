#pragma once

#include <chrono>
#include <string>

#include "satbot/gateway.hpp"

namespace satbot {

struct RemoteBackendConfig {
    std::string api_base;  // e.g. https://api.example.com/v1
    std::string api_key;
    std::string model;
    std::chrono::seconds timeout{60};
    int max_retries = 2;
    double sampled_temperature = 0.7;

    /// Reads LLM_API_BASE, LLM_API_KEY and LLM_MODEL. Throws ConfigInvalid
    /// when base or model is missing.
    static RemoteBackendConfig from_env();
};

/// OpenAI-compatible chat-completions client. Deterministic requests are
/// sent with temperature 0. Transient failures (connection errors, 429,
/// 5xx) are retried up to max_retries times and then surface as
/// GatewayTimeout; other non-2xx replies raise GatewayRejected.
class RemoteBackend final : public LlmBackend {
public:
    explicit RemoteBackend(RemoteBackendConfig config);

    ChatResponse complete(const ChatRequest& req) override;
    std::string id() const override { return "remote:" + config_.model; }

    /// Request body as sent on the wire.
    nlohmann::json request_body(const ChatRequest& req) const;

private:
    RemoteBackendConfig config_;
    std::string origin_;       // scheme://host[:port]
    std::string path_prefix_;  // /v1
};

}  // namespace satbot
