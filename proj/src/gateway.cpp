#include "satbot/gateway.hpp"

#include <array>
#include <fstream>

#include "satbot/error.hpp"

namespace satbot {

std::string_view to_string(Purpose p) noexcept {
    switch (p) {
        case Purpose::StateAgent: return "StateAgent";
        case Purpose::Judge: return "Judge";
        case Purpose::PolarityDecider: return "PolarityDecider";
        case Purpose::Summarizer: return "Summarizer";
        case Purpose::Selector: return "Selector";
    }
    return "?";
}

Purpose parse_purpose(std::string_view s) {
    for (Purpose p : {Purpose::StateAgent, Purpose::Judge, Purpose::PolarityDecider, Purpose::Summarizer,
                      Purpose::Selector}) {
        if (to_string(p) == s) return p;
    }
    throw Error(ErrorCode::InvalidInput, "unknown purpose '" + std::string(s) + "'");
}

std::string_view to_string(ChatRole r) noexcept {
    switch (r) {
        case ChatRole::System: return "system";
        case ChatRole::User: return "user";
        case ChatRole::Assistant: return "assistant";
    }
    return "?";
}

// ScriptedBackend

std::unique_ptr<ScriptedBackend> ScriptedBackend::from_json(const nlohmann::json& script) {
    Exhaustion policy = Exhaustion::Error;
    const std::string exhaustion = script.value("exhaustion", "error");
    if (exhaustion == "repeat") {
        policy = Exhaustion::Repeat;
    } else if (exhaustion != "error") {
        throw Error(ErrorCode::ConfigInvalid, "script exhaustion must be 'repeat' or 'error'");
    }
    auto backend = std::make_unique<ScriptedBackend>(policy);
    for (const auto& [key, replies] : script.at("responses").items()) {
        for (const auto& r : replies) backend->push(key, r.get<std::string>());
    }
    return backend;
}

std::unique_ptr<ScriptedBackend> ScriptedBackend::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ConfigInvalid, "cannot open script " + path.string());
    return from_json(nlohmann::json::parse(in));
}

ScriptedBackend& ScriptedBackend::push(const std::string& key, std::string reply) {
    std::lock_guard lock(mu_);
    queues_[key].pending.push_back(std::move(reply));
    return *this;
}

ScriptedBackend& ScriptedBackend::push(Purpose purpose, std::string reply) {
    return push(std::string(to_string(purpose)), std::move(reply));
}

ChatResponse ScriptedBackend::complete(const ChatRequest& req) {
    std::string reply;
    {
        std::lock_guard lock(mu_);
        const std::string purpose(to_string(req.purpose));
        const std::array<std::string, 3> keys = {purpose + "/" + req.context_key, purpose, "*"};

        // The most specific key with something to say answers: a pending
        // reply, or under Repeat the last reply it gave.
        bool found = false;
        for (const auto& k : keys) {
            auto it = queues_.find(k);
            if (it == queues_.end()) continue;
            Queue& q = it->second;
            if (!q.pending.empty()) {
                reply = std::move(q.pending.front());
                q.pending.pop_front();
                q.last = reply;
                found = true;
                break;
            }
            if (policy_ == Exhaustion::Repeat && q.last) {
                reply = *q.last;
                found = true;
                break;
            }
        }
        if (!found) {
            throw Error(ErrorCode::ScriptExhausted,
                        "no scripted reply for " + purpose + (req.context_key.empty() ? "" : "/" + req.context_key));
        }
    }
    if (reply == "!timeout") throw Error(ErrorCode::GatewayTimeout, "scripted timeout");
    if (reply == "!rejected") throw Error(ErrorCode::GatewayRejected, "scripted rejection");
    return {std::move(reply), std::chrono::microseconds{0}, id()};
}

// Gateway

Gateway::Gateway(std::shared_ptr<LlmBackend> backend, std::shared_ptr<const Clock> clock, bool logging)
    : backend_(std::move(backend)), clock_(std::move(clock)), logging_(logging) {
    if (!backend_) throw Error(ErrorCode::ConfigInvalid, "gateway needs a backend");
    if (!clock_) clock_ = std::make_shared<SystemClock>();
}

ChatResponse Gateway::complete(const ChatRequest& req) {
    if (req.system_prompt.empty()) {
        throw Error(ErrorCode::PreconditionViolated, "chat request has an empty system prompt");
    }
    CallRecord rec;
    rec.at = clock_->now();
    rec.request = req;
    const auto started = std::chrono::steady_clock::now();
    try {
        rec.response = backend_->complete(req);
        rec.response.latency =
            std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - started);
    } catch (const std::exception& e) {
        rec.error = e.what();
        rec.response.backend_id = backend_->id();
        if (logging_) {
            std::lock_guard lock(mu_);
            rec.sequence = next_sequence_++;
            log_.push_back(std::move(rec));
        }
        throw;
    }
    ChatResponse out = rec.response;
    if (logging_) {
        std::lock_guard lock(mu_);
        rec.sequence = next_sequence_++;
        log_.push_back(std::move(rec));
    }
    return out;
}

std::vector<CallRecord> Gateway::call_log(Timestamp since) const {
    std::lock_guard lock(mu_);
    std::vector<CallRecord> out;
    for (const auto& r : log_) {
        if (r.at >= since) out.push_back(r);
    }
    return out;
}

std::size_t Gateway::call_count() const {
    std::lock_guard lock(mu_);
    return log_.size();
}

nlohmann::json to_json(const CallRecord& rec, bool include_timing) {
    nlohmann::json messages = nlohmann::json::array();
    for (const auto& m : rec.request.messages) {
        messages.push_back({{"role", to_string(m.role)}, {"text", m.text}});
    }
    nlohmann::json j = {
        {"sequence", rec.sequence},
        {"purpose", to_string(rec.request.purpose)},
        {"context_key", rec.request.context_key},
        {"deterministic", rec.request.determinism == Determinism::Deterministic},
        {"system_prompt", rec.request.system_prompt},
        {"messages", std::move(messages)},
        {"response", rec.response.text},
        {"backend", rec.response.backend_id},
    };
    if (rec.error) j["error"] = *rec.error;
    if (include_timing) {
        j["at"] = format_timestamp(rec.at);
        j["latency_us"] = rec.response.latency.count();
    }
    return j;
}

std::string Gateway::export_ndjson(bool include_timing) const {
    std::string out;
    for (const auto& r : call_log()) {
        out += to_json(r, include_timing).dump();
        out += '\n';
    }
    return out;
}

}  // namespace satbot
