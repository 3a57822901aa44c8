#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "satbot/timeutil.hpp"

namespace satbot {

enum class Purpose { StateAgent, Judge, PolarityDecider, Summarizer, Selector };
enum class Determinism { Deterministic, Sampled };
enum class ChatRole { System, User, Assistant };

std::string_view to_string(Purpose p) noexcept;
Purpose parse_purpose(std::string_view s);
std::string_view to_string(ChatRole r) noexcept;

struct ChatMessage {
    ChatRole role = ChatRole::User;
    std::string text;
};

struct ChatRequest {
    std::string system_prompt;
    std::vector<ChatMessage> messages;
    Purpose purpose = Purpose::StateAgent;
    Determinism determinism = Determinism::Deterministic;
    /// Free-form routing hint (the FSM state name for judges and agents).
    /// Used by the scripted backend's key lookup and recorded in the log.
    std::string context_key;
};

struct ChatResponse {
    std::string text;
    std::chrono::microseconds latency{0};
    std::string backend_id;
};

class LlmBackend {
public:
    virtual ~LlmBackend() = default;
    virtual ChatResponse complete(const ChatRequest& req) = 0;
    virtual std::string id() const = 0;
};

/// Offline backend replaying canned replies.
///
/// Replies are looked up under "<Purpose>/<context_key>", then "<Purpose>",
/// then the shared "*" queue; the first key holding a pending reply (or,
/// under Repeat, a previous reply) answers. A reply of "!timeout" or "!rejected" raises the
/// matching gateway error instead of answering, which lets tests inject
/// failures at exact points.
class ScriptedBackend final : public LlmBackend {
public:
    enum class Exhaustion { Repeat, Error };

    explicit ScriptedBackend(Exhaustion policy = Exhaustion::Error) : policy_(policy) {}

    /// {"exhaustion": "repeat"|"error", "responses": {"Judge": ["YES"], ...}}
    static std::unique_ptr<ScriptedBackend> from_json(const nlohmann::json& script);
    static std::unique_ptr<ScriptedBackend> load(const std::filesystem::path& path);

    ScriptedBackend& push(const std::string& key, std::string reply);
    ScriptedBackend& push(Purpose purpose, std::string reply);

    ChatResponse complete(const ChatRequest& req) override;
    std::string id() const override { return "scripted"; }

private:
    struct Queue {
        std::deque<std::string> pending;
        std::optional<std::string> last;
    };

    Exhaustion policy_;
    std::mutex mu_;
    std::map<std::string, Queue> queues_;
};

/// Backend computing replies from a callback; handy for adversarial tests.
class FunctionBackend final : public LlmBackend {
public:
    using Fn = std::function<std::string(const ChatRequest&)>;
    explicit FunctionBackend(Fn fn) : fn_(std::move(fn)) {}
    ChatResponse complete(const ChatRequest& req) override {
        return {fn_(req), std::chrono::microseconds{0}, id()};
    }
    std::string id() const override { return "function"; }

private:
    Fn fn_;
};

struct CallRecord {
    std::uint64_t sequence = 0;
    Timestamp at{};
    ChatRequest request;
    ChatResponse response;
    std::optional<std::string> error;
};

/// Front door for every model call: validates requests and keeps an ordered
/// call log. Safe for concurrent use.
class Gateway {
public:
    explicit Gateway(std::shared_ptr<LlmBackend> backend, std::shared_ptr<const Clock> clock = nullptr,
                     bool logging = true);

    /// Throws PreconditionViolated on an empty system prompt; backend errors
    /// propagate after being logged.
    ChatResponse complete(const ChatRequest& req);

    std::vector<CallRecord> call_log(Timestamp since = Timestamp{}) const;
    std::size_t call_count() const;

    /// Line-delimited JSON, one call per line. Timing fields are omitted unless
    /// requested so identical runs export identical bytes.
    std::string export_ndjson(bool include_timing = false) const;

    const LlmBackend& backend() const noexcept { return *backend_; }

private:
    std::shared_ptr<LlmBackend> backend_;
    std::shared_ptr<const Clock> clock_;
    bool logging_;
    mutable std::mutex mu_;
    std::vector<CallRecord> log_;
    std::uint64_t next_sequence_ = 0;
};

nlohmann::json to_json(const CallRecord& rec, bool include_timing);

}  // namespace satbot
