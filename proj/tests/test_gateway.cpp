#include <gtest/gtest.h>

#include <atomic>
#include <thread>

#include "httplib.h"
#include "satbot/error.hpp"
#include "satbot/gateway.hpp"
#include "satbot/remote_backend.hpp"

using namespace satbot;

namespace {

ChatRequest request(Purpose p, std::string key = "", Determinism d = Determinism::Deterministic) {
    ChatRequest r;
    r.system_prompt = "system";
    r.messages = {{ChatRole::User, "hello"}};
    r.purpose = p;
    r.determinism = d;
    r.context_key = std::move(key);
    return r;
}

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::StorageError;
}

// Local chat-completions stand-in that fails the first `failures` calls.
struct MockServer {
    httplib::Server server;
    std::thread thread;
    int port = 0;
    std::atomic<int> calls{0};
    std::atomic<int> failures{0};
    int failure_status = 503;
    std::string last_body;
    std::string last_auth;
    std::mutex mu;

    MockServer() {
        server.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
            const int n = ++calls;
            {
                std::lock_guard lock(mu);
                last_body = req.body;
                last_auth = req.get_header_value("Authorization");
            }
            if (n <= failures) {
                res.status = failure_status;
                res.set_content("{}", "application/json");
                return;
            }
            res.set_content(R"({"choices":[{"message":{"role":"assistant","content":"mock reply"}}]})",
                            "application/json");
        });
        port = server.bind_to_any_port("127.0.0.1");
        thread = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
    }
    ~MockServer() {
        server.stop();
        thread.join();
    }

    RemoteBackendConfig config() const {
        RemoteBackendConfig c;
        c.api_base = "http://127.0.0.1:" + std::to_string(port) + "/v1";
        c.api_key = "k-123";
        c.model = "test-model";
        c.timeout = std::chrono::seconds(5);
        return c;
    }
};

}  // namespace

TEST(ScriptedBackend, ReturnsScriptedReplies) {
    auto be = std::make_shared<ScriptedBackend>();
    be->push(Purpose::Judge, "YES");
    Gateway gw(be);
    EXPECT_EQ(gw.complete(request(Purpose::Judge)).text, "YES");
}

TEST(ScriptedBackend, ExhaustionPolicies) {
    auto strict = std::make_shared<ScriptedBackend>(ScriptedBackend::Exhaustion::Error);
    strict->push(Purpose::Judge, "YES");
    Gateway gw(strict);
    gw.complete(request(Purpose::Judge));
    EXPECT_EQ(code_of([&] { gw.complete(request(Purpose::Judge)); }), ErrorCode::ScriptExhausted);

    auto lenient = std::make_shared<ScriptedBackend>(ScriptedBackend::Exhaustion::Repeat);
    lenient->push(Purpose::Judge, "NO");
    Gateway gw2(lenient);
    gw2.complete(request(Purpose::Judge));
    EXPECT_EQ(gw2.complete(request(Purpose::Judge)).text, "NO");
}

TEST(ScriptedBackend, KeyLookupOrder) {
    auto be = std::make_shared<ScriptedBackend>();
    be->push("Judge/EMOTION", "specific");
    be->push(Purpose::Judge, "generic");
    be->push("*", "fallback");
    Gateway gw(be);
    EXPECT_EQ(gw.complete(request(Purpose::Judge, "EMOTION")).text, "specific");
    EXPECT_EQ(gw.complete(request(Purpose::Judge, "EMOTION")).text, "generic");
    EXPECT_EQ(gw.complete(request(Purpose::Selector)).text, "fallback");
}

TEST(ScriptedBackend, InjectedFailures) {
    auto be = std::make_shared<ScriptedBackend>();
    be->push(Purpose::Judge, "!timeout");
    be->push(Purpose::Judge, "!rejected");
    Gateway gw(be);
    EXPECT_EQ(code_of([&] { gw.complete(request(Purpose::Judge)); }), ErrorCode::GatewayTimeout);
    EXPECT_EQ(code_of([&] { gw.complete(request(Purpose::Judge)); }), ErrorCode::GatewayRejected);
    ASSERT_EQ(gw.call_count(), 2u);
    EXPECT_TRUE(gw.call_log()[0].error.has_value());
}

TEST(ScriptedBackend, FromJson) {
    auto be = ScriptedBackend::from_json(
        {{"exhaustion", "error"}, {"responses", {{"Judge", {"YES", "NO"}}, {"Summarizer", {"s"}}}}});
    Gateway gw(std::shared_ptr<LlmBackend>(std::move(be)));
    EXPECT_EQ(gw.complete(request(Purpose::Judge)).text, "YES");
    EXPECT_EQ(gw.complete(request(Purpose::Judge)).text, "NO");
    EXPECT_EQ(gw.complete(request(Purpose::Summarizer)).text, "s");
    EXPECT_THROW(ScriptedBackend::from_json({{"exhaustion", "sometimes"}}), Error);
}

TEST(Gateway, CallLogOrderAndFiltering) {
    auto clock = std::make_shared<ManualClock>(parse_timestamp("2025-03-01T00:00:00Z"));
    auto be = std::make_shared<ScriptedBackend>(ScriptedBackend::Exhaustion::Repeat);
    be->push("*", "ok");
    Gateway gw(be, clock);
    EXPECT_TRUE(gw.call_log().empty());
    gw.complete(request(Purpose::Judge));
    ASSERT_EQ(gw.call_log().size(), 1u);
    EXPECT_EQ(gw.call_log()[0].request.purpose, Purpose::Judge);

    const Purpose order[] = {Purpose::Summarizer, Purpose::Selector, Purpose::StateAgent, Purpose::PolarityDecider};
    clock->advance(std::chrono::seconds(10));
    for (Purpose p : order) gw.complete(request(p));
    const auto log = gw.call_log();
    ASSERT_EQ(log.size(), 5u);
    for (std::size_t i = 0; i < log.size(); ++i) EXPECT_EQ(log[i].sequence, i);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(log[i + 1].request.purpose, order[i]);
    EXPECT_EQ(gw.call_log(parse_timestamp("2025-03-01T00:00:05Z")).size(), 4u);
}

TEST(Gateway, IdenticalRunsExportIdenticalLogs) {
    auto run = [] {
        auto be = std::make_shared<ScriptedBackend>();
        be->push(Purpose::Judge, "YES").push(Purpose::Summarizer, "sum");
        Gateway gw(be);
        gw.complete(request(Purpose::Judge, "EMOTION"));
        gw.complete(request(Purpose::Summarizer));
        return gw.export_ndjson();
    };
    const auto a = run();
    EXPECT_EQ(a, run());
    EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 2);
}

TEST(Gateway, RejectsEmptySystemPrompt) {
    auto be = std::make_shared<ScriptedBackend>();
    Gateway gw(be);
    auto r = request(Purpose::Judge);
    r.system_prompt.clear();
    EXPECT_EQ(code_of([&] { gw.complete(r); }), ErrorCode::PreconditionViolated);
}

TEST(Gateway, ConcurrentCallsAreAllLogged) {
    auto be = std::make_shared<ScriptedBackend>(ScriptedBackend::Exhaustion::Repeat);
    be->push("*", "ok");
    Gateway gw(be);
    std::vector<std::thread> ts;
    for (int t = 0; t < 4; ++t) {
        ts.emplace_back([&] {
            for (int i = 0; i < 50; ++i) gw.complete(request(Purpose::StateAgent));
        });
    }
    for (auto& t : ts) t.join();
    EXPECT_EQ(gw.call_count(), 200u);
}

TEST(RemoteBackend, RequestBodyMapsDeterminismToTemperature) {
    RemoteBackendConfig c;
    c.api_base = "http://localhost/v1";
    c.model = "m";
    RemoteBackend be(c);
    auto body = be.request_body(request(Purpose::Judge));
    EXPECT_EQ(body.at("temperature"), 0.0);
    EXPECT_EQ(body.at("model"), "m");
    EXPECT_EQ(body.at("messages").at(0).at("role"), "system");
    EXPECT_EQ(body.at("messages").at(1).at("role"), "user");
    body = be.request_body(request(Purpose::StateAgent, "", Determinism::Sampled));
    EXPECT_GT(body.at("temperature").get<double>(), 0.0);
}

TEST(RemoteBackend, SucceedsAndSendsCredentials) {
    MockServer mock;
    RemoteBackend be(mock.config());
    EXPECT_EQ(be.complete(request(Purpose::Judge)).text, "mock reply");
    EXPECT_EQ(mock.calls, 1);
    std::lock_guard lock(mock.mu);
    EXPECT_EQ(mock.last_auth, "Bearer k-123");
    EXPECT_EQ(nlohmann::json::parse(mock.last_body).at("model"), "test-model");
}

TEST(RemoteBackend, RetriesTransientFailuresTwice) {
    MockServer mock;
    mock.failures = 2;
    RemoteBackend be(mock.config());
    EXPECT_EQ(be.complete(request(Purpose::Judge)).text, "mock reply");
    EXPECT_EQ(mock.calls, 3);
}

TEST(RemoteBackend, GivesUpAfterRetries) {
    MockServer mock;
    mock.failures = 10;
    mock.failure_status = 429;
    RemoteBackend be(mock.config());
    EXPECT_EQ(code_of([&] { be.complete(request(Purpose::Judge)); }), ErrorCode::GatewayTimeout);
    EXPECT_EQ(mock.calls, 3);
}

TEST(RemoteBackend, ClientErrorsAreNotRetried) {
    MockServer mock;
    mock.failures = 10;
    mock.failure_status = 400;
    RemoteBackend be(mock.config());
    EXPECT_EQ(code_of([&] { be.complete(request(Purpose::Judge)); }), ErrorCode::GatewayRejected);
    EXPECT_EQ(mock.calls, 1);
}

TEST(RemoteBackend, UnreachableHostTimesOut) {
    RemoteBackendConfig c;
    c.api_base = "http://127.0.0.1:1/v1";
    c.model = "m";
    c.timeout = std::chrono::seconds(1);
    c.max_retries = 1;
    RemoteBackend be(c);
    EXPECT_EQ(code_of([&] { be.complete(request(Purpose::Judge)); }), ErrorCode::GatewayTimeout);
}

TEST(RemoteBackend, ConfigFromEnvironment) {
    ::setenv("LLM_API_BASE", "https://llm.example/v1", 1);
    ::setenv("LLM_API_KEY", "secret", 1);
    ::setenv("LLM_MODEL", "model-x", 1);
    const auto c = RemoteBackendConfig::from_env();
    EXPECT_EQ(c.api_base, "https://llm.example/v1");
    EXPECT_EQ(c.api_key, "secret");
    EXPECT_EQ(c.model, "model-x");
    ::unsetenv("LLM_MODEL");
    EXPECT_THROW(RemoteBackendConfig::from_env(), Error);
    ::unsetenv("LLM_API_BASE");
    ::unsetenv("LLM_API_KEY");
}
