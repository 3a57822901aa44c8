#include <gtest/gtest.h>

#include <random>

#include "satbot/error.hpp"
#include "satbot/memory.hpp"
#include "test_support.hpp"

using namespace satbot;

namespace {

const PromptLibrary& prompts() {
    static const PromptLibrary lib = PromptLibrary::load(satbot::testing::data_dir() / "prompts");
    return lib;
}

struct Rig {
    std::shared_ptr<ScriptedBackend> backend = std::make_shared<ScriptedBackend>(ScriptedBackend::Exhaustion::Repeat);
    std::shared_ptr<ManualClock> clock = std::make_shared<ManualClock>(satbot::testing::at("2025-03-01T09:00:00Z"));
    Gateway gateway{backend, clock};
    MemoryStore store;
    Session session;

    Rig() {
        session.session_id = "s1";
        session.participant_id = "u1";
        store.register_session("s1", "u1");
        backend->push(Purpose::Summarizer, "summary");
    }

    std::optional<MemorySummary> say(const std::string& text, Role role = Role::User) {
        session = record_message(std::move(session), {role, text, clock->now(), session.current_state});
        return maybe_summarize(session, store, prompts(), gateway, *clock);
    }

    std::size_t rolling() const {
        std::size_t n = 0;
        for (const auto& s : store.for_session("s1")) n += s.kind == SummaryKind::Rolling;
        return n;
    }
};

MemorySummary summary(std::string id, std::string participant, std::string text) {
    MemorySummary s;
    s.summary_id = std::move(id);
    s.session_id = "s1";
    s.participant_id = std::move(participant);
    s.text = std::move(text);
    return s;
}

}  // namespace

TEST(Memory, EveryThirdMessageSummarizesTheNewestWindow) {
    Rig r;
    EXPECT_FALSE(r.say("a"));
    EXPECT_FALSE(r.say("b", Role::Agent));
    const auto first = r.say("c");
    ASSERT_TRUE(first);
    EXPECT_EQ(first->window_start, 0u);
    EXPECT_EQ(first->window_end, 2u);
    EXPECT_EQ(first->kind, SummaryKind::Rolling);
    EXPECT_FALSE(r.say("d"));
    EXPECT_FALSE(r.say("e"));
    const auto second = r.say("f");
    ASSERT_TRUE(second);
    EXPECT_EQ(second->window_start, 3u);
    EXPECT_EQ(second->window_end, 5u);
    EXPECT_EQ(r.rolling(), 2u);

    const auto req = r.gateway.call_log().back().request;
    EXPECT_EQ(req.purpose, Purpose::Summarizer);
    EXPECT_NE(req.messages.back().text.find("User: d\nUser: e\nUser: f\n"), std::string::npos);
}

TEST(Memory, CadenceMatchesFloorOverRandomLengths) {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        Rig r;
        const int n = static_cast<int>(rng() % 40);
        for (int i = 0; i < n; ++i) r.say("m" + std::to_string(i), rng() % 2 ? Role::User : Role::Agent);
        EXPECT_EQ(r.rolling(), static_cast<std::size_t>(n / 3)) << n;
        // Windows partition a prefix in order.
        std::size_t next = 0;
        for (const auto& s : r.store.for_session("s1")) {
            EXPECT_EQ(s.window_start, next);
            next = s.window_end + 1;
        }
    }
}

TEST(Memory, GatewayFailureLeavesAGapAndLaterWindowsContinue) {
    Rig r;
    r.backend->push("Summarizer/Rolling", "!timeout");
    r.backend->push("Summarizer/Rolling", "second window");
    for (const char* m : {"a", "b", "c", "d", "e", "f", "g", "h", "i"}) r.say(m);
    ASSERT_EQ(r.session.summary_gaps.size(), 1u);
    EXPECT_EQ(r.session.summary_gaps[0], std::make_pair(std::size_t{0}, std::size_t{2}));
    EXPECT_EQ(r.rolling(), 9u / 3 - r.session.summary_gaps.size());
    const auto all = r.store.for_session("s1");
    EXPECT_EQ(all.front().window_start, 3u);
    EXPECT_EQ(all.front().text, "second window");
}

TEST(Memory, FinalSummaryExactlyOnceAtEnd) {
    Rig r;
    r.say("a");
    r.session.current_state = FsmState::Thanks;
    try {
        commit_final_summary(r.session, r.store, prompts(), r.gateway, *r.clock);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotTerminal);
    }
    r.session.current_state = FsmState::End;
    const auto f = commit_final_summary(r.session, r.store, prompts(), r.gateway, *r.clock);
    EXPECT_EQ(f.kind, SummaryKind::Final);
    EXPECT_EQ(r.session.final_summary_id, f.summary_id);
    try {
        commit_final_summary(r.session, r.store, prompts(), r.gateway, *r.clock);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::AlreadyCommitted);
    }
    std::size_t finals = 0;
    for (const auto& s : r.store.for_session("s1")) finals += s.kind == SummaryKind::Final;
    EXPECT_EQ(finals, 1u);
}

TEST(Memory, ViewIsEmptyWithoutSummaries) {
    MemoryStore store;
    store.register_session("s1", "u1");
    const auto v = memory_view(store, "s1");
    EXPECT_TRUE(v.empty());
    EXPECT_EQ(v.text(), "");
}

TEST(Memory, ViewEvictsOldestFirst) {
    MemoryStore store;
    store.register_session("s1", "u1");
    store.add(summary("a", "u1", std::string(40, 'a')));
    store.add(summary("b", "u1", std::string(40, 'b')));
    store.add(summary("c", "u1", std::string(40, 'c')));
    MemoryConfig cfg;
    cfg.budget_chars = 100;  // fits two of three
    const auto v = memory_view(store, "s1", cfg);
    ASSERT_EQ(v.summaries.size(), 2u);
    EXPECT_EQ(v.summaries[0].summary_id, "b");
    EXPECT_EQ(v.summaries[1].summary_id, "c");
    EXPECT_EQ(v.text(), memory_view(store, "s1", cfg).text());
}

TEST(Memory, ViewTruncatesASingleOversizedSummary) {
    MemoryStore store;
    store.register_session("s1", "u1");
    store.add(summary("a", "u1", std::string(50, 'x')));
    MemoryConfig cfg;
    cfg.budget_chars = 20;
    EXPECT_EQ(memory_view(store, "s1", cfg).text(), std::string(20, 'x'));
}

TEST(Memory, SharedAcrossSessionsOfOneParticipantOnly) {
    MemoryStore store;
    store.register_session("s1", "u1");
    store.register_session("s2", "u1");
    store.register_session("s3", "u2");
    store.add(summary("a", "u1", "first session"));
    store.add(summary("z", "u2", "someone else"));
    EXPECT_EQ(memory_view(store, "s2").text(), "first session");
    EXPECT_EQ(memory_view(store, "s3").text(), "someone else");
    EXPECT_THROW(memory_view(store, "nope"), Error);
    store.remove({"a"});
    EXPECT_TRUE(memory_view(store, "s2").empty());
}

TEST(Memory, SummaryJsonRoundTrip) {
    auto s = summary("s1:r0", "u1", "text");
    s.window_end = 2;
    s.created_at = satbot::testing::at("2025-03-01T09:00:00Z");
    EXPECT_EQ(to_json(summary_from_json(to_json(s))), to_json(s));
}
