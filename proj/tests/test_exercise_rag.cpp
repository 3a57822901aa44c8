#include <gtest/gtest.h>

#include <fstream>

#include "satbot/error.hpp"
#include "satbot/exercise_rag.hpp"
#include "test_support.hpp"

using namespace satbot;

namespace {

const KnowledgeBase& kb() {
    static const KnowledgeBase k = KnowledgeBase::load(satbot::testing::data_dir() / "kb.json");
    return k;
}

const PromptLibrary& prompts() {
    static const PromptLibrary lib = PromptLibrary::load(satbot::testing::data_dir() / "prompts");
    return lib;
}

nlohmann::json kb_doc() {
    std::ifstream in(satbot::testing::data_dir() / "kb.json");
    return nlohmann::json::parse(in);
}

// Reference filter: a plain scan over the raw JSON document.
std::vector<int> oracle_filter(int day, Stage stage) {
    std::vector<int> ids;
    const auto doc = kb_doc();
    for (const auto& e : doc.at("exercises")) {
        const int lo = e.at("day_range")[0], hi = e.at("day_range")[1];
        bool tagged = false;
        for (const auto& t : e.at("stage_tags")) tagged |= t.get<std::string>() == to_string(stage);
        if (lo <= day && day <= hi && tagged) ids.push_back(e.at("id"));
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

std::vector<int> ids_of(const std::vector<Exercise>& xs) {
    std::vector<int> ids;
    for (const auto& x : xs) ids.push_back(x.exercise_id);
    return ids;
}

std::vector<Exercise> pick(std::initializer_list<int> ids) {
    std::vector<Exercise> out;
    for (int id : ids) out.push_back(*kb().find(id));
    return out;
}

struct Rig {
    std::shared_ptr<ScriptedBackend> backend = std::make_shared<ScriptedBackend>(ScriptedBackend::Exhaustion::Repeat);
    Gateway gateway{backend};
};

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::StorageError;
}

}  // namespace

TEST(KnowledgeBase, ShippedCorpusIsValid) {
    EXPECT_EQ(kb().exercises().size(), 27u);
    EXPECT_FALSE(kb().theory_text().empty());
    for (int id = 1; id <= 27; ++id) ASSERT_NE(kb().find(id), nullptr) << id;
}

TEST(KnowledgeBase, ValidationListsEveryViolation) {
    auto doc = kb_doc();
    doc["exercises"][0]["day_range"] = {5, 2};
    doc["exercises"][1]["stage_tags"] = nlohmann::json::array();
    doc["exercises"][2]["id"] = 4;
    try {
        KnowledgeBase::from_json(doc);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::KnowledgeBaseInvalid);
        const std::string msg = e.what();
        EXPECT_NE(msg.find("day_range"), std::string::npos) << msg;
        EXPECT_NE(msg.find("stage"), std::string::npos) << msg;
        EXPECT_NE(msg.find("duplicate"), std::string::npos) << msg;
    }
    auto wrong_version = kb_doc();
    wrong_version["schema_version"] = 2;
    EXPECT_EQ(code_of([&] { KnowledgeBase::from_json(wrong_version); }), ErrorCode::KnowledgeBaseInvalid);
}

TEST(KnowledgeBase, RejectsADayWithoutCandidates) {
    auto doc = kb_doc();
    for (auto& e : doc["exercises"]) {
        if (e["day_range"][0] == 8) e["day_range"] = {7, 7};
    }
    EXPECT_EQ(code_of([&] { KnowledgeBase::from_json(doc); }), ErrorCode::KnowledgeBaseInvalid);
}

TEST(Filter, DayOneBeginningIsTheFirstThree) {
    const auto ids = ids_of(filter_candidates(kb(), 1, Stage::Beginning));
    EXPECT_FALSE(ids.empty());
    for (int id : ids) EXPECT_TRUE(id >= 1 && id <= 3) << id;
}

TEST(Filter, MatchesBruteForceScanEverywhere) {
    for (int day = 1; day <= 8; ++day) {
        for (Stage st : {Stage::Beginning, Stage::Intermediate, Stage::Advanced}) {
            const auto expected = oracle_filter(day, st);
            if (expected.empty()) {
                EXPECT_EQ(code_of([&] { filter_candidates(kb(), day, st); }), ErrorCode::EmptyCandidateSet);
            } else {
                EXPECT_EQ(ids_of(filter_candidates(kb(), day, st)), expected) << day << " " << to_string(st);
            }
        }
    }
}

TEST(Filter, SingleMatchGivesSingleton) {
    const auto expected = oracle_filter(6, Stage::Advanced);
    ASSERT_EQ(expected.size(), 1u);
    EXPECT_EQ(ids_of(filter_candidates(kb(), 6, Stage::Advanced)), expected);
}

TEST(Filter, DayOutOfRange) {
    EXPECT_EQ(code_of([] { filter_candidates(kb(), 0, Stage::Beginning); }), ErrorCode::OutOfRange);
    EXPECT_EQ(code_of([] { filter_candidates(kb(), 9, Stage::Advanced); }), ErrorCode::OutOfRange);
}

TEST(Selector, ParsesIdAndPersonalizedText) {
    auto r = parse_selector_reply("ID=3\nTry this today.");
    EXPECT_EQ(r.exercise_id, 3);
    EXPECT_EQ(r.personalized_text, "Try this today.");
    r = parse_selector_reply("I pick id: 12");
    EXPECT_EQ(r.exercise_id, 12);
    EXPECT_FALSE(parse_selector_reply("no idea").exercise_id);
}

TEST(Selector, SingleCandidateIsForced) {
    Rig r;
    r.backend->push(Purpose::Selector, "id=99 whatever");
    const auto res = select_exercise(pick({5}), {}, {}, prompts(), r.gateway);
    EXPECT_EQ(res.chosen.exercise_id, 5);
}

TEST(Selector, ValidChoiceIsTaken) {
    Rig r;
    r.backend->push(Purpose::Selector, "id=3\nA gentle start.");
    const auto res = select_exercise(pick({1, 3, 5}), {}, {}, prompts(), r.gateway);
    EXPECT_EQ(res.chosen.exercise_id, 3);
    EXPECT_EQ(res.personalized_text, "A gentle start.");
    EXPECT_FALSE(res.fallback);
    EXPECT_EQ(res.selector_calls, 1);
}

TEST(Selector, InvalidTwiceFallsBackAvoidingHistory) {
    Rig r;
    r.backend->push(Purpose::Selector, "id=9");
    const std::vector<int> history{1};
    const auto res = select_exercise(pick({1, 3}), {}, history, prompts(), r.gateway);
    EXPECT_EQ(res.chosen.exercise_id, 3);
    EXPECT_TRUE(res.fallback);
    EXPECT_EQ(res.selector_calls, 2);
    EXPECT_EQ(r.gateway.call_log().at(1).request.context_key, "reask");
}

TEST(Selector, ReaskCanRecover) {
    Rig r;
    r.backend->push(Purpose::Selector, "garbage").push(Purpose::Selector, "id=2");
    const auto res = select_exercise(pick({1, 2}), {}, {}, prompts(), r.gateway);
    EXPECT_EQ(res.chosen.exercise_id, 2);
    EXPECT_FALSE(res.fallback);
}

TEST(Selector, FallbackWrapsWhenEverythingWasSeen) {
    Rig r;
    r.backend->push(Purpose::Selector, "nothing");
    const std::vector<int> history{4, 5, 6, 7};
    EXPECT_EQ(select_exercise(pick({6, 4, 5}), {}, history, prompts(), r.gateway).chosen.exercise_id, 4);
}

TEST(Selector, PromptCarriesMemoryHistoryAndCandidatesInIdOrder) {
    Rig r;
    r.backend->push(Purpose::Selector, "id=2");
    SelectionContext ctx;
    MemorySummary m;
    m.text = "User is stressed about exams.";
    ctx.memory.summaries.push_back(m);
    ctx.recent_transcript.push_back({Role::User, "I can't sleep", {}, FsmState::AskExercise});
    const std::vector<int> history{1};
    select_exercise(filter_candidates(kb(), 1, Stage::Beginning), ctx, history, prompts(), r.gateway);
    const auto req = r.gateway.call_log().at(0).request;
    std::string all;
    for (const auto& msg : req.messages) all += msg.text + "\n";
    EXPECT_NE(all.find("User is stressed about exams."), std::string::npos);
    EXPECT_NE(all.find("I can't sleep"), std::string::npos);
    EXPECT_NE(all.find("Previously delivered exercise ids: 1"), std::string::npos);
    EXPECT_LT(all.find("[id=1]"), all.find("[id=2]"));
    EXPECT_LT(all.find("[id=2]"), all.find("[id=3]"));
    EXPECT_EQ(req.purpose, Purpose::Selector);
    EXPECT_EQ(req.determinism, Determinism::Deterministic);
}

TEST(StaticSchedule, LowestUnseenThenWrap) {
    EXPECT_EQ(static_schedule_pick(1, {}, kb()).exercise_id, 1);
    const std::vector<int> seen{1, 2, 3};
    EXPECT_EQ(static_schedule_pick(1, seen, kb()).exercise_id, 1);
    const std::vector<int> some{1};
    EXPECT_EQ(static_schedule_pick(1, some, kb()).exercise_id, 2);
    EXPECT_EQ(static_schedule_pick(4, some, kb()).exercise_id, static_schedule_pick(4, some, kb()).exercise_id);
    EXPECT_EQ(code_of([] { static_schedule_pick(0, {}, kb()); }), ErrorCode::OutOfRange);
}
