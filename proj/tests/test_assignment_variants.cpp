#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "satbot/assignment.hpp"
#include "satbot/error.hpp"
#include "satbot/variants.hpp"
#include "test_support.hpp"

using namespace satbot;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const PromptLibrary& prompts() {
    static const PromptLibrary lib = PromptLibrary::load(satbot::testing::data_dir() / "prompts");
    return lib;
}

const KnowledgeBase& kb() {
    static const KnowledgeBase k = KnowledgeBase::load(satbot::testing::data_dir() / "kb.json");
    return k;
}

std::map<Variant, int> tally(BlockRandomizer& r, int n) {
    std::map<Variant, int> counts;
    for (int i = 0; i < n; ++i) counts[r.assign("p" + std::to_string(i), {}).variant]++;
    return counts;
}

}  // namespace

TEST(Randomizer, FirstThreeCoverEveryArm) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        BlockRandomizer r(seed);
        const auto c = tally(r, 3);
        EXPECT_EQ(c.size(), 3u) << seed;
    }
}

TEST(Randomizer, ArmsStayBalancedAtEveryPrefix) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        BlockRandomizer r(seed);
        std::map<Variant, int> c;
        for (int i = 0; i < 66; ++i) {
            c[r.assign("p" + std::to_string(i), {}).variant]++;
            int lo = 1 << 30, hi = 0;
            for (Variant v : {Variant::Alpha, Variant::Beta, Variant::Gamma}) {
                lo = std::min(lo, c[v]);
                hi = std::max(hi, c[v]);
            }
            ASSERT_LE(hi - lo, 1) << "seed " << seed << " after " << i + 1;
        }
        EXPECT_EQ(c[Variant::Alpha], 22);
    }
}

TEST(Randomizer, SeedReproducesAndDiffers) {
    BlockRandomizer a(99), b(99);
    std::vector<Variant> va, vb;
    for (int i = 0; i < 30; ++i) {
        va.push_back(a.assign("x" + std::to_string(i), {}).variant);
        vb.push_back(b.assign("x" + std::to_string(i), {}).variant);
    }
    EXPECT_EQ(va, vb);
    bool any_diff = false;
    for (std::uint64_t s = 0; s < 10 && !any_diff; ++s) any_diff = BlockRandomizer::block_order(s, 0) != BlockRandomizer::block_order(s + 1, 0);
    EXPECT_TRUE(any_diff);
}

TEST(Randomizer, RejectsSecondAssignment) {
    BlockRandomizer r(1);
    const auto g = r.assign("p", satbot::testing::at("2025-03-01T00:00:00Z"));
    EXPECT_EQ(g.participant_id, "p");
    EXPECT_NE(g.rng_seed_reference.find("seed=1"), std::string::npos);
    try {
        r.assign("p", {});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::AlreadyAssigned);
    }
}

TEST(Randomizer, RestoreContinuesTheSequence) {
    BlockRandomizer full(5);
    std::vector<GroupAssignment> all;
    for (int i = 0; i < 7; ++i) all.push_back(full.assign("p" + std::to_string(i), {}));
    BlockRandomizer resumed(5);
    for (int i = 0; i < 4; ++i) resumed.restore(all[static_cast<std::size_t>(i)]);
    for (int i = 4; i < 7; ++i) EXPECT_EQ(resumed.assign("p" + std::to_string(i), {}).variant, all[static_cast<std::size_t>(i)].variant);
}

TEST(Variants, FlagsPerArm) {
    const auto a = make_variant_config(Variant::Alpha, prompts());
    const auto b = make_variant_config(Variant::Beta, prompts());
    const auto g = make_variant_config(Variant::Gamma, prompts());
    EXPECT_TRUE(a.fsm_enabled && a.kb_enabled && a.memory_enabled);
    EXPECT_TRUE(!b.fsm_enabled && b.kb_enabled && !b.memory_enabled);
    EXPECT_TRUE(!g.fsm_enabled && !g.kb_enabled && !g.memory_enabled);
}

TEST(Variants, BetaPromptIsTheAlphaPromptsConcatenated) {
    const std::vector<std::string> order{"GREETING_FORMALITY_NAME", "EMOTION", "SUPER_STATE_EVENT",
                                         "OPEN_ENDED_CONVERSATION", "ASK_EXERCISE", "EXERCISE_SUGGESTION",
                                         "EXERCISE_EXPLANATION", "FEEDBACK", "LIKE_ANOTHER_EXERCISE", "THANKS"};
    std::string expected;
    for (const auto& name : order) expected += slurp(satbot::testing::data_dir() / "prompts" / "agent" / (name + ".txt"));
    EXPECT_EQ(make_variant_config(Variant::Beta, prompts()).system_prompt, expected);
}

TEST(Variants, GammaPromptIsFreeOfKnowledgeBaseText) {
    const auto g = make_variant_config(Variant::Gamma, prompts()).system_prompt;
    EXPECT_FALSE(g.empty());
    for (const auto& ex : kb().exercises()) {
        EXPECT_EQ(g.find(ex.title), std::string::npos) << ex.title;
        EXPECT_EQ(g.find(ex.body_text), std::string::npos) << ex.exercise_id;
    }
    std::string lower = g;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    EXPECT_EQ(lower.find("exercise"), std::string::npos);
    EXPECT_NO_THROW(self_check_variants(prompts(), kb()));
}

TEST(Variants, SelfCheckCatchesContamination) {
    auto tainted = prompts();
    tainted.gamma += "\n" + kb().exercises().front().title;
    EXPECT_THROW(self_check_variants(tainted, kb()), Error);

    auto drifted = prompts();
    drifted.beta_override = "something else";
    EXPECT_THROW(self_check_variants(drifted, kb()), Error);
}
