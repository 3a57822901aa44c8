#include <gtest/gtest.h>

#include "satbot/error.hpp"
#include "satbot/intent.hpp"
#include "satbot/text.hpp"
#include "test_support.hpp"

using namespace satbot;

namespace {

const IntentLexicon& shipped() {
    static const IntentLexicon lex = IntentLexicon::load(satbot::testing::data_dir() / "intent_lexicon.txt");
    return lex;
}

std::string small_lexicon(int affirmative, int negative) {
    std::string s = "[affirmative]\n";
    for (int i = 0; i < affirmative; ++i) s += "yes" + std::to_string(i) + "\n";
    s += "[negative]\n";
    for (int i = 0; i < negative; ++i) s += "no" + std::to_string(i) + "\n";
    return s;
}

}  // namespace

TEST(Text, NormalizeFoldsCaseDiacriticsAndArabicLetters) {
    EXPECT_EQ(text::normalize("BALE!!"), "bale");
    EXPECT_EQ(text::normalize("  Yes,\tplease!  "), "yes please");
    EXPECT_EQ(text::tokenize("BALE!!"), std::vector<std::string>{"bale"});
    EXPECT_EQ(text::tokenize("Café au LAIT"), (std::vector<std::string>{"cafe", "au", "lait"}));
    // Arabic yeh and kaf fold to their Persian forms; tatweel disappears.
    EXPECT_EQ(text::normalize("يك"), "یک");
    EXPECT_EQ(text::normalize("بـله"), "بله");
    // Zero-width non-joiner is dropped.
    EXPECT_EQ(text::normalize("نمی‌خوام"), "نمیخوام");
}

TEST(Text, CharLengthCountsCodePoints) {
    EXPECT_EQ(text::char_length("abc"), 3u);
    EXPECT_EQ(text::char_length("سلام"), 4u);
    EXPECT_EQ(text::char_length(""), 0u);
    EXPECT_EQ(text::truncate_chars("سلام دنیا", 4), "سلام");
}

TEST(Intent, ShippedLexiconMeetsFloors) {
    EXPECT_GE(shipped().count(IntentLabel::Affirmative), 40u);
    EXPECT_GE(shipped().count(IntentLabel::Negative), 13u);
    EXPECT_GT(shipped().count(IntentLabel::RequestDifferentExercise), 0u);
}

TEST(Intent, QuotedExemplarsAreAffirmative) {
    for (const char* u : {"bale", "are", "begoo"}) EXPECT_EQ(classify_intent(u, shipped()), IntentLabel::Affirmative) << u;
}

TEST(Intent, NoMatchIsUnclassified) { EXPECT_EQ(classify_intent("xyzzy", shipped()), IntentLabel::Unclassified); }

TEST(Intent, InvariantUnderCaseWhitespaceAndPunctuation) {
    for (const char* u : {"BALE!!", "  bale ", "Bale.", "bale?!", "\tBALE\n"}) {
        EXPECT_EQ(classify_intent(u, shipped()), IntentLabel::Affirmative) << u;
    }
    EXPECT_EQ(classify_intent("نه!", shipped()), IntentLabel::Negative);
    EXPECT_EQ(classify_intent("NO THANKS.", shipped()), IntentLabel::Negative);
}

TEST(Intent, WholeTokenNotSubstring) {
    // "na" is a negative pattern but must not fire inside other words.
    EXPECT_EQ(classify_intent("banana", shipped()), IntentLabel::Unclassified);
    EXPECT_EQ(classify_intent("na", shipped()), IntentLabel::Negative);
}

TEST(Intent, LongestMatchWins) {
    const auto lex = IntentLexicon::parse(small_lexicon(40, 13) + "not\n[affirmative]\nwhy not\n");
    EXPECT_EQ(classify_intent("not", lex), IntentLabel::Negative);
    EXPECT_EQ(classify_intent("well why not then", lex), IntentLabel::Affirmative);
    EXPECT_EQ(classify_intent("why not", shipped()), IntentLabel::Affirmative);
    EXPECT_EQ(classify_intent("show me another one please", shipped()), IntentLabel::RequestDifferentExercise);
}

TEST(Intent, EarliestMatchBreaksTies) {
    const auto lex = IntentLexicon::parse(small_lexicon(40, 13) + "nope\n[affirmative]\nsure\n");
    EXPECT_EQ(classify_intent("sure nope", lex), IntentLabel::Affirmative);
    EXPECT_EQ(classify_intent("nope sure", lex), IntentLabel::Negative);
}

TEST(Intent, PersianScriptVariantsMatch) {
    EXPECT_EQ(classify_intent("آره حتما", shipped()), IntentLabel::Affirmative);
    // Arabic yeh/kaf spellings match the Persian patterns.
    EXPECT_EQ(classify_intent("يه تمرين ديگه", shipped()),
              IntentLabel::RequestDifferentExercise);
    EXPECT_EQ(classify_intent("نمی‌خوام", shipped()), IntentLabel::Negative);
}

TEST(Intent, DeterministicAndDisjoint) {
    for (const auto& p : shipped().patterns()) {
        std::string utterance;
        for (const auto& t : p.tokens) utterance += t + " ";
        const auto label = classify_intent(utterance, shipped());
        EXPECT_EQ(label, classify_intent(utterance, shipped()));
        EXPECT_NE(label, IntentLabel::Unclassified) << utterance;
    }
}

TEST(Intent, LoadRejectsFloorsConflictsAndStrayLines) {
    auto code_of = [](const std::string& content) {
        try {
            IntentLexicon::parse(content);
        } catch (const Error& e) {
            return std::make_pair(e.code(), std::string(e.what()));
        }
        return std::make_pair(ErrorCode::StorageError, std::string());
    };
    auto [c1, m1] = code_of(small_lexicon(39, 13));
    EXPECT_EQ(c1, ErrorCode::LexiconInvalid);
    EXPECT_NE(m1.find("affirmative"), std::string::npos);
    auto [c2, m2] = code_of(small_lexicon(40, 12));
    EXPECT_EQ(c2, ErrorCode::LexiconInvalid);
    auto [c3, m3] = code_of(small_lexicon(40, 13) + "YES0\n");
    EXPECT_EQ(c3, ErrorCode::LexiconInvalid);
    EXPECT_NE(m3.find("yes0"), std::string::npos);
    auto [c4, m4] = code_of("stray\n" + small_lexicon(40, 13) + "[bogus]\n");
    EXPECT_EQ(c4, ErrorCode::LexiconInvalid);
    EXPECT_NE(m4.find("outside"), std::string::npos);
    EXPECT_NE(m4.find("bogus"), std::string::npos);
    EXPECT_NO_THROW(IntentLexicon::parse(small_lexicon(40, 13)));
}
