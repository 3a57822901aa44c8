#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "satbot/signals.hpp"

namespace satbot {

/// Pattern lexicon for yes/no/"another one" routing. Patterns are stored in
/// normalized, tokenized form; matching is whole-token.
class IntentLexicon {
public:
    static constexpr std::size_t kMinAffirmative = 40;
    static constexpr std::size_t kMinNegative = 13;

    struct Pattern {
        std::vector<std::string> tokens;
        std::size_t char_count = 0;
        IntentLabel label = IntentLabel::Unclassified;
    };

    /// Parses the sectioned text format ([affirmative], [negative],
    /// [different_exercise], one pattern per line, '#' comments). Throws
    /// LexiconInvalid listing every problem found.
    static IntentLexicon parse(std::string_view content);
    static IntentLexicon load(const std::filesystem::path& path);

    std::size_t count(IntentLabel label) const noexcept;
    const std::vector<Pattern>& patterns() const noexcept { return patterns_; }

    /// Patterns whose first token is `token`.
    const std::vector<std::size_t>* starting_with(const std::string& token) const;

private:
    std::vector<Pattern> patterns_;
    std::unordered_map<std::string, std::vector<std::size_t>> by_first_token_;
};

/// Longest whole-token match over all three pattern sets; the earliest match
/// wins among equally long ones. No match yields Unclassified.
IntentLabel classify_intent(std::string_view utterance, const IntentLexicon& lexicon);

}  // namespace satbot
