#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "satbot/log_schema.hpp"

namespace satbot::analysis {

/// Positive and negative word lists. File format: `[positive]` and
/// `[negative]` sections, one word per line, `#` comments. Entries are
/// normalized like message text; a word may not be in both lists and must
/// be a single token.
class SentimentLexicon {
public:
    static SentimentLexicon parse(std::string_view content);
    static SentimentLexicon load(const std::filesystem::path& path);
    SentimentLexicon(std::set<std::string> positive, std::set<std::string> negative);

    bool is_positive(const std::string& token) const { return positive_.contains(token); }
    bool is_negative(const std::string& token) const { return negative_.contains(token); }
    const std::set<std::string>& positive() const noexcept { return positive_; }
    const std::set<std::string>& negative() const noexcept { return negative_; }

private:
    std::set<std::string> positive_;
    std::set<std::string> negative_;
};

enum class SentimentLabel { Positive, Neutral, Negative };
std::string_view to_string(SentimentLabel l) noexcept;

struct SentimentScore {
    double score = 0.0;
    std::size_t pos_count = 0;
    std::size_t neg_count = 0;
    SentimentLabel label = SentimentLabel::Neutral;
};

/// (pos - neg) / (pos + neg) over word tokens, 0 when nothing matches.
SentimentScore sentiment_score(std::string_view text, const SentimentLexicon& lexicon);

struct SentimentSummary {
    std::size_t messages = 0;
    double mean_score = 0.0;
    double positive_pct = 0.0;
    double neutral_pct = 0.0;
    double negative_pct = 0.0;
};

/// Per (variant, role) aggregates over exported log rows.
std::map<std::pair<Variant, Role>, SentimentSummary> summarize_sentiment(const std::vector<LogRow>& rows,
                                                                         const SentimentLexicon& lexicon);

}  // namespace satbot::analysis
