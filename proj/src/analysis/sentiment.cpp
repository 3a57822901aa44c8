#include "satbot/analysis/sentiment.hpp"

#include <fstream>
#include <sstream>

#include "satbot/error.hpp"
#include "satbot/text.hpp"

namespace satbot::analysis {

SentimentLexicon::SentimentLexicon(std::set<std::string> positive, std::set<std::string> negative)
    : positive_(std::move(positive)), negative_(std::move(negative)) {
    std::vector<std::string> problems;
    for (const auto& w : positive_) {
        if (negative_.contains(w)) problems.push_back("'" + w + "' is both positive and negative");
    }
    if (!problems.empty()) {
        std::string msg = "sentiment lexicon invalid:";
        for (const auto& p : problems) msg += "\n  " + p;
        throw Error(ErrorCode::LexiconInvalid, msg);
    }
}

SentimentLexicon SentimentLexicon::parse(std::string_view content) {
    std::set<std::string> pos, neg;
    std::set<std::string>* current = nullptr;
    std::vector<std::string> problems;
    std::istringstream in{std::string(content)};
    std::string line;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        line = line.substr(b, line.find_last_not_of(" \t\r") - b + 1);
        if (line == "[positive]") {
            current = &pos;
        } else if (line == "[negative]") {
            current = &neg;
        } else if (line.front() == '[') {
            problems.push_back("line " + std::to_string(lineno) + ": unknown section " + line);
            current = nullptr;
        } else if (!current) {
            problems.push_back("line " + std::to_string(lineno) + ": word outside a section");
        } else {
            const auto tokens = text::tokenize(line);
            if (tokens.size() != 1) {
                problems.push_back("line " + std::to_string(lineno) + ": '" + line + "' is not a single word");
            } else {
                current->insert(tokens.front());
            }
        }
    }
    if (!problems.empty()) {
        std::string msg = "sentiment lexicon invalid:";
        for (const auto& p : problems) msg += "\n  " + p;
        throw Error(ErrorCode::LexiconInvalid, msg);
    }
    return SentimentLexicon(std::move(pos), std::move(neg));
}

SentimentLexicon SentimentLexicon::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::LexiconInvalid, "cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string_view to_string(SentimentLabel l) noexcept {
    switch (l) {
        case SentimentLabel::Positive: return "Positive";
        case SentimentLabel::Neutral: return "Neutral";
        case SentimentLabel::Negative: return "Negative";
    }
    return "?";
}

SentimentScore sentiment_score(std::string_view text, const SentimentLexicon& lexicon) {
    SentimentScore s;
    for (const auto& tok : text::tokenize(text)) {
        if (lexicon.is_positive(tok)) ++s.pos_count;
        else if (lexicon.is_negative(tok)) ++s.neg_count;
    }
    const auto hits = s.pos_count + s.neg_count;
    if (hits > 0) {
        s.score = (static_cast<double>(s.pos_count) - static_cast<double>(s.neg_count)) / static_cast<double>(hits);
    }
    s.label = s.score > 0 ? SentimentLabel::Positive : s.score < 0 ? SentimentLabel::Negative : SentimentLabel::Neutral;
    return s;
}

std::map<std::pair<Variant, Role>, SentimentSummary> summarize_sentiment(const std::vector<LogRow>& rows,
                                                                         const SentimentLexicon& lexicon) {
    struct Acc {
        std::size_t n = 0, pos = 0, neu = 0, neg = 0;
        double sum = 0.0;
    };
    std::map<std::pair<Variant, Role>, Acc> acc;
    for (const auto& row : rows) {
        const auto s = sentiment_score(row.text, lexicon);
        auto& a = acc[{row.variant, row.role}];
        ++a.n;
        a.sum += s.score;
        if (s.label == SentimentLabel::Positive) ++a.pos;
        else if (s.label == SentimentLabel::Negative) ++a.neg;
        else ++a.neu;
    }
    std::map<std::pair<Variant, Role>, SentimentSummary> out;
    for (const auto& [key, a] : acc) {
        const double n = static_cast<double>(a.n);
        out[key] = {a.n, a.sum / n, 100.0 * a.pos / n, 100.0 * a.neu / n, 100.0 * a.neg / n};
    }
    return out;
}

}  // namespace satbot::analysis
