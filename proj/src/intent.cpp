#include "satbot/intent.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "satbot/error.hpp"
#include "satbot/text.hpp"

namespace satbot {

namespace {

std::string join(const std::vector<std::string>& tokens) {
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) out += ' ';
        out += t;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

IntentLexicon IntentLexicon::parse(std::string_view content) {
    IntentLexicon lex;
    std::vector<std::string> problems;
    std::map<std::string, IntentLabel> seen;  // normalized pattern -> label

    std::optional<IntentLabel> section;
    std::size_t line_no = 0;
    std::istringstream in{std::string(content)};
    for (std::string raw; std::getline(in, raw);) {
        ++line_no;
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        if (line.front() == '[') {
            if (line == "[affirmative]") {
                section = IntentLabel::Affirmative;
            } else if (line == "[negative]") {
                section = IntentLabel::Negative;
            } else if (line == "[different_exercise]") {
                section = IntentLabel::RequestDifferentExercise;
            } else {
                problems.push_back("line " + std::to_string(line_no) + ": unknown section " + std::string(line));
                section.reset();
            }
            continue;
        }
        if (!section) {
            problems.push_back("line " + std::to_string(line_no) + ": pattern outside a section");
            continue;
        }
        Pattern p;
        p.tokens = text::tokenize(line);
        p.label = *section;
        if (p.tokens.empty()) {
            problems.push_back("line " + std::to_string(line_no) + ": pattern normalizes to nothing");
            continue;
        }
        const std::string key = join(p.tokens);
        p.char_count = text::char_length(key);
        if (auto it = seen.find(key); it != seen.end()) {
            if (it->second != p.label) {
                problems.push_back("line " + std::to_string(line_no) + ": '" + key + "' appears in both " +
                                   std::string(to_string(it->second)) + " and " + std::string(to_string(p.label)));
            }
            continue;
        }
        seen.emplace(key, p.label);
        lex.patterns_.push_back(std::move(p));
    }

    if (lex.count(IntentLabel::Affirmative) < kMinAffirmative) {
        problems.push_back("affirmative section has " + std::to_string(lex.count(IntentLabel::Affirmative)) +
                           " patterns, need at least " + std::to_string(kMinAffirmative));
    }
    if (lex.count(IntentLabel::Negative) < kMinNegative) {
        problems.push_back("negative section has " + std::to_string(lex.count(IntentLabel::Negative)) +
                           " patterns, need at least " + std::to_string(kMinNegative));
    }
    if (!problems.empty()) {
        std::string msg;
        for (const auto& p : problems) msg += "\n  " + p;
        throw Error(ErrorCode::LexiconInvalid, "intent lexicon rejected:" + msg);
    }

    for (std::size_t i = 0; i < lex.patterns_.size(); ++i) {
        lex.by_first_token_[lex.patterns_[i].tokens.front()].push_back(i);
    }
    return lex;
}

IntentLexicon IntentLexicon::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::LexiconInvalid, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::size_t IntentLexicon::count(IntentLabel label) const noexcept {
    std::size_t n = 0;
    for (const auto& p : patterns_) n += p.label == label;
    return n;
}

const std::vector<std::size_t>* IntentLexicon::starting_with(const std::string& token) const {
    auto it = by_first_token_.find(token);
    return it == by_first_token_.end() ? nullptr : &it->second;
}

IntentLabel classify_intent(std::string_view utterance, const IntentLexicon& lexicon) {
    const auto tokens = text::tokenize(utterance);

    const IntentLexicon::Pattern* best = nullptr;
    for (std::size_t pos = 0; pos < tokens.size(); ++pos) {
        const auto* candidates = lexicon.starting_with(tokens[pos]);
        if (!candidates) continue;
        for (std::size_t idx : *candidates) {
            const auto& p = lexicon.patterns()[idx];
            if (pos + p.tokens.size() > tokens.size()) continue;
            bool match = true;
            for (std::size_t k = 1; k < p.tokens.size() && match; ++k) match = tokens[pos + k] == p.tokens[k];
            if (!match) continue;
            // Strictly longer only, so the earliest of equal-length matches is kept.
            if (!best || p.tokens.size() > best->tokens.size() ||
                (p.tokens.size() == best->tokens.size() && p.char_count > best->char_count)) {
                best = &p;
            }
        }
    }
    return best ? best->label : IntentLabel::Unclassified;
}

}  // namespace satbot
