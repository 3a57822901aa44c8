#include "satbot/judges.hpp"

#include <algorithm>
#include <cctype>
#include <string>
#include <vector>

#include "satbot/error.hpp"

namespace satbot {

namespace {

// ASCII words, uppercased; "key=value" pairs stay whole.
std::vector<std::string> reply_words(std::string_view reply) {
    std::vector<std::string> words;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) words.push_back(std::move(cur));
        cur.clear();
    };
    for (char c : reply) {
        const auto uc = static_cast<unsigned char>(c);
        if (std::isalnum(uc) || c == '=' || c == '_' || uc >= 0x80) {
            cur += c;
        } else {
            flush();
        }
    }
    flush();
    return words;
}

std::string upper_ascii(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

ChatRequest window_request(const std::string& prompt, std::span<const Message> window, Purpose purpose,
                           std::string context_key) {
    ChatRequest req;
    req.system_prompt = prompt;
    req.messages.push_back({ChatRole::User, "Conversation so far:\n" + render_transcript(window)});
    req.purpose = purpose;
    req.determinism = Determinism::Deterministic;
    req.context_key = std::move(context_key);
    return req;
}

}  // namespace

SufficiencyVerdict parse_judge_reply(FsmState state, std::string_view reply) {
    SufficiencyVerdict v;
    v.rationale = std::string(reply);
    bool decided = false;
    for (const auto& word : reply_words(reply)) {
        const auto eq = word.find('=');
        if (eq != std::string::npos) {
            const std::string key = upper_ascii(word.substr(0, eq));
            const std::string value = word.substr(eq + 1);
            if (key == "NAME" && !value.empty()) v.user_name = value;
            if (key == "FORMALITY") {
                const std::string f = upper_ascii(value);
                if (f == "FORMAL") v.formality = "Formal";
                if (f == "INFORMAL") v.formality = "Informal";
            }
            continue;
        }
        if (decided) continue;
        const std::string w = upper_ascii(word);
        if (w == "YES") {
            v.sufficient = true;
            decided = true;
        } else if (w == "NO") {
            decided = true;
        } else if (w == "VENT" && state == FsmState::SuperStateEvent) {
            v.vent_requested = true;
            decided = true;
        }
    }
    if (!decided) {
        throw Error(ErrorCode::MalformedJudgeReply, "judge for " + std::string(to_string(state)) +
                                                        " replied without YES/NO: '" + std::string(reply) + "'");
    }
    return v;
}

SufficiencyVerdict judge_sufficiency(FsmState state, std::span<const Message> window, const PromptLibrary& prompts,
                                     Gateway& gateway) {
    if (!is_conversational(state)) {
        throw Error(ErrorCode::PreconditionViolated, std::string(to_string(state)) + " is not judge-gated");
    }
    if (window.empty()) throw Error(ErrorCode::PreconditionViolated, "judge window is empty");
    const auto req = window_request(prompts.judge_prompt(state), window, Purpose::Judge, std::string(to_string(state)));
    return parse_judge_reply(state, gateway.complete(req).text);
}

Polarity parse_polarity_reply(std::string_view reply) {
    for (const auto& word : reply_words(reply)) {
        const std::string w = upper_ascii(word);
        if (w == "POSITIVE") return Polarity::Positive;
        if (w == "NEGATIVE") return Polarity::Negative;
    }
    throw Error(ErrorCode::MalformedJudgeReply, "polarity reply without POSITIVE/NEGATIVE: '" + std::string(reply) + "'");
}

PolarityDecision decide_polarity(std::span<const Message> window, const PromptLibrary& prompts, Gateway& gateway) {
    const auto user_messages = std::count_if(window.begin(), window.end(), [](const Message& m) { return m.role == Role::User; });
    if (user_messages < 2) {
        throw Error(ErrorCode::PreconditionViolated, "polarity decider needs at least two user messages");
    }
    const auto req = window_request(prompts.polarity, window, Purpose::PolarityDecider,
                                    std::string(to_string(FsmState::EmotionDecider)));
    PolarityDecision out;
    for (out.attempts = 1; out.attempts <= 1 + kPolarityRetries; ++out.attempts) {
        try {
            out.polarity = parse_polarity_reply(gateway.complete(req).text);
            return out;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::MalformedJudgeReply) throw;
        }
    }
    out.attempts = 1 + kPolarityRetries;
    out.polarity = kMalformedPolarityDefault;
    out.defaulted = true;
    return out;
}

}  // namespace satbot
