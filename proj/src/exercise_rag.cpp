#include "satbot/exercise_rag.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <set>

#include "satbot/error.hpp"

namespace satbot {

bool Exercise::has_stage(Stage s) const noexcept {
    return std::find(stage_tags.begin(), stage_tags.end(), s) != stage_tags.end();
}

KnowledgeBase KnowledgeBase::from_json(const nlohmann::json& doc, const StageTable& stages,
                                       std::size_t expected_count) {
    std::vector<std::string> problems;
    KnowledgeBase kb;

    const int version = doc.value("schema_version", 0);
    if (version != kKnowledgeBaseSchemaVersion) {
        problems.push_back("schema_version " + std::to_string(version) + " is not " +
                           std::to_string(kKnowledgeBaseSchemaVersion));
    }
    kb.theory_text_ = doc.value("theory_text", "");
    if (kb.theory_text_.empty()) problems.push_back("theory_text is empty");

    std::set<int> ids;
    for (const auto& e : doc.value("exercises", nlohmann::json::array())) {
        Exercise ex;
        try {
            ex.exercise_id = e.at("id").get<int>();
            ex.title = e.at("title").get<std::string>();
            ex.body_text = e.at("body").get<std::string>();
            for (const auto& t : e.at("stage_tags")) ex.stage_tags.push_back(parse_stage(t.get<std::string>()));
            ex.day_range = {e.at("day_range").at(0).get<int>(), e.at("day_range").at(1).get<int>()};
        } catch (const std::exception& err) {
            problems.push_back("malformed exercise entry: " + std::string(err.what()));
            continue;
        }
        const std::string tag = "exercise " + std::to_string(ex.exercise_id) + ": ";
        if (!ids.insert(ex.exercise_id).second) problems.push_back(tag + "duplicate id");
        if (ex.stage_tags.empty()) problems.push_back(tag + "no stage tags");
        if (ex.day_range.lo > ex.day_range.hi) problems.push_back(tag + "day_range lo > hi");
        if (ex.day_range.lo < 1 || ex.day_range.hi > kProtocolDays) problems.push_back(tag + "day_range outside 1..8");
        if (ex.title.empty() || ex.body_text.empty()) problems.push_back(tag + "empty title or body");
        kb.exercises_.push_back(std::move(ex));
    }
    if (expected_count != 0 && kb.exercises_.size() != expected_count) {
        problems.push_back("expected " + std::to_string(expected_count) + " exercises, found " +
                           std::to_string(kb.exercises_.size()));
    }
    std::sort(kb.exercises_.begin(), kb.exercises_.end(),
              [](const Exercise& a, const Exercise& b) { return a.exercise_id < b.exercise_id; });

    for (int day = 1; day <= kProtocolDays; ++day) {
        const Stage stage = stage_for_day(day, stages);
        const bool any = std::any_of(kb.exercises_.begin(), kb.exercises_.end(), [&](const Exercise& ex) {
            return ex.day_range.contains(day) && ex.has_stage(stage);
        });
        if (!any) {
            problems.push_back("day " + std::to_string(day) + " / " + std::string(to_string(stage)) +
                               " has no candidate exercise");
        }
    }

    if (!problems.empty()) {
        std::string msg;
        for (const auto& p : problems) msg += "\n  " + p;
        throw Error(ErrorCode::KnowledgeBaseInvalid, "knowledge base rejected:" + msg);
    }
    return kb;
}

KnowledgeBase KnowledgeBase::load(const std::filesystem::path& path, const StageTable& stages) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::KnowledgeBaseInvalid, "cannot open " + path.string());
    try {
        return from_json(nlohmann::json::parse(in), stages);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::KnowledgeBaseInvalid, path.string() + ": " + e.what());
    }
}

const Exercise* KnowledgeBase::find(int exercise_id) const noexcept {
    for (const auto& ex : exercises_) {
        if (ex.exercise_id == exercise_id) return &ex;
    }
    return nullptr;
}

std::vector<Exercise> filter_candidates(const KnowledgeBase& kb, int day, Stage stage) {
    if (day < 1 || day > kProtocolDays) {
        throw Error(ErrorCode::OutOfRange, "protocol day " + std::to_string(day) + " outside 1..8");
    }
    std::vector<Exercise> out;
    std::copy_if(kb.exercises().begin(), kb.exercises().end(), std::back_inserter(out),
                 [&](const Exercise& ex) { return ex.day_range.contains(day) && ex.has_stage(stage); });
    if (out.empty()) {
        throw Error(ErrorCode::EmptyCandidateSet,
                    "no exercise for day " + std::to_string(day) + " / " + std::string(to_string(stage)));
    }
    return out;
}

SelectorReply parse_selector_reply(std::string_view reply) {
    static const std::regex id_re(R"(\bid\s*[=:]\s*(\d+))", std::regex::icase);
    SelectorReply out;
    const std::string s(reply);
    std::smatch m;
    if (!std::regex_search(s, m, id_re)) {
        out.personalized_text = s;
        return out;
    }
    try {
        out.exercise_id = std::stoi(m[1].str());
    } catch (const std::out_of_range&) {
        out.exercise_id = -1;
    }
    // Drop the line holding the id; the rest is the personalized rendering.
    const auto line_start = s.rfind('\n', static_cast<std::size_t>(m.position(0)));
    const auto line_end = s.find('\n', static_cast<std::size_t>(m.position(0)));
    std::string rest = s.substr(0, line_start == std::string::npos ? 0 : line_start);
    if (line_end != std::string::npos) rest += s.substr(line_end);
    const auto b = rest.find_first_not_of(" \t\r\n");
    const auto e = rest.find_last_not_of(" \t\r\n");
    out.personalized_text = b == std::string::npos ? "" : rest.substr(b, e - b + 1);
    return out;
}

namespace {

ChatRequest selector_request(std::span<const Exercise> candidates, const SelectionContext& context,
                             std::span<const int> history, const PromptLibrary& prompts) {
    std::string listing = "Candidate exercises:\n";
    for (const auto& ex : candidates) {
        listing += "[id=" + std::to_string(ex.exercise_id) + "] " + ex.title + "\n" + ex.body_text + "\n";
    }
    std::string past = "Previously delivered exercise ids:";
    if (history.empty()) past += " none";
    for (std::size_t i = 0; i < history.size(); ++i) past += (i ? ", " : " ") + std::to_string(history[i]);

    ChatRequest req;
    req.system_prompt = prompts.selector;
    req.messages.push_back({ChatRole::System, listing});
    req.messages.push_back({ChatRole::System, past});
    req.messages.push_back({ChatRole::System, "Long-term memory:\n" + context.memory.text()});
    req.messages.push_back({ChatRole::User, "Recent conversation:\n" + render_transcript(context.recent_transcript)});
    req.purpose = Purpose::Selector;
    req.determinism = Determinism::Deterministic;
    req.context_key = "select";
    return req;
}

bool in_history(std::span<const int> history, int id) {
    return std::find(history.begin(), history.end(), id) != history.end();
}

}  // namespace

SelectionResult select_exercise(std::span<const Exercise> candidates, const SelectionContext& context,
                                std::span<const int> history, const PromptLibrary& prompts, Gateway& gateway) {
    if (candidates.empty()) throw Error(ErrorCode::PreconditionViolated, "selector needs at least one candidate");

    SelectionResult result;
    for (const auto& ex : candidates) result.candidates_considered.push_back(ex.exercise_id);
    auto find_candidate = [&](int id) -> const Exercise* {
        for (const auto& ex : candidates) {
            if (ex.exercise_id == id) return &ex;
        }
        return nullptr;
    };

    ChatRequest req = selector_request(candidates, context, history, prompts);
    SelectorReply reply = parse_selector_reply(gateway.complete(req).text);
    result.selector_calls = 1;

    if (candidates.size() == 1) {
        result.chosen = candidates.front();
        result.personalized_text = reply.personalized_text.empty() ? result.chosen.body_text : reply.personalized_text;
        return result;
    }

    const Exercise* chosen = reply.exercise_id ? find_candidate(*reply.exercise_id) : nullptr;
    if (!chosen) {
        std::string ids;
        for (int id : result.candidates_considered) ids += (ids.empty() ? "" : ", ") + std::to_string(id);
        req.messages.push_back({ChatRole::User, "That answer did not name a candidate. Reply with id=<n> for one of: " +
                                                    ids + ", then the personalized exercise."});
        req.context_key = "reask";
        reply = parse_selector_reply(gateway.complete(req).text);
        result.selector_calls = 2;
        chosen = reply.exercise_id ? find_candidate(*reply.exercise_id) : nullptr;
    }

    if (chosen) {
        result.chosen = *chosen;
        result.personalized_text = reply.personalized_text.empty() ? chosen->body_text : reply.personalized_text;
        return result;
    }

    result.fallback = true;
    const Exercise* lowest = nullptr;
    const Exercise* lowest_fresh = nullptr;
    for (const auto& ex : candidates) {
        if (!lowest || ex.exercise_id < lowest->exercise_id) lowest = &ex;
        if (!in_history(history, ex.exercise_id) && (!lowest_fresh || ex.exercise_id < lowest_fresh->exercise_id)) {
            lowest_fresh = &ex;
        }
    }
    result.chosen = lowest_fresh ? *lowest_fresh : *lowest;
    result.personalized_text = result.chosen.body_text;
    return result;
}

const Exercise& static_schedule_pick(int day, std::span<const int> history, const KnowledgeBase& kb) {
    if (day < 1 || day > kProtocolDays) {
        throw Error(ErrorCode::OutOfRange, "protocol day " + std::to_string(day) + " outside 1..8");
    }
    const Exercise* first = nullptr;
    for (const auto& ex : kb.exercises()) {
        if (!ex.day_range.contains(day)) continue;
        if (!first) first = &ex;
        if (!in_history(history, ex.exercise_id)) return ex;
    }
    if (!first) throw Error(ErrorCode::EmptyCandidateSet, "no exercise scheduled for day " + std::to_string(day));
    return *first;
}

}  // namespace satbot
