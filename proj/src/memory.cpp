#include "satbot/memory.hpp"

#include <algorithm>
#include <mutex>

#include "satbot/error.hpp"
#include "satbot/text.hpp"

namespace satbot {

std::string_view to_string(SummaryKind k) noexcept { return k == SummaryKind::Rolling ? "Rolling" : "Final"; }

nlohmann::json to_json(const MemorySummary& s) {
    return {
        {"summary_id", s.summary_id},
        {"session_id", s.session_id},
        {"participant_id", s.participant_id},
        {"window_start", s.window_start},
        {"window_end", s.window_end},
        {"text", s.text},
        {"kind", to_string(s.kind)},
        {"created_at", format_timestamp(s.created_at)},
    };
}

MemorySummary summary_from_json(const nlohmann::json& j) {
    MemorySummary s;
    s.summary_id = j.at("summary_id").get<std::string>();
    s.session_id = j.at("session_id").get<std::string>();
    s.participant_id = j.at("participant_id").get<std::string>();
    s.window_start = j.at("window_start").get<std::size_t>();
    s.window_end = j.at("window_end").get<std::size_t>();
    s.text = j.at("text").get<std::string>();
    const auto kind = j.at("kind").get<std::string>();
    if (kind != "Rolling" && kind != "Final") throw Error(ErrorCode::StorageError, "bad summary kind " + kind);
    s.kind = kind == "Final" ? SummaryKind::Final : SummaryKind::Rolling;
    s.created_at = parse_timestamp(j.at("created_at").get<std::string>());
    return s;
}

std::string MemoryView::text() const {
    std::string out;
    for (const auto& s : summaries) {
        if (!out.empty()) out += '\n';
        out += s.text;
    }
    return out;
}

void MemoryStore::register_session(const std::string& session_id, const std::string& participant_id) {
    std::unique_lock lock(mu_);
    session_owner_[session_id] = participant_id;
}

void MemoryStore::add(MemorySummary summary) {
    std::unique_lock lock(mu_);
    session_owner_.try_emplace(summary.session_id, summary.participant_id);
    summaries_.push_back(std::move(summary));
}

void MemoryStore::remove(const std::vector<std::string>& summary_ids) {
    std::unique_lock lock(mu_);
    std::erase_if(summaries_, [&](const MemorySummary& s) {
        return std::find(summary_ids.begin(), summary_ids.end(), s.summary_id) != summary_ids.end();
    });
}

std::optional<MemorySummary> MemoryStore::get(const std::string& summary_id) const {
    std::shared_lock lock(mu_);
    for (const auto& s : summaries_) {
        if (s.summary_id == summary_id) return s;
    }
    return std::nullopt;
}

std::vector<MemorySummary> MemoryStore::for_participant(const std::string& participant_id) const {
    std::shared_lock lock(mu_);
    std::vector<MemorySummary> out;
    std::copy_if(summaries_.begin(), summaries_.end(), std::back_inserter(out),
                 [&](const MemorySummary& s) { return s.participant_id == participant_id; });
    return out;
}

std::vector<MemorySummary> MemoryStore::for_session(const std::string& session_id) const {
    std::shared_lock lock(mu_);
    std::vector<MemorySummary> out;
    std::copy_if(summaries_.begin(), summaries_.end(), std::back_inserter(out),
                 [&](const MemorySummary& s) { return s.session_id == session_id; });
    return out;
}

std::string MemoryStore::participant_of(const std::string& session_id) const {
    std::shared_lock lock(mu_);
    auto it = session_owner_.find(session_id);
    if (it == session_owner_.end()) throw Error(ErrorCode::UnknownSession, session_id);
    return it->second;
}

std::size_t MemoryStore::size() const {
    std::shared_lock lock(mu_);
    return summaries_.size();
}

namespace {

ChatRequest summary_request(const PromptLibrary& prompts, std::span<const Message> window, SummaryKind kind) {
    ChatRequest req;
    req.system_prompt = prompts.summarizer;
    req.messages.push_back({ChatRole::User, "Messages to summarize:\n" + render_transcript(window)});
    req.purpose = Purpose::Summarizer;
    req.determinism = Determinism::Deterministic;
    req.context_key = std::string(to_string(kind));
    return req;
}

}  // namespace

std::optional<MemorySummary> maybe_summarize(Session& session, MemoryStore& store, const PromptLibrary& prompts,
                                             Gateway& gateway, const Clock& clock, const MemoryConfig& config) {
    if (config.cadence == 0) throw Error(ErrorCode::ConfigInvalid, "memory cadence must be positive");
    const std::size_t start = session.summarized_until;
    if (session.transcript.size() < start + config.cadence) return std::nullopt;

    const std::size_t end = start + config.cadence - 1;
    const std::span<const Message> window(session.transcript.data() + start, config.cadence);
    session.summarized_until = end + 1;

    std::string text;
    try {
        text = gateway.complete(summary_request(prompts, window, SummaryKind::Rolling)).text;
    } catch (const Error& e) {
        if (!e.is_gateway_error()) throw;
    }
    if (text.empty()) {
        session.summary_gaps.emplace_back(start, end);
        return std::nullopt;
    }

    MemorySummary s;
    s.summary_id = session.session_id + ":r" + std::to_string(start / config.cadence);
    s.session_id = session.session_id;
    s.participant_id = session.participant_id;
    s.window_start = start;
    s.window_end = end;
    s.text = std::move(text);
    s.kind = SummaryKind::Rolling;
    s.created_at = clock.now();
    store.add(s);
    session.memory.push_back(s.summary_id);
    return s;
}

MemorySummary commit_final_summary(Session& session, MemoryStore& store, const PromptLibrary& prompts,
                                   Gateway& gateway, const Clock& clock) {
    if (session.current_state != FsmState::End) {
        throw Error(ErrorCode::NotTerminal, "session is in " + std::string(to_string(session.current_state)));
    }
    if (session.final_summary_id) throw Error(ErrorCode::AlreadyCommitted, *session.final_summary_id);

    MemorySummary s;
    s.text = gateway.complete(summary_request(prompts, session.transcript, SummaryKind::Final)).text;
    if (s.text.empty()) throw Error(ErrorCode::GatewayRejected, "summarizer returned an empty final summary");
    s.summary_id = session.session_id + ":final";
    s.session_id = session.session_id;
    s.participant_id = session.participant_id;
    s.window_start = 0;
    s.window_end = session.transcript.empty() ? 0 : session.transcript.size() - 1;
    s.kind = SummaryKind::Final;
    s.created_at = clock.now();
    store.add(s);
    session.memory.push_back(s.summary_id);
    session.final_summary_id = s.summary_id;
    return s;
}

MemoryView memory_view(const MemoryStore& store, const std::string& session_id, const MemoryConfig& config) {
    MemoryView view;
    view.summaries = store.for_participant(store.participant_of(session_id));

    std::size_t total = 0;
    for (const auto& s : view.summaries) total += text::char_length(s.text);
    while (total > config.budget_chars && view.summaries.size() > 1) {
        total -= text::char_length(view.summaries.front().text);
        view.summaries.erase(view.summaries.begin());
    }
    if (total > config.budget_chars && !view.summaries.empty()) {
        view.summaries.front().text = text::truncate_chars(view.summaries.front().text, config.budget_chars);
    }
    return view;
}

}  // namespace satbot
