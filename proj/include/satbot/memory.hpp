#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "satbot/gateway.hpp"
#include "satbot/prompts.hpp"
#include "satbot/session.hpp"

namespace satbot {

enum class SummaryKind { Rolling, Final };
std::string_view to_string(SummaryKind k) noexcept;

struct MemorySummary {
    std::string summary_id;
    std::string session_id;
    std::string participant_id;
    std::size_t window_start = 0;  // inclusive transcript indices
    std::size_t window_end = 0;
    std::string text;
    SummaryKind kind = SummaryKind::Rolling;
    Timestamp created_at{};
};

nlohmann::json to_json(const MemorySummary& s);
MemorySummary summary_from_json(const nlohmann::json& j);

struct MemoryConfig {
    /// Messages per rolling window; agent and user messages both count.
    std::size_t cadence = 3;
    /// Characters of summary text allowed in one prompt.
    std::size_t budget_chars = 2000;
};

/// Summaries in creation order (newest last) after oldest-first eviction.
struct MemoryView {
    std::vector<MemorySummary> summaries;

    /// Texts joined by newlines; this is what agent prompts embed.
    std::string text() const;
    bool empty() const noexcept { return summaries.empty(); }
};

/// Shared summary store. Memory belongs to the participant, so a view for
/// any of their sessions shows summaries from all of them.
class MemoryStore {
public:
    void register_session(const std::string& session_id, const std::string& participant_id);
    void add(MemorySummary summary);
    void remove(const std::vector<std::string>& summary_ids);

    std::optional<MemorySummary> get(const std::string& summary_id) const;
    std::vector<MemorySummary> for_participant(const std::string& participant_id) const;
    std::vector<MemorySummary> for_session(const std::string& session_id) const;
    /// Throws UnknownSession.
    std::string participant_of(const std::string& session_id) const;
    std::size_t size() const;

private:
    mutable std::shared_mutex mu_;
    std::map<std::string, std::string> session_owner_;
    std::vector<MemorySummary> summaries_;  // creation order
};

/// Summarizes the oldest pending `cadence`-message window once the
/// transcript has grown past it. Call after every record_message. A gateway
/// failure records the window as a gap and returns nullopt; the next window
/// is attempted at the next trigger point.
std::optional<MemorySummary> maybe_summarize(Session& session, MemoryStore& store, const PromptLibrary& prompts,
                                             Gateway& gateway, const Clock& clock, const MemoryConfig& config = {});

/// Writes the session's single Final summary over the whole transcript.
/// Throws NotTerminal unless the session is at END, AlreadyCommitted on a
/// second call.
MemorySummary commit_final_summary(Session& session, MemoryStore& store, const PromptLibrary& prompts,
                                   Gateway& gateway, const Clock& clock);

/// Throws UnknownSession.
MemoryView memory_view(const MemoryStore& store, const std::string& session_id, const MemoryConfig& config = {});

}  // namespace satbot
