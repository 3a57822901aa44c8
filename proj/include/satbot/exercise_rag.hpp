#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "satbot/gateway.hpp"
#include "satbot/memory.hpp"
#include "satbot/prompts.hpp"
#include "satbot/protocol_calendar.hpp"
#include "satbot/session.hpp"

namespace satbot {

struct DayRange {
    int lo = 1;
    int hi = 1;
    bool contains(int day) const noexcept { return lo <= day && day <= hi; }
};

struct Exercise {
    int exercise_id = 0;
    std::string title;
    std::string body_text;
    std::vector<Stage> stage_tags;
    DayRange day_range;

    bool has_stage(Stage s) const noexcept;
};

inline constexpr int kKnowledgeBaseSchemaVersion = 1;
inline constexpr std::size_t kExerciseCount = 27;

/// Exercise corpus plus the background text embedded in Alpha and Beta
/// prompts. Immutable once loaded.
class KnowledgeBase {
public:
    /// Validates ids, ranges, tags, and that every day's stage (under
    /// `stages`) has at least one candidate. Throws KnowledgeBaseInvalid
    /// listing every violation.
    static KnowledgeBase from_json(const nlohmann::json& doc, const StageTable& stages = {},
                                   std::size_t expected_count = kExerciseCount);
    static KnowledgeBase load(const std::filesystem::path& path, const StageTable& stages = {});

    const std::vector<Exercise>& exercises() const noexcept { return exercises_; }
    const std::string& theory_text() const noexcept { return theory_text_; }
    const Exercise* find(int exercise_id) const noexcept;

private:
    std::vector<Exercise> exercises_;  // ascending id
    std::string theory_text_;
};

/// Exercises with day in day_range and stage in stage_tags, ascending id.
/// Throws OutOfRange for a day outside 1..8 and EmptyCandidateSet when
/// nothing qualifies.
std::vector<Exercise> filter_candidates(const KnowledgeBase& kb, int day, Stage stage);

struct SelectionContext {
    MemoryView memory;
    std::vector<Message> recent_transcript;
};

struct SelectionResult {
    Exercise chosen;
    std::string personalized_text;
    std::vector<int> candidates_considered;
    /// Set when the selector never named a valid candidate and the
    /// deterministic fallback picked instead.
    bool fallback = false;
    int selector_calls = 0;
};

/// Parses "id=<n>" from a selector reply; the remaining lines are the
/// personalized rendering.
struct SelectorReply {
    std::optional<int> exercise_id;
    std::string personalized_text;
};
SelectorReply parse_selector_reply(std::string_view reply);

/// Selector re-rank over `candidates`. An id outside the candidate set is
/// re-asked once; after that the lowest-id candidate not in `history` (or
/// the lowest id overall) is taken. A single candidate is always chosen.
SelectionResult select_exercise(std::span<const Exercise> candidates, const SelectionContext& context,
                                std::span<const int> history, const PromptLibrary& prompts, Gateway& gateway);

/// Fixed-schedule delivery: lowest-id exercise of the day's pool not yet in
/// `history`, wrapping to the pool's lowest id once it is exhausted.
const Exercise& static_schedule_pick(int day, std::span<const int> history, const KnowledgeBase& kb);

}  // namespace satbot
