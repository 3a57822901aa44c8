#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "satbot/timeutil.hpp"

namespace satbot {

/// The twelve dialogue states, in protocol order.
enum class FsmState {
    GreetingFormalityName,
    Emotion,
    EmotionDecider,
    SuperStateEvent,
    OpenEndedConversation,
    AskExercise,
    ExerciseSuggestion,
    ExerciseExplanation,
    Feedback,
    LikeAnotherExercise,
    Thanks,
    End,
};

inline constexpr std::size_t kFsmStateCount = 12;

inline constexpr std::array<FsmState, kFsmStateCount> kAllStates = {
    FsmState::GreetingFormalityName, FsmState::Emotion,           FsmState::EmotionDecider,
    FsmState::SuperStateEvent,       FsmState::OpenEndedConversation, FsmState::AskExercise,
    FsmState::ExerciseSuggestion,    FsmState::ExerciseExplanation,   FsmState::Feedback,
    FsmState::LikeAnotherExercise,   FsmState::Thanks,            FsmState::End,
};

enum class Superstate { Initiation, Exploration, Intervention, Conclusion };

enum class Role { Agent, User };
enum class Variant { Alpha, Beta, Gamma };
enum class Stage { Beginning, Intermediate, Advanced };
enum class Formality { Formal, Informal, Undeclared };

constexpr std::size_t index_of(FsmState s) noexcept { return static_cast<std::size_t>(s); }

Superstate superstate_of(FsmState s) noexcept;

/// False for internal nodes and for states the service resolves within the
/// same turn (EMOTION_DECIDER, THANKS, END).
bool awaits_user(FsmState s) noexcept;

/// States whose transitions are gated by the LLM-as-judge.
bool is_conversational(FsmState s) noexcept;
/// States whose transitions are routed by the intent classifier.
bool is_decision(FsmState s) noexcept;

std::string_view to_string(FsmState s) noexcept;
std::string_view to_string(Superstate s) noexcept;
std::string_view to_string(Role r) noexcept;
std::string_view to_string(Variant v) noexcept;
std::string_view to_string(Stage s) noexcept;
std::string_view to_string(Formality f) noexcept;

FsmState parse_fsm_state(std::string_view s);
Role parse_role(std::string_view s);
Variant parse_variant(std::string_view s);
Stage parse_stage(std::string_view s);
Formality parse_formality(std::string_view s);

struct Message {
    Role role = Role::User;
    std::string text;
    Timestamp timestamp{};
    FsmState state_at_send = FsmState::GreetingFormalityName;
};

struct Session {
    std::string session_id;
    std::string participant_id;
    Variant variant = Variant::Alpha;
    FsmState current_state = FsmState::GreetingFormalityName;
    std::vector<Message> transcript;
    Date registration_date{};
    int protocol_day = 1;
    Stage stage = Stage::Beginning;
    std::optional<std::string> user_name;
    Formality formality = Formality::Undeclared;
    std::array<int, kFsmStateCount> per_state_user_message_counts{};
    std::vector<std::string> memory;

    // Memory bookkeeping: first transcript index not yet covered by a rolling
    // window, and windows lost to gateway failures.
    std::size_t summarized_until = 0;
    std::vector<std::pair<std::size_t, std::size_t>> summary_gaps;
    std::optional<std::string> final_summary_id;

    // Exercise currently being delivered (Alpha: chosen by the selector;
    // Beta: picked from the static schedule).
    std::optional<int> current_exercise_id;
    std::string current_exercise_text;

    int user_messages_in(FsmState s) const noexcept {
        return per_state_user_message_counts[index_of(s)];
    }
};

/// Appends in arrival order and keeps the per-state user counters in sync.
/// Throws TerminalState on an END session and InvalidInput on empty text.
Session record_message(Session session, Message msg);

/// Messages sent while the session was in `state`, in transcript order.
std::vector<Message> state_window(const Session& session, FsmState state);

/// "User: ...\nAgent: ..." rendering used inside judge, summarizer and
/// selector prompts.
std::string render_transcript(std::span<const Message> messages);

inline constexpr int kSessionSchemaVersion = 1;

nlohmann::json to_json(const Message& m);
Message message_from_json(const nlohmann::json& j);

/// Versioned snapshot; see docs/session_schema.md.
nlohmann::json to_json(const Session& s);
Session session_from_json(const nlohmann::json& j);

}  // namespace satbot
