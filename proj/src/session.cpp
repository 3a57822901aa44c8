#include "satbot/session.hpp"

#include <algorithm>

#include "satbot/error.hpp"
#include "satbot/signals.hpp"

namespace satbot {

namespace {

template <typename Enum, std::size_t N>
Enum parse_enum(std::string_view s, const std::array<Enum, N>& values, std::string_view what) {
    for (Enum v : values) {
        if (to_string(v) == s) return v;
    }
    throw Error(ErrorCode::InvalidInput, "unknown " + std::string(what) + " '" + std::string(s) + "'");
}

}  // namespace

Superstate superstate_of(FsmState s) noexcept {
    switch (s) {
        case FsmState::GreetingFormalityName:
        case FsmState::Emotion:
        case FsmState::EmotionDecider:
            return Superstate::Initiation;
        case FsmState::SuperStateEvent:
        case FsmState::OpenEndedConversation:
            return Superstate::Exploration;
        case FsmState::AskExercise:
        case FsmState::ExerciseSuggestion:
        case FsmState::ExerciseExplanation:
        case FsmState::Feedback:
        case FsmState::LikeAnotherExercise:
            return Superstate::Intervention;
        case FsmState::Thanks:
        case FsmState::End:
            return Superstate::Conclusion;
    }
    return Superstate::Conclusion;
}

bool awaits_user(FsmState s) noexcept {
    return s != FsmState::EmotionDecider && s != FsmState::Thanks && s != FsmState::End;
}

bool is_conversational(FsmState s) noexcept {
    return s == FsmState::GreetingFormalityName || s == FsmState::Emotion || s == FsmState::SuperStateEvent ||
           s == FsmState::OpenEndedConversation;
}

bool is_decision(FsmState s) noexcept {
    return s == FsmState::AskExercise || s == FsmState::ExerciseExplanation || s == FsmState::LikeAnotherExercise;
}

std::string_view to_string(FsmState s) noexcept {
    switch (s) {
        case FsmState::GreetingFormalityName: return "GREETING_FORMALITY_NAME";
        case FsmState::Emotion: return "EMOTION";
        case FsmState::EmotionDecider: return "EMOTION_DECIDER";
        case FsmState::SuperStateEvent: return "SUPER_STATE_EVENT";
        case FsmState::OpenEndedConversation: return "OPEN_ENDED_CONVERSATION";
        case FsmState::AskExercise: return "ASK_EXERCISE";
        case FsmState::ExerciseSuggestion: return "EXERCISE_SUGGESTION";
        case FsmState::ExerciseExplanation: return "EXERCISE_EXPLANATION";
        case FsmState::Feedback: return "FEEDBACK";
        case FsmState::LikeAnotherExercise: return "LIKE_ANOTHER_EXERCISE";
        case FsmState::Thanks: return "THANKS";
        case FsmState::End: return "END";
    }
    return "?";
}

std::string_view to_string(Superstate s) noexcept {
    switch (s) {
        case Superstate::Initiation: return "Initiation";
        case Superstate::Exploration: return "Exploration";
        case Superstate::Intervention: return "Intervention";
        case Superstate::Conclusion: return "Conclusion";
    }
    return "?";
}

std::string_view to_string(Role r) noexcept { return r == Role::Agent ? "agent" : "user"; }

std::string_view to_string(Variant v) noexcept {
    switch (v) {
        case Variant::Alpha: return "Alpha";
        case Variant::Beta: return "Beta";
        case Variant::Gamma: return "Gamma";
    }
    return "?";
}

std::string_view to_string(Stage s) noexcept {
    switch (s) {
        case Stage::Beginning: return "Beginning";
        case Stage::Intermediate: return "Intermediate";
        case Stage::Advanced: return "Advanced";
    }
    return "?";
}

std::string_view to_string(Formality f) noexcept {
    switch (f) {
        case Formality::Formal: return "Formal";
        case Formality::Informal: return "Informal";
        case Formality::Undeclared: return "Undeclared";
    }
    return "?";
}

std::string_view to_string(IntentLabel label) noexcept {
    switch (label) {
        case IntentLabel::Affirmative: return "Affirmative";
        case IntentLabel::Negative: return "Negative";
        case IntentLabel::RequestDifferentExercise: return "RequestDifferentExercise";
        case IntentLabel::Unclassified: return "Unclassified";
    }
    return "?";
}

std::string_view to_string(Polarity p) noexcept { return p == Polarity::Positive ? "Positive" : "Negative"; }

FsmState parse_fsm_state(std::string_view s) { return parse_enum(s, kAllStates, "state"); }

Role parse_role(std::string_view s) {
    return parse_enum(s, std::array{Role::Agent, Role::User}, "role");
}

Variant parse_variant(std::string_view s) {
    return parse_enum(s, std::array{Variant::Alpha, Variant::Beta, Variant::Gamma}, "variant");
}

Stage parse_stage(std::string_view s) {
    return parse_enum(s, std::array{Stage::Beginning, Stage::Intermediate, Stage::Advanced}, "stage");
}

Formality parse_formality(std::string_view s) {
    return parse_enum(s, std::array{Formality::Formal, Formality::Informal, Formality::Undeclared}, "formality");
}

Session record_message(Session session, Message msg) {
    if (session.current_state == FsmState::End) {
        throw Error(ErrorCode::TerminalState, "session " + session.session_id + " has ended");
    }
    if (msg.text.empty()) throw Error(ErrorCode::InvalidInput, "message text is empty");
    if (msg.role == Role::User) ++session.per_state_user_message_counts[index_of(msg.state_at_send)];
    session.transcript.push_back(std::move(msg));
    return session;
}

std::vector<Message> state_window(const Session& session, FsmState state) {
    std::vector<Message> out;
    std::copy_if(session.transcript.begin(), session.transcript.end(), std::back_inserter(out),
                 [state](const Message& m) { return m.state_at_send == state; });
    return out;
}

std::string render_transcript(std::span<const Message> messages) {
    std::string out;
    for (const auto& m : messages) {
        out += m.role == Role::User ? "User: " : "Agent: ";
        out += m.text;
        out += '\n';
    }
    return out;
}

nlohmann::json to_json(const Message& m) {
    return {
        {"role", to_string(m.role)},
        {"text", m.text},
        {"timestamp", format_timestamp(m.timestamp)},
        {"state", to_string(m.state_at_send)},
    };
}

Message message_from_json(const nlohmann::json& j) {
    Message m;
    m.role = parse_role(j.at("role").get<std::string>());
    m.text = j.at("text").get<std::string>();
    m.timestamp = parse_timestamp(j.at("timestamp").get<std::string>());
    m.state_at_send = parse_fsm_state(j.at("state").get<std::string>());
    return m;
}

nlohmann::json to_json(const Session& s) {
    nlohmann::json transcript = nlohmann::json::array();
    for (const auto& m : s.transcript) transcript.push_back(to_json(m));

    nlohmann::json counts = nlohmann::json::object();
    for (FsmState st : kAllStates) {
        if (s.user_messages_in(st) > 0) counts[std::string(to_string(st))] = s.user_messages_in(st);
    }

    nlohmann::json gaps = nlohmann::json::array();
    for (auto [lo, hi] : s.summary_gaps) gaps.push_back({lo, hi});

    nlohmann::json j = {
        {"schema_version", kSessionSchemaVersion},
        {"session_id", s.session_id},
        {"participant_id", s.participant_id},
        {"variant", to_string(s.variant)},
        {"current_state", to_string(s.current_state)},
        {"transcript", std::move(transcript)},
        {"registration_date", format_date(s.registration_date)},
        {"protocol_day", s.protocol_day},
        {"stage", to_string(s.stage)},
        {"user_name", s.user_name ? nlohmann::json(*s.user_name) : nlohmann::json(nullptr)},
        {"formality", to_string(s.formality)},
        {"per_state_user_message_counts", std::move(counts)},
        {"memory", s.memory},
        {"summarized_until", s.summarized_until},
        {"summary_gaps", std::move(gaps)},
        {"final_summary_id", s.final_summary_id ? nlohmann::json(*s.final_summary_id) : nlohmann::json(nullptr)},
        {"current_exercise_id", s.current_exercise_id ? nlohmann::json(*s.current_exercise_id) : nlohmann::json(nullptr)},
        {"current_exercise_text", s.current_exercise_text},
    };
    return j;
}

Session session_from_json(const nlohmann::json& j) {
    const int version = j.at("schema_version").get<int>();
    if (version != kSessionSchemaVersion) {
        throw Error(ErrorCode::StorageError, "unsupported session schema version " + std::to_string(version));
    }
    Session s;
    s.session_id = j.at("session_id").get<std::string>();
    s.participant_id = j.at("participant_id").get<std::string>();
    s.variant = parse_variant(j.at("variant").get<std::string>());
    s.current_state = parse_fsm_state(j.at("current_state").get<std::string>());
    for (const auto& m : j.at("transcript")) s.transcript.push_back(message_from_json(m));
    s.registration_date = parse_date(j.at("registration_date").get<std::string>());
    s.protocol_day = j.at("protocol_day").get<int>();
    s.stage = parse_stage(j.at("stage").get<std::string>());
    if (!j.at("user_name").is_null()) s.user_name = j.at("user_name").get<std::string>();
    s.formality = parse_formality(j.at("formality").get<std::string>());
    for (const auto& [key, value] : j.at("per_state_user_message_counts").items()) {
        s.per_state_user_message_counts[index_of(parse_fsm_state(key))] = value.get<int>();
    }
    s.memory = j.at("memory").get<std::vector<std::string>>();
    s.summarized_until = j.at("summarized_until").get<std::size_t>();
    for (const auto& g : j.at("summary_gaps")) {
        s.summary_gaps.emplace_back(g.at(0).get<std::size_t>(), g.at(1).get<std::size_t>());
    }
    if (!j.at("final_summary_id").is_null()) s.final_summary_id = j.at("final_summary_id").get<std::string>();
    if (!j.at("current_exercise_id").is_null()) s.current_exercise_id = j.at("current_exercise_id").get<int>();
    s.current_exercise_text = j.at("current_exercise_text").get<std::string>();
    return s;
}

}  // namespace satbot
