#include "satbot/fsm.hpp"

#include <string>

#include "satbot/error.hpp"

namespace satbot {

std::string_view to_string(TransitionAction a) noexcept {
    switch (a) {
        case TransitionAction::AwaitUser: return "AwaitUser";
        case TransitionAction::InvokeAgent: return "InvokeAgent";
        case TransitionAction::Terminate: return "Terminate";
    }
    return "?";
}

std::string_view to_string(TransitionReason r) noexcept {
    switch (r) {
        case TransitionReason::JudgeSufficient: return "JudgeSufficient";
        case TransitionReason::JudgeInsufficient: return "JudgeInsufficient";
        case TransitionReason::IntentAffirmative: return "IntentAffirmative";
        case TransitionReason::IntentNegative: return "IntentNegative";
        case TransitionReason::SentimentPositive: return "SentimentPositive";
        case TransitionReason::SentimentNegative: return "SentimentNegative";
        case TransitionReason::MinMessagesUnmet: return "MinMessagesUnmet";
        case TransitionReason::LoopRequested: return "LoopRequested";
        case TransitionReason::VentRequested: return "VentRequested";
        case TransitionReason::Unconditional: return "Unconditional";
    }
    return "?";
}

namespace {

TransitionDecision go(FsmState next, TransitionReason reason) {
    TransitionAction action = TransitionAction::AwaitUser;
    if (next == FsmState::End) {
        action = TransitionAction::Terminate;
    } else if (!awaits_user(next)) {
        action = TransitionAction::InvokeAgent;
    }
    return {next, action, reason};
}

const SufficiencyVerdict& need_verdict(const TransitionInputs& in, FsmState s) {
    if (!in.verdict) {
        throw Error(ErrorCode::PreconditionViolated, std::string(to_string(s)) + " requires a judge verdict");
    }
    return *in.verdict;
}

IntentLabel need_intent(const TransitionInputs& in, FsmState s) {
    if (!in.intent) {
        throw Error(ErrorCode::PreconditionViolated, std::string(to_string(s)) + " requires an intent label");
    }
    if (*in.intent == IntentLabel::Unclassified) {
        throw Error(ErrorCode::InvalidInput, std::string(to_string(s)) + " received an unclassified reply");
    }
    return *in.intent;
}

// Judge-gated exit with a minimum user-message floor.
TransitionDecision gated(FsmState self, FsmState next, const SufficiencyVerdict& v, int have, int floor) {
    if (!v.sufficient) return go(self, TransitionReason::JudgeInsufficient);
    if (have < floor) return go(self, TransitionReason::MinMessagesUnmet);
    return go(next, TransitionReason::JudgeSufficient);
}

}  // namespace

TransitionDecision advance(const Session& session, const TransitionInputs& in, const FsmRules& rules) {
    const FsmState s = session.current_state;
    switch (s) {
        case FsmState::GreetingFormalityName: {
            if (in.intent == IntentLabel::Negative) return go(FsmState::Emotion, TransitionReason::IntentNegative);
            const auto& v = need_verdict(in, s);
            return v.sufficient ? go(FsmState::Emotion, TransitionReason::JudgeSufficient)
                                : go(s, TransitionReason::JudgeInsufficient);
        }
        case FsmState::Emotion:
            return gated(s, FsmState::EmotionDecider, need_verdict(in, s), session.user_messages_in(s),
                         rules.min_emotion_messages);
        case FsmState::EmotionDecider:
            if (!in.polarity) {
                throw Error(ErrorCode::PreconditionViolated, "EMOTION_DECIDER requires a polarity");
            }
            return *in.polarity == Polarity::Negative
                       ? go(FsmState::SuperStateEvent, TransitionReason::SentimentNegative)
                       : go(FsmState::AskExercise, TransitionReason::SentimentPositive);
        case FsmState::SuperStateEvent: {
            const auto& v = need_verdict(in, s);
            const int have = session.user_messages_in(s);
            if (v.vent_requested) {
                if (have < rules.min_event_messages) return go(s, TransitionReason::MinMessagesUnmet);
                return go(FsmState::OpenEndedConversation, TransitionReason::VentRequested);
            }
            return gated(s, FsmState::AskExercise, v, have, rules.min_event_messages);
        }
        case FsmState::OpenEndedConversation:
            return gated(s, FsmState::AskExercise, need_verdict(in, s), session.user_messages_in(s),
                         rules.min_open_ended_messages);
        case FsmState::AskExercise:
            return need_intent(in, s) == IntentLabel::Negative
                       ? go(FsmState::Thanks, TransitionReason::IntentNegative)
                       : go(FsmState::ExerciseSuggestion, TransitionReason::IntentAffirmative);
        case FsmState::ExerciseSuggestion:
            return go(FsmState::ExerciseExplanation, TransitionReason::Unconditional);
        case FsmState::ExerciseExplanation:
            switch (need_intent(in, s)) {
                case IntentLabel::Affirmative:
                    return go(FsmState::Feedback, TransitionReason::IntentAffirmative);
                case IntentLabel::Negative:
                    return go(FsmState::LikeAnotherExercise, TransitionReason::IntentNegative);
                default:
                    return go(FsmState::LikeAnotherExercise, TransitionReason::LoopRequested);
            }
        case FsmState::Feedback:
            return go(FsmState::LikeAnotherExercise, TransitionReason::Unconditional);
        case FsmState::LikeAnotherExercise:
            return need_intent(in, s) == IntentLabel::Negative
                       ? go(FsmState::Thanks, TransitionReason::IntentNegative)
                       : go(FsmState::ExerciseSuggestion, TransitionReason::LoopRequested);
        case FsmState::Thanks:
            return go(FsmState::End, TransitionReason::Unconditional);
        case FsmState::End:
            break;
    }
    throw Error(ErrorCode::TerminalState, "advance called on END");
}

}  // namespace satbot
