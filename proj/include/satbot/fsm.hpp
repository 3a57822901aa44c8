#pragma once

#include <optional>
#include <string_view>

#include "satbot/session.hpp"
#include "satbot/signals.hpp"

namespace satbot {

enum class TransitionAction {
    AwaitUser,    // the state's agent speaks, then the turn ends
    InvokeAgent,  // next state resolves within the same turn (internal node, closing remarks)
    Terminate,    // END reached
};

enum class TransitionReason {
    JudgeSufficient,
    JudgeInsufficient,
    IntentAffirmative,
    IntentNegative,
    SentimentPositive,
    SentimentNegative,
    MinMessagesUnmet,
    LoopRequested,
    VentRequested,
    Unconditional,
};

std::string_view to_string(TransitionAction a) noexcept;
std::string_view to_string(TransitionReason r) noexcept;

struct TransitionDecision {
    FsmState next_state = FsmState::GreetingFormalityName;
    TransitionAction action = TransitionAction::AwaitUser;
    TransitionReason reason = TransitionReason::Unconditional;
};

/// Only the signal relevant to the current state is read: the verdict in
/// conversational states (plus intent in the greeting, to detect a decline),
/// the intent in decision states, the polarity in EMOTION_DECIDER.
struct TransitionInputs {
    std::optional<SufficiencyVerdict> verdict;
    std::optional<IntentLabel> intent;
    std::optional<Polarity> polarity;
};

/// Minimum user messages required in a state before it may be left.
struct FsmRules {
    int min_emotion_messages = 2;
    int min_event_messages = 2;
    int min_open_ended_messages = 4;
};

/// Pure transition function. Throws TerminalState on END, InvalidInput when
/// a decision state receives Unclassified, PreconditionViolated when the
/// signal the state needs is missing.
TransitionDecision advance(const Session& session, const TransitionInputs& inputs, const FsmRules& rules = {});

}  // namespace satbot
