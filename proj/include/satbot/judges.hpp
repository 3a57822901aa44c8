#pragma once

#include <span>
#include <string_view>

#include "satbot/gateway.hpp"
#include "satbot/prompts.hpp"
#include "satbot/session.hpp"
#include "satbot/signals.hpp"

namespace satbot {

/// A judge reply with neither YES nor NO counts as insufficient, so the
/// agent keeps gathering input.
inline constexpr bool kMalformedJudgeIsSufficient = false;
/// After one retry, an unreadable polarity reply routes to event exploration.
inline constexpr Polarity kMalformedPolarityDefault = Polarity::Negative;
inline constexpr int kPolarityRetries = 1;

/// Maps a judge reply to a verdict. The first of YES / NO (and VENT, in
/// SUPER_STATE_EVENT) decides. The greeting judge may also report
/// `name=<name>` and `formality=formal|informal`. Throws MalformedJudgeReply.
SufficiencyVerdict parse_judge_reply(FsmState state, std::string_view reply);

/// Asks the state's judge whether the window satisfies its criteria.
/// Throws PreconditionViolated for non-judge states or an empty window,
/// MalformedJudgeReply, or the gateway's error.
SufficiencyVerdict judge_sufficiency(FsmState state, std::span<const Message> window, const PromptLibrary& prompts,
                                     Gateway& gateway);

struct PolarityDecision {
    Polarity polarity = Polarity::Negative;
    int attempts = 1;
    bool defaulted = false;
};

/// Throws MalformedJudgeReply when neither POSITIVE nor NEGATIVE appears.
Polarity parse_polarity_reply(std::string_view reply);

/// Classifies the emotion-state dialogue as Positive or Negative. The window
/// must hold at least two user messages.
PolarityDecision decide_polarity(std::span<const Message> window, const PromptLibrary& prompts, Gateway& gateway);

}  // namespace satbot
