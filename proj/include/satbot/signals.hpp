#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace satbot {

/// Outcome of the LLM-as-judge sufficiency check for a conversational state.
struct SufficiencyVerdict {
    bool sufficient = false;
    /// Set when the judge reports that the user wants to vent or elaborate
    /// (only meaningful in SUPER_STATE_EVENT).
    bool vent_requested = false;
    std::string rationale;
    /// Optional fields the greeting judge may extract.
    std::optional<std::string> user_name;
    std::optional<std::string> formality;
};

enum class IntentLabel { Affirmative, Negative, RequestDifferentExercise, Unclassified };

/// Binary on purpose: the decider has no neutral output.
enum class Polarity { Positive, Negative };

std::string_view to_string(IntentLabel label) noexcept;
std::string_view to_string(Polarity p) noexcept;

}  // namespace satbot
