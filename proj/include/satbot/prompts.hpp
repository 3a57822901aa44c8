#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "satbot/session.hpp"

namespace satbot {

/// Prompt texts loaded from a directory:
///
///   agent/<STATE>.txt   one per state that speaks to the user
///   judge/<STATE>.txt   sufficiency criteria for the judge-gated states
///   polarity.txt  summarizer.txt  selector.txt  gamma.txt
///   beta.txt            optional; if present it must equal the collapsed
///                       Alpha agent prompts byte for byte
struct PromptLibrary {
    std::map<FsmState, std::string> agent;
    std::map<FsmState, std::string> judge;
    std::string polarity;
    std::string summarizer;
    std::string selector;
    std::string gamma;
    std::optional<std::string> beta_override;

    static PromptLibrary load(const std::filesystem::path& dir);

    /// States with an agent prompt, in protocol order.
    static std::vector<FsmState> agent_states();
    /// States with a judge prompt.
    static std::vector<FsmState> judge_states();

    /// Alpha's per-state agent prompts concatenated in protocol order.
    std::string collapsed_agent_prompts() const;

    const std::string& agent_prompt(FsmState s) const;
    const std::string& judge_prompt(FsmState s) const;
};

}  // namespace satbot
