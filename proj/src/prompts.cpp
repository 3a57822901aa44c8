#include "satbot/prompts.hpp"

#include <fstream>
#include <sstream>

#include "satbot/error.hpp"

namespace satbot {

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::ConfigInvalid, "missing prompt file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    if (text.empty()) throw Error(ErrorCode::ConfigInvalid, "empty prompt file " + path.string());
    return text;
}

}  // namespace

std::vector<FsmState> PromptLibrary::agent_states() {
    std::vector<FsmState> out;
    for (FsmState s : kAllStates) {
        if (s != FsmState::EmotionDecider && s != FsmState::End) out.push_back(s);
    }
    return out;
}

std::vector<FsmState> PromptLibrary::judge_states() {
    std::vector<FsmState> out;
    for (FsmState s : kAllStates) {
        if (is_conversational(s)) out.push_back(s);
    }
    return out;
}

PromptLibrary PromptLibrary::load(const std::filesystem::path& dir) {
    PromptLibrary lib;
    for (FsmState s : agent_states()) {
        lib.agent[s] = read_file(dir / "agent" / (std::string(to_string(s)) + ".txt"));
    }
    for (FsmState s : judge_states()) {
        lib.judge[s] = read_file(dir / "judge" / (std::string(to_string(s)) + ".txt"));
    }
    lib.polarity = read_file(dir / "polarity.txt");
    lib.summarizer = read_file(dir / "summarizer.txt");
    lib.selector = read_file(dir / "selector.txt");
    lib.gamma = read_file(dir / "gamma.txt");
    if (std::filesystem::exists(dir / "beta.txt")) lib.beta_override = read_file(dir / "beta.txt");
    return lib;
}

std::string PromptLibrary::collapsed_agent_prompts() const {
    std::string out;
    for (FsmState s : agent_states()) out += agent_prompt(s);
    return out;
}

const std::string& PromptLibrary::agent_prompt(FsmState s) const {
    auto it = agent.find(s);
    if (it == agent.end()) {
        throw Error(ErrorCode::ConfigInvalid, "no agent prompt for " + std::string(to_string(s)));
    }
    return it->second;
}

const std::string& PromptLibrary::judge_prompt(FsmState s) const {
    auto it = judge.find(s);
    if (it == judge.end()) {
        throw Error(ErrorCode::PreconditionViolated, "no judge prompt for " + std::string(to_string(s)));
    }
    return it->second;
}

}  // namespace satbot
