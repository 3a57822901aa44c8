#include "satbot/variants.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "satbot/error.hpp"

namespace satbot {

VariantConfig make_variant_config(Variant v, const PromptLibrary& prompts) {
    VariantConfig c;
    c.variant = v;
    switch (v) {
        case Variant::Alpha:
            c.fsm_enabled = c.kb_enabled = c.memory_enabled = true;
            break;
        case Variant::Beta:
            c.kb_enabled = true;
            c.system_prompt = prompts.beta_override.value_or(prompts.collapsed_agent_prompts());
            break;
        case Variant::Gamma:
            c.system_prompt = prompts.gamma;
            break;
    }
    return c;
}

std::vector<std::string> knowledge_base_strings(const KnowledgeBase& kb) {
    std::vector<std::string> out;
    std::istringstream theory(kb.theory_text());
    for (std::string line; std::getline(theory, line);) {
        if (line.size() >= 16) out.push_back(line);
    }
    for (const auto& ex : kb.exercises()) {
        out.push_back(ex.title);
        out.push_back(ex.body_text);
    }
    return out;
}

void self_check_variants(const PromptLibrary& prompts, const KnowledgeBase& kb) {
    const std::string collapsed = prompts.collapsed_agent_prompts();
    if (make_variant_config(Variant::Beta, prompts).system_prompt != collapsed) {
        throw Error(ErrorCode::ConfigInvalid, "Beta prompt differs from the collapsed Alpha agent prompts");
    }
    const std::string& gamma = prompts.gamma;
    for (const auto& s : knowledge_base_strings(kb)) {
        if (gamma.find(s) != std::string::npos) {
            throw Error(ErrorCode::ConfigInvalid, "Gamma prompt contains knowledge-base text: " + s);
        }
    }
    std::string lower = gamma;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower.find("exercise") != std::string::npos) {
        throw Error(ErrorCode::ConfigInvalid, "Gamma prompt refers to exercises");
    }
}

}  // namespace satbot
