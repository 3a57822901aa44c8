#pragma once

#include <string>

#include "satbot/exercise_rag.hpp"
#include "satbot/prompts.hpp"
#include "satbot/session.hpp"

namespace satbot {

struct VariantConfig {
    Variant variant = Variant::Alpha;
    bool fsm_enabled = false;
    bool kb_enabled = false;
    bool memory_enabled = false;
    /// Single system prompt for Beta (collapsed Alpha prompts) and Gamma.
    /// Empty for Alpha, which uses the per-state prompts.
    std::string system_prompt;
};

VariantConfig make_variant_config(Variant v, const PromptLibrary& prompts);

/// Startup check: Beta's prompt must equal the collapsed Alpha prompts byte
/// for byte, and Gamma's prompt must not mention the knowledge base (theory
/// lines, exercise titles or bodies, or the word "exercise"). Throws
/// ConfigInvalid describing the first violation.
void self_check_variants(const PromptLibrary& prompts, const KnowledgeBase& kb);

/// KB strings Gamma must never see: theory lines, titles, bodies.
std::vector<std::string> knowledge_base_strings(const KnowledgeBase& kb);

}  // namespace satbot
