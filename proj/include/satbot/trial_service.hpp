#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <string>
#include <vector>

#include "json.hpp"

#include "satbot/assignment.hpp"
#include "satbot/exercise_rag.hpp"
#include "satbot/fsm.hpp"
#include "satbot/gateway.hpp"
#include "satbot/intent.hpp"
#include "satbot/log_schema.hpp"
#include "satbot/memory.hpp"
#include "satbot/prompts.hpp"
#include "satbot/protocol_calendar.hpp"
#include "satbot/repository.hpp"
#include "satbot/variants.hpp"

namespace satbot {

struct ServiceConfig {
    std::filesystem::path prompts_dir;
    std::filesystem::path kb_path;
    std::filesystem::path lexicon_path;
    /// SQLite file; ":memory:" keeps everything in process.
    std::string db_path = ":memory:";
    std::optional<std::uint64_t> assignment_seed;
    /// Seeds participant ids, tokens and session ids; random when absent.
    std::optional<std::uint64_t> id_seed;
    std::string admin_token;
    std::string pseudonym_salt = "satbot";
    /// Alpha agents separate short messages with this token.
    std::string message_delimiter = "<<<NEXT>>>";
    /// Messages of recent transcript handed to the selector.
    std::size_t selector_recent_messages = 6;
    bool debug_turns = false;
    MemoryConfig memory;
    FsmRules rules;
    StageTable stages;

    /// Relative paths resolve against `base_dir`. SATBOT_ADMIN_TOKEN
    /// overrides admin_token when set.
    static ServiceConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
    static ServiceConfig load(const std::filesystem::path& path);
};

struct Registration {
    std::string participant_id;
    std::string token;
    int session_day = 1;
};

struct TurnResult {
    std::vector<Message> agent_messages;
    std::optional<FsmState> new_state;  // Alpha only
    int session_day = 1;
    std::optional<nlohmann::json> debug;  // operator flag only; never sent to participants
};

struct ExportFilter {
    std::optional<Variant> variant;
    std::optional<Date> from;
    std::optional<Date> to;
};

/// The three-arm chat service. Turns for one participant are serialized
/// (a concurrent second turn fails with Busy); different participants run in
/// parallel. Every completed turn is persisted before it returns, and a
/// failed turn leaves no trace.
class TrialService {
public:
    TrialService(ServiceConfig config, std::shared_ptr<Gateway> gateway, std::shared_ptr<const Clock> clock);

    /// Assigns a variant and opens the first session. Generates an id when
    /// none is given. Throws AlreadyAssigned.
    Registration register_participant(std::optional<std::string> participant_id = std::nullopt);

    /// Throws UnknownParticipant, TerminalState, Busy, InvalidInput, or a
    /// gateway error (retryable).
    TurnResult handle_turn(const std::string& participant_id, const std::string& user_text);

    /// Opens a fresh session in GREETING_FORMALITY_NAME. The protocol day
    /// follows the calendar and Alpha memory carries over.
    Session restart_conversation(const std::string& participant_id);

    /// Current session transcript.
    std::vector<Message> history(const std::string& participant_id) const;

    /// Pseudonymized rows for the analysis tools. Throws Unauthorized unless
    /// `credential` equals the configured admin token.
    std::vector<LogRow> export_logs(const ExportFilter& filter, const std::string& credential) const;

    bool authenticate(const std::string& participant_id, const std::string& token) const;
    bool has_participant(const std::string& participant_id) const;

    // Operator / test accessors.
    Session current_session(const std::string& participant_id) const;
    std::vector<Session> sessions_of(const std::string& participant_id) const;
    ParticipantRecord participant(const std::string& participant_id) const;
    GroupAssignment assignment(const std::string& participant_id) const;
    std::vector<std::string> participant_ids() const;
    const MemoryStore& memory() const noexcept { return memory_; }
    const PromptLibrary& prompts() const noexcept { return prompts_; }
    const KnowledgeBase& knowledge_base() const noexcept { return kb_; }
    const IntentLexicon& lexicon() const noexcept { return lexicon_; }
    const VariantConfig& variant_config(Variant v) const;
    Gateway& gateway() noexcept { return *gateway_; }
    const ServiceConfig& config() const noexcept { return config_; }

    std::string pseudonym(const std::string& participant_id) const;

private:
    struct ParticipantSlot {
        std::mutex turn_mu;
        std::string token;  // immutable after registration
        ParticipantRecord record;
    };

    struct TurnContext;

    std::shared_ptr<ParticipantSlot> slot(const std::string& participant_id) const;
    Session new_session(const ParticipantRecord& p);
    std::string next_id(char prefix);

    void alpha_turn(TurnContext& ctx, const std::string& user_text, TurnResult& out);
    void beta_turn(TurnContext& ctx, const std::string& user_text, TurnResult& out);
    void gamma_turn(TurnContext& ctx, const std::string& user_text, TurnResult& out);

    void record(TurnContext& ctx, Message msg);
    void emit_alpha_agent(TurnContext& ctx, TurnResult& out);
    void run_exercise_selection(TurnContext& ctx);
    std::vector<ChatMessage> visible_transcript(const Session& s) const;

    ServiceConfig config_;
    std::shared_ptr<Gateway> gateway_;
    std::shared_ptr<const Clock> clock_;
    PromptLibrary prompts_;
    KnowledgeBase kb_;
    IntentLexicon lexicon_;
    std::map<Variant, VariantConfig> variants_;
    std::unique_ptr<SqliteRepository> repo_;
    std::unique_ptr<BlockRandomizer> randomizer_;
    MemoryStore memory_;

    mutable std::shared_mutex mu_;  // guards the maps below, not their contents
    std::map<std::string, std::shared_ptr<ParticipantSlot>> participants_;
    std::vector<std::string> registration_order_;
    std::map<std::string, Session> sessions_;

    std::mutex id_mu_;
    std::mt19937_64 id_rng_;
};

}  // namespace satbot
