#include "satbot/trial_service.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <random>

#include "satbot/error.hpp"
#include "satbot/judges.hpp"
#include "satbot/random.hpp"
#include "satbot/text.hpp"

namespace satbot {

// ---------------------------------------------------------------------------
// Configuration

ServiceConfig ServiceConfig::from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
    auto path = [&](const char* key) -> std::filesystem::path {
        if (!j.contains(key)) throw Error(ErrorCode::ConfigInvalid, std::string("config is missing '") + key + "'");
        std::filesystem::path p = j.at(key).get<std::string>();
        return p.is_absolute() ? p : base_dir / p;
    };
    ServiceConfig c;
    c.prompts_dir = path("prompts_dir");
    c.kb_path = path("kb_path");
    c.lexicon_path = path("lexicon_path");
    if (j.contains("db_path")) {
        const auto db = j.at("db_path").get<std::string>();
        c.db_path = (db == ":memory:" || std::filesystem::path(db).is_absolute()) ? db : (base_dir / db).string();
    }
    if (j.contains("assignment_seed")) c.assignment_seed = j.at("assignment_seed").get<std::uint64_t>();
    if (j.contains("id_seed")) c.id_seed = j.at("id_seed").get<std::uint64_t>();
    c.admin_token = j.value("admin_token", "");
    c.pseudonym_salt = j.value("pseudonym_salt", c.pseudonym_salt);
    c.message_delimiter = j.value("message_delimiter", c.message_delimiter);
    c.selector_recent_messages = j.value("selector_recent_messages", c.selector_recent_messages);
    c.debug_turns = j.value("debug_turns", false);
    if (j.contains("memory")) {
        c.memory.cadence = j.at("memory").value("cadence", c.memory.cadence);
        c.memory.budget_chars = j.at("memory").value("budget_chars", c.memory.budget_chars);
    }
    if (j.contains("rules")) {
        const auto& r = j.at("rules");
        c.rules.min_emotion_messages = r.value("min_emotion_messages", c.rules.min_emotion_messages);
        c.rules.min_event_messages = r.value("min_event_messages", c.rules.min_event_messages);
        c.rules.min_open_ended_messages = r.value("min_open_ended_messages", c.rules.min_open_ended_messages);
    }
    if (j.contains("stage_table")) {
        const auto& t = j.at("stage_table");
        if (!t.is_array() || t.size() != kProtocolDays) {
            throw Error(ErrorCode::ConfigInvalid, "stage_table must list a stage for each of the 8 days");
        }
        for (std::size_t i = 0; i < kProtocolDays; ++i) c.stages.by_day[i] = parse_stage(t[i].get<std::string>());
    }
    if (const char* tok = std::getenv("SATBOT_ADMIN_TOKEN"); tok && *tok) c.admin_token = tok;
    return c;
}

ServiceConfig ServiceConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ConfigInvalid, "cannot open config " + path.string());
    return from_json(nlohmann::json::parse(in), path.parent_path());
}

// ---------------------------------------------------------------------------
// Construction and bookkeeping

struct TrialService::TurnContext {
    ParticipantRecord participant;
    Session session;
    const VariantConfig* variant = nullptr;
    std::vector<MemorySummary> new_summaries;
    nlohmann::json debug = nlohmann::json::object();
};

TrialService::TrialService(ServiceConfig config, std::shared_ptr<Gateway> gateway, std::shared_ptr<const Clock> clock)
    : config_(std::move(config)),
      gateway_(std::move(gateway)),
      clock_(std::move(clock)),
      prompts_(PromptLibrary::load(config_.prompts_dir)),
      kb_(KnowledgeBase::load(config_.kb_path, config_.stages)),
      lexicon_(IntentLexicon::load(config_.lexicon_path)) {
    if (!gateway_) throw Error(ErrorCode::ConfigInvalid, "service needs a gateway");
    if (!clock_) clock_ = std::make_shared<SystemClock>();

    self_check_variants(prompts_, kb_);
    for (Variant v : {Variant::Alpha, Variant::Beta, Variant::Gamma}) variants_[v] = make_variant_config(v, prompts_);

    repo_ = std::make_unique<SqliteRepository>(config_.db_path);
    StoredState stored = repo_->load_all();

    std::uint64_t seed = 0;
    if (stored.assignment_seed) {
        seed = *stored.assignment_seed;
    } else if (config_.assignment_seed) {
        seed = *config_.assignment_seed;
    } else {
        std::random_device rd;
        seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    }
    repo_->save_seed(seed);
    randomizer_ = std::make_unique<BlockRandomizer>(seed);

    for (auto& p : stored.participants) {
        randomizer_->restore(p.assignment);
        registration_order_.push_back(p.participant_id);
        auto sl = std::make_shared<ParticipantSlot>();
        sl->token = p.token;
        sl->record = std::move(p);
        participants_.emplace(sl->record.participant_id, std::move(sl));
    }
    for (auto& s : stored.sessions) {
        memory_.register_session(s.session_id, s.participant_id);
        sessions_.emplace(s.session_id, std::move(s));
    }
    for (auto& s : stored.summaries) memory_.add(std::move(s));

    std::uint64_t id_seed = 0;
    if (config_.id_seed) {
        id_seed = stream_seed(*config_.id_seed, participants_.size() + sessions_.size());
    } else {
        std::random_device rd;
        id_seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    }
    id_rng_.seed(id_seed);
}

std::string TrialService::next_id(char prefix) {
    static constexpr char kHex[] = "0123456789abcdef";
    std::lock_guard lock(id_mu_);
    for (;;) {
        std::string id(1, prefix);
        std::uint64_t v = id_rng_();
        for (int i = 0; i < 16; ++i, v >>= 4) id += kHex[v & 0xF];
        std::shared_lock maps(mu_);
        if (!participants_.contains(id) && !sessions_.contains(id)) return id;
    }
}

std::shared_ptr<TrialService::ParticipantSlot> TrialService::slot(const std::string& participant_id) const {
    std::shared_lock lock(mu_);
    auto it = participants_.find(participant_id);
    if (it == participants_.end()) throw Error(ErrorCode::UnknownParticipant, participant_id);
    return it->second;
}

Session TrialService::new_session(const ParticipantRecord& p) {
    Session s;
    s.session_id = next_id('s');
    s.participant_id = p.participant_id;
    s.variant = p.assignment.variant;
    s.registration_date = p.registration_date;
    s.protocol_day = compute_protocol_day(p.registration_date, clock_->today());
    s.stage = stage_for_day(s.protocol_day, config_.stages);
    memory_.register_session(s.session_id, p.participant_id);
    return s;
}

const VariantConfig& TrialService::variant_config(Variant v) const { return variants_.at(v); }

std::string TrialService::pseudonym(const std::string& participant_id) const {
    // FNV-1a over salt and id.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](std::string_view s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
    };
    feed(config_.pseudonym_salt);
    feed(":");
    feed(participant_id);
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out = "p";
    for (int i = 0; i < 16; ++i, h >>= 4) out += kHex[h & 0xF];
    return out;
}

// ---------------------------------------------------------------------------
// Registration and restart

Registration TrialService::register_participant(std::optional<std::string> participant_id) {
    ParticipantRecord p;
    p.participant_id = participant_id ? *participant_id : next_id('u');
    if (p.participant_id.empty()) throw Error(ErrorCode::InvalidInput, "participant id is empty");
    {
        std::shared_lock lock(mu_);
        if (participants_.contains(p.participant_id)) throw Error(ErrorCode::AlreadyAssigned, p.participant_id);
    }
    const std::string token_a = next_id('t');
    p.token = token_a.substr(1) + next_id('t').substr(1);
    p.assignment = randomizer_->assign(p.participant_id, clock_->now());
    p.registration_date = clock_->today();

    Session s = new_session(p);
    p.current_session_id = s.session_id;
    p.session_ids.push_back(s.session_id);
    repo_->save(p, &s);

    Registration reg{p.participant_id, p.token, s.protocol_day};
    std::unique_lock lock(mu_);
    auto sl = std::make_shared<ParticipantSlot>();
    sl->token = p.token;
    sl->record = std::move(p);
    participants_.emplace(reg.participant_id, std::move(sl));
    registration_order_.push_back(reg.participant_id);
    sessions_.emplace(s.session_id, std::move(s));
    return reg;
}

Session TrialService::restart_conversation(const std::string& participant_id) {
    auto sl = slot(participant_id);
    std::unique_lock turn(sl->turn_mu, std::try_to_lock);
    if (!turn.owns_lock()) throw Error(ErrorCode::Busy, "a turn is in progress for " + participant_id);

    ParticipantRecord p = sl->record;
    Session s = new_session(p);
    p.current_session_id = s.session_id;
    p.session_ids.push_back(s.session_id);
    repo_->save(p, &s);

    sl->record = std::move(p);
    std::unique_lock lock(mu_);
    sessions_[s.session_id] = s;
    return s;
}

// ---------------------------------------------------------------------------
// Turns

std::vector<ChatMessage> TrialService::visible_transcript(const Session& s) const {
    std::vector<ChatMessage> out;
    out.reserve(s.transcript.size());
    for (const auto& m : s.transcript) {
        out.push_back({m.role == Role::User ? ChatRole::User : ChatRole::Assistant, m.text});
    }
    return out;
}

void TrialService::record(TurnContext& ctx, Message msg) {
    ctx.session = record_message(std::move(ctx.session), std::move(msg));
    if (!ctx.variant->memory_enabled) return;
    if (auto s = maybe_summarize(ctx.session, memory_, prompts_, *gateway_, *clock_, config_.memory)) {
        ctx.new_summaries.push_back(std::move(*s));
    }
}

TurnResult TrialService::handle_turn(const std::string& participant_id, const std::string& user_text) {
    auto sl = slot(participant_id);
    std::unique_lock turn(sl->turn_mu, std::try_to_lock);
    if (!turn.owns_lock()) throw Error(ErrorCode::Busy, "a turn is in progress for " + participant_id);

    if (user_text.find_first_not_of(" \t\r\n") == std::string::npos) {
        throw Error(ErrorCode::InvalidInput, "message text is empty");
    }

    TurnContext ctx;
    ctx.participant = sl->record;
    {
        std::shared_lock lock(mu_);
        ctx.session = sessions_.at(ctx.participant.current_session_id);
    }
    if (ctx.session.current_state == FsmState::End) {
        throw Error(ErrorCode::TerminalState, "the conversation has ended; restart to begin a new one");
    }
    ctx.variant = &variants_.at(ctx.participant.assignment.variant);
    ctx.session.protocol_day = compute_protocol_day(ctx.participant.registration_date, clock_->today());
    ctx.session.stage = stage_for_day(ctx.session.protocol_day, config_.stages);

    TurnResult out;
    out.session_day = ctx.session.protocol_day;
    try {
        switch (ctx.variant->variant) {
            case Variant::Alpha: alpha_turn(ctx, user_text, out); break;
            case Variant::Beta: beta_turn(ctx, user_text, out); break;
            case Variant::Gamma: gamma_turn(ctx, user_text, out); break;
        }
        repo_->save(ctx.participant, &ctx.session, ctx.new_summaries);
    } catch (...) {
        std::vector<std::string> ids;
        for (const auto& s : ctx.new_summaries) ids.push_back(s.summary_id);
        memory_.remove(ids);
        throw;
    }

    if (config_.debug_turns) {
        ctx.debug["variant"] = to_string(ctx.variant->variant);
        ctx.debug["state"] = to_string(ctx.session.current_state);
        out.debug = std::move(ctx.debug);
    }
    sl->record = std::move(ctx.participant);
    std::unique_lock lock(mu_);
    sessions_[ctx.session.session_id] = std::move(ctx.session);
    return out;
}

void TrialService::alpha_turn(TurnContext& ctx, const std::string& user_text, TurnResult& out) {
    Session& s = ctx.session;
    const FsmState before = s.current_state;
    record(ctx, Message{Role::User, user_text, clock_->now(), before});

    TransitionInputs inputs;
    if (is_conversational(before)) {
        const auto window = state_window(s, before);
        SufficiencyVerdict verdict;
        try {
            verdict = judge_sufficiency(before, window, prompts_, *gateway_);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::MalformedJudgeReply) throw;
            verdict.sufficient = kMalformedJudgeIsSufficient;
            verdict.rationale = e.what();
            ctx.debug["malformed_judge"] = true;
        }
        if (before == FsmState::GreetingFormalityName) {
            inputs.intent = classify_intent(user_text, lexicon_);
            if (verdict.user_name) s.user_name = verdict.user_name;
            if (verdict.formality) s.formality = parse_formality(*verdict.formality);
        }
        inputs.verdict = std::move(verdict);
    } else if (is_decision(before)) {
        inputs.intent = classify_intent(user_text, lexicon_);
    }

    nlohmann::json reasons = nlohmann::json::array();
    TransitionDecision decision{before, TransitionAction::AwaitUser, TransitionReason::Unconditional};
    try {
        decision = advance(s, inputs, config_.rules);
        reasons.push_back(to_string(decision.reason));
    } catch (const Error& e) {
        if (e.code() != ErrorCode::InvalidInput) throw;
        reasons.push_back("Reprompt");
    }
    if (before == FsmState::GreetingFormalityName && decision.reason == TransitionReason::IntentNegative) {
        s.formality = Formality::Informal;
        s.user_name.reset();
    }
    s.current_state = decision.next_state;

    while (decision.action == TransitionAction::InvokeAgent) {
        if (s.current_state == FsmState::EmotionDecider) {
            const auto window = state_window(s, FsmState::Emotion);
            const auto polarity = decide_polarity(window, prompts_, *gateway_);
            if (polarity.defaulted) ctx.debug["polarity_defaulted"] = true;
            TransitionInputs in;
            in.polarity = polarity.polarity;
            decision = advance(s, in, config_.rules);
        } else if (s.current_state == FsmState::Thanks) {
            emit_alpha_agent(ctx, out);
            decision = advance(s, {}, config_.rules);
        } else {
            break;
        }
        reasons.push_back(to_string(decision.reason));
        s.current_state = decision.next_state;
    }

    if (s.current_state == FsmState::ExerciseSuggestion && before != FsmState::ExerciseSuggestion) {
        run_exercise_selection(ctx);
    }

    if (s.current_state == FsmState::End) {
        auto final = commit_final_summary(s, memory_, prompts_, *gateway_, *clock_);
        ctx.new_summaries.push_back(std::move(final));
    } else {
        emit_alpha_agent(ctx, out);
    }
    out.new_state = s.current_state;
    ctx.debug["from"] = to_string(before);
    ctx.debug["reasons"] = std::move(reasons);
}

void TrialService::run_exercise_selection(TurnContext& ctx) {
    Session& s = ctx.session;
    const auto candidates = filter_candidates(kb_, s.protocol_day, s.stage);

    SelectionContext context;
    context.memory = memory_view(memory_, s.session_id, config_.memory);
    const std::size_t n = std::min(config_.selector_recent_messages, s.transcript.size());
    context.recent_transcript.assign(s.transcript.end() - static_cast<std::ptrdiff_t>(n), s.transcript.end());

    const auto result = select_exercise(candidates, context, ctx.participant.delivered_exercises, prompts_, *gateway_);
    s.current_exercise_id = result.chosen.exercise_id;
    s.current_exercise_text = result.personalized_text;
    ctx.participant.delivered_exercises.push_back(result.chosen.exercise_id);
    ctx.debug["exercise"] = result.chosen.exercise_id;
    ctx.debug["selector_fallback"] = result.fallback;
}

void TrialService::emit_alpha_agent(TurnContext& ctx, TurnResult& out) {
    Session& s = ctx.session;
    const FsmState state = s.current_state;

    ChatRequest req;
    req.system_prompt = prompts_.agent_prompt(state);
    req.purpose = Purpose::StateAgent;
    req.determinism = Determinism::Sampled;
    req.context_key = std::string(to_string(state));
    req.messages.push_back({ChatRole::System, "You may split your reply into several short messages separated by " +
                                                  config_.message_delimiter + "."});
    req.messages.push_back({ChatRole::System, "Knowledge base:\n" + kb_.theory_text()});
    req.messages.push_back({ChatRole::System, "Long-term memory:\n" + memory_view(memory_, s.session_id, config_.memory).text()});
    std::string profile = "Protocol day " + std::to_string(s.protocol_day) + " (" + std::string(to_string(s.stage)) +
                          "). Formality: " + std::string(to_string(s.formality)) + ".";
    if (s.user_name) profile += " Name: " + *s.user_name + ".";
    req.messages.push_back({ChatRole::System, profile});
    const bool exercise_state = state == FsmState::ExerciseSuggestion || state == FsmState::ExerciseExplanation ||
                                state == FsmState::Feedback;
    if (exercise_state && s.current_exercise_id) {
        req.messages.push_back({ChatRole::System, "Current exercise (id=" + std::to_string(*s.current_exercise_id) +
                                                      "):\n" + s.current_exercise_text});
    }
    for (auto& m : visible_transcript(s)) req.messages.push_back(std::move(m));

    const std::string reply = gateway_->complete(req).text;

    std::vector<std::string> parts;
    const std::string& delim = config_.message_delimiter;
    for (std::size_t pos = 0;;) {
        const auto next = delim.empty() ? std::string::npos : reply.find(delim, pos);
        std::string piece = reply.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        const auto b = piece.find_first_not_of(" \t\r\n");
        if (b != std::string::npos) {
            const auto e = piece.find_last_not_of(" \t\r\n");
            parts.push_back(piece.substr(b, e - b + 1));
        }
        if (next == std::string::npos) break;
        pos = next + delim.size();
    }
    if (parts.empty()) throw Error(ErrorCode::GatewayRejected, "agent reply was empty");

    for (auto& text : parts) {
        Message m{Role::Agent, std::move(text), clock_->now(), state};
        out.agent_messages.push_back(m);
        record(ctx, std::move(m));
    }
}

void TrialService::beta_turn(TurnContext& ctx, const std::string& user_text, TurnResult& out) {
    Session& s = ctx.session;
    record(ctx, Message{Role::User, user_text, clock_->now(), s.current_state});

    if (!s.current_exercise_id) {
        const Exercise& ex = static_schedule_pick(s.protocol_day, ctx.participant.delivered_exercises, kb_);
        s.current_exercise_id = ex.exercise_id;
        s.current_exercise_text = ex.title + "\n" + ex.body_text;
        ctx.participant.delivered_exercises.push_back(ex.exercise_id);
    }

    ChatRequest req;
    req.system_prompt = ctx.variant->system_prompt;
    req.purpose = Purpose::StateAgent;
    req.determinism = Determinism::Sampled;
    req.messages.push_back({ChatRole::System, "Knowledge base:\n" + kb_.theory_text()});
    req.messages.push_back({ChatRole::System, "Today's exercise (id=" + std::to_string(*s.current_exercise_id) +
                                                  "):\n" + s.current_exercise_text});
    for (auto& m : visible_transcript(s)) req.messages.push_back(std::move(m));

    std::string reply = gateway_->complete(req).text;
    if (reply.find_first_not_of(" \t\r\n") == std::string::npos) {
        throw Error(ErrorCode::GatewayRejected, "agent reply was empty");
    }
    Message m{Role::Agent, std::move(reply), clock_->now(), s.current_state};
    out.agent_messages.push_back(m);
    record(ctx, std::move(m));
}

void TrialService::gamma_turn(TurnContext& ctx, const std::string& user_text, TurnResult& out) {
    Session& s = ctx.session;
    record(ctx, Message{Role::User, user_text, clock_->now(), s.current_state});

    ChatRequest req;
    req.system_prompt = ctx.variant->system_prompt;
    req.purpose = Purpose::StateAgent;
    req.determinism = Determinism::Sampled;
    req.messages = visible_transcript(s);

    std::string reply = gateway_->complete(req).text;
    if (reply.find_first_not_of(" \t\r\n") == std::string::npos) {
        throw Error(ErrorCode::GatewayRejected, "agent reply was empty");
    }
    Message m{Role::Agent, std::move(reply), clock_->now(), s.current_state};
    out.agent_messages.push_back(m);
    record(ctx, std::move(m));
}

// ---------------------------------------------------------------------------
// Queries and export

std::vector<Message> TrialService::history(const std::string& participant_id) const {
    return current_session(participant_id).transcript;
}

Session TrialService::current_session(const std::string& participant_id) const {
    auto sl = slot(participant_id);
    std::lock_guard turn(sl->turn_mu);
    std::shared_lock lock(mu_);
    return sessions_.at(sl->record.current_session_id);
}

std::vector<Session> TrialService::sessions_of(const std::string& participant_id) const {
    auto sl = slot(participant_id);
    std::lock_guard turn(sl->turn_mu);
    std::shared_lock lock(mu_);
    std::vector<Session> out;
    for (const auto& id : sl->record.session_ids) out.push_back(sessions_.at(id));
    return out;
}

ParticipantRecord TrialService::participant(const std::string& participant_id) const {
    auto sl = slot(participant_id);
    std::lock_guard turn(sl->turn_mu);
    return sl->record;
}

GroupAssignment TrialService::assignment(const std::string& participant_id) const {
    return participant(participant_id).assignment;
}

std::vector<std::string> TrialService::participant_ids() const {
    std::shared_lock lock(mu_);
    return registration_order_;
}

bool TrialService::authenticate(const std::string& participant_id, const std::string& token) const {
    std::shared_ptr<ParticipantSlot> sl;
    try {
        sl = slot(participant_id);
    } catch (const Error&) {
        return false;
    }
    return !token.empty() && sl->token == token;
}

bool TrialService::has_participant(const std::string& participant_id) const {
    std::shared_lock lock(mu_);
    return participants_.contains(participant_id);
}

std::vector<LogRow> TrialService::export_logs(const ExportFilter& filter, const std::string& credential) const {
    if (config_.admin_token.empty() || credential != config_.admin_token) {
        throw Error(ErrorCode::Unauthorized, "export requires the operator token");
    }
    std::vector<LogRow> rows;
    for (const auto& pid : participant_ids()) {
        const ParticipantRecord p = participant(pid);
        const Variant v = p.assignment.variant;
        if (filter.variant && *filter.variant != v) continue;
        const std::string alias = pseudonym(pid);
        for (const auto& session : sessions_of(pid)) {
            for (const auto& m : session.transcript) {
                const Date d = date_of(m.timestamp);
                if (filter.from && d < *filter.from) continue;
                if (filter.to && d > *filter.to) continue;
                LogRow row;
                row.participant = alias;
                row.session = session.session_id;
                row.variant = v;
                row.role = m.role;
                row.text = m.text;
                row.char_length = text::char_length(m.text);
                if (variants_.at(v).fsm_enabled) row.state = m.state_at_send;
                row.timestamp = m.timestamp;
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

}  // namespace satbot
