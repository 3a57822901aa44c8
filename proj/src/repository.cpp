#include "satbot/repository.hpp"

#include <sqlite3.h>

#include "satbot/error.hpp"

namespace satbot {

nlohmann::json to_json(const ParticipantRecord& p) {
    return {
        {"participant_id", p.participant_id},
        {"token", p.token},
        {"assignment", to_json(p.assignment)},
        {"registration_date", format_date(p.registration_date)},
        {"current_session_id", p.current_session_id},
        {"session_ids", p.session_ids},
        {"delivered_exercises", p.delivered_exercises},
    };
}

ParticipantRecord participant_from_json(const nlohmann::json& j) {
    ParticipantRecord p;
    p.participant_id = j.at("participant_id").get<std::string>();
    p.token = j.at("token").get<std::string>();
    p.assignment = assignment_from_json(j.at("assignment"));
    p.registration_date = parse_date(j.at("registration_date").get<std::string>());
    p.current_session_id = j.at("current_session_id").get<std::string>();
    p.session_ids = j.at("session_ids").get<std::vector<std::string>>();
    p.delivered_exercises = j.at("delivered_exercises").get<std::vector<int>>();
    return p;
}

namespace {

class Statement {
public:
    Statement(sqlite3* db, const char* sql) : db_(db) {
        if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK) {
            throw Error(ErrorCode::StorageError, sqlite3_errmsg(db));
        }
    }
    ~Statement() { sqlite3_finalize(stmt_); }
    Statement(const Statement&) = delete;
    Statement& operator=(const Statement&) = delete;

    Statement& bind(int idx, const std::string& value) {
        sqlite3_bind_text(stmt_, idx, value.c_str(), static_cast<int>(value.size()), SQLITE_TRANSIENT);
        return *this;
    }

    void run() {
        if (sqlite3_step(stmt_) != SQLITE_DONE) throw Error(ErrorCode::StorageError, sqlite3_errmsg(db_));
    }

    bool next() {
        const int rc = sqlite3_step(stmt_);
        if (rc == SQLITE_ROW) return true;
        if (rc == SQLITE_DONE) return false;
        throw Error(ErrorCode::StorageError, sqlite3_errmsg(db_));
    }

    std::string column_text(int idx) const {
        const auto* p = reinterpret_cast<const char*>(sqlite3_column_text(stmt_, idx));
        return p ? std::string(p, static_cast<std::size_t>(sqlite3_column_bytes(stmt_, idx))) : std::string();
    }

private:
    sqlite3* db_;
    sqlite3_stmt* stmt_ = nullptr;
};

}  // namespace

SqliteRepository::SqliteRepository(const std::string& path) {
    if (sqlite3_open(path.c_str(), &db_) != SQLITE_OK) {
        std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
        sqlite3_close(db_);
        throw Error(ErrorCode::StorageError, "cannot open " + path + ": " + msg);
    }
    exec("PRAGMA journal_mode=WAL;");
    exec("CREATE TABLE IF NOT EXISTS participants ("
         " participant_id TEXT PRIMARY KEY, seq INTEGER NOT NULL, doc TEXT NOT NULL);"
         "CREATE TABLE IF NOT EXISTS sessions ("
         " session_id TEXT PRIMARY KEY, participant_id TEXT NOT NULL, seq INTEGER NOT NULL, doc TEXT NOT NULL);"
         "CREATE TABLE IF NOT EXISTS summaries ("
         " summary_id TEXT PRIMARY KEY, session_id TEXT NOT NULL, participant_id TEXT NOT NULL,"
         " seq INTEGER NOT NULL, doc TEXT NOT NULL);"
         "CREATE TABLE IF NOT EXISTS meta (key TEXT PRIMARY KEY, value TEXT NOT NULL);");
}

SqliteRepository::~SqliteRepository() { sqlite3_close(db_); }

void SqliteRepository::exec(const char* sql) const {
    char* err = nullptr;
    if (sqlite3_exec(db_, sql, nullptr, nullptr, &err) != SQLITE_OK) {
        std::string msg = err ? err : "unknown error";
        sqlite3_free(err);
        throw Error(ErrorCode::StorageError, msg);
    }
}

void SqliteRepository::save_seed(std::uint64_t seed) {
    std::lock_guard lock(mu_);
    Statement(db_, "INSERT OR REPLACE INTO meta(key, value) VALUES ('assignment_seed', ?1)")
        .bind(1, std::to_string(seed))
        .run();
}

void SqliteRepository::save(const ParticipantRecord& participant, const Session* session,
                            const std::vector<MemorySummary>& new_summaries) {
    std::lock_guard lock(mu_);
    exec("BEGIN IMMEDIATE;");
    try {
        // seq keeps first-insert order across upserts.
        Statement(db_,
                  "INSERT INTO participants(participant_id, seq, doc) VALUES"
                  " (?1, (SELECT COALESCE(MAX(seq), 0) + 1 FROM participants), ?2)"
                  " ON CONFLICT(participant_id) DO UPDATE SET doc = excluded.doc")
            .bind(1, participant.participant_id)
            .bind(2, to_json(participant).dump())
            .run();
        if (session) {
            Statement(db_,
                      "INSERT INTO sessions(session_id, participant_id, seq, doc) VALUES"
                      " (?1, ?2, (SELECT COALESCE(MAX(seq), 0) + 1 FROM sessions), ?3)"
                      " ON CONFLICT(session_id) DO UPDATE SET doc = excluded.doc")
                .bind(1, session->session_id)
                .bind(2, session->participant_id)
                .bind(3, to_json(*session).dump())
                .run();
        }
        for (const auto& s : new_summaries) {
            Statement(db_,
                      "INSERT OR REPLACE INTO summaries(summary_id, session_id, participant_id, seq, doc) VALUES"
                      " (?1, ?2, ?3, (SELECT COALESCE(MAX(seq), 0) + 1 FROM summaries), ?4)")
                .bind(1, s.summary_id)
                .bind(2, s.session_id)
                .bind(3, s.participant_id)
                .bind(4, to_json(s).dump())
                .run();
        }
        exec("COMMIT;");
    } catch (...) {
        exec("ROLLBACK;");
        throw;
    }
}

StoredState SqliteRepository::load_all() const {
    std::lock_guard lock(mu_);
    StoredState out;
    {
        Statement st(db_, "SELECT doc FROM participants ORDER BY seq");
        while (st.next()) out.participants.push_back(participant_from_json(nlohmann::json::parse(st.column_text(0))));
    }
    {
        Statement st(db_, "SELECT doc FROM sessions ORDER BY seq");
        while (st.next()) out.sessions.push_back(session_from_json(nlohmann::json::parse(st.column_text(0))));
    }
    {
        Statement st(db_, "SELECT doc FROM summaries ORDER BY seq");
        while (st.next()) out.summaries.push_back(summary_from_json(nlohmann::json::parse(st.column_text(0))));
    }
    {
        Statement st(db_, "SELECT value FROM meta WHERE key = 'assignment_seed'");
        if (st.next()) out.assignment_seed = std::stoull(st.column_text(0));
    }
    return out;
}

}  // namespace satbot
