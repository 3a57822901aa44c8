#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "satbot/assignment.hpp"
#include "satbot/memory.hpp"
#include "satbot/session.hpp"

struct sqlite3;

namespace satbot {

struct ParticipantRecord {
    std::string participant_id;
    std::string token;
    GroupAssignment assignment;
    Date registration_date{};
    std::string current_session_id;
    std::vector<std::string> session_ids;  // oldest first
    std::vector<int> delivered_exercises;
};

nlohmann::json to_json(const ParticipantRecord& p);
ParticipantRecord participant_from_json(const nlohmann::json& j);

struct StoredState {
    std::vector<ParticipantRecord> participants;  // registration order
    std::vector<Session> sessions;
    std::vector<MemorySummary> summaries;  // creation order
    std::optional<std::uint64_t> assignment_seed;
};

/// Embedded SQLite store for participants, sessions and summaries. Every
/// save is one transaction. ":memory:" gives a throwaway database.
class SqliteRepository {
public:
    explicit SqliteRepository(const std::string& path);
    ~SqliteRepository();
    SqliteRepository(const SqliteRepository&) = delete;
    SqliteRepository& operator=(const SqliteRepository&) = delete;

    void save_seed(std::uint64_t seed);

    /// Upserts the participant and session and inserts new summaries in one
    /// transaction.
    void save(const ParticipantRecord& participant, const Session* session,
              const std::vector<MemorySummary>& new_summaries = {});

    StoredState load_all() const;

private:
    void exec(const char* sql) const;

    sqlite3* db_ = nullptr;
    mutable std::mutex mu_;
};

}  // namespace satbot
