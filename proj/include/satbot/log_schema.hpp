#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "satbot/session.hpp"

namespace satbot {

/// One exported chat message. This is the hand-off format between the
/// service (`GET /admin/export`) and the analysis tools.
///
/// {"participant": "p3f9...", "session": "s1a2...", "variant": "Alpha",
///  "role": "agent", "text": "...", "char_length": 42,
///  "state": "EMOTION" | null, "timestamp": "2025-03-01T10:00:00Z"}
struct LogRow {
    std::string participant;  // pseudonym, never the raw id
    std::string session;
    Variant variant = Variant::Alpha;
    Role role = Role::User;
    std::string text;
    std::size_t char_length = 0;  // Unicode code points of text
    std::optional<FsmState> state;
    Timestamp timestamp{};
};

nlohmann::json to_json(const LogRow& row);
LogRow log_row_from_json(const nlohmann::json& j);

std::string to_ndjson(const std::vector<LogRow>& rows);
/// Blank lines are skipped. Throws InvalidInput naming the bad line.
std::vector<LogRow> parse_ndjson(std::istream& in);
std::vector<LogRow> parse_ndjson(std::string_view content);

}  // namespace satbot
