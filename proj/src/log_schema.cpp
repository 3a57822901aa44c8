#include "satbot/log_schema.hpp"

#include <istream>
#include <sstream>

#include "satbot/error.hpp"

namespace satbot {

nlohmann::json to_json(const LogRow& row) {
    return {
        {"participant", row.participant},
        {"session", row.session},
        {"variant", to_string(row.variant)},
        {"role", to_string(row.role)},
        {"text", row.text},
        {"char_length", row.char_length},
        {"state", row.state ? nlohmann::json(to_string(*row.state)) : nlohmann::json(nullptr)},
        {"timestamp", format_timestamp(row.timestamp)},
    };
}

LogRow log_row_from_json(const nlohmann::json& j) {
    LogRow row;
    row.participant = j.value("participant", "");
    row.session = j.value("session", "");
    row.variant = parse_variant(j.at("variant").get<std::string>());
    row.role = parse_role(j.at("role").get<std::string>());
    row.text = j.value("text", "");
    row.char_length = j.at("char_length").get<std::size_t>();
    if (j.contains("state") && !j.at("state").is_null()) row.state = parse_fsm_state(j.at("state").get<std::string>());
    if (j.contains("timestamp")) row.timestamp = parse_timestamp(j.at("timestamp").get<std::string>());
    return row;
}

std::string to_ndjson(const std::vector<LogRow>& rows) {
    std::string out;
    for (const auto& r : rows) {
        out += to_json(r).dump();
        out += '\n';
    }
    return out;
}

std::vector<LogRow> parse_ndjson(std::istream& in) {
    std::vector<LogRow> rows;
    std::size_t line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            rows.push_back(log_row_from_json(nlohmann::json::parse(line)));
        } catch (const std::exception& e) {
            throw Error(ErrorCode::InvalidInput, "log line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return rows;
}

std::vector<LogRow> parse_ndjson(std::string_view content) {
    std::istringstream in{std::string(content)};
    return parse_ndjson(in);
}

}  // namespace satbot
