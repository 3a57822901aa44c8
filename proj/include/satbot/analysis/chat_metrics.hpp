#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "satbot/log_schema.hpp"

namespace satbot::analysis {

struct RoleMetrics {
    std::size_t messages = 0;
    double per_participant = 0.0;
    double mean_length = 0.0;  // characters
};

struct GroupChatMetrics {
    std::size_t participants = 0;  // distinct pseudonyms in the log
    RoleMetrics agent;
    RoleMetrics user;
    double agent_to_user_length_ratio = 0.0;
};

struct ChatMetrics {
    std::map<Variant, GroupChatMetrics> groups;  // all three variants, zeroed when absent
    std::vector<std::string> warnings;
};

/// Mean agent length over mean user length; 0 when the user mean is 0.
double length_ratio(double agent_mean_length, double user_mean_length);

/// Counts, per-participant rates and mean lengths from exported rows.
/// Independent of row order.
ChatMetrics chat_metrics(const std::vector<LogRow>& rows);

}  // namespace satbot::analysis
