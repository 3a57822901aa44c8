#include "satbot/analysis/chat_metrics.hpp"

#include <set>

namespace satbot::analysis {

double length_ratio(double agent_mean_length, double user_mean_length) {
    return user_mean_length > 0.0 ? agent_mean_length / user_mean_length : 0.0;
}

ChatMetrics chat_metrics(const std::vector<LogRow>& rows) {
    struct Acc {
        std::set<std::string> participants;
        std::size_t agent_n = 0, user_n = 0;
        std::size_t agent_chars = 0, user_chars = 0;
    };
    std::map<Variant, Acc> acc;
    for (const auto& row : rows) {
        auto& a = acc[row.variant];
        a.participants.insert(row.participant);
        if (row.role == Role::Agent) {
            ++a.agent_n;
            a.agent_chars += row.char_length;
        } else {
            ++a.user_n;
            a.user_chars += row.char_length;
        }
    }

    ChatMetrics out;
    if (rows.empty()) out.warnings.push_back("log is empty; all metrics are zero");
    for (Variant v : {Variant::Alpha, Variant::Beta, Variant::Gamma}) {
        GroupChatMetrics g;
        if (auto it = acc.find(v); it != acc.end()) {
            const auto& a = it->second;
            g.participants = a.participants.size();
            const double p = static_cast<double>(g.participants);
            g.agent = {a.agent_n, a.agent_n / p, a.agent_n ? static_cast<double>(a.agent_chars) / a.agent_n : 0.0};
            g.user = {a.user_n, a.user_n / p, a.user_n ? static_cast<double>(a.user_chars) / a.user_n : 0.0};
            g.agent_to_user_length_ratio = length_ratio(g.agent.mean_length, g.user.mean_length);
        }
        out.groups[v] = g;
    }
    return out;
}

}  // namespace satbot::analysis
