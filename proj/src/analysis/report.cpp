#include "satbot/analysis/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>

#include "satbot/error.hpp"
#include "satbot/text.hpp"

namespace satbot::analysis {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    return std::string(s.substr(b, s.find_last_not_of(" \t") - b + 1));
}

std::string fixed(double v, int decimals) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string num(double v, bool exact, int decimals) { return exact ? format_double(v) : fixed(v, decimals); }

}  // namespace

std::vector<GroupSample> load_survey(std::string_view csv, const std::string& metric) {
    const auto rows = parse_csv(csv);
    if (rows.empty()) throw Error(ErrorCode::InvalidInput, "survey table is empty");
    const auto& header = rows.front();
    std::size_t group_col = header.size(), metric_col = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
        const auto h = lower(trim(header[i]));
        if (h == "group") group_col = i;
        if (h == lower(metric)) metric_col = i;
    }
    if (group_col == header.size()) throw Error(ErrorCode::InvalidInput, "survey table has no 'group' column");
    if (metric_col == header.size()) throw Error(ErrorCode::InvalidInput, "survey table has no '" + metric + "' column");

    std::vector<GroupSample> groups;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() <= std::max(group_col, metric_col)) {
            throw Error(ErrorCode::InvalidInput, "survey row " + std::to_string(r + 1) + " is short");
        }
        const auto label = trim(row[group_col]);
        auto it = std::find_if(groups.begin(), groups.end(), [&](const GroupSample& g) { return g.label == label; });
        if (it == groups.end()) {
            groups.push_back({label, {}});
            it = groups.end() - 1;
        }
        const auto cell = trim(row[metric_col]);
        if (cell.empty()) continue;
        double v = 0.0;
        try {
            v = parse_double(cell);
        } catch (const Error&) {
            throw Error(ErrorCode::InvalidInput, "survey row " + std::to_string(r + 1) + ": '" + cell + "' is not a number");
        }
        it->values.push_back(v);
    }
    return groups;
}

std::vector<GroupSample> load_survey_file(const std::filesystem::path& path, const std::string& metric) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return load_survey(ss.str(), metric);
}

GroupStat describe(const GroupSample& g) {
    GroupStat s{g.label, 0.0, 0.0};
    if (g.values.empty()) return s;
    for (double v : g.values) s.mean += v;
    s.mean /= static_cast<double>(g.values.size());
    if (g.values.size() > 1) {
        double ss = 0.0;
        for (double v : g.values) ss += (v - s.mean) * (v - s.mean);
        s.sd = std::sqrt(ss / static_cast<double>(g.values.size() - 1));
    }
    return s;
}

AnovaRow make_anova_row(std::string metric, std::span<const GroupSample> groups, const AnovaResult& result) {
    AnovaRow row{std::move(metric), {}, result.f_stat, result.p_perm, result.eta_squared};
    for (const auto& g : groups) row.groups.push_back(describe(g));
    return row;
}

std::string Table::aligned() const {
    std::vector<std::size_t> width(header.size(), 0);
    auto widen = [&](const CsvRow& r) {
        for (std::size_t i = 0; i < r.size() && i < width.size(); ++i) {
            width[i] = std::max(width[i], text::char_length(r[i]));
        }
    };
    widen(header);
    for (const auto& r : rows) widen(r);

    std::string out;
    auto emit = [&](const CsvRow& r) {
        std::string line;
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) line += "  ";
            line += r[i];
            if (i + 1 < r.size()) line.append(width[i] - text::char_length(r[i]), ' ');
        }
        out += line + "\n";
    };
    emit(header);
    std::size_t total = 0;
    for (std::size_t w : width) total += w;
    out += std::string(total + 2 * (width.empty() ? 0 : width.size() - 1), '-') + "\n";
    for (const auto& r : rows) emit(r);
    return out;
}

std::string Table::csv() const {
    std::string out = csv_line(header) + "\n";
    for (const auto& r : rows) out += csv_line(r) + "\n";
    return out;
}

Table anova_table(std::span<const AnovaRow> rows, bool exact) {
    Table t;
    t.header.push_back("Metric");
    if (!rows.empty()) {
        for (const auto& g : rows.front().groups) t.header.push_back(g.label + " Mean (SD)");
    }
    t.header.insert(t.header.end(), {"F", "p_perm", "eta_squared"});
    for (const auto& r : rows) {
        if (r.groups.size() + 4 != t.header.size()) {
            throw Error(ErrorCode::InvalidInput, "report rows must share the same groups");
        }
        CsvRow cells{r.metric};
        for (std::size_t i = 0; i < r.groups.size(); ++i) {
            if (r.groups[i].label + " Mean (SD)" != t.header[i + 1]) {
                throw Error(ErrorCode::InvalidInput, "report rows must share the same groups");
            }
            cells.push_back(num(r.groups[i].mean, exact, 3) + " (" + num(r.groups[i].sd, exact, 3) + ")");
        }
        cells.push_back(num(r.f_stat, exact, 3));
        cells.push_back(num(r.p_perm, exact, 4));
        cells.push_back(num(r.eta_squared, exact, 3));
        t.rows.push_back(std::move(cells));
    }
    return t;
}

std::vector<AnovaRow> parse_anova_csv(std::string_view csv) {
    const auto rows = parse_csv(csv);
    if (rows.empty()) throw Error(ErrorCode::InvalidInput, "report CSV is empty");
    const auto& header = rows.front();
    constexpr std::string_view suffix = " Mean (SD)";
    if (header.size() < 4 || header[0] != "Metric" || header[header.size() - 3] != "F" ||
        header[header.size() - 2] != "p_perm" || header.back() != "eta_squared") {
        throw Error(ErrorCode::InvalidInput, "report CSV header does not match the report schema");
    }
    std::vector<std::string> labels;
    for (std::size_t i = 1; i + 3 < header.size(); ++i) {
        const auto& h = header[i];
        if (h.size() <= suffix.size() || h.compare(h.size() - suffix.size(), suffix.size(), suffix) != 0) {
            throw Error(ErrorCode::InvalidInput, "report CSV column '" + h + "' is not a group column");
        }
        labels.push_back(h.substr(0, h.size() - suffix.size()));
    }
    static const std::regex cell_re(R"(^\s*(\S+)\s*\(\s*(\S+)\s*\)\s*$)");
    std::vector<AnovaRow> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != header.size()) throw Error(ErrorCode::InvalidInput, "report CSV row has the wrong width");
        AnovaRow a;
        a.metric = row[0];
        for (std::size_t i = 0; i < labels.size(); ++i) {
            std::smatch m;
            if (!std::regex_match(row[i + 1], m, cell_re)) {
                throw Error(ErrorCode::InvalidInput, "report CSV cell '" + row[i + 1] + "' is not 'mean (sd)'");
            }
            a.groups.push_back({labels[i], parse_double(m[1].str()), parse_double(m[2].str())});
        }
        a.f_stat = parse_double(row[row.size() - 3]);
        a.p_perm = parse_double(row[row.size() - 2]);
        a.eta_squared = parse_double(row.back());
        out.push_back(std::move(a));
    }
    return out;
}

Table sentiment_table(const std::map<std::pair<Variant, Role>, SentimentSummary>& summary, bool exact) {
    Table t;
    t.header = {"Group", "Role", "Messages", "Mean Score", "Positive (%)", "Neutral (%)", "Negative (%)"};
    for (const auto& [key, s] : summary) {
        t.rows.push_back({std::string(to_string(key.first)), std::string(to_string(key.second)),
                          std::to_string(s.messages), num(s.mean_score, exact, 3), num(s.positive_pct, exact, 1),
                          num(s.neutral_pct, exact, 1), num(s.negative_pct, exact, 1)});
    }
    return t;
}

Table chat_metrics_table(const ChatMetrics& metrics, bool exact) {
    Table t;
    t.header = {"Metric"};
    for (const auto& [v, g] : metrics.groups) t.header.push_back(std::string(to_string(v)));
    auto add = [&](std::string name, auto&& get) {
        CsvRow row{std::move(name)};
        for (const auto& [v, g] : metrics.groups) row.push_back(get(g));
        t.rows.push_back(std::move(row));
    };
    add("Participants", [](const GroupChatMetrics& g) { return std::to_string(g.participants); });
    add("Total Agent Messages", [](const GroupChatMetrics& g) { return std::to_string(g.agent.messages); });
    add("Total User Messages", [](const GroupChatMetrics& g) { return std::to_string(g.user.messages); });
    add("Agent Messages per Participant", [&](const GroupChatMetrics& g) { return num(g.agent.per_participant, exact, 1); });
    add("User Messages per Participant", [&](const GroupChatMetrics& g) { return num(g.user.per_participant, exact, 1); });
    add("Avg. Agent Msg. Length (Chars)", [&](const GroupChatMetrics& g) { return num(g.agent.mean_length, exact, 1); });
    add("Avg. User Msg. Length (Chars)", [&](const GroupChatMetrics& g) { return num(g.user.mean_length, exact, 1); });
    add("Agent:User Length Ratio", [&](const GroupChatMetrics& g) {
        return exact ? format_double(g.agent_to_user_length_ratio) : fixed(g.agent_to_user_length_ratio, 1) + ":1";
    });
    return t;
}

}  // namespace satbot::analysis
