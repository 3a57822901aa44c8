#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "satbot/analysis/anova.hpp"
#include "satbot/analysis/chat_metrics.hpp"
#include "satbot/analysis/csv.hpp"
#include "satbot/analysis/sentiment.hpp"

namespace satbot::analysis {

/// Survey table: a header row with a `group` column and one column per item,
/// one respondent per row. Blank cells are skipped. Groups keep their first
/// appearance order. Throws InvalidInput for a missing column or a
/// non-numeric cell.
std::vector<GroupSample> load_survey(std::string_view csv, const std::string& metric);
std::vector<GroupSample> load_survey_file(const std::filesystem::path& path, const std::string& metric);

struct GroupStat {
    std::string label;
    double mean = 0.0;
    double sd = 0.0;  // sample SD (n-1); 0 for a single value
};

GroupStat describe(const GroupSample& g);

struct AnovaRow {
    std::string metric;
    std::vector<GroupStat> groups;
    double f_stat = 0.0;
    double p_perm = 1.0;
    double eta_squared = 0.0;
};

AnovaRow make_anova_row(std::string metric, std::span<const GroupSample> groups, const AnovaResult& result);

/// A header plus string cells, rendered either space-aligned or as CSV.
struct Table {
    CsvRow header;
    std::vector<CsvRow> rows;

    std::string aligned() const;
    std::string csv() const;
};

/// Columns: Metric, "<group> Mean (SD)" per group, F, p_perm, eta_squared.
/// `exact` writes shortest round-trip numbers (CSV); otherwise 3 decimals
/// and 4 for p_perm. All rows must share the same group labels.
Table anova_table(std::span<const AnovaRow> rows, bool exact);

/// Inverse of anova_table(rows, true).csv().
std::vector<AnovaRow> parse_anova_csv(std::string_view csv);

Table sentiment_table(const std::map<std::pair<Variant, Role>, SentimentSummary>& summary, bool exact);
Table chat_metrics_table(const ChatMetrics& metrics, bool exact);

}  // namespace satbot::analysis
