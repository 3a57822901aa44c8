#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"

#include "satbot/analysis/anova.hpp"
#include "satbot/analysis/chat_metrics.hpp"
#include "satbot/analysis/report.hpp"
#include "satbot/analysis/sentiment.hpp"
#include "satbot/error.hpp"
#include "satbot/log_schema.hpp"

namespace an = satbot::analysis;

namespace {

std::vector<satbot::LogRow> read_log(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw satbot::Error(satbot::ErrorCode::InvalidInput, "cannot open " + path);
    return satbot::parse_ndjson(in);
}

void emit(const an::Table& shown, const an::Table& exact, const std::string& csv_path) {
    std::cout << shown.aligned();
    if (csv_path.empty()) return;
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw satbot::Error(satbot::ErrorCode::InvalidInput, "cannot write " + csv_path);
    out << exact.csv();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Survey and chat-log analysis"};
    app.require_subcommand(1);

    auto* anova = app.add_subcommand("anova", "Permutation one-way ANOVA with eta squared");
    std::string input;
    std::vector<std::string> metrics;
    int permutations = 5000;
    std::uint64_t seed = 42;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    std::string csv_path;
    anova->add_option("--input", input, "Survey CSV (group column plus one column per item)")
        ->required()
        ->check(CLI::ExistingFile);
    anova->add_option("--metric", metrics, "Item column(s) to test")->required();
    anova->add_option("--permutations", permutations, "Label shuffles")->check(CLI::PositiveNumber);
    anova->add_option("--seed", seed, "RNG seed");
    anova->add_option("--threads", threads, "Worker threads (results do not depend on this)");
    anova->add_option("--csv", csv_path, "Also write the table as CSV");

    auto* sentiment = app.add_subcommand("sentiment", "Lexicon sentiment by group and role");
    std::string log_path;
    std::string lexicon_path;
    sentiment->add_option("--log", log_path, "Exported NDJSON log")->required()->check(CLI::ExistingFile);
    sentiment->add_option("--lexicon", lexicon_path, "Sentiment word lists")->required()->check(CLI::ExistingFile);
    sentiment->add_option("--csv", csv_path, "Also write the table as CSV");

    auto* chat = app.add_subcommand("chat-metrics", "Message counts and lengths by group");
    chat->add_option("--log", log_path, "Exported NDJSON log")->required()->check(CLI::ExistingFile);
    chat->add_option("--csv", csv_path, "Also write the table as CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (anova->parsed()) {
            std::vector<an::AnovaRow> rows;
            for (const auto& metric : metrics) {
                const auto groups = an::load_survey_file(input, metric);
                const auto result = an::permutation_anova(groups, permutations, seed, threads);
                if (result.degenerate) std::cerr << "warning: " << metric << ": zero within-group variance, F is infinite\n";
                rows.push_back(an::make_anova_row(metric, groups, result));
            }
            emit(an::anova_table(rows, false), an::anova_table(rows, true), csv_path);
        } else if (sentiment->parsed()) {
            const auto lexicon = an::SentimentLexicon::load(lexicon_path);
            const auto summary = an::summarize_sentiment(read_log(log_path), lexicon);
            emit(an::sentiment_table(summary, false), an::sentiment_table(summary, true), csv_path);
        } else if (chat->parsed()) {
            const auto metrics_out = an::chat_metrics(read_log(log_path));
            for (const auto& w : metrics_out.warnings) std::cerr << "warning: " << w << '\n';
            emit(an::chat_metrics_table(metrics_out, false), an::chat_metrics_table(metrics_out, true), csv_path);
        }
    } catch (const satbot::Error& e) {
        std::cerr << satbot::to_string(e.code()) << ": " << e.what() << '\n';
        return 1;
    }
    return 0;
}
