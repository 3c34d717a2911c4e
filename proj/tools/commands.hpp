#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "topiclear/pipeline.hpp"

namespace topiclear::cli {

inline constexpr const char* kToolVersion = "0.1.0";

// Seed used when --seed is absent: $TOPICLEAR_SEED if set, else 0.
std::uint64_t default_seed();

struct ExtractOptions {
    std::filesystem::path corpus;
    std::filesystem::path embeddings;
    std::filesystem::path assignment_out = "assignment.csv";
    std::filesystem::path result_out = "result.json";
    std::filesystem::path manifest_out = "manifest.json";
    PipelineConfig config;
    unsigned threads = 1;
};

struct EvaluateOptions {
    std::filesystem::path assignment;
    std::filesystem::path corpus;
    std::filesystem::path report_out = "report.json";
    std::optional<std::filesystem::path> composition_csv;
    // Empty means every measure the inputs allow.
    std::vector<std::string> metrics;
    std::size_t coherence_top_n = 10;
    std::size_t display_top_n = 20;
    std::size_t uci_window = 10;
    std::size_t cv_window = 110;
};

struct NoiseStudyCliOptions {
    std::filesystem::path corpus;
    std::filesystem::path csv_out = "noise_study.csv";
    std::filesystem::path summary_out = "noise_summary.json";
    std::vector<double> p_grid;
    int replicates = 40;
    std::uint64_t seed = 0;
    bool coherence = true;
    std::size_t n_top = 10;
    std::size_t uci_window = 10;
    std::size_t cv_window = 110;
};

struct TopwordsOptions {
    std::filesystem::path assignment;
    std::filesystem::path corpus;
    std::size_t n = 20;
    std::optional<int> delta_tfidf_topic;
    std::optional<std::filesystem::path> match;
    std::optional<std::filesystem::path> csv_out;
    std::optional<std::filesystem::path> match_csv_out;
};

void cmd_extract(const ExtractOptions& opts, std::ostream& log);
void cmd_evaluate(const EvaluateOptions& opts, std::ostream& log);
void cmd_noise_study(const NoiseStudyCliOptions& opts, std::ostream& log);
void cmd_topwords(const TopwordsOptions& opts, std::ostream& out);

// Default grid 0, 0.1, ..., 0.8.
std::vector<double> default_p_grid();

// Parses argv for `topiclear extract|evaluate|noise-study|topwords` and runs
// the command. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace topiclear::cli
