#pragma once

#include <map>
#include <string>
#include <vector>

#include "relmine/runtime.hpp"

namespace relmine {

// F values are printed multiplied by 100 unless raw fractions are requested.
struct ReportOptions {
    bool raw = false;
    int top = 10; // rows in the human-readable motif table
};

std::string estimate_report_json(const FEstimate& est, const JobConfig& cfg,
                                 const ReportOptions& opts,
                                 const std::vector<std::pair<std::size_t, double>>* sse_trajectory = nullptr);
std::string estimate_report_csv(const FEstimate& est, const ReportOptions& opts);

std::string exact_report_json(const ExactFReport& rep, const JobConfig& cfg,
                              const ReportOptions& opts);
std::string exact_report_csv(const ExactFReport& rep, const ReportOptions& opts);

std::string metrics_json(const RunMetrics& m);

// Top-N motif table (rank, score, pattern layout) as printed by the MCC
// command.
std::string motif_table(const FEstimate& est, const ReportOptions& opts);

// Pattern -> F map recovered from either report kind (values on the file's
// own scale; rankings do not depend on scale).
std::map<PatternCode, double> parse_report_f(const std::string& json_text);

struct RankingComparison {
    std::size_t size = 0;
    double tau = 0;     // Kendall tau-b
    double p_value = 1; // two-sided, normal approximation
    std::size_t common = 0;
};

// Truncates both rankings (by descending F, pattern hex as tie-break) to
// each size and correlates the shared patterns' ranks.
std::vector<RankingComparison> compare_rankings(const std::map<PatternCode, double>& a,
                                                const std::map<PatternCode, double>& b,
                                                const std::vector<std::size_t>& sizes);

// Kendall tau-b with a tie-corrected normal-approximation p-value.
std::pair<double, double> kendall_tau_b(const std::vector<double>& x,
                                        const std::vector<double>& y);

// Sum of squared per-pattern differences over the union of patterns (raw
// fraction scale).
double sse_between(const std::map<PatternCode, double>& a, const std::map<PatternCode, double>& b);

// Per-sample prefix SSE against a ground-truth F, evaluated at roughly
// `points` evenly spaced sample counts.
std::vector<std::pair<std::size_t, double>> sse_trajectory(const FEstimate& est,
                                                           const std::map<PatternCode, double>& truth,
                                                           std::size_t points = 100);

// Newline-delimited JSON sample records: node ids, pattern, alpha pair.
std::string sample_export_ndjson(const AttributedGraph& g, const FEstimate& est,
                                 std::size_t limit);

} // namespace relmine
