#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relmine/sampler.hpp"

namespace relmine {

// Everything a run needs; mirrors the CLI flags one to one.
struct JobConfig {
    int k = 3;
    std::string relation = "identity";
    std::string weight = "unit";
    std::string filter = "none";
    std::size_t budget = 1000;   // B
    std::size_t tours = 100;     // q
    std::size_t steps = 10000;   // t, upper-layer samples
    std::optional<std::size_t> burn_in;
    std::uint64_t seed = 1;
    int workers = 1;
    std::size_t max_tour_len = 10'000'000;
    bool allow_truncation = false;
    std::size_t enum_cap = 2'000'000;
    std::size_t cert_cap = MembershipOracle::kDefaultStateCap;
    std::size_t queue_capacity = 1024;
    bool mcc = false;
    std::optional<Subgraph> start;
    std::optional<double> baseline_wall_seconds; // recorded 1-worker time, for speedup
    std::string out_path;
    std::string format = "json";

    void validate() const; // throws UsageError
    FOptions f_options() const;
};

struct WorkerStats {
    std::size_t tasks = 0;
    double busy_seconds = 0;
};

struct RunMetrics {
    double wall_seconds = 0;
    std::size_t upper_steps = 0;
    std::size_t lower_steps = 0;
    std::size_t total_steps = 0;
    std::size_t classes_estimated = 0;
    std::size_t samples = 0;
    std::vector<WorkerStats> workers;
    double speedup_vs_baseline = 0; // 0 when no baseline recorded
    std::size_t truncated_tours = 0;
    std::size_t membership_overflows = 0;
    std::size_t uncertified_hits = 0;
};

struct RunResult {
    FEstimate estimate;
    RunMetrics metrics;
    std::optional<std::string> error; // set when the job aborted; estimate is partial
};

// Producer-consumer execution of the two layers: the upper walk feeds sampled
// subgraphs through a bounded queue to workers running estimate_alpha_pair.
// Per-task RNG derivation and order-insensitive aggregation make the
// FEstimate bit-identical for any worker count (and to the sequential
// estimate_F).
RunResult run_job(const JobConfig& cfg, const AttributedGraph& g);

// RELMINE_WORKERS environment variable overrides cfg.workers when set.
int resolve_workers(const JobConfig& cfg);

} // namespace relmine
