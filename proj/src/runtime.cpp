#include "relmine/runtime.hpp"

#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <deque>
#include <mutex>
#include <thread>

#include "relmine/error.hpp"

namespace relmine {

void JobConfig::validate() const {
    if (k < 2) throw UsageError("k must be >= 2");
    if (k > Subgraph::kMaxNodes)
        throw UsageError("k must be <= " + std::to_string(Subgraph::kMaxNodes));
    if (budget < 1) throw UsageError("budget must be >= 1");
    if (tours < 1) throw UsageError("tours must be >= 1");
    if (steps < 1) throw UsageError("steps must be >= 1");
    if (workers < 1) throw UsageError("workers must be >= 1");
    if (max_tour_len < 3) throw UsageError("max tour length must be >= 3");
    if (queue_capacity < 1) throw UsageError("queue capacity must be >= 1");
    RelationSpec::parse(relation);
    WeightFn::parse(weight);
    FilterFn::parse(filter);
    if (format != "json" && format != "csv") throw UsageError("format must be json or csv");
}

FOptions JobConfig::f_options() const {
    FOptions f;
    f.k = k;
    f.steps = steps;
    f.burn_in = burn_in;
    f.alpha.budget = budget;
    f.alpha.tours = tours;
    f.alpha.max_tour_len = max_tour_len;
    f.alpha.allow_truncation = allow_truncation;
    f.alpha.cert_cap = cert_cap;
    f.mcc = mcc;
    f.seed = seed;
    f.start = start;
    return f;
}

int resolve_workers(const JobConfig& cfg) {
    if (const char* env = std::getenv("RELMINE_WORKERS")) {
        int w = std::atoi(env);
        if (w >= 1) return w;
    }
    return cfg.workers;
}

namespace {

struct Task {
    std::size_t class_idx;
    Subgraph anchor;
};

// Bounded MPMC queue; the producer blocks on push when full.
class TaskQueue {
public:
    explicit TaskQueue(std::size_t capacity) : capacity_(capacity) {}

    void push(Task t) {
        std::unique_lock lock(mu_);
        not_full_.wait(lock, [&] { return items_.size() < capacity_ || closed_; });
        if (closed_) return;
        items_.push_back(std::move(t));
        not_empty_.notify_one();
    }

    bool pop(Task& out) {
        std::unique_lock lock(mu_);
        not_empty_.wait(lock, [&] { return !items_.empty() || closed_; });
        if (items_.empty()) return false;
        out = std::move(items_.front());
        items_.pop_front();
        not_full_.notify_one();
        return true;
    }

    void close() {
        std::lock_guard lock(mu_);
        closed_ = true;
        not_empty_.notify_all();
        not_full_.notify_all();
    }

private:
    std::mutex mu_;
    std::condition_variable not_full_, not_empty_;
    std::deque<Task> items_;
    std::size_t capacity_;
    bool closed_ = false;
};

} // namespace

RunResult run_job(const JobConfig& cfg, const AttributedGraph& g) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();

    RelationSpec rel = RelationSpec::parse(cfg.relation);
    WeightFn gfn = WeightFn::parse(cfg.weight);
    FilterFn filt = FilterFn::parse(cfg.filter);
    NodePredicate hpred = filt.bind(g);
    FOptions fopts = cfg.f_options();
    const int workers = resolve_workers(cfg);

    RunResult out;
    FEstimate& est = out.estimate;
    est.mcc_mode = cfg.mcc;

    std::size_t burn = fopts.burn_in ? *fopts.burn_in : default_burn_in(g, cfg.k);

    // Per-class results land in slots; everything downstream reads them in
    // class-discovery order, so scheduling cannot change the output.
    std::vector<std::optional<std::pair<AlphaEstimate, AlphaEstimate>>> results;
    std::mutex results_mu;
    std::mutex error_mu;
    std::optional<std::string> first_error;
    auto record_error = [&](const std::string& msg) {
        std::lock_guard lock(error_mu);
        if (!first_error) first_error = msg;
    };

    TaskQueue queue(cfg.queue_capacity);
    std::vector<WorkerStats> worker_stats(static_cast<std::size_t>(std::max(1, workers)));

    auto consume = [&](std::size_t worker_idx) {
        Task task;
        while (queue.pop(task)) {
            auto b0 = std::chrono::steady_clock::now();
            try {
                auto pair = estimate_alpha_pair(g, task.anchor, rel, gfn, filt, fopts.alpha,
                                                cfg.seed);
                std::lock_guard lock(results_mu);
                results[task.class_idx] = std::move(pair);
            } catch (const Error& e) {
                record_error(e.what());
                queue.close();
            }
            auto b1 = std::chrono::steady_clock::now();
            worker_stats[worker_idx].tasks += 1;
            worker_stats[worker_idx].busy_seconds +=
                std::chrono::duration<double>(b1 - b0).count();
        }
    };

    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(consume, static_cast<std::size_t>(w));

    // Producer: the sequential upper walk plus class-cache lookups, exactly
    // as in estimate_F.
    ClassCache cache(g, rel);
    try {
        std::optional<Subgraph> start = fopts.start;
        if (!start) {
            Rng seed_rng = derive_rng(cfg.seed, rng_stream::kSeedSubgraph);
            start = random_seed_subgraph(g, cfg.k, hpred, seed_rng);
        }
        Rng walk_rng = derive_rng(cfg.seed, rng_stream::kUpperWalk);
        upper_walk(g, cfg.k, cfg.steps, burn, hpred, walk_rng, start, [&](const Subgraph& s) {
            auto [idx, is_new] = cache.lookup_or_insert(s);
            if (is_new) {
                ClassEstimate c;
                c.anchor = s;
                c.pattern = canonical_code(g, s);
                est.classes.push_back(std::move(c));
                {
                    std::lock_guard lock(results_mu);
                    results.emplace_back();
                }
                queue.push(Task{idx, s});
            }
            est.classes[idx].sample_count += 1;
            est.sample_class.push_back(idx);
            est.samples.push_back(s);
        });
    } catch (const Error& e) {
        record_error(e.what());
    }
    queue.close();
    for (auto& th : pool) th.join();

    est.samples_used = est.sample_class.size();
    est.upper_steps = burn + (est.samples_used > 0 ? est.samples_used - 1 : 0);

    // Attach resolved estimates; on an aborted run unresolved classes and
    // their samples are dropped from the (partial) aggregate.
    std::vector<char> resolved(est.classes.size(), 0);
    for (std::size_t i = 0; i < est.classes.size(); ++i) {
        if (i < results.size() && results[i]) {
            est.classes[i].alpha1 = results[i]->first;
            est.classes[i].alpha2 = results[i]->second;
            resolved[i] = 1;
        }
    }
    if (first_error) {
        std::vector<std::size_t> kept;
        std::vector<Subgraph> kept_samples;
        for (std::size_t i = 0; i < est.sample_class.size(); ++i)
            if (resolved[est.sample_class[i]]) {
                kept.push_back(est.sample_class[i]);
                kept_samples.push_back(est.samples[i]);
            }
        est.sample_class = std::move(kept);
        est.samples = std::move(kept_samples);
    }
    for (std::size_t i = 0; i < est.classes.size(); ++i) {
        if (!resolved[i]) continue;
        est.lower_steps += est.classes[i].alpha1.steps_total;
        est.truncated_tours += est.classes[i].alpha1.truncated_tours;
        est.uncertified_hits += est.classes[i].alpha1.uncertified_hits;
        est.membership_overflows += est.classes[i].alpha1.membership_overflows;
    }
    try {
        aggregate_f(est);
    } catch (const Error& e) {
        record_error(e.what());
    }

    const auto t1 = std::chrono::steady_clock::now();
    RunMetrics& m = out.metrics;
    m.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
    m.upper_steps = est.upper_steps;
    m.lower_steps = est.lower_steps;
    m.total_steps = m.upper_steps + m.lower_steps;
    m.classes_estimated = est.classes.size();
    m.samples = est.samples_used;
    m.workers = std::move(worker_stats);
    m.truncated_tours = est.truncated_tours;
    m.membership_overflows = est.membership_overflows;
    m.uncertified_hits = est.uncertified_hits;
    if (cfg.baseline_wall_seconds && m.wall_seconds > 0)
        m.speedup_vs_baseline = *cfg.baseline_wall_seconds / m.wall_seconds;

    out.error = first_error;
    return out;
}

} // namespace relmine
