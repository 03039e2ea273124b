#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "relmine/report.hpp"

using namespace relmine;

namespace {

struct CommonOpts {
    std::string graph_path;
    JobConfig cfg;
    long long burn_in = -1;
    bool raw = false;
    bool strict = false;
    int top = 10;
    std::string metrics_out;
    std::string ground_truth;
    std::string config_path;
    CLI::App* cmd = nullptr;
};

void add_mining_options(CLI::App* cmd, CommonOpts& o) {
    o.cmd = cmd;
    cmd->add_option("--graph", o.graph_path, "graph file (.lg text format)");
    cmd->add_option("--k", o.cfg.k, "subgraph size");
    cmd->add_option("--relation", o.cfg.relation, "identity | perc | sh:<d>");
    cmd->add_option("--weight", o.cfg.weight, "unit | hondeg");
    cmd->add_option("--filter", o.cfg.filter, "none | min-internal-degree:<t>");
    cmd->add_option("--budget", o.cfg.budget, "exact-layer BFS budget B");
    cmd->add_option("--tours", o.cfg.tours, "tours per class estimate q");
    cmd->add_option("--steps", o.cfg.steps, "upper-layer samples t");
    cmd->add_option("--burn-in", o.burn_in, "upper walk burn-in (default 10*k*ceil(log n))");
    cmd->add_option("--seed", o.cfg.seed, "master seed");
    cmd->add_option("--workers", o.cfg.workers, "worker threads (RELMINE_WORKERS overrides)");
    cmd->add_option("--max-tour-len", o.cfg.max_tour_len, "tour length cap");
    cmd->add_flag("--allow-truncation", o.cfg.allow_truncation,
                  "report truncated tours instead of failing");
    cmd->add_option("--enum-cap", o.cfg.enum_cap, "enumeration cap for exact computations");
    cmd->add_option("--cert-cap", o.cfg.cert_cap, "certified-set size cap");
    cmd->add_option("--queue-cap", o.cfg.queue_capacity, "bounded work queue capacity");
    cmd->add_option("--format", o.cfg.format, "json | csv");
    cmd->add_option("--out", o.cfg.out_path, "output path (default stdout)");
    cmd->add_flag("--raw", o.raw, "print fractions instead of percentages");
    cmd->add_flag("--strict", o.strict, "reject duplicate edges and self-loops when loading");
    cmd->add_option("--config", o.config_path,
                    "key=value config file mirroring these flags (flags win)");
}

// Flat key=value file; keys equal the long flag names without the dashes.
// Explicitly passed flags take precedence.
void apply_config_file(CommonOpts& o) {
    if (o.config_path.empty()) return;
    std::ifstream in(o.config_path);
    if (!in) throw UsageError("cannot open config file: " + o.config_path);

    auto overridden = [&](const std::string& flag) { return o.cmd->count(flag) > 0; };
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError(o.config_path + ":" + std::to_string(lineno) +
                             ": expected key=value");
        auto trim = [](std::string s) {
            std::size_t a = s.find_first_not_of(" \t\r");
            std::size_t b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (overridden("--" + key)) continue;

        try {
            if (key == "graph") o.graph_path = value;
            else if (key == "k") o.cfg.k = std::stoi(value);
            else if (key == "relation") o.cfg.relation = value;
            else if (key == "weight") o.cfg.weight = value;
            else if (key == "filter") o.cfg.filter = value;
            else if (key == "budget") o.cfg.budget = std::stoull(value);
            else if (key == "tours") o.cfg.tours = std::stoull(value);
            else if (key == "steps") o.cfg.steps = std::stoull(value);
            else if (key == "burn-in") o.burn_in = std::stoll(value);
            else if (key == "seed") o.cfg.seed = std::stoull(value);
            else if (key == "workers") o.cfg.workers = std::stoi(value);
            else if (key == "max-tour-len") o.cfg.max_tour_len = std::stoull(value);
            else if (key == "allow-truncation") o.cfg.allow_truncation = value == "1" || value == "true";
            else if (key == "enum-cap") o.cfg.enum_cap = std::stoull(value);
            else if (key == "cert-cap") o.cfg.cert_cap = std::stoull(value);
            else if (key == "queue-cap") o.cfg.queue_capacity = std::stoull(value);
            else if (key == "format") o.cfg.format = value;
            else if (key == "out") o.cfg.out_path = value;
            else if (key == "raw") o.raw = value == "1" || value == "true";
            else if (key == "strict") o.strict = value == "1" || value == "true";
            else
                throw UsageError(o.config_path + ":" + std::to_string(lineno) +
                                 ": unknown key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw UsageError(o.config_path + ":" + std::to_string(lineno) + ": bad value for '" +
                             key + "'");
        }
    }
}

void finish(CommonOpts& o) {
    apply_config_file(o);
    if (o.graph_path.empty()) throw UsageError("--graph is required");
    if (o.burn_in >= 0) o.cfg.burn_in = static_cast<std::size_t>(o.burn_in);
}

AttributedGraph load_graph(const CommonOpts& o) {
    return AttributedGraph::load_file(o.graph_path, o.strict
                                                        ? AttributedGraph::Strictness::Reject
                                                        : AttributedGraph::Strictness::Drop);
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write output file: " + path);
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_estimate(CommonOpts& o, bool mcc) {
    finish(o);
    o.cfg.mcc = mcc;
    AttributedGraph g = load_graph(o);
    RunResult res = run_job(o.cfg, g);

    ReportOptions ropts{o.raw, o.top};
    std::vector<std::pair<std::size_t, double>> traj;
    const std::vector<std::pair<std::size_t, double>>* traj_ptr = nullptr;
    if (!o.ground_truth.empty() && !res.error) {
        auto truth = parse_report_f(read_file(o.ground_truth));
        // trajectories compare raw fractions; rescale percent-scale truth
        double total = 0;
        for (auto& [p, v] : truth) total += v;
        if (total > 1.5)
            for (auto& [p, v] : truth) v /= 100.0;
        traj = sse_trajectory(res.estimate, truth);
        traj_ptr = &traj;
    }

    std::string report = o.cfg.format == "csv" ? estimate_report_csv(res.estimate, ropts)
                                               : estimate_report_json(res.estimate, o.cfg, ropts,
                                                                      traj_ptr);
    write_output(o.cfg.out_path, report);
    if (mcc) std::cout << motif_table(res.estimate, ropts);
    if (!o.metrics_out.empty()) write_output(o.metrics_out, metrics_json(res.metrics));

    if (res.error) {
        std::cerr << "error: " << *res.error << " (partial report written)\n";
        return 1;
    }
    return 0;
}

int run_exact(CommonOpts& o) {
    finish(o);
    AttributedGraph g = load_graph(o);
    ExactFReport rep = exact_F(g, o.cfg.k, RelationSpec::parse(o.cfg.relation),
                               WeightFn::parse(o.cfg.weight), FilterFn::parse(o.cfg.filter),
                               o.cfg.enum_cap);
    ReportOptions ropts{o.raw, o.top};
    std::string report = o.cfg.format == "csv" ? exact_report_csv(rep, ropts)
                                               : exact_report_json(rep, o.cfg, ropts);
    write_output(o.cfg.out_path, report);
    return 0;
}

int run_compare(const std::string& a_path, const std::string& b_path,
                std::vector<std::size_t> sizes, const std::string& out_path) {
    if (sizes.empty()) throw UsageError("at least one --sizes value required");
    auto fa = parse_report_f(read_file(a_path));
    auto fb = parse_report_f(read_file(b_path));
    auto rows = compare_rankings(fa, fb, sizes);
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& r : rows)
        j.push_back({{"size", r.size},
                     {"tau", r.tau},
                     {"p_value", r.p_value},
                     {"common_patterns", r.common}});
    write_output(out_path, j.dump(2) + "\n");
    return 0;
}

int run_alpha_sweep(CommonOpts& o, const std::vector<NodeId>& anchor_nodes,
                    std::vector<std::size_t> budgets, std::vector<std::size_t> tour_counts,
                    std::size_t repeats) {
    finish(o);
    AttributedGraph g = load_graph(o);
    Subgraph anchor = induced_subgraph(g, anchor_nodes);
    if (anchor.size() != o.cfg.k)
        throw UsageError("anchor has " + std::to_string(anchor.size()) + " nodes but k is " +
                         std::to_string(o.cfg.k));
    RelationSpec rel = RelationSpec::parse(o.cfg.relation);
    WeightFn gfn = WeightFn::parse(o.cfg.weight);
    FilterFn filt = FilterFn::parse(o.cfg.filter);
    if (budgets.empty()) budgets = {o.cfg.budget};
    if (tour_counts.empty()) tour_counts = {o.cfg.tours};

    bool have_exact = true;
    double exact_alpha = 0;
    std::size_t exact_steps = 0;
    try {
        exact_alpha = exact_alpha_bruteforce(g, anchor, rel, gfn, filt, o.cfg.enum_cap);
        exact_steps = count_cis(g, o.cfg.k, filt.bind(g), o.cfg.enum_cap);
    } catch (const EnumerationCapExceeded&) {
        have_exact = false;
    }

    std::ostringstream csv;
    csv << "budget,tours,repeat,value,exact_alpha,enum_steps,complete,supernode_size,"
           "boundary_degree,bfs_visited,tour_steps,steps_total,tour_len_mean,tour_len_stderr,"
           "truncated_tours,uncertified_hits\n";
    for (std::size_t b : budgets)
        for (std::size_t q : tour_counts)
            for (std::size_t r = 0; r < repeats; ++r) {
                AlphaOptions aopts;
                aopts.budget = b;
                aopts.tours = q;
                aopts.max_tour_len = o.cfg.max_tour_len;
                aopts.allow_truncation = o.cfg.allow_truncation;
                aopts.cert_cap = o.cfg.cert_cap;
                AlphaEstimate e =
                    estimate_alpha(g, anchor, rel, gfn, filt, aopts,
                                   mix_seed(o.cfg.seed, rng_stream::kBench, r));
                csv << b << ',' << q << ',' << r << ',' << e.value << ',';
                if (have_exact) csv << exact_alpha;
                csv << ',';
                if (have_exact) csv << exact_steps;
                csv << ',' << (e.exact ? 1 : 0) << ',' << e.supernode_size << ','
                    << e.boundary_degree << ',' << e.bfs_visited << ',' << e.tour_steps << ','
                    << e.steps_total << ',' << e.tour_len_mean << ',' << e.tour_len_stderr << ','
                    << e.truncated_tours << ',' << e.uncertified_hits << '\n';
            }
    write_output(o.cfg.out_path, csv.str());
    return 0;
}

int run_sample_export(CommonOpts& o, std::size_t n) {
    finish(o);
    if (n == 0) {
        write_output(o.cfg.out_path, "");
        return 0;
    }
    o.cfg.steps = n;
    AttributedGraph g = load_graph(o);
    RunResult res = run_job(o.cfg, g);
    if (res.error) {
        std::cerr << "error: " << *res.error << "\n";
        return 1;
    }
    write_output(o.cfg.out_path, sample_export_ndjson(g, res.estimate, n));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"relmine: pattern statistics over subgraph classes induced by user-defined relations"};
    app.require_subcommand(1);

    CommonOpts est_opts, mcc_opts, exact_opts, sweep_opts, export_opts;

    auto* est = app.add_subcommand("estimate", "estimate per-pattern statistics F");
    add_mining_options(est, est_opts);
    est->add_option("--ground-truth", est_opts.ground_truth,
                    "exact report for an SSE-vs-samples trajectory");
    est->add_option("--metrics-out", est_opts.metrics_out, "write run metrics JSON here");

    auto* mcc = app.add_subcommand("mcc", "motif class counting (class proportions)");
    add_mining_options(mcc, mcc_opts);
    mcc->add_option("--top", mcc_opts.top, "rows in the motif table");
    mcc->add_option("--metrics-out", mcc_opts.metrics_out, "write run metrics JSON here");

    auto* exact = app.add_subcommand("exact", "exact F by full enumeration");
    add_mining_options(exact, exact_opts);

    auto* cmp = app.add_subcommand("compare-rankings", "Kendall tau between two reports");
    std::string cmp_a, cmp_b, cmp_out;
    std::vector<std::size_t> cmp_sizes;
    cmp->add_option("report_a", cmp_a, "first report JSON")->required();
    cmp->add_option("report_b", cmp_b, "second report JSON")->required();
    cmp->add_option("--sizes", cmp_sizes, "ranking sizes to compare")->required();
    cmp->add_option("--out", cmp_out, "output path (default stdout)");

    auto* sweep = app.add_subcommand("alpha-sweep", "class-weight estimates over budget/tour grids");
    add_mining_options(sweep, sweep_opts);
    std::vector<NodeId> sweep_anchor;
    std::vector<std::size_t> sweep_budgets, sweep_tours;
    std::size_t sweep_repeats = 10;
    sweep->add_option("--anchor", sweep_anchor, "anchor subgraph node ids")->required();
    sweep->add_option("--budgets", sweep_budgets, "budgets B to sweep");
    sweep->add_option("--tour-counts", sweep_tours, "tour counts q to sweep");
    sweep->add_option("--repeats", sweep_repeats, "independent estimates per cell");

    auto* exp = app.add_subcommand("sample-export", "weighted subgraph samples as NDJSON");
    add_mining_options(exp, export_opts);
    std::size_t export_n = 1000;
    exp->add_option("--n", export_n, "number of samples to export");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (est->parsed()) return run_estimate(est_opts, false);
        if (mcc->parsed()) return run_estimate(mcc_opts, true);
        if (exact->parsed()) return run_exact(exact_opts);
        if (cmp->parsed()) return run_compare(cmp_a, cmp_b, cmp_sizes, cmp_out);
        if (sweep->parsed())
            return run_alpha_sweep(sweep_opts, sweep_anchor, sweep_budgets, sweep_tours,
                                   sweep_repeats);
        if (exp->parsed()) return run_sample_export(export_opts, export_n);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == ErrorKind::Input ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
