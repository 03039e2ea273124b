#include "relmine/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "relmine/error.hpp"

namespace relmine {

using ordered_json = nlohmann::ordered_json;

namespace {

double scaled(double v, const ReportOptions& opts) { return opts.raw ? v : v * 100.0; }

ordered_json config_json(const JobConfig& cfg) {
    ordered_json j;
    j["k"] = cfg.k;
    j["relation"] = cfg.relation;
    j["weight"] = cfg.weight;
    j["filter"] = cfg.filter;
    j["budget"] = cfg.budget;
    j["tours"] = cfg.tours;
    j["steps"] = cfg.steps;
    if (cfg.burn_in) j["burn_in"] = *cfg.burn_in;
    j["seed"] = cfg.seed;
    j["max_tour_len"] = cfg.max_tour_len;
    j["mcc"] = cfg.mcc;
    return j;
}

ordered_json alpha_json(const AlphaEstimate& a) {
    ordered_json j;
    j["value"] = a.value;
    j["exact"] = a.exact;
    j["no_boundary"] = a.no_boundary;
    j["tours"] = a.tours_used;
    j["tour_mean"] = a.tour_mean;
    j["tour_stderr"] = a.tour_stderr;
    j["tour_len_mean"] = a.tour_len_mean;
    j["tour_len_stderr"] = a.tour_len_stderr;
    j["steps_total"] = a.steps_total;
    j["bfs_visited"] = a.bfs_visited;
    j["tour_steps"] = a.tour_steps;
    j["supernode_size"] = a.supernode_size;
    j["boundary_degree"] = a.boundary_degree;
    j["truncated_tours"] = a.truncated_tours;
    j["uncertified_hits"] = a.uncertified_hits;
    j["membership_overflows"] = a.membership_overflows;
    return j;
}

struct PatternRow {
    PatternCode pattern;
    double f = 0;
    std::size_t samples = 0;
    std::size_t classes = 0;
};

std::vector<PatternRow> pattern_rows(const FEstimate& est) {
    std::map<PatternCode, PatternRow> rows;
    for (const auto& [pattern, f] : est.f) {
        rows[pattern].pattern = pattern;
        rows[pattern].f = f;
    }
    for (const ClassEstimate& c : est.classes) {
        rows[c.pattern].classes += 1;
        rows[c.pattern].samples += c.sample_count;
    }
    std::vector<PatternRow> out;
    for (auto& [pattern, row] : rows) out.push_back(row);
    std::sort(out.begin(), out.end(), [](const PatternRow& a, const PatternRow& b) {
        if (a.f != b.f) return a.f > b.f;
        return a.pattern.hex() < b.pattern.hex();
    });
    return out;
}

} // namespace

std::string estimate_report_json(const FEstimate& est, const JobConfig& cfg,
                                 const ReportOptions& opts,
                                 const std::vector<std::pair<std::size_t, double>>* traj) {
    ordered_json j;
    j["tool"] = "relmine";
    j["report"] = est.mcc_mode ? "mcc" : "estimate";
    j["config"] = config_json(cfg);
    j["scale"] = opts.raw ? "raw" : "percent";
    j["samples_used"] = est.samples_used;
    j["lambda_hat"] = est.lambda_hat;

    ordered_json patterns = ordered_json::array();
    for (const PatternRow& row : pattern_rows(est)) {
        ordered_json p;
        p["pattern"] = row.pattern.hex();
        p["render"] = render_pattern(row.pattern);
        p["f"] = scaled(row.f, opts);
        p["classes_sampled"] = row.classes;
        p["samples"] = row.samples;
        patterns.push_back(std::move(p));
    }
    j["patterns"] = std::move(patterns);

    ordered_json classes = ordered_json::array();
    for (const ClassEstimate& c : est.classes) {
        ordered_json e;
        e["anchor"] = std::vector<NodeId>(c.anchor.nodes().begin(), c.anchor.nodes().end());
        e["pattern"] = c.pattern.hex();
        e["samples"] = c.sample_count;
        e["alpha1"] = alpha_json(c.alpha1);
        e["alpha2"] = alpha_json(c.alpha2);
        classes.push_back(std::move(e));
    }
    j["classes"] = std::move(classes);

    j["steps"] = {{"upper", est.upper_steps}, {"lower", est.lower_steps},
                  {"total", est.upper_steps + est.lower_steps}};
    j["counters"] = {{"truncated_tours", est.truncated_tours},
                     {"uncertified_hits", est.uncertified_hits},
                     {"membership_overflows", est.membership_overflows}};
    if (traj) {
        ordered_json t = ordered_json::array();
        for (auto [n, sse] : *traj) t.push_back({n, sse});
        j["sse_trajectory"] = std::move(t);
    }
    return j.dump(2) + "\n";
}

std::string estimate_report_csv(const FEstimate& est, const ReportOptions& opts) {
    std::ostringstream out;
    out << "pattern,f,classes_sampled,samples,render\n";
    for (const PatternRow& row : pattern_rows(est))
        out << row.pattern.hex() << ',' << scaled(row.f, opts) << ',' << row.classes << ','
            << row.samples << ',' << '"' << render_pattern(row.pattern) << '"' << '\n';
    return out.str();
}

std::string exact_report_json(const ExactFReport& rep, const JobConfig& cfg,
                              const ReportOptions& opts) {
    ordered_json j;
    j["tool"] = "relmine";
    j["report"] = "exact";
    j["config"] = config_json(cfg);
    j["scale"] = opts.raw ? "raw" : "percent";
    j["lambda"] = rep.lambda;
    j["class_count"] = rep.class_count;
    j["subgraph_count"] = rep.subgraph_count;

    std::vector<std::pair<PatternCode, double>> rows(rep.f.begin(), rep.f.end());
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first.hex() < b.first.hex();
    });
    ordered_json patterns = ordered_json::array();
    for (const auto& [pattern, f] : rows) {
        ordered_json p;
        p["pattern"] = pattern.hex();
        p["render"] = render_pattern(pattern);
        p["f"] = scaled(f, opts);
        patterns.push_back(std::move(p));
    }
    j["patterns"] = std::move(patterns);
    return j.dump(2) + "\n";
}

std::string exact_report_csv(const ExactFReport& rep, const ReportOptions& opts) {
    std::vector<std::pair<PatternCode, double>> rows(rep.f.begin(), rep.f.end());
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first.hex() < b.first.hex();
    });
    std::ostringstream out;
    out << "pattern,f,render\n";
    for (const auto& [pattern, f] : rows)
        out << pattern.hex() << ',' << scaled(f, opts) << ',' << '"' << render_pattern(pattern)
            << '"' << '\n';
    return out.str();
}

std::string metrics_json(const RunMetrics& m) {
    ordered_json j;
    j["wall_seconds"] = m.wall_seconds;
    j["upper_steps"] = m.upper_steps;
    j["lower_steps"] = m.lower_steps;
    j["total_steps"] = m.total_steps;
    j["classes_estimated"] = m.classes_estimated;
    j["samples"] = m.samples;
    ordered_json ws = ordered_json::array();
    for (const WorkerStats& w : m.workers)
        ws.push_back({{"tasks", w.tasks}, {"busy_seconds", w.busy_seconds}});
    j["workers"] = std::move(ws);
    if (m.speedup_vs_baseline > 0) j["speedup_vs_baseline"] = m.speedup_vs_baseline;
    j["truncated_tours"] = m.truncated_tours;
    j["membership_overflows"] = m.membership_overflows;
    j["uncertified_hits"] = m.uncertified_hits;
    return j.dump(2) + "\n";
}

std::string motif_table(const FEstimate& est, const ReportOptions& opts) {
    std::ostringstream out;
    out << "rank  f" << (opts.raw ? "" : "(%)") << "          pattern\n";
    int rank = 0;
    for (const PatternRow& row : pattern_rows(est)) {
        if (++rank > opts.top) break;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%-12.6g", scaled(row.f, opts));
        out << rank << "     " << buf << render_pattern(row.pattern) << "  [" << row.pattern.hex()
            << "]\n";
    }
    return out.str();
}

std::map<PatternCode, double> parse_report_f(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    if (!j.contains("patterns"))
        throw ParseError("report has no 'patterns' field");
    std::map<PatternCode, double> out;
    for (const auto& p : j["patterns"])
        out[PatternCode::from_hex(p.at("pattern").get<std::string>())] = p.at("f").get<double>();
    return out;
}

std::pair<double, double> kendall_tau_b(const std::vector<double>& x,
                                        const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 2) throw UsageError("kendall tau needs two equal lists of size >= 2");

    long long s = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double dx = x[i] - x[j], dy = y[i] - y[j];
            double prod = dx * dy;
            if (prod > 0) ++s;
            else if (prod < 0) --s;
        }

    auto tie_sizes = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        std::vector<double> t;
        std::size_t run = 1;
        for (std::size_t i = 1; i <= v.size(); ++i) {
            if (i < v.size() && v[i] == v[i - 1]) ++run;
            else {
                if (run > 1) t.push_back(static_cast<double>(run));
                run = 1;
            }
        }
        return t;
    };
    auto sum_f = [](const std::vector<double>& ts, auto f) {
        double acc = 0;
        for (double t : ts) acc += f(t);
        return acc;
    };

    const std::vector<double> tx = tie_sizes(x), ty = tie_sizes(y);
    const double nn = static_cast<double>(n);
    const double n0 = nn * (nn - 1) / 2;
    const double n1 = sum_f(tx, [](double t) { return t * (t - 1) / 2; });
    const double n2 = sum_f(ty, [](double t) { return t * (t - 1) / 2; });
    double denom = std::sqrt((n0 - n1) * (n0 - n2));
    double tau = denom > 0 ? static_cast<double>(s) / denom : 0.0;

    const double v0 = nn * (nn - 1) * (2 * nn + 5);
    const double vt = sum_f(tx, [](double t) { return t * (t - 1) * (2 * t + 5); });
    const double vu = sum_f(ty, [](double t) { return t * (t - 1) * (2 * t + 5); });
    const double v1 = sum_f(tx, [](double t) { return t * (t - 1); }) *
                      sum_f(ty, [](double t) { return t * (t - 1); }) / (2 * nn * (nn - 1));
    const double v2 = nn > 2 ? sum_f(tx, [](double t) { return t * (t - 1) * (t - 2); }) *
                                   sum_f(ty, [](double t) { return t * (t - 1) * (t - 2); }) /
                                   (9 * nn * (nn - 1) * (nn - 2))
                             : 0.0;
    const double var_s = (v0 - vt - vu) / 18 + v1 + v2;
    double p = 1.0;
    if (var_s > 0) {
        double z = static_cast<double>(s) / std::sqrt(var_s);
        p = std::erfc(std::fabs(z) / std::sqrt(2.0));
    }
    return {tau, p};
}

namespace {

std::vector<PatternCode> ranking_of(const std::map<PatternCode, double>& f) {
    std::vector<std::pair<PatternCode, double>> rows(f.begin(), f.end());
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first.hex() < b.first.hex();
    });
    std::vector<PatternCode> out;
    out.reserve(rows.size());
    for (auto& [pattern, value] : rows) out.push_back(pattern);
    return out;
}

} // namespace

std::vector<RankingComparison> compare_rankings(const std::map<PatternCode, double>& a,
                                                const std::map<PatternCode, double>& b,
                                                const std::vector<std::size_t>& sizes) {
    const std::vector<PatternCode> ra = ranking_of(a), rb = ranking_of(b);
    std::vector<RankingComparison> out;
    for (std::size_t size : sizes) {
        if (size > ra.size() || size > rb.size())
            throw UsageError("ranking size " + std::to_string(size) +
                             " exceeds available patterns (" +
                             std::to_string(std::min(ra.size(), rb.size())) + ")");
        std::map<PatternCode, std::size_t> pos_a, pos_b;
        for (std::size_t i = 0; i < size; ++i) pos_a[ra[i]] = i;
        for (std::size_t i = 0; i < size; ++i) pos_b[rb[i]] = i;

        std::vector<double> xs, ys;
        for (const auto& [pattern, i] : pos_a) {
            auto it = pos_b.find(pattern);
            if (it == pos_b.end()) continue;
            xs.push_back(static_cast<double>(i));
            ys.push_back(static_cast<double>(it->second));
        }
        if (xs.size() < 2)
            throw UsageError("rankings share fewer than 2 patterns at size " +
                             std::to_string(size));
        auto [tau, p] = kendall_tau_b(xs, ys);
        out.push_back(RankingComparison{size, tau, p, xs.size()});
    }
    return out;
}

double sse_between(const std::map<PatternCode, double>& a, const std::map<PatternCode, double>& b) {
    double sse = 0;
    for (const auto& [pattern, va] : a) {
        auto it = b.find(pattern);
        double vb = it == b.end() ? 0.0 : it->second;
        sse += (va - vb) * (va - vb);
    }
    for (const auto& [pattern, vb] : b)
        if (!a.count(pattern)) sse += vb * vb;
    return sse;
}

std::vector<std::pair<std::size_t, double>> sse_trajectory(const FEstimate& est,
                                                           const std::map<PatternCode, double>& truth,
                                                           std::size_t points) {
    std::vector<std::pair<std::size_t, double>> out;
    if (est.sample_class.empty()) return out;
    const std::size_t n = est.sample_class.size();
    const std::size_t stride = std::max<std::size_t>(1, n / std::max<std::size_t>(1, points));

    std::map<PatternCode, double> sums;
    double lambda = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const ClassEstimate& c = est.classes[est.sample_class[i]];
        if (c.alpha2.value <= 0) continue;
        double ratio = (est.mcc_mode ? 1.0 : c.alpha1.value) / c.alpha2.value;
        sums[c.pattern] += ratio;
        lambda += ratio;
        if ((i + 1) % stride == 0 || i + 1 == n) {
            std::map<PatternCode, double> f;
            if (lambda > 0)
                for (const auto& [pattern, v] : sums) f[pattern] = v / lambda;
            out.emplace_back(i + 1, sse_between(f, truth));
        }
    }
    return out;
}

std::string sample_export_ndjson(const AttributedGraph& g, const FEstimate& est,
                                 std::size_t limit) {
    (void)g;
    std::ostringstream out;
    for (std::size_t i = 0; i < est.sample_class.size() && i < limit; ++i) {
        const ClassEstimate& c = est.classes[est.sample_class[i]];
        const Subgraph& s = est.samples[i];
        ordered_json j;
        j["nodes"] = std::vector<NodeId>(s.nodes().begin(), s.nodes().end());
        j["pattern"] = c.pattern.hex();
        j["alpha1"] = c.alpha1.value;
        j["alpha2"] = c.alpha2.value;
        out << j.dump() << '\n';
    }
    return out.str();
}

} // namespace relmine
