#include "experiment.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

namespace unclesim {

void BatchConfig::validate() const {
    params.validate();
    if (n_walks < 2) throw std::invalid_argument("a batch needs at least 2 walks");
    if (!(t1 < t2)) throw std::invalid_argument("t1 must be smaller than t2");
    if (t1 <= 0.0) throw std::invalid_argument("thresholds must be positive");
}

namespace {

struct Accumulator {
    double sum = 0.0, sum_sq = 0.0;
    std::uint64_t n = 0;
    void add(double x) { sum += x, sum_sq += x * x, ++n; }
    MetricAggregate finish() const {
        MetricAggregate a;
        a.mean = sum / static_cast<double>(n);
        if (n > 1) {
            const double var =
                (sum_sq - sum * sum / static_cast<double>(n)) / static_cast<double>(n - 1);
            a.stddev = var > 0.0 ? std::sqrt(var) : 0.0;
        }
        return a;
    }
};

AggregateReport aggregate(const SimParams& params, std::uint32_t n_walks,
                          std::uint32_t round, int jobs) {
    const unsigned hw = std::thread::hardware_concurrency();
    const unsigned n_threads =
        jobs > 0 ? static_cast<unsigned>(jobs) : (hw > 0 ? hw : 1);

    std::vector<WalkStats> stats(n_walks);
    auto worker = [&](unsigned tid) {
        for (std::uint32_t w = tid; w < n_walks; w += n_threads)
            stats[w] = run_walk(params, walk_stream_seed(params.seed, round, w));
    };
    if (n_threads <= 1 || n_walks == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }

    AggregateReport rep;
    rep.params = params.normalized();
    rep.walks = n_walks;
    rep.blocks_per_walk = params.min_blocks;
    rep.doublings = round;

    Accumulator rrr, arr_s, arr_h, rbr, rns;
    std::uint64_t uncles = 0, distance_sum = 0, tie_events = 0;
    std::uint64_t race_entries = 0, one_sided = 0;
    double reward_sum = 0.0, gamma_sum = 0.0;
    for (const WalkStats& s : stats) {
        const MetricsReport m = compute_metrics(s);
        rrr.add(m.rrr);
        arr_s.add(m.arr_selfish);
        arr_h.add(m.arr_honest);
        rbr.add(m.rbr);
        rns.add(m.rns);
        for (int d = 1; d <= kMaxUncleDistance; ++d) {
            const std::uint64_t c = s.uncle_distance_histogram[d];
            uncles += c;
            distance_sum += c * static_cast<std::uint64_t>(d);
            reward_sum += static_cast<double>(c) * uncle_reward(d);
        }
        tie_events += s.tie_events;
        gamma_sum += s.tie_gamma_sum;
        race_entries += s.race_entries;
        one_sided += s.one_sided_race_wins;
    }
    rep.rrr = rrr.finish();
    rep.arr_selfish = arr_s.finish();
    rep.arr_honest = arr_h.finish();
    rep.rbr = rbr.finish();
    rep.rns = rns.finish();
    if (uncles > 0) {
        rep.avg_uncle_reward = reward_sum / static_cast<double>(uncles);
        rep.avg_uncle_distance =
            static_cast<double>(distance_sum) / static_cast<double>(uncles);
    }
    if (tie_events > 0) rep.observed_gamma = gamma_sum / static_cast<double>(tie_events);
    if (race_entries > 0)
        rep.one_sided_win_frequency =
            static_cast<double>(one_sided) / static_cast<double>(race_entries);
    return rep;
}

}  // namespace

AggregateReport run_batch(const BatchConfig& config) {
    config.validate();
    return aggregate(config.params, config.n_walks, 0, config.jobs);
}

AggregateReport run_batch_adaptive(const BatchConfig& config) {
    config.validate();
    const double threshold = config.sigma_threshold();
    SimParams params = config.params;
    for (std::uint32_t round = 0;; ++round) {
        AggregateReport rep = aggregate(params, config.n_walks, round, config.jobs);
        rep.converged = rep.arr_selfish.stddev < threshold;
        if (rep.converged || round == config.max_doublings) return rep;
        params.min_blocks *= 2;
    }
}

BreakEvenResult find_break_even_on_grid(
    const std::function<GapSample(double alpha)>& evaluate, double alpha_lo,
    double alpha_hi, double step) {
    const int n = static_cast<int>(std::lround((alpha_hi - alpha_lo) / step));
    if (n < 1) throw std::invalid_argument("empty break-even grid");
    auto grid = [&](int i) { return alpha_lo + step * i; };

    std::vector<GapSample> cache(static_cast<std::size_t>(n) + 1,
                                 GapSample{0.0, -1.0});
    std::uint32_t evaluated = 0;
    auto at = [&](int i) -> const GapSample& {
        if (cache[i].sigma < 0.0) {
            cache[i] = evaluate(grid(i));
            ++evaluated;
        }
        return cache[i];
    };

    BreakEvenResult res;
    if (at(0).gap > 0.0 || at(n).gap <= 0.0) {
        res.points_evaluated = evaluated;
        return res;  // no crossing inside the sweep range
    }
    // The gap is increasing in alpha, so the sign change is unique; bisect
    // down to adjacent grid points.
    int lo = 0, hi = n;
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        (at(mid).gap <= 0.0 ? lo : hi) = mid;
    }
    const GapSample& a = at(lo);
    const GapSample& b = at(hi);
    const double rise = b.gap - a.gap;
    res.found = true;
    res.alpha_star = grid(lo) + step * (-a.gap / rise);
    // Linear-interpolation error propagation from the bracketing sigmas.
    const double da = -step * b.gap / (rise * rise);
    const double db = step * a.gap / (rise * rise);
    res.sigma_alpha = std::sqrt(da * da * a.sigma * a.sigma + db * db * b.sigma * b.sigma);
    res.points_evaluated = evaluated;
    return res;
}

BreakEvenResult find_break_even(const BatchConfig& base, double alpha_lo,
                                double alpha_hi, double step) {
    base.validate();
    std::vector<AggregateReport> selfish_points, baseline_points;
    auto evaluate = [&](double alpha) {
        BatchConfig c = base;
        c.params.alpha = alpha;
        c.params.honest_baseline = false;
        const AggregateReport attack = run_batch_adaptive(c);

        BatchConfig b = base;
        b.params.alpha = alpha;
        b.params.honest_baseline = true;
        b.params.seed = splitmix64(base.params.seed ^ 0xBA5EBA11ull);
        const AggregateReport honest = run_batch_adaptive(b);

        selfish_points.push_back(attack);
        baseline_points.push_back(honest);
        GapSample g;
        g.gap = attack.arr_selfish.mean - honest.arr_selfish.mean;
        g.sigma = std::sqrt(attack.arr_selfish.stddev * attack.arr_selfish.stddev +
                            honest.arr_selfish.stddev * honest.arr_selfish.stddev);
        return g;
    };
    BreakEvenResult res = find_break_even_on_grid(evaluate, alpha_lo, alpha_hi, step);
    res.selfish_points = std::move(selfish_points);
    res.baseline_points = std::move(baseline_points);
    return res;
}

const char* to_string(SimMode mode) {
    return mode == SimMode::Ethereum ? "ethereum" : "bitcoin";
}
const char* to_string(UnclePolicy policy) {
    switch (policy) {
        case UnclePolicy::All: return "all";
        case UnclePolicy::OwnOnly: return "own";
        case UnclePolicy::None: return "none";
    }
    return "?";
}
const char* to_string(ChainSelectionRule rule) {
    return rule == ChainSelectionRule::LongestChain ? "longest" : "weighted";
}

namespace {

void append_number(std::string& out, double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, end);
}

void append_number(std::string& out, std::uint64_t v) {
    char buf[24];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, end);
}

}  // namespace

std::string csv_string(const std::vector<AggregateReport>& reports,
                       const std::vector<std::string>* rule_labels) {
    if (reports.empty())
        throw std::invalid_argument("refusing to write a CSV without rows");
    if (rule_labels && rule_labels->size() != reports.size())
        throw std::invalid_argument("rule label count does not match report count");

    std::string out =
        "alpha,delta,mode,selfish_uncle_strategy,walks,blocks_per_walk,doublings,"
        "rrr_mean,rrr_std,arr_selfish_mean,arr_selfish_std,arr_honest_mean,"
        "rbr_mean,rbr_std,rns_mean,rns_std,avg_uncle_reward,avg_uncle_distance,"
        "observed_gamma,seed";
    if (rule_labels) out += ",rule";
    out += '\n';

    for (std::size_t i = 0; i < reports.size(); ++i) {
        const AggregateReport& r = reports[i];
        append_number(out, r.params.alpha);
        out += ',';
        append_number(out, r.params.delta);
        out += ',';
        out += to_string(r.params.mode);
        out += ',';
        out += to_string(r.params.selfish_uncle_policy);
        out += ',';
        append_number(out, std::uint64_t{r.walks});
        out += ',';
        append_number(out, r.blocks_per_walk);
        out += ',';
        append_number(out, std::uint64_t{r.doublings});
        out += ',';
        append_number(out, r.rrr.mean);
        out += ',';
        append_number(out, r.rrr.stddev);
        out += ',';
        append_number(out, r.arr_selfish.mean);
        out += ',';
        append_number(out, r.arr_selfish.stddev);
        out += ',';
        append_number(out, r.arr_honest.mean);
        out += ',';
        append_number(out, r.rbr.mean);
        out += ',';
        append_number(out, r.rbr.stddev);
        out += ',';
        append_number(out, r.rns.mean);
        out += ',';
        append_number(out, r.rns.stddev);
        out += ',';
        append_number(out, r.avg_uncle_reward);
        out += ',';
        append_number(out, r.avg_uncle_distance);
        out += ',';
        append_number(out, r.observed_gamma);
        out += ',';
        append_number(out, r.params.seed);
        if (rule_labels) {
            out += ',';
            out += (*rule_labels)[i];
        }
        out += '\n';
    }
    return out;
}

void export_csv(const std::vector<AggregateReport>& reports, const std::string& path,
                const std::vector<std::string>* rule_labels) {
    const std::string body = csv_string(reports, rule_labels);
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    const std::size_t written = std::fwrite(body.data(), 1, body.size(), f);
    const int rc = std::fclose(f);
    if (written != body.size() || rc != 0)
        throw std::runtime_error("short write: " + path);
}

}  // namespace unclesim
