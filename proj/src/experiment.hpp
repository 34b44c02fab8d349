#pragma once

#include <functional>
#include <string>
#include <vector>

#include "metrics.hpp"

namespace unclesim {

struct BatchConfig {
    SimParams params;
    std::uint32_t n_walks = 100;
    double t1 = 0.001;  // sigma threshold near the break-even region
    double t2 = 0.01;   // sigma threshold elsewhere
    double t1_alpha_lo = 0.15;
    double t1_alpha_hi = 0.30;
    std::uint32_t max_doublings = 6;
    int jobs = 0;  // <= 0: hardware concurrency

    void validate() const;
    double sigma_threshold() const {
        return params.alpha >= t1_alpha_lo && params.alpha <= t1_alpha_hi ? t1 : t2;
    }
};

struct MetricAggregate {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation across walks
};

struct AggregateReport {
    SimParams params;  // as executed (normalized, blocks possibly doubled)
    std::uint32_t walks = 0;
    std::uint64_t blocks_per_walk = 0;
    std::uint32_t doublings = 0;
    bool converged = true;
    MetricAggregate rrr, arr_selfish, arr_honest, rbr, rns;
    // Pooled over all walks' included uncles / tie events.
    double avg_uncle_reward = 0.0;
    double avg_uncle_distance = 0.0;
    double observed_gamma = 0.0;
    double one_sided_win_frequency = 0.0;  // racing entries won purely by weight
};

// Runs n_walks independent walks and aggregates per-walk metrics. If the
// sample standard deviation of the selfish ARR exceeds the applicable
// threshold, the walk length is doubled and the batch rerun (fresh streams),
// up to max_doublings; a still-noisy final attempt is returned with
// converged = false.
AggregateReport run_batch_adaptive(const BatchConfig& config);

// Single batch at the configured length, no adaptive rerun.
AggregateReport run_batch(const BatchConfig& config);

struct BreakEvenResult {
    double alpha_star = 0.0;
    double sigma_alpha = 0.0;
    bool found = false;
    std::uint32_t points_evaluated = 0;
    std::vector<AggregateReport> selfish_points;
    std::vector<AggregateReport> baseline_points;
};

// Smallest alpha at which the selfish ARR reaches the ARR of an equally
// sized honest sub-miner in an otherwise identical all-honest network.
// Bisects the 0.005 grid over [alpha_lo, alpha_hi] (the profit gap is
// monotone in alpha) and interpolates the crossing between the bracketing
// grid points; sigma_alpha propagates the bracketing batches' ARR sigmas
// through that interpolation.
BreakEvenResult find_break_even(const BatchConfig& base, double alpha_lo = 0.10,
                                double alpha_hi = 0.35, double step = 0.005);

// Same search over an arbitrary evaluator (used by tests); the evaluator
// returns the profit gap and its standard deviation at a grid alpha.
struct GapSample {
    double gap = 0.0;
    double sigma = 0.0;
};
BreakEvenResult find_break_even_on_grid(
    const std::function<GapSample(double alpha)>& evaluate, double alpha_lo,
    double alpha_hi, double step);

// One header row plus one row per report:
//   alpha,delta,mode,selfish_uncle_strategy,walks,blocks_per_walk,doublings,
//   rrr_mean,rrr_std,arr_selfish_mean,arr_selfish_std,arr_honest_mean,
//   rbr_mean,rbr_std,rns_mean,rns_std,avg_uncle_reward,avg_uncle_distance,
//   observed_gamma,seed
// Numbers are shortest round-trip decimal, no locale. With `rule_labels`
// (same length as reports) a trailing `rule` column is added.
std::string csv_string(const std::vector<AggregateReport>& reports,
                       const std::vector<std::string>* rule_labels = nullptr);
void export_csv(const std::vector<AggregateReport>& reports, const std::string& path,
                const std::vector<std::string>* rule_labels = nullptr);

const char* to_string(SimMode mode);
const char* to_string(UnclePolicy policy);
const char* to_string(ChainSelectionRule rule);

}  // namespace unclesim
