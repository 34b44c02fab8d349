#pragma once

#include "experiment.hpp"

namespace unclesim {

struct WeightedScenarioReport {
    AggregateReport longest;
    AggregateReport weighted;
    double rrr_delta = 0.0;          // weighted - longest
    double arr_selfish_delta = 0.0;  // weighted - longest
    // Fraction of racing entries (equal-length releases) the selfish fork won
    // outright because its uncle references made it strictly heavier.
    double one_sided_win_frequency = 0.0;
};

// Paired comparison of chain-selection rules: the same master seed drives one
// batch under longest-chain and one under weighted-uncle selection, with the
// honest network picking tips by the active rule and the selfish miner
// referencing public blocks from inside his secret fork.
WeightedScenarioReport run_weighted_scenario(const BatchConfig& config);

}  // namespace unclesim
