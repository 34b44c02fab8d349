#include "weighted.hpp"

namespace unclesim {

WeightedScenarioReport run_weighted_scenario(const BatchConfig& config) {
    config.validate();

    BatchConfig longest = config;
    longest.params.rule = ChainSelectionRule::LongestChain;
    BatchConfig weighted = config;
    weighted.params.rule = ChainSelectionRule::WeightedUncles;

    WeightedScenarioReport rep;
    rep.longest = run_batch(longest);
    rep.weighted = run_batch(weighted);
    rep.rrr_delta = rep.weighted.rrr.mean - rep.longest.rrr.mean;
    rep.arr_selfish_delta =
        rep.weighted.arr_selfish.mean - rep.longest.arr_selfish.mean;
    rep.one_sided_win_frequency = rep.weighted.one_sided_win_frequency;
    return rep;
}

}  // namespace unclesim
