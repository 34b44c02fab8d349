#pragma once

#include "walk.hpp"

namespace unclesim {

struct MetricsReport {
    double rrr = 0.0;          // pooled revenue share of the selfish party
    double arr_selfish = 0.0;  // revenue / reward-yielding blocks
    double arr_honest = 0.0;
    double rbr = 0.0;          // selfish main-chain blocks / main-chain blocks
    double rns = 0.0;          // regular / (regular + uncle + published stale)
    double avg_uncle_reward = 0.0;
    double avg_uncle_distance = 0.0;
    double observed_gamma = 0.0;  // mean of 1/(competing chains) over tie events
    // Composite form of the revenue ratio (share-of-blocks times mean reward
    // per block); algebraically identical to arr_*, kept as a cross-check.
    double arr_selfish_composite = 0.0;
    double arr_honest_composite = 0.0;
    // Alternative ratio reading of "revenue in relation to the honest
    // network's": rev(S)/rev(H). Debug output only.
    double rrr_vs_honest = 0.0;
};

struct EmptyWalkError : std::invalid_argument {
    EmptyWalkError() : std::invalid_argument("walk produced no reward-yielding blocks") {}
};

MetricsReport compute_metrics(const WalkStats& stats);

}  // namespace unclesim
