#pragma once

#include <array>
#include <cstdint>

#include "chain.hpp"
#include "strategy.hpp"

namespace unclesim {

enum class SimMode : std::uint8_t { Ethereum, Bitcoin };

struct SimParams {
    double alpha = 0.0;
    double delta = 0.0;
    SimMode mode = SimMode::Ethereum;
    UnclePolicy selfish_uncle_policy = UnclePolicy::All;
    double honest_inclusion_probability = 0.33;
    std::uint64_t min_blocks = std::uint64_t{1} << 17;
    std::uint64_t seed = 0;
    ChainSelectionRule rule = ChainSelectionRule::LongestChain;
    // Honest-counterfactual mode: the alpha fraction mines honestly and its
    // blocks are merely tagged as the "selfish" party for accounting.
    bool honest_baseline = false;

    // Bitcoin mode turns off stale generation and uncle inclusion for
    // everyone; returns the effective parameter set.
    SimParams normalized() const;
    void validate() const;  // throws std::invalid_argument
};

struct PartyCounts {
    std::uint64_t regular = 0;
    std::uint64_t uncle = 0;
};

struct WalkStats {
    PartyCounts selfish;
    PartyCounts honest;
    std::uint64_t stale_published = 0;
    std::uint64_t discarded_secret = 0;  // never-published fork remains, excluded everywhere
    std::uint64_t total_blocks = 0;      // published non-genesis blocks
    std::uint64_t main_chain_length = 0; // non-genesis blocks on the main chain
    RewardLedger rewards;
    std::array<std::uint64_t, kMaxUncleDistance + 1> uncle_distance_histogram{};
    // Tie events: honest regular steps taken while k >= 2 public tips competed.
    std::uint64_t tie_events = 0;
    double tie_gamma_sum = 0.0;
    // Racing entries whose fork outweighed every rival of equal height
    // (only possible under WeightedUncles with one-sided uncle references).
    std::uint64_t race_entries = 0;
    std::uint64_t one_sided_race_wins = 0;
    std::uint64_t events_selfish = 0;
    std::uint64_t events_honest_regular = 0;
    std::uint64_t events_honest_stale = 0;
    std::uint64_t seed = 0;

    std::uint64_t regular_total() const { return selfish.regular + honest.regular; }
    std::uint64_t uncle_total() const { return selfish.uncle + honest.uncle; }
};

// Drives one walk step by step. run_walk() covers the common case; the
// step-level interface exists so tests can inject fixed event sequences.
class WalkRunner {
public:
    WalkRunner(const SimParams& params, std::uint64_t stream_seed);

    EventKind sample_and_step();
    // Applies one forced event (the sampled-kind counters are updated as if
    // it had been drawn).
    void apply(EventKind event, std::vector<BlockId>* published = nullptr);

    // Publishes a strictly leading secret fork, drops anything else.
    void finalize();
    WalkStats stats();  // finalizes if needed, then classifies and accounts

    const BlockTree& tree() const { return tree_; }
    const SelfishState& state() const { return state_; }
    Rng& rng() { return rng_; }

private:
    void note_tie();

    SimParams params_;
    BlockTree tree_;
    SelfishState state_;
    Rng rng_;
    WalkStats counters_;
    bool finalized_ = false;
};

WalkStats run_walk(const SimParams& params, std::uint64_t stream_seed);

}  // namespace unclesim
