#include "walk.hpp"

#include <stdexcept>

namespace unclesim {

SimParams SimParams::normalized() const {
    SimParams p = *this;
    if (p.mode == SimMode::Bitcoin) {
        p.delta = 0.0;
        p.selfish_uncle_policy = UnclePolicy::None;
        p.honest_inclusion_probability = 0.0;
    }
    return p;
}

void SimParams::validate() const {
    if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("alpha outside [0,1]");
    if (delta < 0.0 || delta > 1.0) throw std::invalid_argument("delta outside [0,1]");
    if (honest_inclusion_probability < 0.0 || honest_inclusion_probability > 1.0)
        throw std::invalid_argument("inclusion probability outside [0,1]");
    if (min_blocks == 0) throw std::invalid_argument("min_blocks must be positive");
}

WalkRunner::WalkRunner(const SimParams& params, std::uint64_t stream_seed)
    : params_(params.normalized()), tree_(params.rule), rng_(stream_seed) {
    params_.validate();
    tree_.reserve(params_.min_blocks + 8);
    counters_.seed = stream_seed;
}

EventKind WalkRunner::sample_and_step() {
    if (params_.honest_baseline) {
        // All-honest network, stale ratio delta; each block belongs to the
        // tagged sub-miner with probability alpha, behavior unchanged.
        const EventKind ev = sample_event(0.0, params_.delta, rng_);
        const Miner owner = rng_.bernoulli(params_.alpha) ? Miner::Selfish : Miner::Honest;
        if (ev == EventKind::HonestRegular) {
            counters_.events_honest_regular++;
            note_tie();
        } else {
            counters_.events_honest_stale++;
        }
        const UncleStrategy honest_strategy{UnclePolicy::All,
                                            params_.honest_inclusion_probability};
        honest_step(tree_, ev, honest_strategy, rng_, owner);
        return ev;
    }
    const EventKind ev = sample_event(params_.alpha, params_.delta, rng_);
    apply(ev);
    return ev;
}

void WalkRunner::note_tie() {
    if (tree_.best_tips().size() >= 2) {
        counters_.tie_events++;
        counters_.tie_gamma_sum += 1.0 / static_cast<double>(tree_.best_tips().size());
    }
}

void WalkRunner::apply(EventKind event, std::vector<BlockId>* published) {
    const UncleStrategy selfish_strategy{params_.selfish_uncle_policy, 1.0};
    if (event == EventKind::SelfishBlock) {
        counters_.events_selfish++;
        SelfishStepResult r = selfish_step(tree_, state_, event, selfish_strategy, rng_);
        state_ = std::move(r.state);
        if (published) *published = std::move(r.published);
        return;
    }

    if (event == EventKind::HonestRegular) {
        counters_.events_honest_regular++;
        note_tie();
    } else {
        counters_.events_honest_stale++;
    }
    const UncleStrategy honest_strategy{UnclePolicy::All,
                                        params_.honest_inclusion_probability};
    honest_step(tree_, event, honest_strategy, rng_);

    const bool was_hiding = state_.phase == SelfishState::Phase::Hiding;
    SelfishStepResult r = selfish_step(tree_, state_, event, selfish_strategy, rng_);
    state_ = std::move(r.state);
    if (was_hiding && state_.phase == SelfishState::Phase::Racing) {
        counters_.race_entries++;
        // One-sided win: the released block outweighs every equal-height
        // rival, which only happens when its uncle references add weight.
        if (tree_.rule() == ChainSelectionRule::WeightedUncles) {
            const BlockId own = state_.own_tip;
            bool heavier = true;
            for (BlockId t : tree_.best_tips()) {
                if (t == own) continue;
                if (tree_.measure(t) >= tree_.measure(own)) heavier = false;
            }
            if (heavier) counters_.one_sided_race_wins++;
        }
    }
    if (published) *published = std::move(r.published);
}

void WalkRunner::finalize() {
    if (finalized_) return;
    finalized_ = true;
    if (state_.phase == SelfishState::Phase::Hiding) {
        // A strictly leading fork wins by length once broadcast; a tied or
        // trailing one was never seen by the network and is dropped.
        if (state_.lead(tree_) >= 1) {
            for (BlockId b : state_.secret_fork) tree_.publish(b);
        } else {
            counters_.discarded_secret += state_.secret_fork.size();
        }
    }
    state_ = SelfishState{};
}

WalkStats WalkRunner::stats() {
    finalize();
    WalkStats s = counters_;

    const std::vector<BlockId> chain = best_chain(tree_, tree_.rule(), rng_);
    const std::vector<BlockClass> cls = classify_blocks(tree_, chain);
    s.rewards = compute_rewards(tree_, cls);
    s.main_chain_length = chain.size() - 1;  // genesis is unmined

    for (BlockId id = 1; id < tree_.size(); ++id) {
        const Block& b = tree_.block(id);
        if (!b.published) continue;  // discarded fork remains
        s.total_blocks++;
        PartyCounts& pc = b.miner == Miner::Selfish ? s.selfish : s.honest;
        switch (cls[id].kind) {
            case BlockClassKind::Regular:
                pc.regular++;
                break;
            case BlockClassKind::Uncle:
                pc.uncle++;
                s.uncle_distance_histogram[cls[id].distance]++;
                break;
            case BlockClassKind::Stale:
                s.stale_published++;
                break;
        }
    }
    return s;
}

WalkStats run_walk(const SimParams& params, std::uint64_t stream_seed) {
    WalkRunner runner(params, stream_seed);
    for (std::uint64_t i = 0; i < params.min_blocks; ++i) runner.sample_and_step();
    return runner.stats();
}

}  // namespace unclesim
