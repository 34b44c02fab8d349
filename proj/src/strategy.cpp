#include "strategy.hpp"

#include <algorithm>
#include <stdexcept>

namespace unclesim {

EventKind sample_event(double alpha, double delta, Rng& rng) {
    if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("alpha outside [0,1]");
    if (delta < 0.0 || delta > 1.0) throw std::invalid_argument("delta outside [0,1]");
    const double p_stale = delta * (1.0 - alpha);
    const double u = rng.uniform01();
    if (u < alpha) return EventKind::SelfishBlock;
    if (u < alpha + p_stale) return EventKind::HonestStale;
    return EventKind::HonestRegular;
}

std::vector<BlockId> select_uncles(const BlockTree& tree, BlockId prospective_parent,
                                   const UncleStrategy& strategy, Miner viewpoint,
                                   Rng& rng) {
    std::vector<BlockId> picked;
    if (strategy.policy == UnclePolicy::None) return picked;
    std::vector<BlockId> candidates = eligible_uncles(tree, prospective_parent, viewpoint);
    if (strategy.policy == UnclePolicy::OwnOnly) {
        std::erase_if(candidates,
                      [&](BlockId u) { return tree.block(u).miner != Miner::Selfish; });
    }
    // Two slots; each wants the most distant candidate still on the table.
    std::size_t next = 0;
    for (int slot = 0; slot < kMaxUnclesPerBlock && next < candidates.size(); ++slot) {
        if (rng.bernoulli(strategy.inclusion_probability))
            picked.push_back(candidates[next++]);
    }
    return picked;
}

namespace {

// Uniform choice among the published max-value tips.
BlockId pick_public_tip(const BlockTree& tree, Rng& rng) {
    const auto& tips = tree.best_tips();
    return tips.size() == 1 ? tips[0]
                            : tips[static_cast<std::size_t>(rng.below(tips.size()))];
}

}  // namespace

BlockId honest_step(BlockTree& tree, EventKind event, const UncleStrategy& strategy,
                    Rng& rng, Miner attribute_to) {
    if (event == EventKind::SelfishBlock)
        throw std::invalid_argument("honest_step requires an honest event");

    BlockId parent;
    if (event == EventKind::HonestStale) {
        // Rival at the height of the best public tip. Under the weighted rule
        // tied best tips may sit at different heights; anchor on one of them.
        std::uint32_t h;
        if (tree.rule() == ChainSelectionRule::LongestChain)
            h = tree.public_max_height();
        else
            h = tree.block(pick_public_tip(tree, rng)).height;
        const std::vector<BlockId> spots = tree.rival_parent_candidates(h);
        if (spots.empty()) {
            // Genesis-only public chain: nothing to compete with, mine a
            // regular block instead.
            parent = pick_public_tip(tree, rng);
        } else {
            parent = spots.size() == 1
                         ? spots[0]
                         : spots[static_cast<std::size_t>(rng.below(spots.size()))];
        }
    } else {
        parent = pick_public_tip(tree, rng);
    }
    const std::vector<BlockId> uncles =
        select_uncles(tree, parent, strategy, Miner::Honest, rng);
    return tree.append_block(parent, attribute_to, uncles, true);
}

SelfishStepResult selfish_step(BlockTree& tree, const SelfishState& state,
                               EventKind event, const UncleStrategy& strategy,
                               Rng& rng) {
    SelfishStepResult r;
    r.state = state;
    using Phase = SelfishState::Phase;

    if (event == EventKind::SelfishBlock) {
        switch (state.phase) {
            case Phase::Idle: {
                const auto& tips = tree.best_tips();
                BlockId own = kGenesisId;
                for (BlockId t : tips)
                    if (t != kGenesisId && tree.block(t).miner == Miner::Selfish) own = t;
                if (tips.size() > 1 && own != kGenesisId) {
                    // Tie with one of his own blocks: extend it and publish at
                    // once; this is the only immediate publication.
                    const auto uncles =
                        select_uncles(tree, own, strategy, Miner::Selfish, rng);
                    r.mined = tree.append_block(own, Miner::Selfish, uncles, true);
                    r.published.push_back(r.mined);
                } else {
                    const BlockId base = pick_public_tip(tree, rng);
                    const auto uncles =
                        select_uncles(tree, base, strategy, Miner::Selfish, rng);
                    r.mined = tree.append_block(base, Miner::Selfish, uncles, false);
                    r.state.phase = Phase::Hiding;
                    r.state.fork_base = base;
                    r.state.secret_fork.assign(1, r.mined);
                }
                break;
            }
            case Phase::Hiding: {
                const BlockId top = state.secret_fork.back();
                const auto uncles = select_uncles(tree, top, strategy, Miner::Selfish, rng);
                r.mined = tree.append_block(top, Miner::Selfish, uncles, false);
                r.state.secret_fork.push_back(r.mined);
                break;
            }
            case Phase::Racing: {
                const auto uncles =
                    select_uncles(tree, state.own_tip, strategy, Miner::Selfish, rng);
                r.mined = tree.append_block(state.own_tip, Miner::Selfish, uncles, true);
                r.published.push_back(r.mined);
                r.state = SelfishState{};
                break;
            }
        }
        return r;
    }

    // Honest events: the honest block is already appended and published.
    switch (state.phase) {
        case Phase::Idle:
            break;
        case Phase::Hiding: {
            if (event == EventKind::HonestStale) break;  // lead unchanged
            const int lead = state.lead(tree);
            if (lead <= 0) {
                // The network caught up with the single secret block: publish
                // it immediately to cause a race.
                const BlockId secret = state.secret_fork.back();
                tree.publish(secret);
                r.published.push_back(secret);
                r.state = SelfishState{};
                r.state.phase = Phase::Racing;
                r.state.own_tip = secret;
                r.state.rival_tip = static_cast<BlockId>(tree.size() - 1);
            } else if (lead == 1 && state.secret_fork.size() >= 2) {
                // One block short: broadcast the entire fork, which is now
                // strictly longer than the public branch.
                for (BlockId b : state.secret_fork) {
                    tree.publish(b);
                    r.published.push_back(b);
                }
                r.state = SelfishState{};
            }
            break;
        }
        case Phase::Racing:
            if (event == EventKind::HonestRegular) r.state = SelfishState{};
            break;
    }
    return r;
}

}  // namespace unclesim
