#pragma once

#include <cstdint>
#include <vector>

#include "chain.hpp"
#include "rng.hpp"

namespace unclesim {

enum class EventKind : std::uint8_t { SelfishBlock, HonestRegular, HonestStale };

// One block-generation event: the selfish miner with probability alpha, an
// honest stale block with probability delta*(1-alpha), an honest regular
// block otherwise.
EventKind sample_event(double alpha, double delta, Rng& rng);

enum class UnclePolicy : std::uint8_t { All, OwnOnly, None };

struct UncleStrategy {
    UnclePolicy policy = UnclePolicy::All;
    double inclusion_probability = 1.0;  // per uncle slot and step
};

// Scans eligible candidates most distant first; each gets one inclusion draw
// and at most two are taken. With inclusion probability 1 this is simply the
// two most distant candidates.
std::vector<BlockId> select_uncles(const BlockTree& tree, BlockId prospective_parent,
                                   const UncleStrategy& strategy, Miner viewpoint,
                                   Rng& rng);

// Appends (and publishes) one honest block. Regular blocks extend a uniformly
// chosen best public tip. Stale blocks become a rival at the current public
// tip height: the parent is drawn uniformly from the published blocks one
// level down, so the rival either forks a chain there or extends a fork that
// had fallen one behind. A stale event on a genesis-only chain falls back to
// a regular block. `attribute_to` only labels the block's owner; behavior is
// always honest.
BlockId honest_step(BlockTree& tree, EventKind event, const UncleStrategy& strategy,
                    Rng& rng, Miner attribute_to = Miner::Honest);

struct SelfishState {
    enum class Phase : std::uint8_t { Idle, Hiding, Racing };
    Phase phase = Phase::Idle;
    std::vector<BlockId> secret_fork;  // oldest first; nonempty iff Hiding
    BlockId fork_base = kGenesisId;
    BlockId own_tip = kGenesisId;    // Racing only
    BlockId rival_tip = kGenesisId;  // Racing only

    int lead(const BlockTree& tree) const {
        if (phase != Phase::Hiding) return 0;
        return static_cast<int>(tree.block(secret_fork.back()).height) -
               static_cast<int>(tree.public_max_height());
    }
};

struct SelfishStepResult {
    SelfishState state;
    std::vector<BlockId> published;  // blocks flipped public this step
    BlockId mined = kGenesisId;      // new block on SelfishBlock events, else genesis id
};

// Advances the selfish-mining state machine by one event. For SelfishBlock
// events the new block is appended here; for honest events the honest block
// must already be in the tree.
//
//   Idle    + selfish: mine on the best public tip. If tips are tied and one
//            is his own, take that one and publish at once; otherwise keep the
//            block secret and start hiding with lead 1.
//   Hiding  + selfish: extend the secret fork.
//   Hiding  + honest regular: lead shrinks by one. At lead 0 the single secret
//            block is published to force a race; at lead 1 (from >= 2) the
//            whole fork is published and wins outright.
//   Hiding  + honest stale: public height unchanged, lead unchanged.
//   Racing  + selfish: mine on the own tip, publish, race won.
//   Racing  + honest regular: adopt whatever the network built on.
//   Racing  + honest stale: another rival tip appears; keep racing.
SelfishStepResult selfish_step(BlockTree& tree, const SelfishState& state,
                               EventKind event, const UncleStrategy& strategy,
                               Rng& rng);

}  // namespace unclesim
