#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rng.hpp"

namespace unclesim {

using BlockId = std::uint32_t;
constexpr BlockId kGenesisId = 0;
constexpr int kMaxUncleDistance = 6;
constexpr int kMaxUnclesPerBlock = 2;

enum class Miner : std::uint8_t { Selfish, Honest };

enum class ChainSelectionRule : std::uint8_t {
    LongestChain,   // chain value = height
    WeightedUncles  // chain value = height + referenced uncles on the path
};

enum class ChainErrorCode {
    UnknownBlock,
    UncleDistanceOutOfRange,
    UncleParentOffPath,
    UncleOnOwnPath,
    UncleAlreadyReferenced,
    TooManyUncles,
    DuplicateUncleInList,
    AlreadyPublished,
};

struct ChainError : std::runtime_error {
    ChainError(ChainErrorCode c, const std::string& what)
        : std::runtime_error(what), code(c) {}
    ChainErrorCode code;
};

struct Block {
    BlockId parent = kGenesisId;
    std::uint32_t height = 0;
    std::uint32_t cumulative_uncles = 0;  // referenced uncles on the path from genesis
    BlockId first_child = kGenesisId;     // intrusive child list; kGenesisId = none
    BlockId next_sibling = kGenesisId;
    std::uint32_t published_children = 0;
    std::array<BlockId, 2> uncle_refs{};
    std::uint8_t uncle_count = 0;
    Miner miner = Miner::Honest;
    bool published = true;

    std::span<const BlockId> uncles() const {
        return {uncle_refs.data(), uncle_count};
    }
};

// Append-only block tree rooted at an unmined genesis block. Uncle references
// are validated at append time against the new block's own ancestor path:
// distance within 1..6, uncle's parent on the path, uncle itself off the path,
// and not referenced by any block already on the path. Competing branches may
// each reference the same block; at most one of those references can end up on
// the main chain.
class BlockTree {
public:
    explicit BlockTree(ChainSelectionRule rule = ChainSelectionRule::LongestChain);

    void reserve(std::size_t blocks);

    BlockId append_block(BlockId parent, Miner miner,
                         std::span<const BlockId> uncle_refs, bool published);
    // Flips published false->true. Parent must already be published.
    void publish(BlockId id);

    std::size_t size() const { return blocks_.size(); }
    const Block& block(BlockId id) const { return blocks_[id]; }
    bool contains(BlockId id) const { return id < blocks_.size(); }
    ChainSelectionRule rule() const { return rule_; }

    // Chain value of a block under the tree's rule.
    std::uint64_t measure(BlockId id) const {
        const Block& b = blocks_[id];
        return rule_ == ChainSelectionRule::LongestChain
                   ? b.height
                   : std::uint64_t{b.height} + b.cumulative_uncles;
    }

    // Published blocks of maximal chain value (always tips of the public view).
    const std::vector<BlockId>& best_tips() const { return best_tips_; }
    std::uint32_t public_max_height() const { return public_max_height_; }

    const std::vector<BlockId>& blocks_at_height(std::uint32_t h) const;

    // Published blocks at height h-1: the positions where a freshly mined
    // rival block at height h may attach. A parent with a child at h forks an
    // existing chain; a childless parent is a fork tip catching back up.
    std::vector<BlockId> rival_parent_candidates(std::uint32_t h) const;

    template <typename Fn>
    void for_each_child(BlockId id, Fn&& fn) const {
        for (BlockId c = blocks_[id].first_child; c != kGenesisId;
             c = blocks_[c].next_sibling) {
            fn(c);
        }
    }

private:
    void check_uncle_refs(BlockId parent, std::uint32_t new_height,
                          std::span<const BlockId> refs) const;

    std::vector<Block> blocks_;
    std::vector<std::vector<BlockId>> by_height_;
    std::vector<BlockId> best_tips_;
    std::uint64_t best_measure_ = 0;
    std::uint32_t public_max_height_ = 0;
    ChainSelectionRule rule_;
};

enum class BlockClassKind : std::uint8_t { Regular, Uncle, Stale };

struct BlockClass {
    BlockClassKind kind = BlockClassKind::Stale;
    std::uint8_t distance = 0;  // only meaningful for uncles
};

struct MinerReward {
    double regular = 0.0;          // 1 per own main-chain block
    double uncle = 0.0;            // (8-d)/8 per own included uncle
    double inclusion_bonus = 0.0;  // 1/32 per uncle referenced by an own main-chain block
    double total() const { return regular + uncle + inclusion_bonus; }
};

struct RewardLedger {
    MinerReward selfish;
    MinerReward honest;
    const MinerReward& of(Miner m) const {
        return m == Miner::Selfish ? selfish : honest;
    }
};

inline double uncle_reward(int distance) { return (8.0 - distance) / 8.0; }
constexpr double kInclusionBonus = 1.0 / 32.0;

// Genesis-to-tip path of maximal length over published blocks; ties between
// equal-length tips are broken uniformly at random.
std::vector<BlockId> main_chain(const BlockTree& tree, Rng& rng);

// Same, but the chain value is taken from `rule` (WeightedUncles adds the
// number of referenced uncles on the path; ties are ties in value).
std::vector<BlockId> best_chain(const BlockTree& tree, ChainSelectionRule rule, Rng& rng);

std::uint64_t chain_weight(const BlockTree& tree, BlockId tip, ChainSelectionRule rule);

// Dense per-block classification: chain members are Regular, blocks referenced
// from a chain member's uncle slots are Uncle(distance), the rest Stale.
std::vector<BlockClass> classify_blocks(const BlockTree& tree,
                                        std::span<const BlockId> chain);

RewardLedger compute_rewards(const BlockTree& tree,
                             std::span<const BlockClass> classification);

// All blocks the holder of `viewpoint` could reference as uncles from a block
// mined on top of `prospective_parent`, most distant first (id order within a
// distance). The honest network sees published blocks only; the selfish miner
// sees everything.
std::vector<BlockId> eligible_uncles(const BlockTree& tree, BlockId prospective_parent,
                                     Miner viewpoint);

// Line-oriented text dump, one block per line:
//   id parent height miner class uncle_refs published
std::string dump_tree(const BlockTree& tree, std::span<const BlockClass> classification);

}  // namespace unclesim
