#include "chain.hpp"

#include <algorithm>
#include <charconv>

namespace unclesim {

BlockTree::BlockTree(ChainSelectionRule rule) : rule_(rule) {
    Block genesis;
    genesis.published = true;
    blocks_.push_back(genesis);
    by_height_.push_back({kGenesisId});
    best_tips_.push_back(kGenesisId);
}

void BlockTree::reserve(std::size_t blocks) {
    blocks_.reserve(blocks + 1);
    by_height_.reserve(blocks + 1);
}

void BlockTree::check_uncle_refs(BlockId parent, std::uint32_t new_height,
                                 std::span<const BlockId> refs) const {
    if (refs.size() > kMaxUnclesPerBlock)
        throw ChainError(ChainErrorCode::TooManyUncles,
                         "a block may reference at most two uncles");
    for (std::size_t i = 0; i < refs.size(); ++i) {
        for (std::size_t j = i + 1; j < refs.size(); ++j)
            if (refs[i] == refs[j])
                throw ChainError(ChainErrorCode::DuplicateUncleInList,
                                 "uncle referenced twice by the same block");
    }
    for (BlockId u : refs) {
        if (!contains(u))
            throw ChainError(ChainErrorCode::UnknownBlock, "unknown uncle id");
        const std::uint32_t uh = blocks_[u].height;
        if (uh >= new_height || new_height - uh > kMaxUncleDistance)
            throw ChainError(ChainErrorCode::UncleDistanceOutOfRange,
                             "uncle distance outside 1..6");
        // Walk the ancestor path down to the uncle's height. The path block at
        // the uncle's own height must differ from it (otherwise it is an
        // ancestor), and the next step down must be its parent.
        BlockId walk = parent;
        while (blocks_[walk].height > uh) walk = blocks_[walk].parent;
        if (walk == u)
            throw ChainError(ChainErrorCode::UncleOnOwnPath,
                             "uncle is an ancestor of the referencing block");
        if (blocks_[walk].parent != blocks_[u].parent)
            throw ChainError(ChainErrorCode::UncleParentOffPath,
                             "uncle's parent is not on the referencing block's ancestor path");
        // References already on the path could only have been made by path
        // blocks at most 5 levels above the uncle (distance <= 6).
        BlockId p = parent;
        for (int step = 0; step < kMaxUncleDistance - 1 && p != kGenesisId; ++step) {
            for (BlockId r : blocks_[p].uncles())
                if (r == u)
                    throw ChainError(ChainErrorCode::UncleAlreadyReferenced,
                                     "uncle already referenced on this chain");
            p = blocks_[p].parent;
        }
    }
}

BlockId BlockTree::append_block(BlockId parent, Miner miner,
                                std::span<const BlockId> uncle_refs, bool published) {
    if (!contains(parent))
        throw ChainError(ChainErrorCode::UnknownBlock, "unknown parent id");
    const std::uint32_t height = blocks_[parent].height + 1;
    check_uncle_refs(parent, height, uncle_refs);

    const BlockId id = static_cast<BlockId>(blocks_.size());
    Block b;
    b.parent = parent;
    b.height = height;
    b.cumulative_uncles =
        blocks_[parent].cumulative_uncles + static_cast<std::uint32_t>(uncle_refs.size());
    b.miner = miner;
    b.published = false;
    b.uncle_count = static_cast<std::uint8_t>(uncle_refs.size());
    std::copy(uncle_refs.begin(), uncle_refs.end(), b.uncle_refs.begin());
    b.first_child = kGenesisId;
    b.next_sibling = blocks_[parent].first_child;
    blocks_.push_back(b);
    blocks_[parent].first_child = id;

    if (by_height_.size() <= height) by_height_.resize(height + 1);
    by_height_[height].push_back(id);

    if (published) publish(id);
    return id;
}

void BlockTree::publish(BlockId id) {
    if (!contains(id)) throw ChainError(ChainErrorCode::UnknownBlock, "unknown block id");
    Block& b = blocks_[id];
    if (b.published)
        throw ChainError(ChainErrorCode::AlreadyPublished, "block is already published");
    b.published = true;
    blocks_[b.parent].published_children++;
    public_max_height_ = std::max(public_max_height_, b.height);
    const std::uint64_t m = measure(id);
    if (m > best_measure_) {
        best_measure_ = m;
        best_tips_.clear();
        best_tips_.push_back(id);
    } else if (m == best_measure_) {
        best_tips_.push_back(id);
    }
}

const std::vector<BlockId>& BlockTree::blocks_at_height(std::uint32_t h) const {
    static const std::vector<BlockId> empty;
    return h < by_height_.size() ? by_height_[h] : empty;
}

std::vector<BlockId> BlockTree::rival_parent_candidates(std::uint32_t h) const {
    std::vector<BlockId> out;
    if (h == 0) return out;
    for (BlockId id : blocks_at_height(h - 1))
        if (blocks_[id].published) out.push_back(id);
    return out;
}

std::vector<BlockId> best_chain(const BlockTree& tree, ChainSelectionRule rule, Rng& rng) {
    std::uint64_t best = 0;
    std::vector<BlockId> tips{kGenesisId};
    for (BlockId id = 1; id < tree.size(); ++id) {
        if (!tree.block(id).published) continue;
        const std::uint64_t m = chain_weight(tree, id, rule);
        if (m > best) {
            best = m;
            tips.assign(1, id);
        } else if (m == best && best > 0) {
            tips.push_back(id);
        }
    }
    // Only tips can carry the maximal value: any published child strictly
    // increases it. Break value ties uniformly.
    BlockId tip = tips.size() == 1 ? tips[0]
                                   : tips[static_cast<std::size_t>(rng.below(tips.size()))];
    std::vector<BlockId> chain;
    for (BlockId id = tip;; id = tree.block(id).parent) {
        chain.push_back(id);
        if (id == kGenesisId) break;
    }
    std::reverse(chain.begin(), chain.end());
    return chain;
}

std::vector<BlockId> main_chain(const BlockTree& tree, Rng& rng) {
    return best_chain(tree, ChainSelectionRule::LongestChain, rng);
}

std::uint64_t chain_weight(const BlockTree& tree, BlockId tip, ChainSelectionRule rule) {
    if (!tree.contains(tip))
        throw ChainError(ChainErrorCode::UnknownBlock, "unknown tip id");
    const Block& b = tree.block(tip);
    return rule == ChainSelectionRule::LongestChain
               ? b.height
               : std::uint64_t{b.height} + b.cumulative_uncles;
}

std::vector<BlockClass> classify_blocks(const BlockTree& tree,
                                        std::span<const BlockId> chain) {
    if (chain.empty() || chain.front() != kGenesisId)
        throw ChainError(ChainErrorCode::UnknownBlock, "chain must start at genesis");
    for (std::size_t i = 1; i < chain.size(); ++i) {
        if (!tree.contains(chain[i]) || tree.block(chain[i]).parent != chain[i - 1])
            throw ChainError(ChainErrorCode::UnknownBlock,
                             "chain is not a root path of this tree");
    }
    std::vector<BlockClass> cls(tree.size(), BlockClass{BlockClassKind::Stale, 0});
    for (BlockId id : chain) cls[id] = {BlockClassKind::Regular, 0};
    for (BlockId nephew : chain) {
        for (BlockId u : tree.block(nephew).uncles()) {
            const std::uint32_t d = tree.block(nephew).height - tree.block(u).height;
            cls[u] = {BlockClassKind::Uncle, static_cast<std::uint8_t>(d)};
        }
    }
    return cls;
}

RewardLedger compute_rewards(const BlockTree& tree,
                             std::span<const BlockClass> classification) {
    RewardLedger ledger;
    auto at = [&ledger](Miner m) -> MinerReward& {
        return m == Miner::Selfish ? ledger.selfish : ledger.honest;
    };
    for (BlockId id = 1; id < tree.size(); ++id) {
        const Block& b = tree.block(id);
        switch (classification[id].kind) {
            case BlockClassKind::Regular:
                at(b.miner).regular += 1.0;
                at(b.miner).inclusion_bonus += kInclusionBonus * b.uncle_count;
                break;
            case BlockClassKind::Uncle:
                at(b.miner).uncle += uncle_reward(classification[id].distance);
                break;
            case BlockClassKind::Stale:
                break;
        }
    }
    return ledger;
}

std::vector<BlockId> eligible_uncles(const BlockTree& tree, BlockId prospective_parent,
                                     Miner viewpoint) {
    if (!tree.contains(prospective_parent))
        throw ChainError(ChainErrorCode::UnknownBlock, "unknown block id");

    // References made by the five nearest path ancestors are the only ones
    // that can exclude candidates in the 1..6 distance window.
    std::array<BlockId, 2 * (kMaxUncleDistance - 1)> taken{};
    std::size_t n_taken = 0;
    {
        BlockId p = prospective_parent;
        for (int step = 0; step < kMaxUncleDistance - 1 && p != kGenesisId; ++step) {
            for (BlockId r : tree.block(p).uncles()) taken[n_taken++] = r;
            p = tree.block(p).parent;
        }
    }
    auto already_taken = [&](BlockId u) {
        for (std::size_t i = 0; i < n_taken; ++i)
            if (taken[i] == u) return true;
        return false;
    };

    // Children of the k-th ancestor above the parent sit at distance exactly k
    // from the prospective block; visit k = 6 first so the most distant
    // candidates lead the list.
    std::array<BlockId, kMaxUncleDistance> ancestor{};
    std::array<BlockId, kMaxUncleDistance> path_child{};
    int depth = 0;
    BlockId walk = prospective_parent;
    for (int k = 1; k <= kMaxUncleDistance && walk != kGenesisId; ++k) {
        path_child[depth] = walk;
        ancestor[depth] = tree.block(walk).parent;
        walk = ancestor[depth];
        ++depth;
    }
    // Note: genesis itself still has candidate children once reached.

    std::vector<BlockId> out;
    for (int k = depth; k >= 1; --k) {
        const BlockId anc = ancestor[k - 1];
        const BlockId on_path = path_child[k - 1];
        std::vector<BlockId> level;
        tree.for_each_child(anc, [&](BlockId c) {
            if (c == on_path) return;
            if (viewpoint == Miner::Honest && !tree.block(c).published) return;
            if (already_taken(c)) return;
            level.push_back(c);
        });
        std::sort(level.begin(), level.end());
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

std::string dump_tree(const BlockTree& tree, std::span<const BlockClass> classification) {
    std::string out;
    char buf[32];
    auto put_num = [&](std::uint64_t v) {
        auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
        out.append(buf, end);
    };
    for (BlockId id = 0; id < tree.size(); ++id) {
        const Block& b = tree.block(id);
        put_num(id);
        out += ' ';
        if (id == kGenesisId)
            out += '-';
        else
            put_num(b.parent);
        out += ' ';
        put_num(b.height);
        out += ' ';
        out += id == kGenesisId ? '-' : (b.miner == Miner::Selfish ? 'S' : 'H');
        out += ' ';
        switch (classification[id].kind) {
            case BlockClassKind::Regular:
                out += "regular";
                break;
            case BlockClassKind::Uncle:
                out += "uncle:";
                put_num(classification[id].distance);
                break;
            case BlockClassKind::Stale:
                out += "stale";
                break;
        }
        out += ' ';
        if (b.uncle_count == 0) {
            out += '-';
        } else {
            for (std::uint8_t i = 0; i < b.uncle_count; ++i) {
                if (i) out += ',';
                put_num(b.uncle_refs[i]);
            }
        }
        out += ' ';
        out += b.published ? '1' : '0';
        out += '\n';
    }
    return out;
}

}  // namespace unclesim
