#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "strategy.hpp"
#include "walk.hpp"

using namespace unclesim;

TEST_CASE("event frequencies follow alpha and delta") {
    Rng rng(11);
    const double alpha = 0.3, delta = 0.2;
    int counts[3] = {0, 0, 0};
    const int draws = 1000000;
    for (int i = 0; i < draws; ++i)
        counts[static_cast<int>(sample_event(alpha, delta, rng))]++;
    const double n = draws;
    CHECK(counts[0] / n == doctest::Approx(0.30).epsilon(0.01 / 0.30));
    CHECK(counts[1] / n == doctest::Approx(0.56).epsilon(0.01 / 0.56));
    CHECK(counts[2] / n == doctest::Approx(0.14).epsilon(0.01 / 0.14));
}

TEST_CASE("alpha zero never yields a selfish event") {
    Rng rng(5);
    for (int i = 0; i < 20000; ++i)
        CHECK(sample_event(0.0, 0.3, rng) != EventKind::SelfishBlock);
}

TEST_CASE("alpha and delta zero always yields honest regular") {
    Rng rng(6);
    for (int i = 0; i < 20000; ++i)
        CHECK(sample_event(0.0, 0.0, rng) == EventKind::HonestRegular);
}

TEST_CASE("event sampling validates its inputs") {
    Rng rng(1);
    CHECK_THROWS_AS(sample_event(-0.1, 0.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(sample_event(1.5, 0.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(sample_event(0.2, -1.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(sample_event(0.2, 1.01, rng), std::invalid_argument);
}

namespace {

// Linear chain topped by siblings at chosen distances below the tip.
struct ForkedChain {
    BlockTree tree;
    BlockId tip = kGenesisId;
    std::vector<BlockId> siblings;

    explicit ForkedChain(int length, const std::vector<int>& fork_heights = {}) {
        for (int h = 1; h <= length; ++h) {
            const BlockId parent = tip;
            tip = tree.append_block(parent, Miner::Honest, {}, true);
            for (int fh : fork_heights)
                if (fh == h)
                    siblings.push_back(tree.append_block(parent, Miner::Honest, {}, true));
        }
    }
};

}  // namespace

TEST_CASE("uncle policy none selects nothing") {
    ForkedChain f(6, {2, 4});
    Rng rng(1);
    const UncleStrategy none{UnclePolicy::None, 1.0};
    CHECK(select_uncles(f.tree, f.tip, none, Miner::Honest, rng).empty());
}

TEST_CASE("certain inclusion picks the two most distant candidates") {
    // Candidates at distances 5, 3 and 1 from the prospective block.
    ForkedChain f(6, {2, 4, 6});
    Rng rng(1);
    const UncleStrategy all{UnclePolicy::All, 1.0};
    const auto picked = select_uncles(f.tree, f.tip, all, Miner::Selfish, rng);
    REQUIRE(picked.size() == 2);
    CHECK(f.tree.block(picked[0]).height == 2);
    CHECK(f.tree.block(picked[1]).height == 4);
}

TEST_CASE("a single candidate is included at the slot probability") {
    ForkedChain f(3, {3});
    Rng rng(9);
    const UncleStrategy honest{UnclePolicy::All, 0.33};
    int included = 0;
    const int trials = 100000;
    for (int i = 0; i < trials; ++i)
        included += select_uncles(f.tree, f.tip, honest, Miner::Honest, rng).empty() ? 0 : 1;
    CHECK(included / static_cast<double>(trials) ==
          doctest::Approx(0.33).epsilon(0.01 / 0.33));
}

TEST_CASE("own-only policy ignores foreign blocks") {
    BlockTree t;
    const BlockId a = t.append_block(kGenesisId, Miner::Honest, {}, true);
    t.append_block(kGenesisId, Miner::Honest, {}, true);
    const BlockId own = t.append_block(kGenesisId, Miner::Selfish, {}, true);
    const BlockId tip = t.append_block(a, Miner::Honest, {}, true);
    Rng rng(2);
    const UncleStrategy own_only{UnclePolicy::OwnOnly, 1.0};
    const auto picked = select_uncles(t, tip, own_only, Miner::Selfish, rng);
    REQUIRE(picked.size() == 1);
    CHECK(picked[0] == own);
}

TEST_CASE("honest regular extends the single tip") {
    ForkedChain f(4);
    Rng rng(3);
    const UncleStrategy honest{UnclePolicy::All, 0.0};
    const BlockId b = honest_step(f.tree, EventKind::HonestRegular, honest, rng);
    CHECK(f.tree.block(b).parent == f.tip);
    CHECK(f.tree.block(b).published);
}

TEST_CASE("honest regular splits evenly between tied tips") {
    const UncleStrategy honest{UnclePolicy::All, 0.0};
    Rng rng(17);
    int first = 0;
    const int trials = 10000;
    for (int i = 0; i < trials; ++i) {
        BlockTree t;
        const BlockId a = t.append_block(kGenesisId, Miner::Honest, {}, true);
        t.append_block(kGenesisId, Miner::Honest, {}, true);
        const BlockId b = honest_step(t, EventKind::HonestRegular, honest, rng);
        if (t.block(b).parent == a) ++first;
    }
    CHECK(first / static_cast<double>(trials) == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("honest stale becomes a rival at the tip height") {
    ForkedChain f(5);
    Rng rng(4);
    const UncleStrategy honest{UnclePolicy::All, 0.0};
    const BlockId b = honest_step(f.tree, EventKind::HonestStale, honest, rng);
    CHECK(f.tree.block(b).height == 5);
    CHECK(f.tree.block(b).parent == f.tree.block(f.tip).parent);
    CHECK(f.tree.best_tips().size() == 2);
}

TEST_CASE("honest stale on a genesis-only chain falls back to regular") {
    BlockTree t;
    Rng rng(5);
    const UncleStrategy honest{UnclePolicy::All, 0.0};
    const BlockId b = honest_step(t, EventKind::HonestStale, honest, rng);
    CHECK(t.block(b).height == 1);
    CHECK(t.block(b).parent == kGenesisId);
}

TEST_CASE("honest stale either forks a chain or extends a lagging fork") {
    // Height-3 chain with a childless rival at height 2: the new rival at
    // height 3 may fork the main chain (parent: main height-2 block) or pull
    // the lagging fork level (parent: the rival height-2 block).
    ForkedChain f(3, {2});
    REQUIRE(f.siblings.size() == 1);
    Rng rng(6);
    const UncleStrategy honest{UnclePolicy::All, 0.0};
    int extended_fork = 0;
    for (int i = 0; i < 400; ++i) {
        BlockTree t = f.tree;
        const BlockId b = honest_step(t, EventKind::HonestStale, honest, rng);
        CHECK(t.block(b).height == 3);
        if (t.block(b).parent == f.siblings[0]) ++extended_fork;
        else CHECK(t.block(b).parent == t.block(f.tip).parent);
    }
    CHECK(extended_fork > 100);
    CHECK(extended_fork < 300);
}

// --- selfish state machine ------------------------------------------------

namespace {

struct Machine {
    SimParams params;
    WalkRunner runner;

    explicit Machine(double inclusion = 0.0)
        : params{make_params(inclusion)}, runner(params, 42) {}

    static SimParams make_params(double inclusion) {
        SimParams p;
        p.alpha = 0.4;
        p.delta = 0.2;
        p.selfish_uncle_policy = UnclePolicy::None;
        p.honest_inclusion_probability = inclusion;
        p.min_blocks = 64;
        return p;
    }

    std::vector<BlockId> force(EventKind ev) {
        std::vector<BlockId> published;
        runner.apply(ev, &published);
        return published;
    }

    SelfishState::Phase phase() const { return runner.state().phase; }
    int lead() const { return runner.state().lead(runner.tree()); }
};

constexpr auto S = EventKind::SelfishBlock;
constexpr auto Hr = EventKind::HonestRegular;
constexpr auto Hs = EventKind::HonestStale;

}  // namespace

TEST_CASE("hiding at lead one publishes the secret block and races") {
    Machine m;
    m.force(S);
    CHECK(m.phase() == SelfishState::Phase::Hiding);
    CHECK(m.lead() == 1);
    const auto published = m.force(Hr);
    CHECK(published.size() == 1);
    CHECK(m.phase() == SelfishState::Phase::Racing);
}

TEST_CASE("hiding at lead two publishes the whole fork and returns to idle") {
    Machine m;
    m.force(S);
    m.force(S);
    CHECK(m.lead() == 2);
    const auto published = m.force(Hr);
    CHECK(published.size() == 2);
    CHECK(m.phase() == SelfishState::Phase::Idle);
    // The fork is now the public best chain.
    CHECK(m.runner.tree().public_max_height() == 2);
    CHECK(m.runner.tree().best_tips().size() == 1);
}

TEST_CASE("hiding at lead three shrinks to two without publishing") {
    Machine m;
    for (int i = 0; i < 3; ++i) m.force(S);
    CHECK(m.lead() == 3);
    const auto published = m.force(Hr);
    CHECK(published.empty());
    CHECK(m.phase() == SelfishState::Phase::Hiding);
    CHECK(m.lead() == 2);
}

TEST_CASE("honest stale blocks do not shorten the lead") {
    Machine m;
    m.force(S);
    m.force(S);
    // Needs a public block to fork; build public history first.
    Machine m2;
    m2.force(Hr);
    m2.force(Hr);
    m2.force(S);
    m2.force(S);
    const int before = m2.lead();
    const auto published = m2.force(Hs);
    CHECK(published.empty());
    CHECK(m2.phase() == SelfishState::Phase::Hiding);
    CHECK(m2.lead() == before);
}

TEST_CASE("transition table matches the hand enumeration up to lead five") {
    // Successor phase and publication count for every reachable
    // (phase, lead, event) pair with lead <= 5.
    struct Row {
        int lead;
        EventKind event;
        SelfishState::Phase next;
        int published;
        int next_lead;
    };
    const Row hiding_rows[] = {
        {1, S, SelfishState::Phase::Hiding, 0, 2},
        {2, S, SelfishState::Phase::Hiding, 0, 3},
        {3, S, SelfishState::Phase::Hiding, 0, 4},
        {4, S, SelfishState::Phase::Hiding, 0, 5},
        {5, S, SelfishState::Phase::Hiding, 0, 6},
        {1, Hr, SelfishState::Phase::Racing, 1, 0},
        {2, Hr, SelfishState::Phase::Idle, 2, 0},
        {3, Hr, SelfishState::Phase::Hiding, 0, 2},
        {4, Hr, SelfishState::Phase::Hiding, 0, 3},
        {5, Hr, SelfishState::Phase::Hiding, 0, 4},
        {1, Hs, SelfishState::Phase::Hiding, 0, 1},
        {2, Hs, SelfishState::Phase::Hiding, 0, 2},
        {3, Hs, SelfishState::Phase::Hiding, 0, 3},
        {4, Hs, SelfishState::Phase::Hiding, 0, 4},
        {5, Hs, SelfishState::Phase::Hiding, 0, 5},
    };
    for (const Row& row : hiding_rows) {
        CAPTURE(row.lead);
        CAPTURE(static_cast<int>(row.event));
        Machine m;
        m.force(Hr);  // public history so stale events have a fork point
        m.force(Hr);
        for (int i = 0; i < row.lead; ++i) m.force(S);
        REQUIRE(m.phase() == SelfishState::Phase::Hiding);
        REQUIRE(m.lead() == row.lead);
        const auto published = m.force(row.event);
        CHECK(m.phase() == row.next);
        CHECK(published.size() == static_cast<std::size_t>(row.published));
        if (row.next == SelfishState::Phase::Hiding) CHECK(m.lead() == row.next_lead);
    }

    // Idle rows.
    {
        Machine m;
        CHECK(m.force(Hr).empty());
        CHECK(m.phase() == SelfishState::Phase::Idle);
        CHECK(m.force(Hs).empty());
        CHECK(m.phase() == SelfishState::Phase::Idle);
        const auto published = m.force(S);
        CHECK(published.empty());  // kept secret
        CHECK(m.phase() == SelfishState::Phase::Hiding);
    }

    // Racing rows.
    auto race = [] {
        Machine m;
        m.force(Hr);
        m.force(S);
        m.force(Hr);
        REQUIRE(m.phase() == SelfishState::Phase::Racing);
        return m;
    };
    {
        Machine m = race();
        const auto published = m.force(S);
        CHECK(published.size() == 1);
        CHECK(m.phase() == SelfishState::Phase::Idle);
        // Race won: the selfish chain is strictly longest.
        Rng rng(1);
        auto chain = main_chain(m.runner.tree(), rng);
        CHECK(m.runner.tree().block(chain.back()).miner == Miner::Selfish);
    }
    {
        Machine m = race();
        CHECK(m.force(Hr).empty());
        CHECK(m.phase() == SelfishState::Phase::Idle);
    }
    {
        Machine m = race();
        CHECK(m.force(Hs).empty());
        CHECK(m.phase() == SelfishState::Phase::Racing);
    }
}

TEST_CASE("idle tie with an own tip is extended and published at once") {
    Machine m;
    m.force(Hr);
    m.force(S);
    m.force(Hr);  // race between the secret block and the honest block
    REQUIRE(m.phase() == SelfishState::Phase::Racing);
    const BlockId own = m.runner.state().own_tip;
    m.force(Hr);  // race resolved by the network
    REQUIRE(m.phase() == SelfishState::Phase::Idle);
    // Competing tip at the same height as the public best, one of them owned
    // by the selfish miner: reachable when a stale block rivals his winner.
    Machine n;
    n.force(Hr);
    n.force(S);
    n.force(Hr);
    n.force(S);  // wins the race, selfish tip is public best
    REQUIRE(n.phase() == SelfishState::Phase::Idle);
    const auto published = n.force(Hs);  // rival appears at the same height
    CHECK(published.empty());
    REQUIRE(n.runner.tree().best_tips().size() == 2);
    const auto pub2 = n.force(S);
    REQUIRE(pub2.size() == 1);
    CHECK(n.phase() == SelfishState::Phase::Idle);
    const Block& b = n.runner.tree().block(pub2[0]);
    CHECK(b.published);
    CHECK(n.runner.tree().block(b.parent).miner == Miner::Selfish);
    (void)own;
}

TEST_CASE("secret forks stay linear and publications are monotone") {
    SimParams p;
    p.alpha = 0.35;
    p.delta = 0.15;
    p.min_blocks = 4000;
    p.selfish_uncle_policy = UnclePolicy::All;
    WalkRunner runner(p, 99);
    for (int i = 0; i < 4000; ++i) {
        runner.sample_and_step();
        const SelfishState& st = runner.state();
        if (st.phase == SelfishState::Phase::Hiding) {
            REQUIRE(!st.secret_fork.empty());
            CHECK(runner.tree().block(st.secret_fork.front()).parent == st.fork_base);
            for (std::size_t k = 1; k < st.secret_fork.size(); ++k)
                CHECK(runner.tree().block(st.secret_fork[k]).parent ==
                      st.secret_fork[k - 1]);
            for (BlockId b : st.secret_fork) CHECK_FALSE(runner.tree().block(b).published);
        }
    }
}
