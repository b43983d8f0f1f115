#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "cwlab/core.hpp"
#include "oracle.hpp"

using namespace cwlab;

namespace {

std::set<Outcome> outcome_set(const Weighing& w, Coin f, Coin c) {
    auto v = achievable_outcomes(w, f, c);
    return {v.begin(), v.end()};
}

Weighing random_weighing(std::mt19937& rng, int n) {
    std::uniform_int_distribution<int> size_dist(1, n / 2);
    int k = size_dist(rng);
    std::vector<Coin> coins(n);
    for (int i = 0; i < n; ++i) coins[i] = i + 1;
    std::shuffle(coins.begin(), coins.end(), rng);
    return Weighing(std::vector<Coin>(coins.begin(), coins.begin() + k),
                    std::vector<Coin>(coins.begin() + k, coins.begin() + 2 * k));
}

}  // namespace

TEST_CASE("weighing invariants are enforced") {
    CHECK_THROWS_AS(Weighing({1}, {}), TreeError);
    CHECK_THROWS_AS(Weighing({1, 2}, {3}), TreeError);
    CHECK_THROWS_AS(Weighing({1}, {1}), TreeError);
    CHECK_THROWS_AS(Weighing({0}, {1}), TreeError);
    CHECK_NOTHROW(Weighing({1, 10}, {4, 5}));
}

TEST_CASE("achievable outcomes on a 1v1 weighing") {
    Weighing w({1}, {2});
    CHECK(outcome_set(w, 1, 2) == std::set<Outcome>{Outcome::LeftLight, Outcome::Balanced});
    CHECK(outcome_set(w, 3, 4) == std::set<Outcome>{Outcome::Balanced});
    CHECK(outcome_set(w, 3, 1) == std::set<Outcome>{Outcome::Balanced, Outcome::LeftLight});
    CHECK(outcome_set(w, 2, 1) == std::set<Outcome>{Outcome::RightLight, Outcome::Balanced});
    CHECK(outcome_set(w, 1, 3) == std::set<Outcome>{Outcome::LeftLight});
}

TEST_CASE("filter_state reproduces the three-coin case analysis") {
    // Cases (vi) and (i) of the worked three-coin example.
    PairState s = PairState::full(3);
    Weighing w12({1}, {2}), w13({1}, {3});

    PairState after = filter_state(filter_state(s, w12, Outcome::LeftLight), w13, Outcome::RightLight);
    CHECK(after.pairs() == std::vector<std::pair<Coin, Coin>>{{3, 1}});

    PairState bal = filter_state(filter_state(s, w12, Outcome::Balanced), w13, Outcome::Balanced);
    CHECK(bal.pairs() == std::vector<std::pair<Coin, Coin>>{{2, 1}, {3, 1}});
}

TEST_CASE("filtering by an off-state weighing keeps untouched pairs") {
    PairState s = PairState::none(6);
    s.set(1, 2);
    s.set(3, 4);
    s.set(2, 3);
    Weighing w({5}, {6});
    CHECK(filter_state(s, w, Outcome::Balanced) == s);
}

TEST_CASE("state statistics") {
    PairState full4 = PairState::full(4);
    StateStats st = state_statistics(full4);
    CHECK(st.fake_support.size() == 4);
    CHECK(st.bidirectional_count == 6);

    PairState single = PairState::none(4);
    single.set(3, 1);
    st = state_statistics(single);
    CHECK(st.fake_support == std::vector<Coin>{3});
    CHECK(st.bidirectional_count == 0);

    PairState duo = PairState::none(4);
    duo.set(1, 2);
    duo.set(2, 1);
    CHECK(state_statistics(duo).bidirectional_count == 1);
}

TEST_CASE("the three filtered states cover the state; doubles only via the chameleon") {
    std::mt19937 rng(20260809);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 3 + static_cast<int>(rng() % 4);  // 3..6
        Weighing w = random_weighing(rng, n);
        PairState s = PairState::full(n);
        // Random prefix filtering to visit non-root states too.
        if (trial % 2) {
            Weighing pre = random_weighing(rng, n);
            s = filter_state(s, pre, kAllOutcomes[rng() % 3]);
        }
        PairState parts[3];
        for (int i = 0; i < 3; ++i) parts[i] = filter_state(s, w, kAllOutcomes[i]);
        for (auto [f, c] : s.pairs()) {
            int hits = 0;
            for (auto& p : parts) hits += p.contains(f, c);
            CHECK(hits >= 1);
            CHECK(hits <= 2);
            if (hits == 2) CHECK(w.zone(c) != Zone::Off);
        }
    }
}

TEST_CASE("filter_state is idempotent") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 4 + static_cast<int>(rng() % 3);
        Weighing w = random_weighing(rng, n);
        Outcome o = kAllOutcomes[rng() % 3];
        PairState s = filter_state(PairState::full(n), w, o);
        CHECK(filter_state(s, w, o) == s);
    }
}

TEST_CASE("pan swap mirrors the achievable outcomes") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        int n = 3 + static_cast<int>(rng() % 5);
        Weighing w = random_weighing(rng, n);
        Weighing swapped(w.right, w.left);
        for (Coin f = 1; f <= n; ++f)
            for (Coin c = 1; c <= n; ++c) {
                if (f == c) continue;
                auto orig = outcome_set(w, f, c);
                std::set<Outcome> mirroredSet;
                for (Outcome o : orig) mirroredSet.insert(mirrored(o));
                CHECK(outcome_set(swapped, f, c) == mirroredSet);
            }
    }
}

TEST_CASE("filter_state agrees with explicit chameleon-choice enumeration") {
    std::mt19937 rng(424242);
    for (int trial = 0; trial < 120; ++trial) {
        int n = 3 + static_cast<int>(rng() % 3);  // 3..5
        int len = 1 + static_cast<int>(rng() % 4);
        std::vector<Weighing> ws;
        std::vector<Outcome> os;
        PairState s = PairState::full(n);
        for (int i = 0; i < len; ++i) {
            ws.push_back(random_weighing(rng, n));
            os.push_back(kAllOutcomes[rng() % 3]);
            s = filter_state(s, ws.back(), os.back());
        }
        for (Coin f = 1; f <= n; ++f)
            for (Coin c = 1; c <= n; ++c) {
                if (f == c) continue;
                CHECK(s.contains(f, c) == oracle::pair_survives(ws, os, f, c));
            }
    }
}
