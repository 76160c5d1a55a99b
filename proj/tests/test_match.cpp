#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "polyrace/families.hpp"
#include "polyrace/match.hpp"

using namespace polyrace;

namespace {

std::vector<Complex> random_points(SplitMix64& rng, int n) {
    std::vector<Complex> pts(n);
    for (auto& p : pts) p = {2 * rng.unit() - 1, 2 * rng.unit() - 1};
    return pts;
}

}  // namespace

TEST_CASE("identical sets match fully at distance zero") {
    SplitMix64 rng{42};
    const auto ref = random_points(rng, 20);
    std::vector<Complex> approx(ref.rbegin(), ref.rend());  // any order
    const MatchResult m = match_roots(approx, ref, 1e-8);
    CHECK(m.complete());
    CHECK(m.pairs.size() == 20);
    for (const auto& p : m.pairs) CHECK(p.distance == 0.0);
    CHECK(m.unmatched_approx.empty());
}

TEST_CASE("a missing root is reported") {
    SplitMix64 rng{43};
    const auto ref = random_points(rng, 10);
    std::vector<Complex> approx(ref.begin(), ref.end() - 1);
    const MatchResult m = match_roots(approx, ref, 1e-8);
    CHECK_FALSE(m.complete());
    CHECK(m.unmatched_reference.size() == 1);
    CHECK(m.pairs.size() == 9);
}

TEST_CASE("noise below delta still matches") {
    SplitMix64 rng{44};
    const auto ref = random_points(rng, 30);
    auto approx = ref;
    for (auto& p : approx) {
        p.re += (rng.unit() - 0.5) * 2e-12;
        p.im += (rng.unit() - 0.5) * 2e-12;
    }
    const MatchResult m = match_roots(approx, ref, 1e-8);
    CHECK(m.complete());
    for (const auto& p : m.pairs) CHECK(p.distance < 1e-11);
}

TEST_CASE("matching is injective both ways") {
    // two approximations near one reference: only one may claim it
    const std::vector<Complex> ref = {{0, 0}, {1, 0}};
    const std::vector<Complex> approx = {{1e-10, 0}, {2e-10, 0}};
    const MatchResult m = match_roots(approx, ref, 1e-8);
    CHECK(m.pairs.size() == 1);
    CHECK(m.pairs[0].approx_index == 0);
    CHECK(m.unmatched_approx == std::vector<int>{1});
    CHECK(m.unmatched_reference == std::vector<int>{1});
}

TEST_CASE("match outcome is invariant under shuffling") {
    SplitMix64 rng{45};
    const auto ref = random_points(rng, 25);
    auto approx = ref;
    approx.erase(approx.begin() + 7);  // one missing
    for (int trial = 0; trial < 10; ++trial) {
        // deterministic shuffle via the stream
        for (std::size_t i = approx.size(); i > 1; --i)
            std::swap(approx[i - 1], approx[rng.next() % i]);
        const MatchResult m = match_roots(approx, ref, 1e-8);
        REQUIRE(m.pairs.size() == 24);
        REQUIRE(m.unmatched_reference.size() == 1);
        REQUIRE(m.unmatched_reference[0] == 7);
    }
}
