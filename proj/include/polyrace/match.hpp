#pragma once

// match.hpp: injective matching of approximate roots against a reference set,
// the "delta-close up to permutation" success criterion. Greedy on globally
// shortest edges; adequate because success requires distances far below the
// mutual root separation. Runs on plain doubles: verification arithmetic is
// not part of a counted solve.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "counted.hpp"

namespace polyrace {

struct MatchResult {
    struct Pair {
        int approx_index;
        int reference_index;
        double distance;
    };
    std::vector<Pair> pairs;
    std::vector<int> unmatched_approx;
    std::vector<int> unmatched_reference;

    // All reference roots were hit; the criterion for "all roots found".
    bool complete() const { return unmatched_reference.empty(); }
};

inline MatchResult match_roots(std::span<const Complex> approx,
                               std::span<const Complex> reference, double delta) {
    struct Edge {
        double dist;
        int a, r;
    };
    std::vector<Edge> edges;
    for (int a = 0; a < static_cast<int>(approx.size()); ++a) {
        for (int r = 0; r < static_cast<int>(reference.size()); ++r) {
            const double dist = std::hypot(approx[a].re - reference[r].re,
                                           approx[a].im - reference[r].im);
            if (dist < delta) edges.push_back({dist, a, r});
        }
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
        if (x.dist != y.dist) return x.dist < y.dist;
        if (x.a != y.a) return x.a < y.a;
        return x.r < y.r;
    });

    std::vector<char> a_used(approx.size(), 0), r_used(reference.size(), 0);
    MatchResult out;
    for (const Edge& e : edges) {
        if (a_used[e.a] || r_used[e.r]) continue;
        a_used[e.a] = 1;
        r_used[e.r] = 1;
        out.pairs.push_back({e.a, e.r, e.dist});
    }
    for (int a = 0; a < static_cast<int>(approx.size()); ++a)
        if (!a_used[a]) out.unmatched_approx.push_back(a);
    for (int r = 0; r < static_cast<int>(reference.size()); ++r)
        if (!r_used[r]) out.unmatched_reference.push_back(r);
    return out;
}

}  // namespace polyrace
