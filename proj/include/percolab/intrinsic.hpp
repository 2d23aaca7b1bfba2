#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "percolab/bitset.hpp"
#include "percolab/graph.hpp"
#include "percolab/rng.hpp"

namespace percolab {

// Ball in the intrinsic (open-subgraph) metric, explored shell by shell.
// shell_sizes[t] = |dB_x(t)|; total = |B_x(radius)|; survived says the last
// shell is non-empty. When a forbidden set is given, the exploration never
// enters it: distances are measured in the configuration with every edge
// touching the forbidden set closed.
struct BallProfile {
    Vertex center = 0;
    std::uint32_t radius = 0;
    std::vector<std::uint64_t> shell_sizes;
    std::uint64_t total = 0;
    bool survived = false;
    std::vector<Vertex> members;  // filled only when requested
};

inline constexpr std::uint32_t kMaxBallRadius = 1u << 16;

inline BallProfile ball(const TransitiveGraph& g, const EdgeRandomness& rnd, double p,
                        Vertex center, std::uint32_t radius,
                        const VertexBitset* forbidden = nullptr, bool keep_members = false) {
    if (center >= g.vertex_count()) throw std::invalid_argument("ball: vertex out of range");
    if (radius > kMaxBallRadius) throw std::invalid_argument("ball: radius above 2^16");
    if (forbidden && forbidden->test(center))
        throw std::invalid_argument("ball: center inside forbidden set");

    BallProfile profile;
    profile.center = center;
    profile.radius = radius;
    profile.shell_sizes.assign(radius + 1, 0);

    VertexBitset visited(g.vertex_count());
    visited.set(center);
    std::vector<Vertex> frontier{center}, next;
    profile.shell_sizes[0] = 1;
    profile.total = 1;
    if (keep_members) profile.members.push_back(center);

    for (std::uint32_t depth = 0; depth < radius && !frontier.empty(); ++depth) {
        next.clear();
        for (Vertex v : frontier) {
            g.for_each_neighbor(v, [&](Vertex u, EdgeIndex e) {
                if (visited.test(u)) return;
                if (forbidden && forbidden->test(u)) return;
                if (!rnd.open(e, p)) return;
                visited.set(u);
                next.push_back(u);
            });
        }
        profile.shell_sizes[depth + 1] = next.size();
        profile.total += next.size();
        if (keep_members)
            profile.members.insert(profile.members.end(), next.begin(), next.end());
        frontier.swap(next);
    }
    profile.survived = profile.shell_sizes[radius] > 0;
    return profile;
}

// H(r): some vertex at intrinsic distance exactly r from x.
inline bool survival_event(const TransitiveGraph& g, const EdgeRandomness& rnd, double p,
                           Vertex x, std::uint32_t r) {
    return ball(g, rnd, p, x, r).survived;
}

// A(x,y,jx,jy): both balls survive to their radii and are vertex-disjoint.
// Both balls are grown on the full configuration; disjointness is a test on
// the resulting vertex sets, not an "off" restriction.
inline bool disjoint_survival(const TransitiveGraph& g, const EdgeRandomness& rnd, double p,
                              Vertex x, Vertex y, std::uint32_t jx, std::uint32_t jy) {
    if (x == y) throw std::invalid_argument("disjoint_survival: x == y");
    BallProfile bx = ball(g, rnd, p, x, jx, nullptr, true);
    if (!bx.survived) return false;
    BallProfile by = ball(g, rnd, p, y, jy, nullptr, true);
    if (!by.survived) return false;
    VertexBitset in_x(g.vertex_count());
    for (Vertex v : bx.members) in_x.set(v);
    for (Vertex v : by.members)
        if (in_x.test(v)) return false;
    return true;
}

}  // namespace percolab
