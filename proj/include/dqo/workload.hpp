#pragma once

#include "dqo/cost.hpp"
#include "dqo/relation.hpp"
#include "dqo/rng.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <unordered_set>
#include <vector>

namespace dqo {

// R with unique join keys carrying the grouping attribute as payload, and
// an S whose keys all reference R (so |join output| = |S|). The grouping
// attribute is non-decreasing along the key order, which keeps order-based
// plans executable end to end: a join output sorted by key is then also
// partitioned by the grouping attribute.
struct FkPair {
    Relation r;
    Relation s;
};

inline FkPair make_fk_pair(const QueryStats& stats, bool r_sorted, bool s_sorted,
                           bool dense, std::uint64_t seed) {
    stats.validate();
    if (stats.group_out > stats.n_R)
        throw std::invalid_argument("make_fk_pair: group_out exceeds n_R");
    SplitMix64 rng(seed);

    auto sample_distinct = [&](std::uint64_t n) {
        std::vector<std::uint32_t> vals;
        if (dense) {
            for (std::uint64_t v = 0; v < n; ++v)
                vals.push_back(static_cast<std::uint32_t>(v));
        } else {
            std::unordered_set<std::uint32_t> seen;
            while (vals.size() < n) {
                auto v = static_cast<std::uint32_t>(rng.bounded(1ull << 32));
                if (seen.insert(v).second) vals.push_back(v);
            }
            std::sort(vals.begin(), vals.end());
        }
        return vals;
    };

    const std::vector<std::uint32_t> ids = sample_distinct(stats.n_R);
    const std::vector<std::uint32_t> groups = sample_distinct(stats.group_out);

    FkPair out;
    out.r.payload.emplace();
    for (std::uint64_t rank = 0; rank < stats.n_R; ++rank) {
        out.r.keys.push_back(ids[rank]);
        out.r.payload->push_back(groups[rank * stats.group_out / stats.n_R]);
    }
    if (!r_sorted) {
        // shuffle rows, keeping key and payload aligned
        std::vector<std::uint64_t> perm(stats.n_R);
        for (std::uint64_t i = 0; i < stats.n_R; ++i) perm[i] = i;
        rng.shuffle(perm);
        Relation shuffled;
        shuffled.payload.emplace();
        for (std::uint64_t i : perm) {
            shuffled.keys.push_back(out.r.keys[i]);
            shuffled.payload->push_back((*out.r.payload)[i]);
        }
        out.r = std::move(shuffled);
    }

    for (std::uint64_t j = 0; j < stats.n_S; ++j)
        out.s.keys.push_back(ids[rng.bounded(stats.n_R)]);
    if (s_sorted) std::sort(out.s.keys.begin(), out.s.keys.end());
    return out;
}

} // namespace dqo
