#pragma once

#include "dqo/relation.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace dqo {

struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Murmur3 64-bit finaliser, used as the hash for HG/HJ.
struct Murmur3Finalizer {
    std::size_t operator()(std::uint64_t x) const {
        x ^= x >> 33;
        x *= 0xFF51AFD7ED558CCDull;
        x ^= x >> 33;
        x *= 0xC4CEB9FE1A85EC53ull;
        x ^= x >> 33;
        return static_cast<std::size_t>(x);
    }
    std::size_t operator()(std::uint32_t x) const {
        return (*this)(static_cast<std::uint64_t>(x));
    }
};

namespace detail {

struct Agg {
    std::uint64_t count = 0;
    std::uint64_t sum = 0;
};

// Cold error paths are kept out of line: string formatting inside a hot-loop
// body is enough to push the row kernels past the compiler's inline budget.
[[noreturn]] inline void throw_sphg_domain(std::uint32_t k, std::uint64_t n_groups) {
    throw PreconditionError("SPHG: key " + std::to_string(k) +
                            " outside dense domain [0," +
                            std::to_string(n_groups) + ")");
}

[[noreturn]] inline void throw_bsg_missing(std::uint32_t k) {
    throw PreconditionError("BSG: key " + std::to_string(k) +
                            " not in group key directory");
}

// Hot-loop row scan with the payload branch hoisted out of the per-row path:
// the kernel receives (row, key, aggregation term) from one of two
// specialised loops instead of re-testing the optional on every row.
template <class Kernel>
inline void scan_rows(const Relation& rel, Kernel&& kernel) {
    const std::uint32_t* keys = rel.keys.data();
    const std::size_t n = rel.n_rows();
    if (rel.payload) {
        const std::uint64_t* pay = rel.payload->data();
        for (std::size_t i = 0; i < n; ++i) kernel(i, keys[i], pay[i]);
    } else {
        for (std::size_t i = 0; i < n; ++i)
            kernel(i, keys[i], static_cast<std::uint64_t>(keys[i]));
    }
}

} // namespace detail

// Hash-based grouping: general-purpose hash table, one insert/update per row,
// aggregates maintained on the fly.
inline GroupResult hg_group(const Relation& rel) {
    std::unordered_map<std::uint32_t, detail::Agg, Murmur3Finalizer> table;
    detail::scan_rows(rel, [&](std::size_t, std::uint32_t k, std::uint64_t term) {
        auto& agg = table[k];
        agg.count += 1;
        agg.sum += term;
    });
    GroupResult res;
    res.entries.reserve(table.size());
    for (const auto& [k, agg] : table)
        res.entries.push_back({k, agg.count, agg.sum});
    return res;
}

// Static perfect hash-based grouping: the key is the offset into a flat
// aggregate array of n_groups slots. Requires a dense domain.
inline GroupResult sphg_group(const Relation& rel, std::uint64_t n_groups) {
    // Alternating rows between two aggregate lanes halves the length of the
    // store-to-load dependency chains that runs of equal keys create. The
    // second lane is only worth its footprint while both stay cache-resident,
    // so large domains fall back to a single lane (stride 0).
    const std::uint64_t stride = n_groups <= (1u << 16) ? n_groups : 0;
    std::vector<detail::Agg> slots(n_groups + stride);
    detail::Agg* sp = slots.data();
    detail::scan_rows(rel, [&](std::size_t i, std::uint32_t k, std::uint64_t term) {
        if (k >= n_groups) [[unlikely]]
            detail::throw_sphg_domain(k, n_groups);
        detail::Agg& agg = sp[(i & 1) * stride + k];
        agg.count += 1;
        agg.sum += term;
    });
    GroupResult res;
    res.entries.reserve(n_groups);
    for (std::uint64_t k = 0; k < n_groups; ++k) {
        std::uint64_t count = sp[k].count;
        std::uint64_t sum = sp[k].sum;
        if (stride) {
            count += sp[k + stride].count;
            sum += sp[k + stride].sum;
        }
        if (count > 0)
            res.entries.push_back({static_cast<std::uint32_t>(k), count, sum});
    }
    return res;
}

// Order-based grouping: requires equal keys to be contiguous. Single pass,
// a group closes at each key change; raw output is in first-occurrence order.
inline GroupResult og_group(const Relation& rel) {
    GroupResult res;
    if (rel.n_rows() == 0) return res;
    std::unordered_set<std::uint32_t> closed;
    std::uint32_t cur = rel.keys[0];
    detail::Agg agg;
    auto flush = [&] {
        if (!closed.insert(cur).second)
            return false;
        res.entries.push_back({cur, agg.count, agg.sum});
        return true;
    };
    for (std::size_t i = 0; i < rel.n_rows(); ++i) {
        if (rel.keys[i] != cur) {
            if (!flush() || closed.count(rel.keys[i]))
                throw PreconditionError("OG: key " + std::to_string(rel.keys[i]) +
                                        " recurs non-contiguously at row " +
                                        std::to_string(i));
            cur = rel.keys[i];
            agg = {};
        }
        agg.count += 1;
        agg.sum += sum_term(rel, i);
    }
    if (!flush())
        throw PreconditionError("OG: key " + std::to_string(cur) +
                                " recurs non-contiguously at row " +
                                std::to_string(rel.n_rows() - 1));
    return res;
}

// Sort & order-based grouping: sorts a working copy, then OG. Never touches
// the caller's relation.
inline GroupResult sog_group(const Relation& rel) {
    Relation copy;
    if (rel.payload) {
        std::vector<std::pair<std::uint32_t, std::uint64_t>> rows;
        rows.reserve(rel.n_rows());
        for (std::size_t i = 0; i < rel.n_rows(); ++i)
            rows.push_back({rel.keys[i], (*rel.payload)[i]});
        std::sort(rows.begin(), rows.end());
        copy.payload.emplace();
        copy.keys.reserve(rows.size());
        copy.payload->reserve(rows.size());
        for (auto& [k, p] : rows) {
            copy.keys.push_back(k);
            copy.payload->push_back(p);
        }
    } else {
        copy.keys = rel.keys;
        std::sort(copy.keys.begin(), copy.keys.end());
    }
    return og_group(copy);
}

// Binary search-based grouping: aggregates in an array parallel to a sorted
// key directory, each row located by binary search.
inline GroupResult bsg_group(const Relation& rel,
                             const std::vector<std::uint32_t>& group_keys) {
    if (!std::is_sorted(group_keys.begin(), group_keys.end()) ||
        std::adjacent_find(group_keys.begin(), group_keys.end()) != group_keys.end())
        throw PreconditionError("BSG: group key directory must be strictly ascending");
    if (rel.n_rows() > 0 && group_keys.empty())
        detail::throw_bsg_missing(rel.keys[0]);
    std::vector<detail::Agg> slots(group_keys.size());
    const std::uint32_t* dir = group_keys.data();
    const std::size_t n_dir = group_keys.size();
    detail::Agg* sp = slots.data();
    detail::scan_rows(rel, [&](std::size_t, std::uint32_t k, std::uint64_t term) {
        // branchless lower bound: halving a [lo, lo+len) window compiles to
        // conditional moves, so small directories cost a couple of cycles
        std::size_t lo = 0, len = n_dir;
        while (len > 1) {
            std::size_t half = len >> 1;
            if (dir[lo + half - 1] < k) lo += half;
            len -= half;
        }
        if (dir[lo] != k) [[unlikely]]
            detail::throw_bsg_missing(k);
        sp[lo].count += 1;
        sp[lo].sum += term;
    });
    GroupResult res;
    for (std::size_t g = 0; g < group_keys.size(); ++g)
        if (slots[g].count > 0)
            res.entries.push_back({group_keys[g], slots[g].count, slots[g].sum});
    return res;
}

} // namespace dqo
