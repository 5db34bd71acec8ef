#pragma once

#include "dqo/algo.hpp"
#include "dqo/grouping.hpp"
#include "dqo/relation.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace dqo {

// Side data for the direct-index and binary-search variants; the number of
// distinct values is assumed known and handed in by the caller.
struct JoinAux {
    std::uint64_t n_slots = 0;                // SPHJ: dense key domain size of r
    std::vector<std::uint32_t> group_keys;    // BSJ: sorted directory covering r
};

namespace detail {

inline std::uint64_t build_payload(const Relation& r, std::size_t row) {
    return r.payload ? (*r.payload)[row] : r.keys[row];
}

inline void emit(Relation& out, std::uint32_t key, std::uint64_t payload) {
    out.keys.push_back(key);
    out.payload->push_back(payload);
}

} // namespace detail

// FK equi-join variants: build side r has unique keys, probe side is s.
// Output rows carry (join key, r's payload).

inline Relation hj_join(const Relation& r, const Relation& s) {
    std::unordered_map<std::uint32_t, std::size_t, Murmur3Finalizer> table;
    table.reserve(r.n_rows());
    for (std::size_t i = 0; i < r.n_rows(); ++i)
        if (!table.try_emplace(r.keys[i], i).second)
            throw PreconditionError("HJ: duplicate build key " +
                                    std::to_string(r.keys[i]));
    Relation out;
    out.payload.emplace();
    for (std::size_t j = 0; j < s.n_rows(); ++j) {
        auto it = table.find(s.keys[j]);
        if (it != table.end())
            detail::emit(out, s.keys[j], detail::build_payload(r, it->second));
    }
    return out;
}

inline Relation sphj_join(const Relation& r, const Relation& s, std::uint64_t n_slots) {
    constexpr std::size_t none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> slots(n_slots, none);
    for (std::size_t i = 0; i < r.n_rows(); ++i) {
        std::uint32_t k = r.keys[i];
        if (k >= n_slots)
            throw PreconditionError("SPHJ: build key " + std::to_string(k) +
                                    " outside dense domain [0," +
                                    std::to_string(n_slots) + ")");
        if (slots[k] != none)
            throw PreconditionError("SPHJ: duplicate build key " + std::to_string(k));
        slots[k] = i;
    }
    Relation out;
    out.payload.emplace();
    for (std::size_t j = 0; j < s.n_rows(); ++j) {
        std::uint32_t k = s.keys[j];
        if (k < n_slots && slots[k] != none)
            detail::emit(out, k, detail::build_payload(r, slots[k]));
    }
    return out;
}

// Merge join over two sorted inputs; unsortedness is detected on the fly.
inline Relation oj_join(const Relation& r, const Relation& s) {
    auto check_order = [](const Relation& rel, std::size_t row, const char* side) {
        if (row > 0 && rel.keys[row] < rel.keys[row - 1])
            throw PreconditionError(std::string("OJ: ") + side +
                                    " input unsorted at row " + std::to_string(row));
    };
    Relation out;
    out.payload.emplace();
    std::size_t i = 0;
    for (std::size_t j = 0; j < s.n_rows(); ++j) {
        check_order(s, j, "probe");
        while (i < r.n_rows() && r.keys[i] < s.keys[j]) {
            check_order(r, i, "build");
            ++i;
        }
        if (i < r.n_rows()) check_order(r, i, "build");
        if (i < r.n_rows() && r.keys[i] == s.keys[j])
            detail::emit(out, s.keys[j], detail::build_payload(r, i));
    }
    // Sweep the untouched tail of r so a trailing order violation still surfaces.
    for (std::size_t k = i + 1; k < r.n_rows(); ++k)
        check_order(r, k, "build");
    return out;
}

namespace detail {

inline Relation sorted_copy(const Relation& rel) {
    Relation copy;
    copy.payload.emplace();
    std::vector<std::pair<std::uint32_t, std::uint64_t>> rows;
    rows.reserve(rel.n_rows());
    for (std::size_t i = 0; i < rel.n_rows(); ++i)
        rows.push_back({rel.keys[i], build_payload(rel, i)});
    std::sort(rows.begin(), rows.end());
    for (auto& [k, p] : rows) {
        copy.keys.push_back(k);
        copy.payload->push_back(p);
    }
    return copy;
}

} // namespace detail

// Sort & merge join: sorts copies of both inputs, then merges. The cost
// model, not the executor, applies the already-sorted discount.
inline Relation soj_join(const Relation& r, const Relation& s) {
    return oj_join(detail::sorted_copy(r), detail::sorted_copy(s));
}

// Binary search join: probe rows located in a sorted directory built from r.
inline Relation bsj_join(const Relation& r, const Relation& s,
                         const std::vector<std::uint32_t>& group_keys) {
    if (!std::is_sorted(group_keys.begin(), group_keys.end()) ||
        std::adjacent_find(group_keys.begin(), group_keys.end()) != group_keys.end())
        throw PreconditionError("BSJ: key directory must be strictly ascending");
    constexpr std::size_t none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> row_of(group_keys.size(), none);
    for (std::size_t i = 0; i < r.n_rows(); ++i) {
        auto it = std::lower_bound(group_keys.begin(), group_keys.end(), r.keys[i]);
        if (it == group_keys.end() || *it != r.keys[i])
            throw PreconditionError("BSJ: build key " + std::to_string(r.keys[i]) +
                                    " not covered by the key directory");
        auto slot = static_cast<std::size_t>(it - group_keys.begin());
        if (row_of[slot] != none)
            throw PreconditionError("BSJ: duplicate build key " +
                                    std::to_string(r.keys[i]));
        row_of[slot] = i;
    }
    Relation out;
    out.payload.emplace();
    for (std::size_t j = 0; j < s.n_rows(); ++j) {
        auto it = std::lower_bound(group_keys.begin(), group_keys.end(), s.keys[j]);
        if (it == group_keys.end() || *it != s.keys[j]) continue;
        auto slot = static_cast<std::size_t>(it - group_keys.begin());
        if (row_of[slot] != none)
            detail::emit(out, s.keys[j], detail::build_payload(r, row_of[slot]));
    }
    return out;
}

inline Relation join(AlgoId algo, const Relation& r, const Relation& s,
                     const JoinAux& aux = {}) {
    switch (algo) {
        case AlgoId::HJ: return hj_join(r, s);
        case AlgoId::SPHJ: return sphj_join(r, s, aux.n_slots);
        case AlgoId::OJ: return oj_join(r, s);
        case AlgoId::SOJ: return soj_join(r, s);
        case AlgoId::BSJ: return bsj_join(r, s, aux.group_keys);
        default:
            throw std::invalid_argument("join: not a join algorithm: " +
                                        std::string(to_string(algo)));
    }
}

} // namespace dqo
