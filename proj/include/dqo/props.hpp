#pragma once

#include "dqo/algo.hpp"
#include "dqo/cost.hpp"
#include "dqo/relation.hpp"

#include <cstdint>
#include <span>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

namespace dqo {

// Meta-relational property vector carried on every relation and plan edge.
struct MetaProps {
    bool sorted = false;
    bool dense = false;
    std::uint64_t n_rows = 0;
    std::uint64_t n_groups = 0;

    bool operator==(const MetaProps&) const = default;

    std::string render() const {
        std::ostringstream os;
        os << "props{sorted=" << (sorted ? 'T' : 'F')
           << ",dense=" << (dense ? 'T' : 'F')
           << ",rows=" << n_rows << ",groups=" << n_groups << '}';
        return os.str();
    }
};

// Exact full-scan inference, no sampling.
inline MetaProps infer_props(const Relation& rel) {
    MetaProps p;
    p.n_rows = rel.n_rows();
    p.sorted = std::is_sorted(rel.keys.begin(), rel.keys.end());
    std::unordered_set<std::uint32_t> distinct(rel.keys.begin(), rel.keys.end());
    p.n_groups = distinct.size();
    p.dense = true;
    for (std::uint32_t k : distinct)
        if (k >= p.n_groups) { p.dense = false; break; }
    if (rel.n_rows() == 0) p.dense = false;
    return p;
}

// Applicability rules. Order-based variants need sorted inputs; the dense /
// sparse gates on SPH* and BS* exist only in DQO mode, which is the whole
// difference between the two modes.
inline bool applicable(Role role, AlgoId algo, std::span<const MetaProps> inputs,
                       Mode mode) {
    auto all_sorted = [&] {
        for (const auto& p : inputs)
            if (!p.sorted) return false;
        return true;
    };
    auto all_dense = [&] {
        for (const auto& p : inputs)
            if (!p.dense) return false;
        return true;
    };
    if (role == Role::group && !is_grouping(algo)) return false;
    if (role == Role::join && !is_join(algo)) return false;
    switch (algo) {
        case AlgoId::HG:
        case AlgoId::HJ:
        case AlgoId::SOG:
        case AlgoId::SOJ: return true;
        case AlgoId::OG:
        case AlgoId::OJ: return all_sorted();
        case AlgoId::SPHG:
        case AlgoId::SPHJ: return mode == Mode::DQO && all_dense();
        case AlgoId::BSG:
        case AlgoId::BSJ: return mode == Mode::DQO && !all_dense();
    }
    return false;
}

// Property propagation through one operator. Output cardinalities come from
// the provided stats; flags follow the fixed table below.
//   join:  sorted iff algo in {OJ, SOJ}; dense iff both inputs dense.
//   group: sorted iff algo in {SPHG, BSG, SOG, OG}; dense carried through.
inline MetaProps propagate(Role role, AlgoId algo, std::span<const MetaProps> inputs,
                           const QueryStats& stats) {
    if (!applicable(role, algo, inputs, Mode::DQO))
        throw std::invalid_argument(
            std::string("propagate: algorithm ") + std::string(to_string(algo)) +
            " is not applicable to " + std::string(to_string(role)) +
            " with the given input properties");
    MetaProps out;
    if (role == Role::join) {
        out.sorted = algo == AlgoId::OJ || algo == AlgoId::SOJ;
        out.dense = true;
        for (const auto& p : inputs) out.dense = out.dense && p.dense;
        out.n_rows = stats.join_out;
        out.n_groups = stats.group_out;
    } else {
        // Grouping: OG is only applicable on sorted input, so every sorted-
        // emitting variant lands here unconditionally.
        out.sorted = algo != AlgoId::HG;
        out.dense = !inputs.empty() && inputs.front().dense;
        out.n_rows = stats.group_out;
        out.n_groups = stats.group_out;
    }
    return out;
}

} // namespace dqo
