#pragma once

#include "dqo/algo.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace dqo {

// Cardinalities of the fixed example query. These are inputs, not estimates.
struct QueryStats {
    std::uint64_t n_R = 40'000;
    std::uint64_t n_S = 90'000;
    std::uint64_t join_out = 90'000;
    std::uint64_t group_out = 20'000;

    void validate() const {
        if (n_R == 0 || n_S == 0 || join_out == 0 || group_out == 0)
            throw std::invalid_argument("query stats: all cardinalities must be positive");
        if (group_out > join_out)
            throw std::invalid_argument("query stats: group_out exceeds join_out");
    }
};

using Cost = double; // abstract cost units, non-negative reals

// Grouping cost formulas. Sort-based cost collapses to the linear scan when
// the input is already sorted (costing rule, the executor still sorts).
inline Cost grouping_cost(AlgoId algo, std::uint64_t n, std::uint64_t n_groups,
                          bool input_sorted) {
    const double dn = static_cast<double>(n);
    switch (algo) {
        case AlgoId::HG: return 4.0 * dn;
        case AlgoId::OG: return dn;
        case AlgoId::SOG: return input_sorted ? dn : dn * std::log2(dn) + dn;
        case AlgoId::SPHG: return dn;
        case AlgoId::BSG:
            if (n_groups == 0)
                throw std::invalid_argument("BSG cost requires n_groups > 0");
            return dn * std::log2(static_cast<double>(n_groups));
        default:
            throw std::invalid_argument("grouping_cost: not a grouping algorithm: " +
                                        std::string(to_string(algo)));
    }
}

inline Cost join_cost(AlgoId algo, std::uint64_t n_r, std::uint64_t n_s,
                      std::uint64_t n_groups, bool r_sorted, bool s_sorted) {
    const double r = static_cast<double>(n_r);
    const double s = static_cast<double>(n_s);
    switch (algo) {
        case AlgoId::HJ: return 4.0 * (r + s);
        case AlgoId::OJ: return r + s;
        case AlgoId::SOJ:
            // Sort cost is waived only when both inputs arrive sorted; a
            // partially sorted pair still pays for the full sort phase.
            if (r_sorted && s_sorted) return r + s;
            return r * std::log2(r) + s * std::log2(s) + r + s;
        case AlgoId::SPHJ: return r + s;
        case AlgoId::BSJ:
            if (n_groups == 0)
                throw std::invalid_argument("BSJ cost requires n_groups > 0");
            return (r + s) * std::log2(static_cast<double>(n_groups));
        default:
            throw std::invalid_argument("join_cost: not a join algorithm: " +
                                        std::string(to_string(algo)));
    }
}

} // namespace dqo
