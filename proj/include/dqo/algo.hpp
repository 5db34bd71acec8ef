#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dqo {

// Closed set of algorithm identifiers: five grouping variants and their
// join counterparts.
enum class AlgoId {
    HG,   // hash-based grouping
    SPHG, // static perfect hash-based grouping
    OG,   // order-based grouping
    SOG,  // sort & order-based grouping
    BSG,  // binary search-based grouping
    HJ,   // hash join
    SPHJ, // static perfect hash join
    OJ,   // order-based (merge) join
    SOJ,  // sort & merge join
    BSJ,  // binary search join
};

enum class Role { base, join, group };

enum class Mode { SQO, DQO };

inline constexpr std::array<AlgoId, 5> grouping_algos = {
    AlgoId::HG, AlgoId::SPHG, AlgoId::OG, AlgoId::SOG, AlgoId::BSG};

inline constexpr std::array<AlgoId, 5> join_algos = {
    AlgoId::HJ, AlgoId::SPHJ, AlgoId::OJ, AlgoId::SOJ, AlgoId::BSJ};

inline constexpr bool is_grouping(AlgoId a) {
    switch (a) {
        case AlgoId::HG:
        case AlgoId::SPHG:
        case AlgoId::OG:
        case AlgoId::SOG:
        case AlgoId::BSG: return true;
        default: return false;
    }
}

inline constexpr bool is_join(AlgoId a) { return !is_grouping(a); }

inline constexpr std::string_view to_string(AlgoId a) {
    switch (a) {
        case AlgoId::HG: return "HG";
        case AlgoId::SPHG: return "SPHG";
        case AlgoId::OG: return "OG";
        case AlgoId::SOG: return "SOG";
        case AlgoId::BSG: return "BSG";
        case AlgoId::HJ: return "HJ";
        case AlgoId::SPHJ: return "SPHJ";
        case AlgoId::OJ: return "OJ";
        case AlgoId::SOJ: return "SOJ";
        case AlgoId::BSJ: return "BSJ";
    }
    return "?";
}

inline constexpr std::string_view to_string(Role r) {
    switch (r) {
        case Role::base: return "base";
        case Role::join: return "join";
        case Role::group: return "group";
    }
    return "?";
}

inline constexpr std::string_view to_string(Mode m) {
    return m == Mode::SQO ? "SQO" : "DQO";
}

inline std::optional<AlgoId> parse_algo(std::string_view s) {
    for (AlgoId a : grouping_algos)
        if (s == to_string(a)) return a;
    for (AlgoId a : join_algos)
        if (s == to_string(a)) return a;
    return std::nullopt;
}

inline std::optional<Role> parse_role(std::string_view s) {
    if (s == "join") return Role::join;
    if (s == "group") return Role::group;
    if (s == "base") return Role::base;
    return std::nullopt;
}

// Tie-break preference between equal-cost plans: order-based first,
// hash-based last.
inline constexpr int algo_rank(AlgoId a) {
    switch (a) {
        case AlgoId::OG:
        case AlgoId::OJ: return 0;
        case AlgoId::SPHG:
        case AlgoId::SPHJ: return 1;
        case AlgoId::BSG:
        case AlgoId::BSJ: return 2;
        case AlgoId::SOG:
        case AlgoId::SOJ: return 3;
        case AlgoId::HG:
        case AlgoId::HJ: return 4;
    }
    return 5;
}

} // namespace dqo
