#pragma once

#include "dqo/algo.hpp"
#include "dqo/plan.hpp"
#include "dqo/props.hpp"

#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dqo {

struct MavError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class TriState { yes, no, any };

inline constexpr char to_char(TriState t) {
    return t == TriState::yes ? 'T' : t == TriState::no ? 'F' : '*';
}

inline std::optional<TriState> parse_tristate(std::string_view s) {
    if (s == "T") return TriState::yes;
    if (s == "F") return TriState::no;
    if (s == "*") return TriState::any;
    return std::nullopt;
}

inline bool satisfies(TriState req, bool value) {
    return req == TriState::any || (req == TriState::yes) == value;
}

enum class Physicality { full, partial };

// A registered, pre-decided subplan pattern. A full MAV pins one algorithm
// for nodes whose input properties satisfy the tri-state pattern; a partial
// MAV leaves the algorithm open and instead reads the tri-state fields as a
// constraint on the matched node's output properties.
struct Mav {
    std::string id;
    Role role = Role::group;
    TriState sorted_req = TriState::any;
    TriState dense_req = TriState::any;
    std::optional<AlgoId> choice; // required for full, ignored for partial
    Physicality physicality = Physicality::full;

    bool pattern_matches(std::span<const MetaProps> input_props) const {
        for (const auto& p : input_props)
            if (!satisfies(sorted_req, p.sorted) || !satisfies(dense_req, p.dense))
                return false;
        return true;
    }
};

struct MavRegistry {
    std::vector<Mav> mavs;
};

namespace detail {

// Every property combination admitted by the pattern, used to validate that
// a pinned choice is applicable wherever the pattern can match.
inline std::vector<MetaProps> pattern_instances(const Mav& m) {
    std::vector<MetaProps> out;
    for (bool sorted : {false, true}) {
        if (!satisfies(m.sorted_req, sorted)) continue;
        for (bool dense : {false, true}) {
            if (!satisfies(m.dense_req, dense)) continue;
            out.push_back({sorted, dense, 1, 1});
        }
    }
    return out;
}

} // namespace detail

inline void mav_register(MavRegistry& reg, const Mav& mav) {
    if (mav.role == Role::base)
        throw MavError("MAV " + mav.id + ": role must be join or group");
    for (const auto& existing : reg.mavs)
        if (existing.id == mav.id)
            throw MavError("duplicate MAV id: " + mav.id);
    if (mav.physicality == Physicality::full) {
        if (!mav.choice)
            throw MavError("MAV " + mav.id + ": a full MAV must pin an algorithm");
        if (mav.role == Role::group ? !is_grouping(*mav.choice) : !is_join(*mav.choice))
            throw MavError("MAV " + mav.id + ": algorithm " +
                           std::string(to_string(*mav.choice)) +
                           " does not implement role " +
                           std::string(to_string(mav.role)));
        // The pinned choice must be applicable under every property
        // combination the pattern admits.
        const auto instances = detail::pattern_instances(mav);
        const std::size_t arity = mav.role == Role::join ? 2 : 1;
        for (const auto& a : instances) {
            for (const auto& b : instances) {
                std::vector<MetaProps> inputs{a};
                if (arity == 2) inputs.push_back(b);
                if (!applicable(mav.role, *mav.choice, inputs, Mode::DQO))
                    throw MavError("MAV " + mav.id + ": choice " +
                                   std::string(to_string(*mav.choice)) +
                                   " is inapplicable for inputs " + a.render() +
                                   (arity == 2 ? " / " + b.render() : ""));
                if (arity == 1) break;
            }
        }
    }
    reg.mavs.push_back(mav);
}

struct MavMatch {
    Role position = Role::group; // which node of the fixed plan matched
    const Mav* mav = nullptr;
};

// First-fit matching over the ordered registry. Nodes are visited bottom-up
// so a child's pinned algorithm feeds the parent's input properties; an
// unmatched join child contributes safe-side properties (unsorted, density
// carried through from the leaves).
inline std::vector<MavMatch> mav_match(const MavRegistry& reg, const LogicalPlan& lp,
                                       const QueryStats& stats) {
    std::vector<MavMatch> matches;
    const Mav* join_mav = nullptr;

    auto node_matches = [](const Mav& m, std::span<const MetaProps> inputs) {
        return m.physicality == Physicality::partial || m.pattern_matches(inputs);
    };

    const MetaProps join_inputs[2] = {lp.r_props, lp.s_props};
    for (const auto& m : reg.mavs) {
        if (m.role == Role::join && node_matches(m, join_inputs)) {
            join_mav = &m;
            matches.push_back({Role::join, &m});
            break;
        }
    }

    MetaProps group_input;
    if (join_mav && join_mav->physicality == Physicality::full) {
        group_input = propagate(Role::join, *join_mav->choice, join_inputs, stats);
    } else {
        group_input = {false, lp.r_props.dense && lp.s_props.dense, stats.join_out,
                       stats.group_out};
    }
    const MetaProps group_inputs[1] = {group_input};
    for (const auto& m : reg.mavs) {
        if (m.role == Role::group && node_matches(m, group_inputs)) {
            matches.push_back({Role::group, &m});
            break;
        }
    }
    return matches;
}

// Per-node enumeration constraints derived from the matches.
struct NodeConstraint {
    std::optional<AlgoId> pinned;
    TriState out_sorted = TriState::any;
    TriState out_dense = TriState::any;

    bool admits_output(const MetaProps& p) const {
        return satisfies(out_sorted, p.sorted) && satisfies(out_dense, p.dense);
    }
};

struct PlanConstraints {
    NodeConstraint join;
    NodeConstraint group;
};

inline PlanConstraints mav_apply(const std::vector<MavMatch>& matches) {
    PlanConstraints c;
    for (const auto& m : matches) {
        NodeConstraint& node = m.position == Role::join ? c.join : c.group;
        if (m.mav->physicality == Physicality::full) {
            node.pinned = m.mav->choice;
        } else {
            node.out_sorted = m.mav->sorted_req;
            node.out_dense = m.mav->dense_req;
        }
    }
    return c;
}

// Registry file: one MAV per line,
// id;role;sorted_req;dense_req;choice;physicality  (choice "-" when open).
inline std::string serialize(const Mav& m) {
    std::ostringstream os;
    os << m.id << ';' << to_string(m.role) << ';' << to_char(m.sorted_req) << ';'
       << to_char(m.dense_req) << ';' << (m.choice ? to_string(*m.choice) : "-")
       << ';' << (m.physicality == Physicality::full ? "full" : "partial");
    return os.str();
}

inline Mav parse_mav(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ';')) fields.push_back(field);
    if (fields.size() != 6)
        throw MavError("malformed MAV line (expected 6 fields): " + line);
    Mav m;
    m.id = fields[0];
    auto role = parse_role(fields[1]);
    auto sorted_req = parse_tristate(fields[2]);
    auto dense_req = parse_tristate(fields[3]);
    if (!role || !sorted_req || !dense_req)
        throw MavError("malformed MAV line: " + line);
    m.role = *role;
    m.sorted_req = *sorted_req;
    m.dense_req = *dense_req;
    if (fields[4] != "-") {
        auto algo = parse_algo(fields[4]);
        if (!algo) throw MavError("unknown algorithm in MAV line: " + line);
        m.choice = *algo;
    }
    if (fields[5] == "full")
        m.physicality = Physicality::full;
    else if (fields[5] == "partial")
        m.physicality = Physicality::partial;
    else
        throw MavError("unknown physicality in MAV line: " + line);
    return m;
}

inline MavRegistry load_registry(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MavError("cannot open MAV registry: " + path);
    MavRegistry reg;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        mav_register(reg, parse_mav(line));
    }
    return reg;
}

inline void save_registry(const MavRegistry& reg, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw MavError("cannot open MAV registry for writing: " + path);
    for (const auto& m : reg.mavs) out << serialize(m) << '\n';
}

} // namespace dqo
