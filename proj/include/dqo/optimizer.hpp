#pragma once

#include "dqo/algo.hpp"
#include "dqo/cost.hpp"
#include "dqo/grouping.hpp"
#include "dqo/join.hpp"
#include "dqo/mav.hpp"
#include "dqo/plan.hpp"
#include "dqo/props.hpp"
#include "dqo/relation.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace dqo {

struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One surviving DP entry: the cheapest plan for a given output property
// vector of a subplan.
struct DpEntry {
    MetaProps props;
    AlgoId join_algo = AlgoId::HJ;
    std::optional<AlgoId> group_algo; // set for root entries only
    Cost cost = 0.0;
};

struct DpTable {
    std::vector<DpEntry> join_entries;
    std::vector<DpEntry> root_entries;
};

struct OptResult {
    PhysioPlan best_plan;
    Cost best_cost = 0.0;
    DpTable dp_table;
    std::uint64_t enumerated_state_count = 0;
};

namespace detail {

// DP state key: the full property vector; SQO masks density out.
inline std::tuple<bool, int, std::uint64_t, std::uint64_t>
dp_key(const MetaProps& p, Mode mode) {
    return {p.sorted, mode == Mode::SQO ? -1 : (p.dense ? 1 : 0), p.n_rows,
            p.n_groups};
}

// Preference between equal-cost plans: lower algorithm rank, join level first.
inline bool prefer(AlgoId ja, std::optional<AlgoId> ga, AlgoId jb,
                   std::optional<AlgoId> gb) {
    if (algo_rank(ja) != algo_rank(jb)) return algo_rank(ja) < algo_rank(jb);
    if (ga && gb) return algo_rank(*ga) < algo_rank(*gb);
    return false;
}

} // namespace detail

// Bottom-up dynamic programming over the fixed query shape: per subplan and
// per distinct output property vector keep the cheapest plan (interesting-
// orders-style pruning). MAV matches pin or constrain nodes before
// enumeration, shrinking the explored space.
inline OptResult enumerate_plans(const LogicalPlan& lp, const QueryStats& stats,
                                 Mode mode,
                                 const MavRegistry* mavs = nullptr) {
    stats.validate();
    PlanConstraints cons;
    if (mavs) cons = mav_apply(mav_match(*mavs, lp, stats));

    OptResult res;
    res.enumerated_state_count = 2; // the two base-relation states

    const MetaProps join_inputs[2] = {lp.r_props, lp.s_props};

    using Key = std::tuple<bool, int, std::uint64_t, std::uint64_t>;
    std::map<Key, DpEntry> join_table;
    for (AlgoId algo : join_algos) {
        if (cons.join.pinned && algo != *cons.join.pinned) continue;
        if (!applicable(Role::join, algo, join_inputs, mode)) continue;
        MetaProps out = propagate(Role::join, algo, join_inputs, stats);
        if (!cons.join.admits_output(out)) continue;
        ++res.enumerated_state_count;
        Cost c = join_cost(algo, stats.n_R, stats.n_S, stats.group_out,
                           lp.r_props.sorted, lp.s_props.sorted);
        DpEntry entry{out, algo, std::nullopt, c};
        auto [it, fresh] = join_table.try_emplace(detail::dp_key(out, mode), entry);
        if (!fresh && (c < it->second.cost ||
                       (c == it->second.cost &&
                        detail::prefer(algo, std::nullopt, it->second.join_algo,
                                       std::nullopt))))
            it->second = entry;
    }
    if (join_table.empty())
        throw InfeasibleError("no applicable join algorithm for the given inputs");

    std::map<Key, DpEntry> root_table;
    for (const auto& [jk, je] : join_table) {
        const MetaProps group_inputs[1] = {je.props};
        for (AlgoId algo : grouping_algos) {
            if (cons.group.pinned && algo != *cons.group.pinned) continue;
            if (!applicable(Role::group, algo, group_inputs, mode)) continue;
            MetaProps out = propagate(Role::group, algo, group_inputs, stats);
            if (!cons.group.admits_output(out)) continue;
            ++res.enumerated_state_count;
            Cost c = je.cost + grouping_cost(algo, stats.join_out, stats.group_out,
                                             je.props.sorted);
            DpEntry entry{out, je.join_algo, algo, c};
            auto [it, fresh] = root_table.try_emplace(detail::dp_key(out, mode), entry);
            if (!fresh &&
                (c < it->second.cost ||
                 (c == it->second.cost &&
                  detail::prefer(entry.join_algo, entry.group_algo,
                                 it->second.join_algo, it->second.group_algo))))
                it->second = entry;
        }
    }
    if (root_table.empty())
        throw InfeasibleError("no applicable grouping algorithm for the given inputs");

    const DpEntry* best = nullptr;
    for (const auto& [k, e] : root_table) {
        if (!best || e.cost < best->cost ||
            (e.cost == best->cost &&
             detail::prefer(e.join_algo, e.group_algo, best->join_algo,
                            best->group_algo)))
            best = &e;
    }

    for (const auto& [k, e] : join_table) res.dp_table.join_entries.push_back(e);
    for (const auto& [k, e] : root_table) res.dp_table.root_entries.push_back(e);

    // Materialize the winning plan as a tree.
    MetaProps join_out = propagate(Role::join, best->join_algo, join_inputs, stats);
    Cost jc = join_cost(best->join_algo, stats.n_R, stats.n_S, stats.group_out,
                        lp.r_props.sorted, lp.s_props.sorted);
    PhysioPlan r_node{Role::base, std::nullopt, "R", lp.r_props, 0.0, {}};
    PhysioPlan s_node{Role::base, std::nullopt, "S", lp.s_props, 0.0, {}};
    PhysioPlan join_node{Role::join, best->join_algo, "", join_out, jc,
                         {r_node, s_node}};
    PhysioPlan root{Role::group, best->group_algo, "", best->props, best->cost,
                    {join_node}};
    res.best_plan = root;
    res.best_cost = best->cost;
    return res;
}

inline double improvement_factor(const QueryStats& stats, const MetaProps& props_r,
                                 const MetaProps& props_s) {
    LogicalPlan lp{props_r, props_s};
    Cost sqo = enumerate_plans(lp, stats, Mode::SQO).best_cost;
    Cost dqo = enumerate_plans(lp, stats, Mode::DQO).best_cost;
    return sqo / dqo;
}

// One cell of the appendix pivot table: density is shared by both inputs.
struct PivotCell {
    bool dense = false;
    bool r_sorted = false;
    bool s_sorted = false;
    OptResult dqo;
    OptResult sqo;
    double factor = 1.0;
};

inline std::vector<PivotCell> dp_pivot_table(const QueryStats& stats) {
    std::vector<PivotCell> cells;
    for (bool dense : {true, false})
        for (bool r_sorted : {true, false})
            for (bool s_sorted : {true, false}) {
                LogicalPlan lp = make_logical_plan(stats, r_sorted, s_sorted, dense);
                PivotCell cell;
                cell.dense = dense;
                cell.r_sorted = r_sorted;
                cell.s_sorted = s_sorted;
                cell.dqo = enumerate_plans(lp, stats, Mode::DQO);
                cell.sqo = enumerate_plans(lp, stats, Mode::SQO);
                cell.factor = cell.sqo.best_cost / cell.dqo.best_cost;
                cells.push_back(std::move(cell));
            }
    return cells;
}

namespace detail {

inline std::vector<std::uint32_t> distinct_sorted_keys(const Relation& rel) {
    std::vector<std::uint32_t> keys = rel.keys;
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    return keys;
}

inline std::uint64_t key_domain_size(const Relation& rel) {
    std::uint32_t mx = 0;
    for (std::uint32_t k : rel.keys) mx = std::max(mx, k);
    return rel.n_rows() == 0 ? 0 : static_cast<std::uint64_t>(mx) + 1;
}

} // namespace detail

// Runs the chosen join, re-keys the output by R's grouping attribute (the
// payload), then runs the chosen grouping variant. The distinct-value side
// data SPH/BS variants need is computed exactly from the inputs.
inline GroupResult execute_plan(const PhysioPlan& plan, const Relation& r,
                                const Relation& s) {
    if (plan.role != Role::group || plan.children.size() != 1 ||
        plan.children[0].role != Role::join)
        throw std::invalid_argument("execute_plan: expected group over join shape");
    const PhysioPlan& join_node = plan.children[0];

    JoinAux aux;
    if (*join_node.algo == AlgoId::SPHJ) aux.n_slots = detail::key_domain_size(r);
    if (*join_node.algo == AlgoId::BSJ) aux.group_keys = detail::distinct_sorted_keys(r);
    Relation joined = join(*join_node.algo, r, s, aux);

    // Re-key by R's grouping attribute: the carried payload becomes the key.
    Relation grouped_input;
    grouped_input.keys.reserve(joined.n_rows());
    for (std::uint64_t v : *joined.payload) {
        if (v > 0xFFFFFFFFull)
            throw std::invalid_argument("execute_plan: grouping attribute exceeds "
                                        "the 32-bit key domain");
        grouped_input.keys.push_back(static_cast<std::uint32_t>(v));
    }

    switch (*plan.algo) {
        case AlgoId::HG: return hg_group(grouped_input);
        case AlgoId::SPHG:
            return sphg_group(grouped_input, detail::key_domain_size(grouped_input));
        case AlgoId::OG: return og_group(grouped_input);
        case AlgoId::SOG: return sog_group(grouped_input);
        case AlgoId::BSG:
            return bsg_group(grouped_input,
                             detail::distinct_sorted_keys(grouped_input));
        default:
            throw std::invalid_argument("execute_plan: root is not a grouping node");
    }
}

// Oracle composition for execute_plan checks: naive join, re-key, naive group.
inline GroupResult oracle_query(const Relation& r, const Relation& s) {
    Relation joined = oracle_join(r, s);
    Relation rekeyed;
    rekeyed.keys.reserve(joined.n_rows());
    for (std::uint64_t v : *joined.payload)
        rekeyed.keys.push_back(static_cast<std::uint32_t>(v));
    return oracle_group(rekeyed);
}

} // namespace dqo
