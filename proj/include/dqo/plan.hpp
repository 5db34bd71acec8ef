#pragma once

#include "dqo/algo.hpp"
#include "dqo/cost.hpp"
#include "dqo/props.hpp"

#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace dqo {

// The fixed example query: group(join(R, S)), base relations annotated with
// their meta-relational properties.
struct LogicalPlan {
    MetaProps r_props;
    MetaProps s_props;
};

inline LogicalPlan make_logical_plan(const QueryStats& stats, bool r_sorted,
                                     bool s_sorted, bool dense) {
    LogicalPlan lp;
    lp.r_props = {r_sorted, dense, stats.n_R, stats.n_R};
    lp.s_props = {s_sorted, dense, stats.n_S, stats.n_R};
    return lp;
}

// Fully physical plan node; cost is cumulative over the subtree.
struct PhysioPlan {
    Role role = Role::base;
    std::optional<AlgoId> algo;  // none for base relations
    std::string label;           // "R"/"S" for bases
    MetaProps out_props;
    Cost cost = 0.0;
    std::vector<PhysioPlan> children;
};

inline void render_plan(const PhysioPlan& node, std::ostream& os, int depth = 0) {
    for (int i = 0; i < depth; ++i) os << "  ";
    if (node.role == Role::base) {
        os << "base[" << node.label << "] " << node.out_props.render() << '\n';
    } else {
        os << to_string(node.role) << '[' << to_string(*node.algo) << "] cost="
           << std::fixed << std::setprecision(1) << node.cost << ' '
           << node.out_props.render() << '\n';
    }
    for (const auto& c : node.children) render_plan(c, os, depth + 1);
}

inline std::string render_plan(const PhysioPlan& node) {
    std::ostringstream os;
    render_plan(node, os);
    return os.str();
}

} // namespace dqo
