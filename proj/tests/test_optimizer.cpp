#include "doctest.h"
#include "dqo/optimizer.hpp"
#include "dqo/workload.hpp"

#include <cmath>
#include <limits>

using namespace dqo;

namespace {

// Brute-force oracle: the full cross product of (join algo, group algo)
// choices, with applicability and sortedness propagation restated
// independently of the enumerator. Costs come from the cost-model module,
// which is itself checked against a high-precision oracle elsewhere.
double brute_force_best(const QueryStats& st, bool r_sorted, bool s_sorted,
                        bool dense, Mode mode) {
    double best = std::numeric_limits<double>::infinity();
    for (AlgoId j : join_algos) {
        bool j_ok = true;
        bool out_sorted = false;
        switch (j) {
            case AlgoId::HJ: break;
            case AlgoId::OJ:
                j_ok = r_sorted && s_sorted;
                out_sorted = true;
                break;
            case AlgoId::SOJ: out_sorted = true; break;
            case AlgoId::SPHJ: j_ok = mode == Mode::DQO && dense; break;
            case AlgoId::BSJ: j_ok = mode == Mode::DQO && !dense; break;
            default: j_ok = false;
        }
        if (!j_ok) continue;
        double jc = join_cost(j, st.n_R, st.n_S, st.group_out, r_sorted, s_sorted);
        for (AlgoId g : grouping_algos) {
            bool g_ok = true;
            switch (g) {
                case AlgoId::HG:
                case AlgoId::SOG: break;
                case AlgoId::OG: g_ok = out_sorted; break;
                case AlgoId::SPHG: g_ok = mode == Mode::DQO && dense; break;
                case AlgoId::BSG: g_ok = mode == Mode::DQO && !dense; break;
                default: g_ok = false;
            }
            if (g_ok)
                best = std::min(best, jc + grouping_cost(g, st.join_out,
                                                         st.group_out, out_sorted));
        }
    }
    return best;
}

OptResult run(const QueryStats& st, bool r_sorted, bool s_sorted, bool dense,
              Mode mode, const MavRegistry* reg = nullptr) {
    return enumerate_plans(make_logical_plan(st, r_sorted, s_sorted, dense), st,
                           mode, reg);
}

} // namespace

TEST_CASE("dense unsorted query: DQO picks SPHJ then SPHG at 220,000") {
    QueryStats st;
    OptResult res = run(st, false, false, true, Mode::DQO);
    CHECK(res.best_cost == 220'000.0);
    CHECK(*res.best_plan.algo == AlgoId::SPHG);
    CHECK(*res.best_plan.children[0].algo == AlgoId::SPHJ);
}

TEST_CASE("dense unsorted query: SQO falls back to HJ then HG at 880,000") {
    QueryStats st;
    OptResult res = run(st, false, false, true, Mode::SQO);
    CHECK(res.best_cost == 880'000.0);
    CHECK(*res.best_plan.algo == AlgoId::HG);
    CHECK(*res.best_plan.children[0].algo == AlgoId::HJ);
}

TEST_CASE("sorted inputs: order-based plan wins at 220,000 in both modes") {
    QueryStats st;
    for (bool dense : {true, false})
        for (Mode m : {Mode::SQO, Mode::DQO}) {
            OptResult res = run(st, true, true, dense, m);
            CHECK(res.best_cost == 220'000.0);
            CHECK(*res.best_plan.algo == AlgoId::OG);
            CHECK(*res.best_plan.children[0].algo == AlgoId::OJ);
        }
}

TEST_CASE("improvement factors match the published shape") {
    QueryStats st;
    CHECK(improvement_factor(st, {false, true, st.n_R, st.n_R},
                             {false, true, st.n_S, st.n_R}) == 4.0);
    for (bool rs : {true, false})
        for (bool ss : {true, false})
            CHECK(improvement_factor(st, {rs, false, st.n_R, st.n_R},
                                     {ss, false, st.n_S, st.n_R}) == 1.0);
    CHECK(improvement_factor(st, {true, true, st.n_R, st.n_R},
                             {true, true, st.n_S, st.n_R}) == 1.0);
}

TEST_CASE("enumeration equals the brute-force oracle across cells and stats") {
    SplitMix64 rng(909);
    for (int rep = 0; rep < 20; ++rep) {
        QueryStats st;
        st.n_R = 2 + rng.bounded(100'000);
        st.n_S = 2 + rng.bounded(200'000);
        st.join_out = 2 + rng.bounded(200'000);
        st.group_out = 1 + rng.bounded(st.join_out);
        for (bool dense : {true, false})
            for (bool rs : {true, false})
                for (bool ss : {true, false})
                    for (Mode m : {Mode::SQO, Mode::DQO}) {
                        double oracle = brute_force_best(st, rs, ss, dense, m);
                        CHECK(run(st, rs, ss, dense, m).best_cost == oracle);
                    }
    }
}

TEST_CASE("DQO never costs more than SQO") {
    SplitMix64 rng(77);
    for (int rep = 0; rep < 30; ++rep) {
        QueryStats st;
        st.n_R = 2 + rng.bounded(50'000);
        st.n_S = 2 + rng.bounded(100'000);
        st.join_out = 2 + rng.bounded(100'000);
        st.group_out = 1 + rng.bounded(st.join_out);
        bool dense = rng.bounded(2), rs = rng.bounded(2), ss = rng.bounded(2);
        CHECK(run(st, rs, ss, dense, Mode::DQO).best_cost <=
              run(st, rs, ss, dense, Mode::SQO).best_cost);
    }
}

TEST_CASE("enumeration is deterministic, including tie-breaks") {
    QueryStats st;
    for (bool dense : {true, false}) {
        OptResult a = run(st, true, true, dense, Mode::DQO);
        OptResult b = run(st, true, true, dense, Mode::DQO);
        CHECK(a.best_cost == b.best_cost);
        CHECK(*a.best_plan.algo == *b.best_plan.algo);
        CHECK(*a.best_plan.children[0].algo == *b.best_plan.children[0].algo);
        CHECK(a.enumerated_state_count == b.enumerated_state_count);
    }
}

TEST_CASE("pivot table reproduces the appendix cells") {
    QueryStats st;
    auto cells = dp_pivot_table(st);
    REQUIRE(cells.size() == 8);
    for (const auto& c : cells) {
        if (c.dense && !(c.r_sorted && c.s_sorted)) {
            CHECK(c.factor == 4.0);
            CHECK(c.sqo.best_cost == 880'000.0);
            CHECK(c.dqo.best_cost == 220'000.0);
            CHECK(*c.dqo.best_plan.algo == AlgoId::SPHG);
            CHECK(*c.dqo.best_plan.children[0].algo == AlgoId::SPHJ);
        } else {
            CHECK(c.factor == 1.0);
        }
        if (c.r_sorted && c.s_sorted) {
            CHECK(*c.dqo.best_plan.algo == AlgoId::OG);
            CHECK(*c.dqo.best_plan.children[0].algo == AlgoId::OJ);
        }
    }
}

TEST_CASE("execute_plan matches the composed oracles on FK data") {
    QueryStats st{400, 900, 900, 40};
    for (bool dense : {true, false})
        for (bool rs : {true, false})
            for (bool ss : {true, false}) {
                OptResult res = run(st, rs, ss, dense, Mode::DQO);
                FkPair fk = make_fk_pair(st, rs, ss, dense, 1000 + dense);
                GroupResult got = execute_plan(res.best_plan, fk.r, fk.s);
                CHECK(got.canonical() == oracle_query(fk.r, fk.s).canonical());
            }
}

TEST_CASE("execute_plan surfaces operator precondition violations") {
    QueryStats st{400, 900, 900, 40};
    OptResult res = run(st, true, true, true, Mode::DQO); // OJ -> OG
    FkPair fk = make_fk_pair(st, false, false, true, 5);  // but unsorted data
    CHECK_THROWS_AS(execute_plan(res.best_plan, fk.r, fk.s), PreconditionError);
}

TEST_CASE("execute_plan on empty probe side yields an empty result") {
    QueryStats st{400, 900, 900, 40};
    OptResult res = run(st, false, false, true, Mode::DQO);
    FkPair fk = make_fk_pair(st, false, false, true, 6);
    fk.s = Relation{};
    CHECK(execute_plan(res.best_plan, fk.r, fk.s).entries.empty());
}

TEST_CASE("explain rendering shows algos, props, and cumulative cost") {
    QueryStats st;
    OptResult res = run(st, false, false, true, Mode::DQO);
    std::string text = render_plan(res.best_plan);
    CHECK(text.find("group[SPHG] cost=220000.0") != std::string::npos);
    CHECK(text.find("join[SPHJ] cost=130000.0") != std::string::npos);
    CHECK(text.find("props{sorted=") != std::string::npos);
    CHECK(text.find("base[R]") != std::string::npos);
}
