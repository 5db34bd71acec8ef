#include "doctest.h"
#include "dqo/props.hpp"
#include "test_util.hpp"

#include <algorithm>

using namespace dqo;

TEST_CASE("infer_props hand-checked") {
    Relation rel;
    rel.keys = {0, 1, 1, 2};
    MetaProps p = infer_props(rel);
    CHECK(p.sorted);
    CHECK(p.dense);
    CHECK(p.n_rows == 4);
    CHECK(p.n_groups == 3);

    rel.keys = {10, 5};
    p = infer_props(rel);
    CHECK_FALSE(p.sorted);
    CHECK_FALSE(p.dense);
    CHECK(p.n_groups == 2);
}

TEST_CASE("infer_props agrees with the generator spec") {
    SplitMix64 rng(31337);
    for (int i = 0; i < 25; ++i) {
        DatasetSpec spec = testing::random_spec(rng, 4000);
        Relation rel = generate_dataset(spec);
        MetaProps p = infer_props(rel);
        CHECK(p.n_rows == spec.n_rows);
        CHECK(p.n_groups == spec.n_groups);
        CHECK(p.dense == spec.dense);
        if (spec.sorted) CHECK(p.sorted);
    }
}

TEST_CASE("sorting any relation makes it inferred sorted") {
    SplitMix64 rng(555);
    for (int i = 0; i < 10; ++i) {
        Relation rel = generate_dataset(testing::random_spec(rng, 2000));
        std::sort(rel.keys.begin(), rel.keys.end());
        CHECK(infer_props(rel).sorted);
    }
}

TEST_CASE("propagation follows the fixed table") {
    QueryStats stats;
    MetaProps sorted_dense{true, true, 40'000, 40'000};
    MetaProps unsorted_dense{false, true, 90'000, 40'000};
    MetaProps unsorted_sparse{false, false, 90'000, 40'000};

    SUBCASE("OJ preserves order and cardinalities come from stats") {
        MetaProps in[2] = {sorted_dense, {true, true, 90'000, 40'000}};
        MetaProps out = propagate(Role::join, AlgoId::OJ, in, stats);
        CHECK(out.sorted);
        CHECK(out.dense);
        CHECK(out.n_rows == 90'000);
        CHECK(out.n_groups == 20'000);
    }
    SUBCASE("HJ output is unsorted on the safe side") {
        MetaProps in[2] = {sorted_dense, sorted_dense};
        CHECK_FALSE(propagate(Role::join, AlgoId::HJ, in, stats).sorted);
    }
    SUBCASE("join density requires both inputs dense") {
        MetaProps in[2] = {unsorted_dense, unsorted_sparse};
        CHECK_FALSE(propagate(Role::join, AlgoId::HJ, in, stats).dense);
        MetaProps both[2] = {unsorted_dense, unsorted_dense};
        CHECK(propagate(Role::join, AlgoId::HJ, both, stats).dense);
    }
    SUBCASE("SPHG output is sorted, group output collapses to n_groups rows") {
        MetaProps in[1] = {unsorted_dense};
        MetaProps out = propagate(Role::group, AlgoId::SPHG, in, stats);
        CHECK(out.sorted);
        CHECK(out.n_rows == 20'000);
        CHECK(out.n_groups == 20'000);
    }
    SUBCASE("inapplicable algorithm is a contract violation") {
        MetaProps in[1] = {unsorted_sparse};
        CHECK_THROWS(propagate(Role::group, AlgoId::SPHG, in, stats));
        MetaProps uns[2] = {unsorted_dense, unsorted_dense};
        CHECK_THROWS(propagate(Role::join, AlgoId::OJ, uns, stats));
    }
}

TEST_CASE("applicability rules per mode") {
    MetaProps sorted_dense{true, true, 100, 10};
    MetaProps unsorted_dense{false, true, 100, 10};
    MetaProps sorted_sparse{true, false, 100, 10};

    MetaProps one_unsorted[2] = {sorted_dense, unsorted_dense};
    CHECK_FALSE(applicable(Role::join, AlgoId::OJ, one_unsorted, Mode::SQO));
    CHECK_FALSE(applicable(Role::join, AlgoId::OJ, one_unsorted, Mode::DQO));

    MetaProps dense_in[1] = {unsorted_dense};
    CHECK_FALSE(applicable(Role::group, AlgoId::SPHG, dense_in, Mode::SQO));
    CHECK(applicable(Role::group, AlgoId::SPHG, dense_in, Mode::DQO));

    MetaProps sparse_in[1] = {sorted_sparse};
    CHECK_FALSE(applicable(Role::group, AlgoId::BSG, sparse_in, Mode::SQO));
    CHECK(applicable(Role::group, AlgoId::BSG, sparse_in, Mode::DQO));
    CHECK_FALSE(applicable(Role::group, AlgoId::BSG, dense_in, Mode::DQO));

    // HG/HJ/SOG/SOJ always apply
    for (Mode m : {Mode::SQO, Mode::DQO}) {
        CHECK(applicable(Role::group, AlgoId::HG, sparse_in, m));
        CHECK(applicable(Role::group, AlgoId::SOG, sparse_in, m));
        CHECK(applicable(Role::join, AlgoId::HJ, one_unsorted, m));
        CHECK(applicable(Role::join, AlgoId::SOJ, one_unsorted, m));
    }
}

TEST_CASE("props render format") {
    MetaProps p{true, false, 90'000, 20'000};
    CHECK(p.render() == "props{sorted=T,dense=F,rows=90000,groups=20000}");
}
