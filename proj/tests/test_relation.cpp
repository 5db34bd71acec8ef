#include "doctest.h"
#include "dqo/relation.hpp"
#include "test_util.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

using namespace dqo;

namespace {

std::filesystem::path tmp_file(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

} // namespace

TEST_CASE("generate_dataset rejects invalid specs") {
    CHECK_THROWS_AS(generate_dataset({10, 20, false, false, 1}), SpecError);
    CHECK_THROWS_AS(generate_dataset({10, 0, false, false, 1}), SpecError);
    CHECK_THROWS_AS(generate_dataset({0, 0, false, false, 1}), SpecError);
}

TEST_CASE("single dense group is forced") {
    Relation rel = generate_dataset({4, 1, true, true, 123});
    CHECK(rel.keys == std::vector<std::uint32_t>{0, 0, 0, 0});
}

TEST_CASE("dense sorted full-cardinality dataset covers the whole range") {
    Relation rel = generate_dataset({1000, 1000, true, true, 7});
    REQUIRE(rel.n_rows() == 1000);
    CHECK(std::is_sorted(rel.keys.begin(), rel.keys.end()));
    std::set<std::uint32_t> distinct(rel.keys.begin(), rel.keys.end());
    REQUIRE(distinct.size() == 1000);
    CHECK(*distinct.begin() == 0);
    CHECK(*distinct.rbegin() == 999);
}

TEST_CASE("generation is deterministic in the seed") {
    DatasetSpec spec{5000, 64, false, false, 99};
    CHECK(generate_dataset(spec) == generate_dataset(spec));
    spec.seed = 100;
    CHECK(generate_dataset(spec).keys != generate_dataset({5000, 64, false, false, 99}).keys);
}

TEST_CASE("generator honors spec properties") {
    SplitMix64 rng(2024);
    for (int i = 0; i < 30; ++i) {
        DatasetSpec spec = testing::random_spec(rng, 5000);
        Relation rel = generate_dataset(spec);
        REQUIRE(rel.n_rows() == spec.n_rows);
        std::set<std::uint32_t> distinct(rel.keys.begin(), rel.keys.end());
        CHECK(distinct.size() == spec.n_groups);
        if (spec.sorted) CHECK(std::is_sorted(rel.keys.begin(), rel.keys.end()));
        if (spec.dense) {
            CHECK(*distinct.begin() == 0);
            CHECK(*distinct.rbegin() == spec.n_groups - 1);
        }
    }
}

TEST_CASE("relation file round-trip is bit-exact") {
    auto path = tmp_file("dqo_roundtrip.bin");
    Relation rel = generate_dataset({777, 13, false, true, 3});
    write_relation(rel, path.string());
    CHECK(read_relation(path.string()) == rel);

    rel.payload.emplace(rel.n_rows(), 42);
    (*rel.payload)[5] = 0xDEADBEEFCAFEull;
    write_relation(rel, path.string());
    CHECK(read_relation(path.string()) == rel);

    Relation empty;
    write_relation(empty, path.string());
    CHECK(read_relation(path.string()) == empty);
    std::filesystem::remove(path);
}

TEST_CASE("relation file errors are distinct") {
    auto path = tmp_file("dqo_badfile.bin");
    {
        std::ofstream out(path, std::ios::binary);
        out << "NOPE";
    }
    try {
        read_relation(path.string());
        FAIL("expected bad magic");
    } catch (const IoError& e) {
        CHECK(e.kind == IoError::Kind::bad_magic);
    }

    Relation rel = generate_dataset({100, 10, false, false, 5});
    write_relation(rel, path.string());
    std::filesystem::resize_file(path, std::filesystem::file_size(path) - 7);
    try {
        read_relation(path.string());
        FAIL("expected truncation");
    } catch (const IoError& e) {
        CHECK(e.kind == IoError::Kind::truncated);
    }

    write_relation(rel, path.string());
    {
        std::ofstream out(path, std::ios::binary | std::ios::app);
        out << "xx";
    }
    try {
        read_relation(path.string());
        FAIL("expected length mismatch");
    } catch (const IoError& e) {
        CHECK(e.kind == IoError::Kind::length_mismatch);
    }
    std::filesystem::remove(path);
}

TEST_CASE("oracle_group hand-checked cases") {
    Relation rel;
    rel.keys = {5, 3, 5};
    GroupResult g = oracle_group(rel);
    REQUIRE(g.entries.size() == 2);
    CHECK(g.entries[0] == GroupEntry{3, 1, 3});
    CHECK(g.entries[1] == GroupEntry{5, 2, 10});

    CHECK(oracle_group(Relation{}).entries.empty());
}

TEST_CASE("oracle_group counts sum to n_rows and entries match n_groups") {
    SplitMix64 rng(11);
    for (int i = 0; i < 20; ++i) {
        DatasetSpec spec = testing::random_spec(rng, 3000);
        Relation rel = generate_dataset(spec);
        GroupResult g = oracle_group(rel);
        CHECK(g.entries.size() == spec.n_groups);
        std::uint64_t total = 0;
        for (const auto& e : g.entries) total += e.count;
        CHECK(total == spec.n_rows);
    }
}

TEST_CASE("oracle_join hand-checked cases") {
    Relation r, s;
    r.keys = {1, 2};
    s.keys = {2, 2};
    Relation out = oracle_join(r, s);
    CHECK(out.keys == std::vector<std::uint32_t>{2, 2});

    Relation empty;
    CHECK(oracle_join(r, empty).n_rows() == 0);
}

TEST_CASE("oracle_join FK shape yields |S| rows") {
    Relation r, s;
    for (std::uint32_t i = 0; i < 50; ++i) r.keys.push_back(i);
    SplitMix64 rng(8);
    for (int j = 0; j < 200; ++j)
        s.keys.push_back(static_cast<std::uint32_t>(rng.bounded(50)));
    CHECK(oracle_join(r, s).n_rows() == s.n_rows());
}
