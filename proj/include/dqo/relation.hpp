#pragma once

#include "dqo/rng.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace dqo {

struct SpecError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Distinct failure kinds for the binary relation format.
struct IoError : std::runtime_error {
    enum class Kind { open_failed, bad_magic, truncated, length_mismatch };
    IoError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
    Kind kind;
};

// Single-key-column relation with an optional 64-bit payload column.
struct Relation {
    std::vector<std::uint32_t> keys;
    std::optional<std::vector<std::uint64_t>> payload;

    std::size_t n_rows() const { return keys.size(); }

    bool operator==(const Relation&) const = default;
};

struct DatasetSpec {
    std::uint64_t n_rows = 0;
    std::uint64_t n_groups = 0;
    bool sorted = false;
    bool dense = false;
    std::uint64_t seed = 0;

    void validate() const {
        if (n_groups == 0)
            throw SpecError("dataset spec: n_groups must be >= 1");
        if (n_groups > n_rows)
            throw SpecError("dataset spec: n_groups (" + std::to_string(n_groups) +
                            ") exceeds n_rows (" + std::to_string(n_rows) + ")");
    }
};

struct GroupEntry {
    std::uint32_t key = 0;
    std::uint64_t count = 0;
    std::uint64_t sum = 0;

    bool operator==(const GroupEntry&) const = default;
};

struct GroupResult {
    std::vector<GroupEntry> entries;

    bool operator==(const GroupResult&) const = default;

    // Canonical form for comparisons: ascending key.
    GroupResult canonical() const {
        GroupResult r = *this;
        std::sort(r.entries.begin(), r.entries.end(),
                  [](const GroupEntry& a, const GroupEntry& b) { return a.key < b.key; });
        return r;
    }
};

// Value summed per row: the payload if present, otherwise the key itself
// (keeps a SUM path alive on key-only relations).
inline std::uint64_t sum_term(const Relation& rel, std::size_t row) {
    return rel.payload ? (*rel.payload)[row] : rel.keys[row];
}

// Deterministic dataset generator. Every one of the n_groups key values is
// placed at least once, the remaining rows draw uniformly, then the rows are
// shuffled (or sorted for sorted specs). Output is a pure function of seed.
inline Relation generate_dataset(const DatasetSpec& spec) {
    spec.validate();
    SplitMix64 rng(spec.seed);

    std::vector<std::uint32_t> domain;
    domain.reserve(spec.n_groups);
    if (spec.dense) {
        for (std::uint64_t v = 0; v < spec.n_groups; ++v)
            domain.push_back(static_cast<std::uint32_t>(v));
    } else {
        std::unordered_set<std::uint32_t> seen;
        seen.reserve(spec.n_groups * 2);
        while (domain.size() < spec.n_groups) {
            auto v = static_cast<std::uint32_t>(rng.bounded(1ull << 32));
            if (seen.insert(v).second) domain.push_back(v);
        }
        std::sort(domain.begin(), domain.end());
    }

    Relation rel;
    rel.keys.reserve(spec.n_rows);
    for (std::uint64_t g = 0; g < spec.n_groups; ++g)
        rel.keys.push_back(domain[g]);
    for (std::uint64_t i = spec.n_groups; i < spec.n_rows; ++i)
        rel.keys.push_back(domain[rng.bounded(spec.n_groups)]);

    if (spec.sorted)
        std::sort(rel.keys.begin(), rel.keys.end());
    else
        rng.shuffle(rel.keys);
    return rel;
}

// Binary relation file: "DQO1", u64le row count, u8 payload flag,
// n_rows u32le keys, then n_rows u64le payloads if flagged.
inline constexpr char relation_magic[4] = {'D', 'Q', 'O', '1'};

inline void write_relation(const Relation& rel, const std::string& path) {
    if (rel.payload && rel.payload->size() != rel.keys.size())
        throw IoError(IoError::Kind::length_mismatch,
                      "payload length differs from key length");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError(IoError::Kind::open_failed, "cannot open for writing: " + path);
    out.write(relation_magic, 4);
    std::uint64_t n = rel.keys.size();
    out.write(reinterpret_cast<const char*>(&n), 8);
    char flag = rel.payload ? 1 : 0;
    out.write(&flag, 1);
    out.write(reinterpret_cast<const char*>(rel.keys.data()),
              static_cast<std::streamsize>(n * 4));
    if (rel.payload)
        out.write(reinterpret_cast<const char*>(rel.payload->data()),
                  static_cast<std::streamsize>(n * 8));
    if (!out)
        throw IoError(IoError::Kind::open_failed, "write failed: " + path);
}

inline Relation read_relation(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError(IoError::Kind::open_failed, "cannot open for reading: " + path);
    char magic[4];
    if (!in.read(magic, 4))
        throw IoError(IoError::Kind::truncated, "truncated header: " + path);
    if (std::memcmp(magic, relation_magic, 4) != 0)
        throw IoError(IoError::Kind::bad_magic, "bad magic bytes: " + path);
    std::uint64_t n = 0;
    char flag = 0;
    if (!in.read(reinterpret_cast<char*>(&n), 8) || !in.read(&flag, 1))
        throw IoError(IoError::Kind::truncated, "truncated header: " + path);
    if (flag != 0 && flag != 1)
        throw IoError(IoError::Kind::length_mismatch,
                      "invalid payload flag in " + path);
    Relation rel;
    rel.keys.resize(n);
    if (n > 0 && !in.read(reinterpret_cast<char*>(rel.keys.data()),
                          static_cast<std::streamsize>(n * 4)))
        throw IoError(IoError::Kind::truncated, "truncated key column: " + path);
    if (flag) {
        rel.payload.emplace(n);
        if (n > 0 && !in.read(reinterpret_cast<char*>(rel.payload->data()),
                              static_cast<std::streamsize>(n * 8)))
            throw IoError(IoError::Kind::truncated, "truncated payload column: " + path);
    }
    // Anything left over means the length header lied.
    if (in.peek() != std::ifstream::traits_type::eof())
        throw IoError(IoError::Kind::length_mismatch,
                      "trailing bytes after declared rows: " + path);
    return rel;
}

// Reference grouping: one associative map, output ascending by key.
// Test oracle only, no performance claims.
inline GroupResult oracle_group(const Relation& rel) {
    std::vector<std::pair<std::uint32_t, std::pair<std::uint64_t, std::uint64_t>>> acc;
    std::unordered_map<std::uint32_t, std::size_t> idx;
    for (std::size_t i = 0; i < rel.n_rows(); ++i) {
        std::uint32_t k = rel.keys[i];
        auto [it, fresh] = idx.try_emplace(k, acc.size());
        if (fresh) acc.push_back({k, {0, 0}});
        acc[it->second].second.first += 1;
        acc[it->second].second.second += sum_term(rel, i);
    }
    GroupResult res;
    res.entries.reserve(acc.size());
    for (auto& [k, cs] : acc)
        res.entries.push_back({k, cs.first, cs.second});
    std::sort(res.entries.begin(), res.entries.end(),
              [](const GroupEntry& a, const GroupEntry& b) { return a.key < b.key; });
    return res;
}

// Reference equi-join: nested loops, (r index, s index) lexicographic output
// order, output payload carries r's payload.
inline Relation oracle_join(const Relation& r, const Relation& s) {
    Relation out;
    out.payload.emplace();
    for (std::size_t i = 0; i < r.n_rows(); ++i)
        for (std::size_t j = 0; j < s.n_rows(); ++j)
            if (r.keys[i] == s.keys[j]) {
                out.keys.push_back(r.keys[i]);
                out.payload->push_back(r.payload ? (*r.payload)[i] : r.keys[i]);
            }
    return out;
}

} // namespace dqo
