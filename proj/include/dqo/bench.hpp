#pragma once

#include "dqo/algo.hpp"
#include "dqo/grouping.hpp"
#include "dqo/relation.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

namespace dqo {

struct BenchRow {
    AlgoId algo = AlgoId::HG;
    std::uint64_t n_rows = 0;
    std::uint64_t n_groups = 0;
    bool sorted = false;
    bool dense = false;
    bool applicable = true; // false renders as an n/a row
    double median_ms = 0.0;
    std::uint64_t checksum_count = 0;
    std::uint64_t checksum_sum = 0;
};

namespace detail {

inline std::vector<std::uint32_t> bench_directory(const Relation& rel) {
    std::vector<std::uint32_t> keys = rel.keys;
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    return keys;
}

} // namespace detail

// Times one grouping variant on one dataset: warmup runs, then the median of
// the measured repetitions. Checksums force the computation and let rows
// from different algorithms be cross-checked.
inline BenchRow bench_group(AlgoId algo, const Relation& rel, const DatasetSpec& spec,
                            unsigned reps, unsigned warmup) {
    BenchRow row;
    row.algo = algo;
    row.n_rows = spec.n_rows;
    row.n_groups = spec.n_groups;
    row.sorted = spec.sorted;
    row.dense = spec.dense;

    const bool usable = (algo != AlgoId::OG || spec.sorted) &&
                        (algo != AlgoId::SPHG || spec.dense);
    if (!usable) {
        row.applicable = false;
        return row;
    }

    std::vector<std::uint32_t> directory;
    if (algo == AlgoId::BSG) directory = detail::bench_directory(rel);

    auto run = [&] {
        switch (algo) {
            case AlgoId::HG: return hg_group(rel);
            case AlgoId::SPHG: return sphg_group(rel, spec.n_groups);
            case AlgoId::OG: return og_group(rel);
            case AlgoId::SOG: return sog_group(rel);
            case AlgoId::BSG: return bsg_group(rel, directory);
            default: throw PreconditionError("bench_group: not a grouping algorithm");
        }
    };

    for (unsigned i = 0; i < warmup; ++i) {
        GroupResult g = run();
        row.checksum_count = 0;
        row.checksum_sum = 0;
        for (const auto& e : g.entries) {
            row.checksum_count += e.count;
            row.checksum_sum += e.sum;
        }
    }
    std::vector<double> times;
    times.reserve(reps);
    for (unsigned i = 0; i < reps; ++i) {
        auto t0 = std::chrono::steady_clock::now();
        GroupResult g = run();
        auto t1 = std::chrono::steady_clock::now();
        times.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
        row.checksum_count = 0;
        row.checksum_sum = 0;
        for (const auto& e : g.entries) {
            row.checksum_count += e.count;
            row.checksum_sum += e.sum;
        }
    }
    std::sort(times.begin(), times.end());
    row.median_ms = times[times.size() / 2];
    return row;
}

} // namespace dqo
