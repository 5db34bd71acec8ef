// Command-line front end: dataset generation, grouping benchmarks, optimizer
// experiments, pivot-table CSV emission, and MAV registry management.

#include "CLI11.hpp"
#include "dqo/dqo.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace dqo;

namespace {

std::uint64_t default_seed() {
    if (const char* env = std::getenv("DQO_SEED")) return std::strtoull(env, nullptr, 10);
    return 42;
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
    if (path.empty()) return std::cout;
    file.open(path, std::ios::trunc);
    if (!file) throw IoError(IoError::Kind::open_failed, "cannot open: " + path);
    return file;
}

// "sorted,dense" / "unsorted,sparse" style property flags.
std::pair<bool, bool> parse_props_flag(const std::string& s) {
    bool sorted = false, dense = false, have_sort = false, have_density = false;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        if (tok == "sorted") { sorted = true; have_sort = true; }
        else if (tok == "unsorted") { sorted = false; have_sort = true; }
        else if (tok == "dense") { dense = true; have_density = true; }
        else if (tok == "sparse") { dense = false; have_density = true; }
        else throw CLI::ValidationError("unknown property token: " + tok);
    }
    if (!have_sort || !have_density)
        throw CLI::ValidationError("expected e.g. sorted,dense or unsorted,sparse");
    return {sorted, dense};
}

struct StatsOpt {
    std::vector<std::uint64_t> v;
    QueryStats get() const {
        QueryStats st;
        if (!v.empty()) {
            if (v.size() != 4)
                throw CLI::ValidationError("--stats expects nR,nS,joinOut,groupOut");
            st = {v[0], v[1], v[2], v[3]};
        }
        st.validate();
        return st;
    }
};

int cmd_gen(const DatasetSpec& spec, const std::string& out) {
    Relation rel = generate_dataset(spec);
    write_relation(rel, out);
    std::cout << out << ": " << infer_props(rel).render() << std::endl;
    return 0;
}

int cmd_bench_group(const std::string& data, DatasetSpec spec,
                    std::vector<std::string> algo_names, unsigned reps,
                    unsigned warmup, const std::string& out_path) {
    Relation rel;
    if (!data.empty()) {
        rel = read_relation(data);
        MetaProps p = infer_props(rel);
        spec = {p.n_rows, p.n_groups, p.sorted, p.dense, 0};
    } else {
        spec.validate();
        rel = generate_dataset(spec);
    }

    std::vector<AlgoId> algos;
    if (algo_names.empty()) {
        algos.assign(grouping_algos.begin(), grouping_algos.end());
    } else {
        for (const auto& name : algo_names) {
            auto a = parse_algo(name);
            if (!a || !is_grouping(*a))
                throw CLI::ValidationError("not a grouping algorithm: " + name);
            algos.push_back(*a);
        }
    }

    std::ofstream file;
    std::ostream& os = open_output(out_path, file);
    os << "algo,n_rows,n_groups,sorted,dense,rep_median_ms,checksum_count,checksum_sum\n";
    bool checksums_agree = true;
    std::optional<std::pair<std::uint64_t, std::uint64_t>> reference;
    for (AlgoId a : algos) {
        BenchRow row = bench_group(a, rel, spec, reps, warmup);
        os << to_string(a) << ',' << row.n_rows << ',' << row.n_groups << ','
           << (row.sorted ? 'T' : 'F') << ',' << (row.dense ? 'T' : 'F') << ',';
        if (!row.applicable) {
            os << "n/a,,\n";
            continue;
        }
        os << std::fixed << std::setprecision(3) << row.median_ms << ','
           << row.checksum_count << ',' << row.checksum_sum << '\n';
        std::pair<std::uint64_t, std::uint64_t> sums{row.checksum_count,
                                                     row.checksum_sum};
        if (!reference) reference = sums;
        else if (*reference != sums) checksums_agree = false;
    }
    if (!checksums_agree)
        std::cerr << "error: checksums disagree across algorithms" << std::endl;
    return checksums_agree ? 0 : 1;
}

void print_opt_result(const char* label, const OptResult& res, bool explain) {
    std::cout << label << " best cost: " << std::fixed << std::setprecision(1)
              << res.best_cost << "  plan: " << to_string(*res.best_plan.children[0].algo)
              << " -> " << to_string(*res.best_plan.algo)
              << "  enumerated states: " << res.enumerated_state_count << '\n';
    if (explain) std::cout << render_plan(res.best_plan);
}

int cmd_optimize(const std::string& r_flags, const std::string& s_flags,
                 const std::string& mode, const StatsOpt& stats_opt,
                 const std::string& mavs_path, bool explain, bool execute) {
    QueryStats st = stats_opt.get();
    auto [rs, r_dense] = parse_props_flag(r_flags);
    auto [ss, s_dense] = parse_props_flag(s_flags);
    if (r_dense != s_dense)
        throw CLI::ValidationError(
            "density is shared by key and foreign key columns; give the same "
            "density for R and S");
    LogicalPlan lp = make_logical_plan(st, rs, ss, r_dense);

    std::unique_ptr<MavRegistry> reg;
    if (!mavs_path.empty())
        reg = std::make_unique<MavRegistry>(load_registry(mavs_path));

    std::optional<OptResult> sqo, dqo;
    if (mode == "sqo" || mode == "both")
        sqo = enumerate_plans(lp, st, Mode::SQO, reg.get());
    if (mode == "dqo" || mode == "both")
        dqo = enumerate_plans(lp, st, Mode::DQO, reg.get());
    if (sqo) print_opt_result("SQO", *sqo, explain);
    if (dqo) print_opt_result("DQO", *dqo, explain);
    if (sqo && dqo)
        std::cout << "improvement factor: " << std::setprecision(3)
                  << sqo->best_cost / dqo->best_cost << '\n';

    if (execute) {
        const OptResult& chosen = dqo ? *dqo : *sqo;
        FkPair fk = make_fk_pair(st, rs, ss, r_dense, default_seed());
        GroupResult got = execute_plan(chosen.best_plan, fk.r, fk.s);
        GroupResult want = oracle_query(fk.r, fk.s);
        bool match = got.canonical() == want.canonical();
        std::cout << "execution: " << got.entries.size() << " groups, oracle "
                  << (match ? "match" : "MISMATCH") << std::endl;
        if (!match) return 1;
    }
    return 0;
}

int cmd_dp_table(const StatsOpt& stats_opt, const std::string& out_path) {
    QueryStats st = stats_opt.get();
    auto cells = dp_pivot_table(st);
    std::ofstream file;
    std::ostream& os = open_output(out_path, file);
    os << "density,r_sorted,s_sorted,mode,join_algo,group_algo,cost,is_best,"
          "improvement_factor\n";
    for (const auto& c : cells) {
        auto emit = [&](const OptResult& res, Mode m) {
            for (const auto& e : res.dp_table.root_entries) {
                bool best = e.join_algo == *res.best_plan.children[0].algo &&
                            e.group_algo == res.best_plan.algo;
                os << (c.dense ? "dense" : "sparse") << ','
                   << (c.r_sorted ? 'T' : 'F') << ',' << (c.s_sorted ? 'T' : 'F')
                   << ',' << to_string(m) << ',' << to_string(e.join_algo) << ','
                   << to_string(*e.group_algo) << ',' << std::fixed
                   << std::setprecision(1) << e.cost << ','
                   << (best ? 'T' : 'F') << ',' << std::setprecision(3)
                   << c.factor << '\n';
            }
        };
        emit(c.sqo, Mode::SQO);
        emit(c.dqo, Mode::DQO);
    }
    return 0;
}

int cmd_mav_add(const std::string& file, const Mav& mav) {
    MavRegistry reg;
    if (std::filesystem::exists(file)) reg = load_registry(file);
    mav_register(reg, mav);
    save_registry(reg, file);
    std::cout << "registered " << serialize(mav) << std::endl;
    return 0;
}

int cmd_mav_list(const std::string& file) {
    MavRegistry reg = load_registry(file);
    for (const auto& m : reg.mavs) std::cout << serialize(m) << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"deep query optimisation playground"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a dataset file");
    DatasetSpec gen_spec;
    gen_spec.seed = default_seed();
    std::string gen_out;
    gen->add_option("--rows", gen_spec.n_rows, "row count")->required();
    gen->add_option("--groups", gen_spec.n_groups, "distinct key count")->required();
    gen->add_flag("--sorted", gen_spec.sorted, "emit keys in non-decreasing order");
    gen->add_flag("--dense", gen_spec.dense, "key domain is {0..groups-1}");
    gen->add_option("--seed", gen_spec.seed, "generator seed");
    gen->add_option("--out", gen_out, "output file")->required();

    // bench-group
    auto* bench = app.add_subcommand("bench-group", "benchmark grouping variants");
    std::string bench_data, bench_out;
    DatasetSpec bench_spec{10'000'000, 1024, false, false, default_seed()};
    std::vector<std::string> bench_algos;
    unsigned reps = 5, warmup = 1;
    bench->add_option("--data", bench_data, "relation file (overrides spec flags)");
    bench->add_option("--rows", bench_spec.n_rows, "row count");
    bench->add_option("--groups", bench_spec.n_groups, "distinct key count");
    bench->add_flag("--sorted", bench_spec.sorted, "sorted dataset");
    bench->add_flag("--dense", bench_spec.dense, "dense dataset");
    bench->add_option("--seed", bench_spec.seed, "generator seed");
    bench->add_option("--algos", bench_algos, "grouping algorithms")->delimiter(',');
    bench->add_option("--reps", reps, "measured repetitions")->check(CLI::Range(1u, 1000u));
    bench->add_option("--warmup", warmup, "warmup runs");
    bench->add_option("--out", bench_out, "CSV output file (default stdout)");

    // optimize
    auto* opt = app.add_subcommand("optimize", "optimize the example query");
    std::string opt_r, opt_s, opt_mode = "both", opt_mavs;
    StatsOpt opt_stats;
    bool opt_explain = false, opt_execute = false;
    opt->add_option("--R", opt_r, "R properties, e.g. unsorted,dense")->required();
    opt->add_option("--S", opt_s, "S properties, e.g. sorted,dense")->required();
    opt->add_option("--mode", opt_mode, "sqo|dqo|both")
        ->check(CLI::IsMember({"sqo", "dqo", "both"}));
    opt->add_option("--stats", opt_stats.v, "nR,nS,joinOut,groupOut")->delimiter(',');
    opt->add_option("--mavs", opt_mavs, "MAV registry file");
    opt->add_flag("--explain", opt_explain, "print the best plan tree");
    opt->add_flag("--execute", opt_execute,
                  "generate matching data, run the plan, verify vs oracles");

    // dp-table
    auto* dpt = app.add_subcommand("dp-table", "emit the 8-cell pivot table CSV");
    StatsOpt dpt_stats;
    std::string dpt_out;
    dpt->add_option("--stats", dpt_stats.v, "nR,nS,joinOut,groupOut")->delimiter(',');
    dpt->add_option("--out", dpt_out, "CSV output file (default stdout)");

    // mav add | list
    auto* mav = app.add_subcommand("mav", "manage the MAV registry");
    mav->require_subcommand(1);
    auto* mav_add = mav->add_subcommand("add", "register a MAV");
    std::string mv_file, mv_id, mv_role, mv_sorted = "*", mv_dense = "*";
    std::string mv_choice = "-", mv_phys = "full";
    mav_add->add_option("--file", mv_file, "registry file")->required();
    mav_add->add_option("--id", mv_id, "unique id")->required();
    mav_add->add_option("--role", mv_role, "join|group")->required();
    mav_add->add_option("--sorted", mv_sorted, "T|F|*");
    mav_add->add_option("--dense", mv_dense, "T|F|*");
    mav_add->add_option("--choice", mv_choice, "pinned algorithm or -");
    mav_add->add_option("--physicality", mv_phys, "full|partial")
        ->check(CLI::IsMember({"full", "partial"}));
    auto* mav_list = mav->add_subcommand("list", "print the registry");
    std::string mv_list_file;
    mav_list->add_option("--file", mv_list_file, "registry file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen(gen_spec, gen_out);
        if (bench->parsed())
            return cmd_bench_group(bench_data, bench_spec, bench_algos, reps,
                                   warmup, bench_out);
        if (opt->parsed())
            return cmd_optimize(opt_r, opt_s, opt_mode, opt_stats, opt_mavs,
                                opt_explain, opt_execute);
        if (dpt->parsed()) return cmd_dp_table(dpt_stats, dpt_out);
        if (mav->parsed()) {
            if (mav_list->parsed()) return cmd_mav_list(mv_list_file);
            return cmd_mav_add(mv_file, parse_mav(mv_id + ";" + mv_role + ";" +
                                                  mv_sorted + ";" + mv_dense + ";" +
                                                  mv_choice + ";" + mv_phys));
        }
    } catch (const SpecError& e) {
        std::cerr << "spec error: " << e.what() << std::endl;
        return 2;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return 0;
}
