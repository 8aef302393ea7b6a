// tools/main.cpp
//
// lpopt command line: seeded optimizer runs, the full comparison pipeline,
// standalone rank statistics, the brute-force oracle, and report
// regeneration from existing run CSVs.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "lpopt/harness.hpp"
#include "lpopt/instances.hpp"
#include "lpopt/surrogate.hpp"

namespace {

struct GlobalFlags {
    std::string config;
    std::string out;
    long seed = -1;
    int workers = 0;
    long max_samples = 0;
};

lpopt::ExperimentConfig load_with_overrides(const GlobalFlags& flags) {
    lpopt::ExperimentConfig cfg = lpopt::load_experiment(flags.config);
    if (!flags.out.empty()) cfg.out_dir = flags.out;
    if (flags.seed >= 0) cfg.seeds = {static_cast<std::uint64_t>(flags.seed)};
    if (flags.workers > 0) cfg.workers = flags.workers;
    if (flags.max_samples > 0) cfg.max_samples = flags.max_samples;
    return cfg;
}

void add_global_flags(CLI::App* cmd, GlobalFlags& flags) {
    cmd->add_option("--config", flags.config, "experiment config file")->required();
    cmd->add_option("--out", flags.out, "output directory override");
    cmd->add_option("--seed", flags.seed, "run only this seed");
    cmd->add_option("--workers", flags.workers, "worker pool size override");
    cmd->add_option("--max-samples", flags.max_samples, "sample budget override");
}

int cmd_run(const GlobalFlags& flags) {
    const lpopt::ExperimentConfig cfg = load_with_overrides(flags);
    const auto runs = lpopt::run_experiment(cfg);
    for (const auto& run : runs)
        std::printf("%-6s seed %-4llu best %.6f over %zu samples\n", run.algo.c_str(),
                    static_cast<unsigned long long>(run.seed), run.best_objective,
                    run.objectives.size());
    std::printf("CSV logs in %s\n", cfg.out_dir.c_str());
    return 0;
}

int cmd_compare(const GlobalFlags& flags) {
    const lpopt::ExperimentConfig cfg = load_with_overrides(flags);
    const lpopt::CompareResult result = lpopt::compare(cfg);
    std::cout << lpopt::render_report(result, cfg.alpha);
    std::printf("\ntables written to %s\n", cfg.out_dir.c_str());
    return 0;
}

int cmd_report(const GlobalFlags& flags) {
    const lpopt::ExperimentConfig cfg = load_with_overrides(flags);
    std::vector<lpopt::RunData> runs;
    std::vector<std::string> missing;
    for (const auto& algo : cfg.algorithms)
        for (auto seed : cfg.seeds) {
            const std::string path =
                cfg.out_dir + "/" + algo + "_seed" + std::to_string(seed) + ".csv";
            if (std::filesystem::exists(path))
                runs.push_back(lpopt::read_run_csv(path));
            else
                missing.push_back(algo + "/seed" + std::to_string(seed));
        }
    if (!missing.empty()) {
        std::fprintf(stderr, "missing run CSVs:");
        for (const auto& m : missing) std::fprintf(stderr, " %s", m.c_str());
        std::fprintf(stderr, "\n");
        return 1;
    }
    const lpopt::CompareResult result = lpopt::compare_runs(cfg, runs);
    lpopt::write_compare_outputs(cfg, runs, result);
    std::cout << lpopt::render_report(result, cfg.alpha);
    return 0;
}

int cmd_stats(const std::string& scores_path, double alpha, const std::string& out_dir) {
    const lpopt::stats::ScoreMatrix m = lpopt::read_score_csv(scores_path);
    lpopt::CompareResult result;
    result.matrix = m;
    result.friedman = lpopt::stats::friedman(m);
    result.nemenyi = lpopt::stats::nemenyi(m);
    for (std::size_t i = 0; i < m.labels.size(); ++i)
        for (std::size_t j = i + 1; j < m.labels.size(); ++j)
            if (result.nemenyi.p[i][j] < alpha)
                result.significant.emplace_back(m.labels[i], m.labels[j]);

    std::cout << lpopt::render_report(result, alpha);

    std::filesystem::create_directories(out_dir);
    std::ofstream fr(out_dir + "/friedman.csv", std::ios::binary);
    fr << "algo,avg_rank\n";
    for (std::size_t j = 0; j < m.labels.size(); ++j)
        fr << m.labels[j] << ',' << result.friedman.avg_ranks[j] << '\n';
    fr << "statistic," << result.friedman.statistic << '\n';
    fr << "p_value," << result.friedman.p_value << '\n';
    std::ofstream ne(out_dir + "/nemenyi.csv", std::ios::binary);
    ne << "algo";
    for (const auto& label : m.labels) ne << ',' << label;
    ne << '\n';
    for (std::size_t i = 0; i < m.labels.size(); ++i) {
        ne << m.labels[i];
        for (std::size_t j = 0; j < m.labels.size(); ++j) ne << ',' << result.nemenyi.p[i][j];
        ne << '\n';
    }
    return 0;
}

int cmd_oracle(const std::string& instance, const std::string& benchmark, int dim, int lo, int hi,
               int target) {
    std::unique_ptr<lpopt::Objective> obj;
    if (!instance.empty()) {
        obj = std::make_unique<lpopt::LoadingPatternObjective>(lpopt::load_instance(instance));
    } else if (!benchmark.empty()) {
        obj = lpopt::benchmark_objective(benchmark, dim, lo, hi, target);
    } else {
        std::fprintf(stderr, "oracle needs --instance or --benchmark\n");
        return 1;
    }
    const lpopt::BruteForceResult result = lpopt::brute_force(*obj);
    std::printf("enumerated %lld points\n", result.enumerated);
    std::printf("best objective %.12g at", result.objective);
    for (int v : result.best) std::printf(" %d", v);
    std::printf("\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"metaheuristics workbench for PWR reload-pattern surrogates"};
    app.require_subcommand(1);

    GlobalFlags run_flags, compare_flags, report_flags;
    auto* run = app.add_subcommand("run", "execute the configured runs, one CSV per (algo, seed)");
    add_global_flags(run, run_flags);

    auto* compare =
        app.add_subcommand("compare", "run all algorithms x seeds and emit the comparison tables");
    add_global_flags(compare, compare_flags);

    auto* report = app.add_subcommand("report", "rebuild tables from existing run CSVs");
    add_global_flags(report, report_flags);

    std::string scores_path, stats_out = "out";
    double alpha = 0.1;
    auto* stats = app.add_subcommand("stats", "Friedman + Nemenyi over a score matrix CSV");
    stats->add_option("--scores", scores_path, "CSV: header = labels, one row per seed")->required();
    stats->add_option("--alpha", alpha, "significance level (default 0.1)");
    stats->add_option("--out", stats_out, "output directory");

    std::string oracle_instance, oracle_benchmark;
    int dim = 3, lo = -2, hi = 2, target = 0;
    auto* oracle = app.add_subcommand("oracle", "exhaustive enumeration (guarded at 1e6 points)");
    oracle->add_option("--instance", oracle_instance, "instance file");
    oracle->add_option("--benchmark", oracle_benchmark, "neg_sphere or neg_rastrigin");
    oracle->add_option("--dim", dim, "benchmark dimension");
    oracle->add_option("--lo", lo, "benchmark lower bound");
    oracle->add_option("--hi", hi, "benchmark upper bound");
    oracle->add_option("--target", target, "benchmark optimum location");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(run_flags);
        if (compare->parsed()) return cmd_compare(compare_flags);
        if (report->parsed()) return cmd_report(report_flags);
        if (stats->parsed()) return cmd_stats(scores_path, alpha, stats_out);
        if (oracle->parsed()) return cmd_oracle(oracle_instance, oracle_benchmark, dim, lo, hi, target);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
