// core/include/lpopt/harness.hpp
//
// Experiment orchestration: seeded runs of any optimizer on any objective,
// per-run CSV logs, 200-bin curve aggregation, the Avg-Max / Final-sigma
// summary tables and the Friedman + Nemenyi comparison pipeline.

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "lpopt/es.hpp"
#include "lpopt/kvfile.hpp"
#include "lpopt/pesa.hpp"
#include "lpopt/ppo.hpp"
#include "lpopt/psa.hpp"
#include "lpopt/run_record.hpp"
#include "lpopt/stats.hpp"
#include "lpopt/surrogate.hpp"
#include "lpopt/tabu.hpp"

namespace lpopt {

struct ExperimentConfig {
    std::string instance_path;  // one of instance_path / benchmark is set
    std::string benchmark;
    int bench_dim = 10;
    int bench_lo = -10;
    int bench_hi = 10;
    int bench_target = 0;

    std::vector<std::string> algorithms;  // run order = comparison column order
    std::vector<std::uint64_t> seeds;
    long max_samples = 20000;
    int workers = 32;
    int bins = 200;
    double alpha = 0.1;
    std::string out_dir = "out";

    KvFile raw;  // algorithm sections, parsed on demand
};

ExperimentConfig load_experiment(const std::string& path);
ExperimentConfig parse_experiment(const KvFile& file);

std::unique_ptr<Objective> make_objective(const ExperimentConfig& cfg);

// Per-algorithm config binding from the experiment file's sections.
PsaConfig parse_psa_config(const KvFile& raw, const std::string& section = "psa");
TsConfig parse_ts_config(const KvFile& raw, const std::string& section = "tabu");
EsConfig parse_es_config(const KvFile& raw, const std::string& section = "es");
PesaConfig parse_pesa_config(const KvFile& raw, const std::string& section = "pesa");
PpoConfig parse_ppo_config(const KvFile& raw, const std::string& section = "ppo");

// ---------------------------------------------------------------------------
// Runs
// ---------------------------------------------------------------------------

struct RunData {
    std::string algo;
    std::uint64_t seed = 0;
    double best_objective = 0.0;
    DecisionVector best_vector;
    std::vector<double> objectives;  // per sample, in emission order
};

// Executes one optimizer; when csv_path is non-empty every evaluation is
// logged there (fixed schema, byte-stable formatting).
RunData run_single(const Objective& obj, const std::string& algo, const KvFile& raw,
                   std::uint64_t seed, long max_samples, int workers,
                   const std::string& csv_path);

// All (algorithm, seed) runs of the experiment; one CSV per run under
// cfg.out_dir.
std::vector<RunData> run_experiment(const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------
// Aggregation and comparison
// ---------------------------------------------------------------------------

struct GenerationSummary {
    std::vector<double> mean_per_bin;  // mean objective within each bin
    std::vector<double> max_so_far;    // running maximum at each bin end
};

// Partitions the sample stream into `bins` near-equal index ranges. Rejects
// streams shorter than the bin count.
GenerationSummary aggregate_generations(const std::vector<double>& objectives, int bins = 200);

struct AlgoSummary {
    std::string algo;
    double avg_max = 0.0;       // mean over seeds of best-ever objective
    double final_sigma = 0.0;   // population std over seeds of best-ever
    double max_reward = 0.0;    // max over seeds of the last-bin mean
    double avg_reward = 0.0;    // mean over seeds of the last-bin mean
    double reward_sigma = 0.0;  // population std of the last-bin mean
};

AlgoSummary summary_table(const std::string& algo, const std::vector<const RunData*>& runs, int bins);

struct CompareResult {
    std::vector<AlgoSummary> summaries;
    stats::ScoreMatrix matrix;  // N seeds x k algorithms of best objectives
    stats::FriedmanResult friedman;
    stats::NemenyiResult nemenyi;
    std::vector<std::pair<std::string, std::string>> significant;  // p < alpha
};

// Builds the comparison from completed runs. Missing (algorithm, seed) pairs
// are reported in the thrown message.
CompareResult compare_runs(const ExperimentConfig& cfg, const std::vector<RunData>& runs);

// Full pipeline: run everything, write summary.csv / friedman.csv /
// nemenyi.csv / curves.csv and the aligned-text report; returns the result.
CompareResult compare(const ExperimentConfig& cfg);

// Writes the four comparison outputs plus report.txt into out_dir.
void write_compare_outputs(const ExperimentConfig& cfg, const std::vector<RunData>& runs,
                           const CompareResult& result);

std::string render_report(const CompareResult& result, double alpha);

// ---------------------------------------------------------------------------
// CSV helpers (schema shared by the CLI `report` and `stats` subcommands)
// ---------------------------------------------------------------------------

extern const char* const kRunCsvHeader;

void write_run_csv(const std::string& path, const std::vector<RunRecord>& records);
RunData read_run_csv(const std::string& path);

stats::ScoreMatrix read_score_csv(const std::string& path);
void write_score_csv(const std::string& path, const stats::ScoreMatrix& m);

}  // namespace lpopt
