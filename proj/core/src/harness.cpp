#include "lpopt/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "lpopt/dispatch.hpp"
#include "lpopt/instances.hpp"
#include "lpopt/worker_pool.hpp"

namespace lpopt {

namespace {

// Shortest representation that round-trips exactly (keeps CSVs readable and
// byte-stable).
std::string fmt_double(double v) {
    char buf[40];
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::string fmt3(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

double mean_of(const std::vector<double>& xs) {
    double m = 0.0;
    for (double x : xs) m += x;
    return m / static_cast<double>(xs.size());
}

// Population convention (divide by N).
double pop_std(const std::vector<double>& xs) {
    const double m = mean_of(xs);
    double var = 0.0;
    for (double x : xs) var += (x - m) * (x - m);
    return std::sqrt(var / static_cast<double>(xs.size()));
}

}  // namespace

ExperimentConfig parse_experiment(const KvFile& file) {
    ExperimentConfig cfg;
    cfg.raw = file;
    const KvSection& exp = file.require("experiment");

    cfg.instance_path = exp.get_or("instance", "");
    cfg.benchmark = exp.get_or("benchmark", "");
    if (cfg.instance_path.empty() == cfg.benchmark.empty())
        throw std::runtime_error("[experiment] needs exactly one of 'instance' or 'benchmark'");
    cfg.bench_dim = static_cast<int>(exp.get_int_or("dim", 10));
    cfg.bench_lo = static_cast<int>(exp.get_int_or("lo", -10));
    cfg.bench_hi = static_cast<int>(exp.get_int_or("hi", 10));
    cfg.bench_target = static_cast<int>(exp.get_int_or("target", 0));

    std::string algos = exp.get_or("algorithms", exp.get_or("algorithm", ""));
    if (algos.empty()) throw std::runtime_error("[experiment] missing 'algorithms'");
    for (const auto& a : split_list(algos)) cfg.algorithms.push_back(a);

    for (const auto& s : split_list(exp.get_or("seeds", "1")))
        cfg.seeds.push_back(static_cast<std::uint64_t>(std::stoull(s)));
    if (cfg.seeds.size() < 1) throw std::runtime_error("[experiment] needs at least one seed");
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i)
        for (std::size_t j = i + 1; j < cfg.seeds.size(); ++j)
            if (cfg.seeds[i] == cfg.seeds[j]) throw std::runtime_error("[experiment] seeds must be distinct");

    cfg.max_samples = exp.get_int_or("max_samples", 20000);
    cfg.workers = static_cast<int>(exp.get_int_or("workers", 32));
    cfg.bins = static_cast<int>(exp.get_int_or("bins", 200));
    cfg.alpha = exp.get_double_or("alpha", 0.1);
    cfg.out_dir = exp.get_or("out", "out");
    if (cfg.workers < 1) throw std::runtime_error("[experiment] workers must be >= 1");
    return cfg;
}

ExperimentConfig load_experiment(const std::string& path) {
    return parse_experiment(KvFile::load(path));
}

std::unique_ptr<Objective> make_objective(const ExperimentConfig& cfg) {
    if (!cfg.instance_path.empty())
        return std::make_unique<LoadingPatternObjective>(load_instance(cfg.instance_path));
    return benchmark_objective(cfg.benchmark, cfg.bench_dim, cfg.bench_lo, cfg.bench_hi,
                               cfg.bench_target);
}

// ---------------------------------------------------------------------------
// Config binding
// ---------------------------------------------------------------------------

PsaConfig parse_psa_config(const KvFile& raw, const std::string& section) {
    PsaConfig cfg;
    if (const KvSection* s = raw.find(section)) {
        cfg.nchain = static_cast<int>(s->get_int_or("nchain", cfg.nchain));
        cfg.chain_size = static_cast<int>(s->get_int_or("chain_size", cfg.chain_size));
        cfg.chi = s->get_double_or("chi", cfg.chi);
        cfg.alpha = s->get_double_or("alpha", cfg.alpha);
        cfg.lambda_quality = s->get_double_or("lambda_quality", cfg.lambda_quality);
        cfg.tmin = s->get_double_or("tmin", cfg.tmin);
        cfg.min_accept_rate = s->get_double_or("min_accept_rate", cfg.min_accept_rate);
        cfg.max_samples = s->get_int_or("max_samples", cfg.max_samples);
    }
    return cfg;
}

TsConfig parse_ts_config(const KvFile& raw, const std::string& section) {
    TsConfig cfg;
    if (const KvSection* s = raw.find(section)) {
        cfg.nchain = static_cast<int>(s->get_int_or("nchain", cfg.nchain));
        cfg.chain_size = static_cast<int>(s->get_int_or("chain_size", cfg.chain_size));
        cfg.sample_fraction = s->get_double_or("sample_fraction", cfg.sample_fraction);
        cfg.tenure = static_cast<int>(s->get_int_or("tenure", cfg.tenure));
        cfg.penalization_weight = s->get_double_or("penalization_weight", cfg.penalization_weight);
        if (auto v = s->get("reinforce_best")) cfg.reinforce_best = restart_strategy_from_string(*v);
        cfg.m = s->get_double_or("m", cfg.m);
        cfg.kappa = s->get_double_or("kappa", cfg.kappa);
        cfg.max_samples = s->get_int_or("max_samples", cfg.max_samples);
    }
    return cfg;
}

EsConfig parse_es_config(const KvFile& raw, const std::string& section) {
    EsConfig cfg;
    if (const KvSection* s = raw.find(section)) {
        cfg.mu = static_cast<int>(s->get_int_or("mu", cfg.mu));
        cfg.lambda_pop = static_cast<int>(s->get_int_or("lambda_pop", cfg.lambda_pop));
        cfg.cxpb = s->get_double_or("cxpb", cfg.cxpb);
        cfg.mutpb = s->get_double_or("mutpb", cfg.mutpb);
        cfg.s_min_frac = s->get_double_or("s_min_frac", cfg.s_min_frac);
        cfg.s_max_frac = s->get_double_or("s_max_frac", cfg.s_max_frac);
        cfg.s_init_frac = s->get_double_or("s_init_frac", cfg.s_init_frac);
        cfg.max_samples = s->get_int_or("max_samples", cfg.max_samples);
    }
    return cfg;
}

PesaConfig parse_pesa_config(const KvFile& raw, const std::string& section) {
    PesaConfig cfg = PesaConfig::defaults();
    cfg.es = parse_es_config(raw, section + ".es");
    if (!raw.find(section + ".es")) cfg.es = PesaConfig::defaults().es;
    cfg.psa = parse_psa_config(raw, section + ".psa");
    if (!raw.find(section + ".psa")) cfg.psa = PesaConfig::defaults().psa;
    if (const KvSection* s = raw.find(section + ".pso")) {
        cfg.pso.npar = static_cast<int>(s->get_int_or("npar", cfg.pso.npar));
        cfg.pso.steps_per_period =
            static_cast<int>(s->get_int_or("steps_per_period", cfg.pso.steps_per_period));
        cfg.pso.coeffs.chi_c = s->get_double_or("chi_c", cfg.pso.coeffs.chi_c);
        cfg.pso.coeffs.c1 = s->get_double_or("c1", cfg.pso.coeffs.c1);
        cfg.pso.coeffs.c2 = s->get_double_or("c2", cfg.pso.coeffs.c2);
        cfg.pso.coeffs.vmax_frac = s->get_double_or("vmax_frac", cfg.pso.coeffs.vmax_frac);
    }
    if (const KvSection* s = raw.find(section)) {
        cfg.buffer_capacity = static_cast<int>(s->get_int_or("buffer_capacity", cfg.buffer_capacity));
        cfg.alpha_priority = s->get_double_or("alpha_priority", cfg.alpha_priority);
        cfg.max_samples = s->get_int_or("max_samples", cfg.max_samples);
    }
    cfg.validate();
    return cfg;
}

PpoConfig parse_ppo_config(const KvFile& raw, const std::string& section) {
    PpoConfig cfg;
    if (const KvSection* s = raw.find(section)) {
        cfg.ncores = static_cast<int>(s->get_int_or("ncores", cfg.ncores));
        cfg.n_steps = static_cast<int>(s->get_int_or("n_steps", cfg.n_steps));
        cfg.clip_eps = s->get_double_or("clip_eps", cfg.clip_eps);
        cfg.vf_coef = s->get_double_or("vf_coef", cfg.vf_coef);
        cfg.ent_coef = s->get_double_or("ent_coef", cfg.ent_coef);
        cfg.lr = s->get_double_or("lr", cfg.lr);
        cfg.epochs = static_cast<int>(s->get_int_or("epochs", cfg.epochs));
        cfg.minibatch = static_cast<int>(s->get_int_or("minibatch", cfg.minibatch));
        cfg.reward_norm = s->get_bool_or("reward_norm", cfg.reward_norm);
        cfg.incumbent_conditioning = s->get_bool_or("incumbent_conditioning", cfg.incumbent_conditioning);
        cfg.incumbent_bias = s->get_double_or("incumbent_bias", cfg.incumbent_bias);
        cfg.max_samples = s->get_int_or("max_samples", cfg.max_samples);
    }
    return cfg;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

const char* const kRunCsvHeader =
    "run_id,algo,seed,sample_idx,worker,objective,feasible,l_cy,f_dh,f_q,cb,bu_max,lcoe,n_enr,"
    "n_ifba,vector";

namespace {

// Entries may be negative: a '-' right after a digit separates, a '-' at a
// token start is a sign.
DecisionVector decode_vector_field(const std::string& field) {
    DecisionVector v;
    std::size_t pos = 0;
    while (pos < field.size()) {
        int sign = 1;
        if (field[pos] == '-') {
            sign = -1;
            ++pos;
        }
        int value = 0;
        while (pos < field.size() && field[pos] >= '0' && field[pos] <= '9') {
            value = value * 10 + (field[pos] - '0');
            ++pos;
        }
        v.push_back(sign * value);
        if (pos < field.size() && field[pos] == '-') ++pos;  // separator
    }
    return v;
}

std::string encode_vector(const DecisionVector& v) {
    std::ostringstream out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out << '-';
        out << v[i];
    }
    return out.str();
}

std::string record_row(const RunRecord& r) {
    std::ostringstream out;
    out << r.run_id << ',' << r.algo << ',' << r.seed << ',' << r.sample_idx << ',' << r.worker
        << ',' << fmt_double(r.objective) << ',' << (r.feasible ? 1 : 0) << ',';
    if (r.foms) {
        out << fmt_double(r.foms->l_cy) << ',' << fmt_double(r.foms->f_dh) << ','
            << fmt_double(r.foms->f_q) << ',' << fmt_double(r.foms->cb) << ','
            << fmt_double(r.foms->bu_max) << ',' << fmt_double(r.foms->lcoe) << ',' << r.foms->n_enr
            << ',' << r.foms->n_ifba << ',';
    } else {
        out << ",,,,,,,,";
    }
    out << encode_vector(r.vector);
    return out.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            out.push_back(field);
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    out.push_back(field);
    return out;
}

}  // namespace

void write_run_csv(const std::string& path, const std::vector<RunRecord>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << kRunCsvHeader << '\n';
    for (const auto& r : records) out << record_row(r) << '\n';
}

RunData read_run_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != kRunCsvHeader)
        throw std::runtime_error(path + ": unexpected run CSV header");
    RunData data;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 16) throw std::runtime_error(path + ": malformed row");
        if (first) {
            data.algo = f[1];
            data.seed = std::stoull(f[2]);
            first = false;
        }
        const double obj = std::stod(f[5]);
        data.objectives.push_back(obj);
        if (data.objectives.size() == 1 || obj > data.best_objective) {
            data.best_objective = obj;
            data.best_vector = decode_vector_field(f[15]);
        }
    }
    if (first) throw std::runtime_error(path + ": empty run CSV");
    return data;
}

stats::ScoreMatrix read_score_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    stats::ScoreMatrix m;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty score CSV");
    for (auto& label : split_csv_line(line)) m.labels.push_back(label);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != m.labels.size()) throw std::runtime_error(path + ": ragged score CSV");
        std::vector<double> row;
        for (const auto& v : f) row.push_back(std::stod(v));
        m.scores.push_back(std::move(row));
    }
    return m;
}

void write_score_csv(const std::string& path, const stats::ScoreMatrix& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (std::size_t j = 0; j < m.labels.size(); ++j) out << (j ? "," : "") << m.labels[j];
    out << '\n';
    for (const auto& row : m.scores) {
        for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << fmt_double(row[j]);
        out << '\n';
    }
}

// ---------------------------------------------------------------------------
// Runs
// ---------------------------------------------------------------------------

RunData run_single(const Objective& obj, const std::string& algo, const KvFile& raw,
                   std::uint64_t seed, long max_samples, int workers,
                   const std::string& csv_path) {
    WorkerPool pool(workers);
    RunData data;
    data.algo = algo;
    data.seed = seed;
    data.objectives.reserve(static_cast<std::size_t>(max_samples));

    std::vector<RunRecord> records;
    if (!csv_path.empty()) records.reserve(static_cast<std::size_t>(max_samples));
    RecordSink sink = [&](const RunRecord& r) {
        data.objectives.push_back(r.objective);
        if (!csv_path.empty()) records.push_back(r);
    };

    RunMeta meta{algo + "-s" + std::to_string(seed), algo, seed};

    long budget = max_samples;
    OptimizerResult result;
    if (algo == "psa") {
        PsaConfig cfg = parse_psa_config(raw);
        if (cfg.max_samples > 0) budget = std::min(budget, cfg.max_samples);
        EvalDispatcher dispatcher(obj, pool, budget, meta, sink);
        result = run_psa(obj, cfg, seed, dispatcher);
    } else if (algo == "tabu") {
        TsConfig cfg = parse_ts_config(raw);
        if (cfg.max_samples > 0) budget = std::min(budget, cfg.max_samples);
        EvalDispatcher dispatcher(obj, pool, budget, meta, sink);
        result = run_tabu(obj, cfg, seed, dispatcher);
    } else if (algo == "es") {
        EsConfig cfg = parse_es_config(raw);
        if (cfg.max_samples > 0) budget = std::min(budget, cfg.max_samples);
        EvalDispatcher dispatcher(obj, pool, budget, meta, sink);
        result = run_es(obj, cfg, seed, dispatcher);
    } else if (algo == "pesa") {
        PesaConfig cfg = parse_pesa_config(raw);
        if (cfg.max_samples > 0) budget = std::min(budget, cfg.max_samples);
        EvalDispatcher dispatcher(obj, pool, budget, meta, sink);
        result = run_pesa(obj, cfg, seed, dispatcher);
    } else if (algo == "ppo") {
        PpoConfig cfg = parse_ppo_config(raw);
        if (cfg.max_samples > 0) budget = std::min(budget, cfg.max_samples);
        EvalDispatcher dispatcher(obj, pool, budget, meta, sink);
        result = run_ppo(obj, cfg, seed, dispatcher);
    } else {
        throw std::runtime_error("unknown algorithm: " + algo);
    }

    data.best_objective = result.objective;
    data.best_vector = result.best;
    if (!csv_path.empty()) write_run_csv(csv_path, records);
    return data;
}

std::vector<RunData> run_experiment(const ExperimentConfig& cfg) {
    const auto obj = make_objective(cfg);
    std::filesystem::create_directories(cfg.out_dir);
    std::vector<RunData> runs;
    for (const auto& algo : cfg.algorithms)
        for (std::uint64_t seed : cfg.seeds) {
            const std::string csv =
                cfg.out_dir + "/" + algo + "_seed" + std::to_string(seed) + ".csv";
            runs.push_back(run_single(*obj, algo, cfg.raw, seed, cfg.max_samples, cfg.workers, csv));
        }
    return runs;
}

// ---------------------------------------------------------------------------
// Aggregation
// ---------------------------------------------------------------------------

GenerationSummary aggregate_generations(const std::vector<double>& objectives, int bins) {
    const long n = static_cast<long>(objectives.size());
    if (bins < 1) throw std::invalid_argument("bins must be >= 1");
    if (n < bins)
        throw std::invalid_argument("need at least as many samples (" + std::to_string(n) +
                                    ") as bins (" + std::to_string(bins) + ")");
    GenerationSummary out;
    out.mean_per_bin.resize(static_cast<std::size_t>(bins));
    out.max_so_far.resize(static_cast<std::size_t>(bins));
    double running_max = objectives[0];
    for (int b = 0; b < bins; ++b) {
        const long begin = static_cast<long>(static_cast<long long>(b) * n / bins);
        const long end = static_cast<long>(static_cast<long long>(b + 1) * n / bins);
        double sum = 0.0;
        for (long i = begin; i < end; ++i) {
            sum += objectives[static_cast<std::size_t>(i)];
            running_max = std::max(running_max, objectives[static_cast<std::size_t>(i)]);
        }
        out.mean_per_bin[static_cast<std::size_t>(b)] = sum / static_cast<double>(end - begin);
        out.max_so_far[static_cast<std::size_t>(b)] = running_max;
    }
    return out;
}

AlgoSummary summary_table(const std::string& algo, const std::vector<const RunData*>& runs,
                          int bins) {
    if (runs.empty()) throw std::invalid_argument("summary over zero runs");
    std::vector<double> bests, last_bin_means;
    for (const RunData* run : runs) {
        bests.push_back(run->best_objective);
        last_bin_means.push_back(aggregate_generations(run->objectives, bins).mean_per_bin.back());
    }
    AlgoSummary s;
    s.algo = algo;
    s.avg_max = mean_of(bests);
    s.final_sigma = pop_std(bests);
    s.max_reward = *std::max_element(last_bin_means.begin(), last_bin_means.end());
    s.avg_reward = mean_of(last_bin_means);
    s.reward_sigma = pop_std(last_bin_means);
    return s;
}

// ---------------------------------------------------------------------------
// Comparison
// ---------------------------------------------------------------------------

CompareResult compare_runs(const ExperimentConfig& cfg, const std::vector<RunData>& runs) {
    // Index runs and list anything missing before computing.
    std::vector<std::string> missing;
    std::vector<std::vector<const RunData*>> by_algo(cfg.algorithms.size());
    for (std::size_t a = 0; a < cfg.algorithms.size(); ++a)
        for (std::uint64_t seed : cfg.seeds) {
            const RunData* found = nullptr;
            for (const auto& run : runs)
                if (run.algo == cfg.algorithms[a] && run.seed == seed) {
                    found = &run;
                    break;
                }
            if (found)
                by_algo[a].push_back(found);
            else
                missing.push_back(cfg.algorithms[a] + "/seed" + std::to_string(seed));
        }
    if (!missing.empty()) {
        std::string msg = "missing runs:";
        for (const auto& m : missing) msg += " " + m;
        throw std::runtime_error(msg);
    }

    CompareResult result;
    result.matrix.labels = cfg.algorithms;
    result.matrix.scores.resize(cfg.seeds.size());
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
        result.matrix.scores[i].resize(cfg.algorithms.size());
        for (std::size_t a = 0; a < cfg.algorithms.size(); ++a)
            result.matrix.scores[i][a] = by_algo[a][i]->best_objective;
    }

    for (std::size_t a = 0; a < cfg.algorithms.size(); ++a)
        result.summaries.push_back(summary_table(cfg.algorithms[a], by_algo[a], cfg.bins));

    result.friedman = stats::friedman(result.matrix);
    result.nemenyi = stats::nemenyi(result.matrix);
    for (std::size_t i = 0; i < cfg.algorithms.size(); ++i)
        for (std::size_t j = i + 1; j < cfg.algorithms.size(); ++j)
            if (result.nemenyi.p[i][j] < cfg.alpha)
                result.significant.emplace_back(cfg.algorithms[i], cfg.algorithms[j]);
    return result;
}

std::string render_report(const CompareResult& result, double alpha) {
    std::ostringstream out;
    out << "Best pattern (over seeds)            Average pattern, last generation\n";
    out << "algo       Avg Max    Final s       Max reward   Avg reward   Final s\n";
    for (const auto& s : result.summaries) {
        char line[160];
        std::snprintf(line, sizeof(line), "%-8s %10.3f %10.3f      %11.3f %12.3f %9.3f\n",
                      s.algo.c_str(), s.avg_max, s.final_sigma, s.max_reward, s.avg_reward,
                      s.reward_sigma);
        out << line;
    }
    out << "\nFriedman: statistic = " << fmt3(result.friedman.statistic)
        << ", p = " << stats::format_p(result.friedman.p_value) << ", avg ranks:";
    for (std::size_t j = 0; j < result.matrix.labels.size(); ++j)
        out << ' ' << result.matrix.labels[j] << '=' << fmt3(result.friedman.avg_ranks[j]);
    out << "\n\nNemenyi p-values\n";
    out << "        ";
    for (const auto& label : result.nemenyi.labels) {
        char cell[24];
        std::snprintf(cell, sizeof(cell), " %8s", label.c_str());
        out << cell;
    }
    out << '\n';
    for (std::size_t i = 0; i < result.nemenyi.labels.size(); ++i) {
        char head[24];
        std::snprintf(head, sizeof(head), "%-8s", result.nemenyi.labels[i].c_str());
        out << head;
        for (std::size_t j = 0; j < result.nemenyi.labels.size(); ++j) {
            char cell[24];
            std::snprintf(cell, sizeof(cell), " %8s", stats::format_p(result.nemenyi.p[i][j]).c_str());
            out << cell;
        }
        out << '\n';
    }
    out << "\nSignificant pairs (p < " << fmt3(alpha) << "):";
    if (result.significant.empty())
        out << " none";
    else
        for (const auto& [a, b] : result.significant) out << ' ' << a << '~' << b;
    out << '\n';
    return out.str();
}

void write_compare_outputs(const ExperimentConfig& cfg, const std::vector<RunData>& runs,
                           const CompareResult& result) {
    std::filesystem::create_directories(cfg.out_dir);

    {
        std::ofstream out(cfg.out_dir + "/summary.csv", std::ios::binary);
        out << "algo,avg_max,final_sigma,max_reward,avg_reward,reward_sigma\n";
        for (const auto& s : result.summaries)
            out << s.algo << ',' << fmt_double(s.avg_max) << ',' << fmt_double(s.final_sigma) << ','
                << fmt_double(s.max_reward) << ',' << fmt_double(s.avg_reward) << ','
                << fmt_double(s.reward_sigma) << '\n';
    }
    {
        std::ofstream out(cfg.out_dir + "/friedman.csv", std::ios::binary);
        out << "algo,avg_rank\n";
        for (std::size_t j = 0; j < result.matrix.labels.size(); ++j)
            out << result.matrix.labels[j] << ',' << fmt_double(result.friedman.avg_ranks[j]) << '\n';
        out << "statistic," << fmt_double(result.friedman.statistic) << '\n';
        out << "p_value," << fmt_double(result.friedman.p_value) << '\n';
    }
    {
        std::ofstream out(cfg.out_dir + "/nemenyi.csv", std::ios::binary);
        out << "algo";
        for (const auto& label : result.nemenyi.labels) out << ',' << label;
        out << '\n';
        for (std::size_t i = 0; i < result.nemenyi.labels.size(); ++i) {
            out << result.nemenyi.labels[i];
            for (std::size_t j = 0; j < result.nemenyi.labels.size(); ++j)
                out << ',' << fmt_double(result.nemenyi.p[i][j]);
            out << '\n';
        }
    }
    {
        std::ofstream out(cfg.out_dir + "/curves.csv", std::ios::binary);
        out << "algo,bin,mean,mean_sigma,max,max_sigma\n";
        for (const auto& algo : cfg.algorithms) {
            std::vector<GenerationSummary> gens;
            for (const auto& run : runs)
                if (run.algo == algo) gens.push_back(aggregate_generations(run.objectives, cfg.bins));
            for (int b = 0; b < cfg.bins; ++b) {
                std::vector<double> means, maxes;
                for (const auto& g : gens) {
                    means.push_back(g.mean_per_bin[static_cast<std::size_t>(b)]);
                    maxes.push_back(g.max_so_far[static_cast<std::size_t>(b)]);
                }
                out << algo << ',' << b << ',' << fmt_double(mean_of(means)) << ','
                    << fmt_double(pop_std(means)) << ',' << fmt_double(mean_of(maxes)) << ','
                    << fmt_double(pop_std(maxes)) << '\n';
            }
        }
    }
    write_score_csv(cfg.out_dir + "/scores.csv", result.matrix);
    {
        std::ofstream out(cfg.out_dir + "/report.txt", std::ios::binary);
        out << render_report(result, cfg.alpha);
    }
}

CompareResult compare(const ExperimentConfig& cfg) {
    const std::vector<RunData> runs = run_experiment(cfg);
    CompareResult result = compare_runs(cfg, runs);
    write_compare_outputs(cfg, runs, result);
    return result;
}

}  // namespace lpopt
