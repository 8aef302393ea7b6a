// tests/acceptance/acceptance_main.cpp
//
// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line; the
// process exits non-zero if any fails. Tolerances are pinned in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lpopt/dispatch.hpp"
#include "lpopt/es.hpp"
#include "lpopt/harness.hpp"
#include "lpopt/instances.hpp"
#include "lpopt/pesa.hpp"
#include "lpopt/ppo.hpp"
#include "lpopt/psa.hpp"
#include "lpopt/stats.hpp"
#include "lpopt/surrogate.hpp"
#include "lpopt/tabu.hpp"
#include "lpopt/worker_pool.hpp"

using namespace lpopt;

namespace {

int g_failures = 0;

void report(int criterion, const char* name, bool ok, const std::string& detail = "") {
    std::printf("[%s] criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", criterion, name,
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string source_dir() { return LPOPT_SOURCE_DIR; }

// Shared benchmark-experiment config text for the optimizer-sanity runs.
KvFile sanity_config() {
    return KvFile::parse(
        "[psa]\n"
        "nchain = 32\n"
        "chain_size = 10\n"
        "chi = 0.1\n"
        "tmin = 0.005\n"
        "[tabu]\n"
        "nchain = 32\n"
        "chain_size = 10\n"
        "sample_fraction = 0.1\n"
        "tenure = 6\n"
        "reinforce_best = rank\n"
        "m = 5\n"
        "[es]\n"
        "mu = 2\n"
        "lambda_pop = 32\n"
        "cxpb = 0.65\n"
        "mutpb = 0.3\n"
        "[pesa]\n"
        "buffer_capacity = 300\n"
        "[ppo]\n"
        "ncores = 32\n"
        "n_steps = 2\n"
        "lr = 0.01\n"
        "ent_coef = 0.005\n"
        "minibatch = 32\n");
}

const std::vector<std::string> kAlgorithms = {"psa", "tabu", "es", "pesa", "ppo"};

// ---------------------------------------------------------------------------

void criterion_1_objective_reconstruction() {
    const ConstraintSet cs = ConstraintSet::pwr_default();
    auto fom = [](double fq, double fh, double cb, double bu, double cy, double lcoe) {
        FomVector f;
        f.f_q = fq;
        f.f_dh = fh;
        f.cb = cb;
        f.bu_max = bu;
        f.l_cy = cy;
        f.lcoe = lcoe;
        f.n_enr = 2;
        f.n_ifba = 2;
        return f;
    };
    struct Row {
        const char* label;
        FomVector foms;
        double published;
    };
    const std::vector<Row> rows = {
        {"89-eighth PPO", fom(1.815, 1.436, 1178.0, 61.415, 500.0, 5.605), -4.605},
        {"89-eighth TS", fom(1.869, 1.472, 1144.8, 61.774, 506.4, 5.617), -18.110},
        {"89-eighth PSA", fom(1.821, 1.455, 1194.5, 61.029, 500.6, 5.588), -5.920},
        {"81-eighth ES", fom(1.838, 1.447, 1201.5, 60.226, 498.6, 5.294), -5.53},
        {"85-quarter PPO", fom(1.828, 1.449, 1184.0, 53.619, 500.8, 5.362), -5.426},
    };
    bool ok = true;
    std::ostringstream detail;
    for (const auto& row : rows) {
        const double got = score_foms(row.foms, cs);
        const double err = std::abs(got - row.published);
        if (err > 0.01) {
            ok = false;
            detail << row.label << " got " << got << " want " << row.published << "; ";
        }
    }
    report(1, "published objective rows reconstructed within +/-0.01", ok, detail.str());
}

void criterion_2_feasibility_bonus() {
    const ConstraintSet cs = ConstraintSet::pwr_default();
    Rng rng(2);
    bool ok = true;
    for (int t = 0; t < 10000; ++t) {
        FomVector f;
        f.l_cy = 500.0 + rng.uniform(-0.05, 0.05);
        f.f_dh = rng.uniform(1.0, 1.45);
        f.f_q = rng.uniform(1.0, 1.85);
        f.cb = rng.uniform(0.0, 1200.0);
        f.bu_max = rng.uniform(0.0, 62.0);
        f.lcoe = rng.uniform(4.0, 7.0);
        f.n_enr = rng.uniform_int(2, 3);
        f.n_ifba = rng.uniform_int(1, 3);
        if (!foms_feasible(f, cs) || score_foms(f, cs) != -f.lcoe + 1.0) {
            ok = false;
            break;
        }
    }
    report(2, "feasible FOM vectors score exactly -LCOE + 1", ok);
}

void criterion_3_ppo_gradient_oracle() {
    PpoConfig cfg;
    cfg.clip_eps = 0.2;
    cfg.vf_coef = 0.5;
    cfg.ent_coef = 0.01;
    Rng rng(3);

    auto random_params = [&](const std::vector<int>& cards) {
        PolicyParams p;
        for (int card : cards) {
            std::vector<double> row(static_cast<std::size_t>(card));
            for (double& z : row) z = rng.uniform(-3.0, 3.0);
            p.logits.push_back(std::move(row));
        }
        p.value = rng.uniform(-1.0, 1.0);
        return p;
    };

    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const PolicyParams behavior = random_params({4, 3, 5});
        const PolicyParams params = random_params({4, 3, 5});
        TrajectoryBatch batch;
        for (int i = 0; i < 12; ++i) {
            auto [action, logprobs] = sample_action(behavior, rng);
            batch.samples.push_back({std::move(action), std::move(logprobs), rng.uniform(-2.0, 2.0)});
        }
        const auto [loss, analytic] = ppo_loss(batch, params, cfg);
        (void)loss;

        PolicyParams probe = params;
        const double step = 1e-5;
        auto rel = [](double x, double y) {
            return std::abs(x - y) / std::max({std::abs(x), std::abs(y), 1e-6});
        };
        for (std::size_t k = 0; k < params.logits.size(); ++k)
            for (std::size_t j = 0; j < params.logits[k].size(); ++j) {
                probe.logits[k][j] = params.logits[k][j] + step;
                const double up = ppo_loss(batch, probe, cfg).first;
                probe.logits[k][j] = params.logits[k][j] - step;
                const double down = ppo_loss(batch, probe, cfg).first;
                probe.logits[k][j] = params.logits[k][j];
                worst = std::max(worst, rel(analytic.logits[k][j], (up - down) / (2.0 * step)));
            }
        probe.value = params.value + step;
        const double up = ppo_loss(batch, probe, cfg).first;
        probe.value = params.value - step;
        const double down = ppo_loss(batch, probe, cfg).first;
        probe.value = params.value;
        worst = std::max(worst, rel(analytic.value, (up - down) / (2.0 * step)));
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "max relative error %.3g", worst);
    report(3, "analytic PPO gradient matches finite differences (< 1e-4)", worst < 1e-4, buf);
}

long run_algo(const Objective& obj, const std::string& algo, const KvFile& raw, std::uint64_t seed,
              long budget, double* best_out) {
    WorkerPool pool(2);
    EvalDispatcher d(obj, pool, budget, {algo + "-s" + std::to_string(seed), algo, seed});
    OptimizerResult res;
    if (algo == "psa")
        res = run_psa(obj, parse_psa_config(raw), seed, d);
    else if (algo == "tabu")
        res = run_tabu(obj, parse_ts_config(raw), seed, d);
    else if (algo == "es")
        res = run_es(obj, parse_es_config(raw), seed, d);
    else if (algo == "pesa")
        res = run_pesa(obj, parse_pesa_config(raw), seed, d);
    else
        res = run_ppo(obj, parse_ppo_config(raw), seed, d);
    *best_out = res.objective;
    return d.used();
}

void criterion_4_benchmark_sanity() {
    const auto obj = benchmark_objective("neg_sphere", 10, -10, 10);
    const KvFile raw = sanity_config();
    bool all_ok = true;
    std::ostringstream detail;
    for (const auto& algo : kAlgorithms) {
        int hits = 0;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            double best = 0.0;
            run_algo(*obj, algo, raw, seed, 10000, &best);
            if (best >= -5.0) ++hits;
        }
        detail << algo << "=" << hits << "/10 ";
        if (hits < 8) all_ok = false;
    }
    report(4, "each optimizer reaches >= -5 on neg_sphere(10) in >= 8/10 seeds", all_ok,
           detail.str());
}

void criterion_5_brute_force_equivalence() {
    LoadingPatternObjective toy(builtin_instance("toy4"));
    const BruteForceResult oracle = brute_force(toy);
    const KvFile raw = sanity_config();
    bool all_ok = true;
    std::ostringstream detail;
    for (const auto& algo : kAlgorithms) {
        int hits = 0;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            double best = 0.0;
            run_algo(toy, algo, raw, seed, 2000, &best);
            if (std::abs(best - oracle.objective) <= 1e-9) ++hits;
        }
        detail << algo << "=" << hits << "/10 ";
        if (hits < 7) all_ok = false;
    }
    report(5, "each optimizer matches the toy4 brute-force optimum in >= 7/10 seeds", all_ok,
           detail.str());
}

void criterion_6_lam_schedule() {
    bool ok = std::abs(lam_f(0.0)) == 0.0 && std::abs(lam_f(1.0)) == 0.0 &&
              std::abs(lam_f(0.5) - 0.2222) <= 1e-4;

    // Temperature is non-increasing after warm-up on full PSA runs.
    const auto obj = benchmark_objective("neg_sphere", 10, -10, 10);
    const KvFile raw = sanity_config();
    for (std::uint64_t seed = 1; seed <= 10 && ok; ++seed) {
        WorkerPool pool(2);
        EvalDispatcher d(*obj, pool, 5000, {"t", "psa", seed});
        std::vector<double> temps;
        run_psa(*obj, parse_psa_config(raw), seed, d, &temps);
        for (std::size_t i = 1; i < temps.size(); ++i)
            if (temps[i] > temps[i - 1]) ok = false;
    }
    report(6, "Lam schedule: f values and non-increasing temperature traces", ok);
}

void criterion_7_distributions() {
    bool ok = true;
    std::ostringstream detail;

    auto is_distribution = [](const std::vector<double>& p) {
        double total = 0.0;
        for (double v : p) {
            if (v < 0.0) return false;
            total += v;
        }
        return std::abs(total - 1.0) <= 1e-12;
    };

    const std::vector<double> energies = {4.0, -2.0, 0.5, 9.0};
    for (auto strategy : {RestartStrategy::hard, RestartStrategy::roulette, RestartStrategy::rank,
                          RestartStrategy::softmax})
        if (!is_distribution(restart_probs(energies, strategy, 5.0, 1.0))) {
            ok = false;
            detail << "restart distribution invalid; ";
        }

    // rank(n = 4, m = 2) = (0, 1/6, 1/3, 1/2) from worst to best.
    const auto rank = restart_probs({10.0, 5.0, 7.0, 1.0}, RestartStrategy::rank, 2.0, 1.0);
    const double expect[4] = {0.0, 1.0 / 3.0, 1.0 / 6.0, 1.0 / 2.0};  // by chain index
    for (int i = 0; i < 4; ++i)
        if (std::abs(rank[static_cast<std::size_t>(i)] - expect[i]) > 1e-12) {
            ok = false;
            detail << "rank probabilities off; ";
            break;
        }

    // Buffer priorities, alpha = 1, 3 ranks: (6/11, 3/11, 2/11).
    ReplayBuffer buf(8, 1.0);
    buf.append({0}, 3.0);
    buf.append({1}, 2.0);
    buf.append({2}, 1.0);
    const auto pri = buf.priorities();
    if (!is_distribution(pri) || std::abs(pri[0] - 6.0 / 11.0) > 1e-12 ||
        std::abs(pri[1] - 3.0 / 11.0) > 1e-12 || std::abs(pri[2] - 2.0 / 11.0) > 1e-12) {
        ok = false;
        detail << "buffer priorities off; ";
    }

    // Empirical sampling frequencies within 3-sigma multinomial bounds.
    Rng rng(7);
    const int draws = 100000;
    std::map<int, long> counts;
    for (const auto& e : buf.sample(draws, rng)) ++counts[e.vector[0]];
    for (int i = 0; i < 3; ++i) {
        const double p = pri[static_cast<std::size_t>(i)];
        const double sigma = std::sqrt(draws * p * (1.0 - p));
        if (std::abs(counts[i] - draws * p) >= 3.0 * sigma) {
            ok = false;
            detail << "buffer sampling off; ";
        }
    }
    // Mixing distribution stabilization at large spreads.
    if (!is_distribution(mixing_distribution({0.0, 1e6, 5e5, 2e6}, 3.0))) {
        ok = false;
        detail << "mixing distribution invalid; ";
    }
    report(7, "restart/replay distributions: exact values and 3-sigma sampling", ok, detail.str());
}

void criterion_8_statistics_oracle() {
    bool ok = true;
    std::ostringstream detail;

    const stats::ScoreMatrix ordered{{"a", "b", "c"}, {{3, 2, 1}, {30, 20, 10}, {0.3, 0.2, 0.1}}};
    const auto fr = stats::friedman(ordered);
    if (std::abs(fr.statistic - 6.0) > 1e-12 || std::abs(fr.p_value - 0.0498) > 1e-3) {
        ok = false;
        detail << "friedman stat/p off; ";
    }

    const stats::ScoreMatrix ties{{"a", "b", "c"}, {{1, 1, 1}, {2, 2, 2}}};
    if (stats::friedman(ties).p_value != 1.0) {
        ok = false;
        detail << "identical columns p != 1; ";
    }

    // Nemenyi k = 2 closed form 2(1 - Phi(z)).
    for (double q : {1.0, 2.0, 2.7718, 3.5}) {
        const double closed = 2.0 * (1.0 - stats::normal_cdf(q / std::sqrt(2.0)));
        if (std::abs(stats::studentized_range_sf(q, 2) - closed) > 1e-3) {
            ok = false;
            detail << "k=2 closed form off; ";
        }
    }

    const stats::ScoreMatrix m{{"a", "b", "c", "d", "e"},
                               {{5, 4, 3, 2, 1},
                                {4, 5, 3, 2, 1},
                                {5, 4, 2, 3, 1},
                                {5, 3, 4, 2, 1},
                                {4, 5, 3, 1, 2},
                                {5, 4, 3, 2, 1},
                                {5, 4, 3, 1, 2},
                                {4, 5, 2, 3, 1},
                                {5, 4, 3, 2, 1},
                                {5, 4, 3, 2, 1}}};
    const auto ne = stats::nemenyi(m);
    for (int i = 0; i < 5; ++i) {
        if (ne.p[i][i] != 1.0) ok = false;
        for (int j = 0; j < 5; ++j) {
            if (ne.p[i][j] != ne.p[j][i]) ok = false;
            if (ne.p[i][j] < 0.0 || ne.p[i][j] > 1.0) ok = false;
        }
    }
    report(8, "Friedman/Nemenyi oracles and matrix shape", ok, detail.str());
}

void criterion_9_determinism_budget() {
    const std::string base = (std::filesystem::temp_directory_path() / "lpopt_acc9").string();
    std::filesystem::remove_all(base + "_1");
    std::filesystem::remove_all(base + "_2");

    auto config_text = [&](const std::string& out) {
        std::ostringstream text;
        text << "[experiment]\n"
             << "instance = " << source_dir() << "/instances/toy4.ini\n"
             << "algorithms = psa, tabu, es, pesa, ppo\n"
             << "seeds = 1, 2\n"
             << "max_samples = 600\n"
             << "workers = 3\n"
             << "bins = 10\n"
             << "out = " << out << "\n"
             << "[psa]\nnchain = 8\nchain_size = 5\n"
             << "[tabu]\nnchain = 8\nchain_size = 5\nsample_fraction = 0.5\n"
             << "[es]\nlambda_pop = 16\n"
             << "[pesa]\nbuffer_capacity = 100\n"
             << "[ppo]\nncores = 8\nn_steps = 2\nminibatch = 8\n";
        return text.str();
    };

    run_experiment(parse_experiment(KvFile::parse(config_text(base + "_1"))));
    run_experiment(parse_experiment(KvFile::parse(config_text(base + "_2"))));

    bool ok = true;
    std::ostringstream detail;
    for (const auto& algo : kAlgorithms)
        for (int seed = 1; seed <= 2; ++seed) {
            const std::string name = "/" + algo + "_seed" + std::to_string(seed) + ".csv";
            std::ifstream a(base + "_1" + name, std::ios::binary);
            std::ifstream b(base + "_2" + name, std::ios::binary);
            std::ostringstream sa, sb;
            sa << a.rdbuf();
            sb << b.rdbuf();
            if (sa.str().empty() || sa.str() != sb.str()) {
                ok = false;
                detail << algo << "/s" << seed << " differs; ";
            }
            const long rows = std::count(sa.str().begin(), sa.str().end(), '\n') - 1;
            if (rows != 600) {
                ok = false;
                detail << algo << "/s" << seed << " rows=" << rows << "; ";
            }
        }
    std::filesystem::remove_all(base + "_1");
    std::filesystem::remove_all(base + "_2");
    report(9, "byte-identical reruns and exact sample budgets (all five optimizers)", ok,
           detail.str());
}

void criterion_10_nondegeneracy() {
    const ProblemInstance inst = builtin_instance("89-eighth");
    LoadingPatternObjective obj(inst);
    Rng rng(10);

    int sat[7] = {0}, vio[7] = {0};
    for (int t = 0; t < 10000; ++t) {
        DecisionVector v(static_cast<std::size_t>(inst.dim()));
        for (int k = 0; k < inst.dim(); ++k) v[k] = rng.uniform_int(0, inst.cardinality(k) - 1);
        const FomVector f = *obj.evaluate(v).foms;
        const bool s[7] = {std::abs(f.l_cy - 500.0) <= 0.05, f.f_dh <= 1.45,
                           f.f_q <= 1.85,                    f.cb <= 1200.0,
                           f.bu_max <= 62.0,                 f.n_enr >= 2 && f.n_enr <= 3,
                           f.n_ifba >= 1 && f.n_ifba <= 3};
        for (int i = 0; i < 7; ++i) (s[i] ? sat[i] : vio[i])++;
    }
    bool ok = true;
    std::ostringstream detail;
    const char* names[7] = {"l_cy", "f_dh", "f_q", "cb", "bu_max", "n_enr", "n_ifba"};
    for (int i = 0; i < 7; ++i) {
        detail << names[i] << "=" << sat[i] << "/" << vio[i] << " ";
        if (sat[i] == 0 || vio[i] == 0) ok = false;
    }

    // Inventory conservation under heavy fuzz.
    long bad = 0;
    for (int t = 0; t < 100000; ++t) {
        DecisionVector v(static_cast<std::size_t>(inst.dim()));
        for (int k = 0; k < inst.dim(); ++k) v[k] = rng.uniform_int(0, inst.cardinality(k) - 1);
        const CoreMap core = decode(v, inst);
        std::vector<char> used(inst.burned.size(), 0);
        int fresh = 0;
        for (int cell = 0; cell < inst.layout.n_cells(); ++cell) {
            if (core.is_fresh(cell)) {
                ++fresh;
            } else {
                if (used[static_cast<std::size_t>(core.burned_index[cell])]) ++bad;
                used[static_cast<std::size_t>(core.burned_index[cell])] = 1;
            }
        }
        if (fresh != inst.n_fresh) ++bad;
        for (char u : used)
            if (!u) ++bad;
    }
    if (bad != 0) {
        ok = false;
        detail << "conservation violations=" << bad;
    }
    report(10, "89-eighth: all constraints straddled (sat/vio) and 1e5-decode conservation", ok,
           detail.str());
}

void criterion_11_desk_scale_pipeline() {
    const auto t0 = std::chrono::steady_clock::now();

    ExperimentConfig cfg = load_experiment(source_dir() + "/configs/compare-89-eighth.ini");
    cfg.instance_path = source_dir() + "/instances/89-eighth.ini";
    const std::string out = (std::filesystem::temp_directory_path() / "lpopt_acc11").string();
    std::filesystem::remove_all(out);
    cfg.out_dir = out;
    cfg.workers = 8;

    const CompareResult result = compare(cfg);
    const double minutes =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / 60.0;

    bool ok = minutes < 30.0;
    std::ostringstream detail;
    detail << "5 algos x 10 seeds x 20000 samples in " << static_cast<int>(minutes * 60.0)
           << " s; ";
    if (result.matrix.n_rows() != 10 || result.matrix.n_cols() != 5) {
        ok = false;
        detail << "score matrix shape off; ";
    }
    for (const char* name :
         {"summary.csv", "friedman.csv", "nemenyi.csv", "curves.csv", "report.txt"})
        if (!std::filesystem::exists(out + "/" + std::string(name))) {
            ok = false;
            detail << name << " missing; ";
        }
    // The Nemenyi table mirrors the published layout: unit diagonal, symmetric.
    for (int i = 0; i < result.matrix.n_cols() && ok; ++i)
        if (result.nemenyi.p[i][i] != 1.0) ok = false;
    detail << "friedman p = " << stats::format_p(result.friedman.p_value);
    std::filesystem::remove_all(out);
    report(11, "desk-scale comparison pipeline under 30 minutes", ok, detail.str());
}

}  // namespace

int main() {
    std::printf("acceptance suite\n");
    criterion_1_objective_reconstruction();
    criterion_2_feasibility_bonus();
    criterion_3_ppo_gradient_oracle();
    criterion_4_benchmark_sanity();
    criterion_5_brute_force_equivalence();
    criterion_6_lam_schedule();
    criterion_7_distributions();
    criterion_8_statistics_oracle();
    criterion_9_determinism_budget();
    criterion_10_nondegeneracy();
    criterion_11_desk_scale_pipeline();
    if (g_failures > 0) {
        std::printf("%d criterion(s) FAILED\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
