#include <doctest.h>

#include <cmath>
#include <map>

#include "lpopt/dispatch.hpp"
#include "lpopt/psa.hpp"
#include "lpopt/worker_pool.hpp"

using namespace lpopt;

namespace {

// Fixed-bounds objective used to exercise propose() without caring about the
// landscape.
class FlatObjective : public Objective {
public:
    FlatObjective(int dim, int lo, int hi) : dim_(dim), lo_(lo), hi_(hi) {}
    int dim() const override { return dim_; }
    int lower(int) const override { return lo_; }
    int upper(int) const override { return hi_; }
    Evaluation evaluate(const DecisionVector&) const override { return {0.0, true, std::nullopt}; }

private:
    int dim_, lo_, hi_;
};

}  // namespace

TEST_CASE("propose resamples entries with probability chi") {
    Rng rng(42);

    // chi = 1: every entry resampled (wide bounds make collisions negligible).
    const FlatObjective wide(52, 0, 1000000);
    DecisionVector x(52, 0);
    const DecisionVector all = propose(x, 1.0, wide, rng);
    int changed = 0;
    for (int k = 0; k < 52; ++k)
        if (all[k] != x[k]) ++changed;
    CHECK(changed == 52);

    // chi = 0.1, dim 52: about 5.2 entries per call on average.
    double total_changed = 0.0;
    const int trials = 100000;
    for (int t = 0; t < trials; ++t) {
        const DecisionVector y = propose(x, 0.1, wide, rng);
        for (int k = 0; k < 52; ++k)
            if (y[k] != x[k]) ++total_changed;
    }
    CHECK(total_changed / trials == doctest::Approx(5.2).epsilon(0.02));

    // Degenerate zero-width bounds: the output equals the input.
    const FlatObjective narrow(5, 3, 3);
    const DecisionVector z(5, 3);
    CHECK(propose(z, 0.5, narrow, rng) == z);

    // At least one entry is always selected, so steps are never no-ops by
    // construction.
    bool saw_change = true;
    for (int t = 0; t < 1000; ++t) {
        const DecisionVector y = propose(x, 1e-12, wide, rng);
        int diff = 0;
        for (int k = 0; k < 52; ++k)
            if (y[k] != x[k]) ++diff;
        if (diff == 0) saw_change = false;
    }
    CHECK(saw_change);
}

TEST_CASE("metropolis acceptance") {
    Rng rng(7);
    for (int t = 0; t < 100; ++t) CHECK(metropolis_accept(1.0, 0.5, rng));
    for (int t = 0; t < 100; ++t) CHECK(metropolis_accept(0.0, 0.5, rng));  // exp(0) = 1

    long accepted = 0;
    const long trials = 100000;
    for (long t = 0; t < trials; ++t)
        if (metropolis_accept(-1.0, 1.0, rng)) ++accepted;
    CHECK(std::abs(static_cast<double>(accepted) / trials - std::exp(-1.0)) < 0.005);
}

TEST_CASE("lam schedule factors") {
    CHECK(lam_f(0.0) == 0.0);
    CHECK(lam_f(1.0) == 0.0);
    CHECK(std::abs(lam_f(0.5) - 0.2222) < 1e-4);

    // f(rho) = 0 leaves the temperature unchanged.
    CHECK(lam_update({1.0, 1.0, 0.0}, 1.0) == 1.0);
    CHECK(lam_update({1.0, 1.0, 1.0}, 1.0) == 1.0);
    // Hand evaluation: 1/T' = 1 + 0.2222... -> T' = 0.8182.
    CHECK(lam_update({1.0, 1.0, 0.5}, 1.0) == doctest::Approx(0.8182).epsilon(1e-4));
    // Plateau segments (sigma = 0) skip the update.
    CHECK(lam_update({0.7, 0.0, 0.5}, 1.0) == 0.7);

    // Never heats up.
    Rng rng(3);
    for (int t = 0; t < 1000; ++t) {
        const LamState s{rng.uniform(0.01, 10.0), rng.uniform(0.0, 5.0), rng.uniform()};
        CHECK(lam_update(s, rng.uniform(1.0, 2.0)) <= s.temperature);
    }
}

TEST_CASE("mixing distribution") {
    const auto uniform = mixing_distribution({2.0, 2.0, 2.0, 2.0}, 1.5);
    for (double p : uniform) CHECK(p == doctest::Approx(0.25).epsilon(1e-12));

    // Energies (0, ln 2) at T = 1: probabilities (2/3, 1/3).
    const auto two = mixing_distribution({0.0, std::log(2.0)}, 1.0);
    CHECK(two[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(two[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    // Stabilized for huge spreads; sums to one.
    const auto spread = mixing_distribution({0.0, 1e6, 2e6, 5e5}, 3.0);
    double total = 0.0;
    for (double p : spread) {
        CHECK(p >= 0.0);
        total += p;
    }
    CHECK(std::abs(total - 1.0) < 1e-12);

    // Tiny temperature concentrates on the minimum energy.
    const auto cold = mixing_distribution({5.0, 1.0, 3.0}, 1e-6);
    CHECK(cold[1] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("run_psa is deterministic and respects the budget") {
    const auto obj = benchmark_objective("neg_sphere", 6, -8, 8);
    PsaConfig cfg;
    cfg.nchain = 8;
    cfg.chain_size = 5;

    auto run = [&](long budget) {
        WorkerPool pool(2);
        std::vector<double> stream;
        EvalDispatcher d(*obj, pool, budget, {"r", "psa", 11},
                         [&](const RunRecord& r) { stream.push_back(r.objective); });
        std::vector<double> temps;
        const OptimizerResult res = run_psa(*obj, cfg, 11, d, &temps);
        return std::tuple{stream, res, temps};
    };

    const auto [s1, r1, t1] = run(1000);
    const auto [s2, r2, t2] = run(1000);
    CHECK(s1 == s2);
    CHECK(r1.best == r2.best);
    CHECK(s1.size() == 1000);  // exact budget, final segment truncated

    // The temperature never rises after warm-up.
    REQUIRE(!t1.empty());
    for (std::size_t i = 1; i < t1.size(); ++i) CHECK(t1[i] <= t1[i - 1]);
}

TEST_CASE("run_psa stops right after warm-up when tmin is unreachable") {
    const auto obj = benchmark_objective("neg_sphere", 4, -5, 5);
    PsaConfig cfg;
    cfg.nchain = 4;
    cfg.chain_size = 3;
    cfg.tmin = 1e300;

    WorkerPool pool(1);
    EvalDispatcher d(*obj, pool, 100000, {"r", "psa", 5});
    run_psa(*obj, cfg, 5, d);
    // Initial points plus one all-accept sweep.
    CHECK(d.used() == 4 * (1 + 3));
}

TEST_CASE("metropolis sampler visits a 2-point domain uniformly at high temperature") {
    const auto obj = benchmark_objective("neg_sphere", 1, 0, 1);
    PsaConfig cfg;
    cfg.nchain = 2;
    cfg.chain_size = 10;
    cfg.chi = 1.0;
    cfg.alpha = 1e9;  // T0 so large every move is accepted

    WorkerPool pool(1);
    std::map<int, long> visits;
    EvalDispatcher d(*obj, pool, 20000, {"r", "psa", 17},
                     [&](const RunRecord& r) { ++visits[r.vector[0]]; });
    run_psa(*obj, cfg, 17, d);

    const double n = 20000.0;
    const double sigma = std::sqrt(n * 0.25);
    CHECK(std::abs(visits[0] - n / 2) < 3.0 * sigma);
    CHECK(std::abs(visits[1] - n / 2) < 3.0 * sigma);
}
