#include <doctest.h>

#include <cmath>
#include <map>

#include "lpopt/dispatch.hpp"
#include "lpopt/pesa.hpp"
#include "lpopt/worker_pool.hpp"

using namespace lpopt;

namespace {

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

TEST_CASE("replay buffer stays sorted, deduplicated and capped") {
    ReplayBuffer buf(50, 1.0);
    Rng rng(21);
    for (int t = 0; t < 10000; ++t) {
        DecisionVector v = {rng.uniform_int(0, 5), rng.uniform_int(0, 5)};
        buf.append(v, rng.uniform(-100.0, 100.0));
        CHECK(buf.size() <= 50);
        const auto& entries = buf.entries();
        for (int i = 1; i < buf.size(); ++i)
            CHECK(entries[i - 1].fitness >= entries[i].fitness);
        for (int i = 0; i < buf.size(); ++i)
            for (int j = i + 1; j < buf.size(); ++j) CHECK(entries[i].vector != entries[j].vector);
    }

    // Duplicates collapse to the best fitness.
    ReplayBuffer tiny(10, 1.0);
    tiny.append({1, 2}, 5.0);
    tiny.append({1, 2}, 9.0);
    tiny.append({1, 2}, 7.0);
    REQUIRE(tiny.size() == 1);
    CHECK(tiny.entries()[0].fitness == 9.0);
}

TEST_CASE("rank priorities follow the replay equation") {
    ReplayBuffer buf(10, 1.0);
    buf.append({0}, 3.0);
    buf.append({1}, 2.0);
    buf.append({2}, 1.0);

    // alpha = 1, three ranks: (6/11, 3/11, 2/11).
    const auto p = buf.priorities();
    CHECK(p[0] == doctest::Approx(6.0 / 11.0).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(3.0 / 11.0).epsilon(1e-12));
    CHECK(p[2] == doctest::Approx(2.0 / 11.0).epsilon(1e-12));

    // alpha = 0 is uniform.
    ReplayBuffer flat(10, 0.0);
    flat.append({0}, 3.0);
    flat.append({1}, 2.0);
    flat.append({2}, 1.0);
    for (double v : flat.priorities()) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    // Single entry: probability one. Empty buffer: rejection.
    ReplayBuffer one(4, 1.0);
    one.append({9}, 0.0);
    CHECK(one.priorities() == std::vector<double>{1.0});
    Rng rng(3);
    CHECK(one.sample(3, rng).size() == 3);
    ReplayBuffer empty(4, 1.0);
    CHECK_THROWS(empty.sample(1, rng));
}

TEST_CASE("sampling frequencies match the priorities within 3 sigma") {
    for (double alpha : {0.0, 0.5, 1.0}) {
        CAPTURE(alpha);
        ReplayBuffer buf(8, alpha);
        for (int i = 0; i < 5; ++i) buf.append({i}, 10.0 - i);
        const auto probs = buf.priorities();

        Rng rng(17);
        const int draws = 100000;
        std::map<int, long> counts;
        for (const auto& e : buf.sample(draws, rng)) ++counts[e.vector[0]];
        for (int i = 0; i < 5; ++i) {
            const double mean = draws * probs[static_cast<std::size_t>(i)];
            const double sigma =
                std::sqrt(draws * probs[static_cast<std::size_t>(i)] *
                          (1.0 - probs[static_cast<std::size_t>(i)]));
            CHECK(std::abs(counts[i] - mean) < 3.0 * sigma);
        }
    }
}

TEST_CASE("pso kinematics") {
    const FlatObjective bounds(1, -10, 10);
    PsoCoeffs coeffs;  // chi_c = 0.7298, c1 = c2 = 2.05
    Rng rng(5);

    // Fixed point: zero velocity at the collective best.
    std::vector<Particle> still = {{{3}, {0.0}, {3}, 0.0}};
    pso_step(still, {3}, coeffs, bounds, rng);
    CHECK(still[0].x == DecisionVector{3});
    CHECK(still[0].v[0] == 0.0);

    // Hand evaluation: v' = 0.7298 * 2 = 1.4596, x' = round(1.4596) = 1.
    std::vector<Particle> moving = {{{0}, {2.0}, {0}, 0.0}};
    pso_step(moving, {0}, coeffs, bounds, rng);
    CHECK(moving[0].v[0] == doctest::Approx(1.4596).epsilon(1e-12));
    CHECK(moving[0].x == DecisionVector{1});

    // Velocity clamps exactly to vmax = 0.25 * range.
    std::vector<Particle> fast = {{{0}, {1000.0}, {0}, 0.0}};
    pso_step(fast, {0}, coeffs, bounds, rng);
    CHECK(fast[0].v[0] == 0.25 * 20.0);
}

TEST_CASE("pesa config validates the equalized budgets") {
    PesaConfig cfg = PesaConfig::defaults();
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.es.lambda_pop == cfg.psa.nchain * cfg.psa.chain_size);
    CHECK(cfg.es.lambda_pop == cfg.pso.npar * cfg.pso.steps_per_period);

    cfg.es.lambda_pop = 99;
    CHECK_THROWS(cfg.validate());
}

TEST_CASE("run_pesa is deterministic, budget-exact and tracks the global best") {
    const auto obj = benchmark_objective("neg_sphere", 5, -6, 6);
    PesaConfig cfg = PesaConfig::defaults();
    cfg.psa.nchain = 4;
    cfg.psa.chain_size = 5;
    cfg.es.lambda_pop = 20;
    cfg.es.mu = 2;
    cfg.pso.npar = 4;
    cfg.pso.steps_per_period = 5;
    cfg.buffer_capacity = 64;

    auto run = [&](double alpha) {
        WorkerPool pool(2);
        std::vector<double> stream;
        EvalDispatcher d(*obj, pool, 800, {"r", "pesa", 29},
                         [&](const RunRecord& r) { stream.push_back(r.objective); });
        PesaConfig c = cfg;
        c.alpha_priority = alpha;
        const OptimizerResult res = run_pesa(*obj, c, 29, d);
        return std::pair{stream, res};
    };

    const auto [s1, r1] = run(1.0);
    const auto [s2, r2] = run(1.0);
    CHECK(s1 == s2);
    CHECK(r1.best == r2.best);
    CHECK(s1.size() == 800);

    // Bookkeeping: the returned best matches the max over all records.
    double best = -1e300;
    for (double v : s1) best = std::max(best, v);
    CHECK(r1.objective == best);

    // alpha = 0 is a valid configuration.
    const auto [s3, r3] = run(0.0);
    CHECK(s3.size() == 800);
}
