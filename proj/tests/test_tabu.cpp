#include <doctest.h>

#include <cmath>
#include <set>

#include "lpopt/dispatch.hpp"
#include "lpopt/instances.hpp"
#include "lpopt/tabu.hpp"
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

EvaluatedMove mv(int slot, int value, double energy) {
    Move m{slot, value, {}};
    return {m, energy};
}

}  // namespace

TEST_CASE("sample_moves draws distinct slots and changed values") {
    Rng rng(5);
    const FlatObjective wide(52, 0, 9);
    const DecisionVector x(52, 4);

    // fraction 1: one candidate per slot.
    CHECK(sample_moves(x, 1.0, wide, rng).size() == 52);

    // ceil(0.1 * 52) = 6 candidates on distinct slots, each a real change.
    const auto moves = sample_moves(x, 0.1, wide, rng);
    CHECK(moves.size() == 6);
    std::set<int> slots;
    for (const auto& m : moves) {
        slots.insert(m.slot);
        CHECK(m.value != x[m.slot]);
        CHECK(m.candidate[m.slot] == m.value);
    }
    CHECK(slots.size() == moves.size());

    // Binary bounds: the only alternative is the flip.
    const FlatObjective binary(8, 0, 1);
    const DecisionVector b(8, 0);
    for (const auto& m : sample_moves(b, 1.0, binary, rng)) CHECK(m.value == 1);
}

TEST_CASE("select_move honors tabu status, aspiration and frequency penalties") {
    const long step = 10;

    // Single non-tabu candidate is chosen and recorded.
    {
        TabuMemory mem(6, 1.0);
        const auto pick = select_move({mv(0, 3, 5.0)}, mem, 0.0, step);
        REQUIRE(pick.has_value());
        CHECK(pick->move.slot == 0);
        CHECK(mem.is_tabu(0, 3, step + 1));
        CHECK(mem.frequency(0, 3) == 1.0);
    }

    // All tabu, one aspirates by beating the chain best.
    {
        TabuMemory mem(1000, 1.0);
        mem.record(0, 1, step);
        mem.record(1, 2, step);
        const auto pick =
            select_move({mv(0, 1, 4.0), mv(1, 2, -2.0)}, mem, -1.0, step + 1);
        REQUIRE(pick.has_value());
        CHECK(pick->move.slot == 1);

        // None aspirate: no move.
        CHECK(!select_move({mv(0, 1, 4.0), mv(1, 2, 3.0)}, mem, -1.0, step + 2).has_value());
    }

    // Equal energies: the lower-frequency attribute wins the penalized score.
    {
        TabuMemory mem(0, 1.0);  // tenure 0: nothing is ever tabu
        mem.record(0, 7, 0);
        mem.record(0, 7, 1);
        const auto pick = select_move({mv(0, 7, 2.0), mv(1, 4, 2.0)}, mem, -100.0, step);
        REQUIRE(pick.has_value());
        CHECK(pick->move.slot == 1);
    }
}

TEST_CASE("tenure expiry and barrier merge") {
    TabuMemory mem(6, 1.0);
    mem.record(3, 2, 100);
    CHECK(mem.is_tabu(3, 2, 100));
    CHECK(mem.is_tabu(3, 2, 105));
    CHECK(!mem.is_tabu(3, 2, 106));  // expired at step + tenure

    // Merge sums frequency deltas exactly once.
    TabuMemory shared(6, 1.0);
    TabuMemory a(6, 1.0), b(6, 1.0);
    a.record(0, 0, 10);
    b.record(0, 0, 12);
    b.record(1, 1, 12);
    shared.merge_from(a);
    shared.merge_from(b);
    CHECK(shared.frequency(0, 0) == 2.0);
    CHECK(shared.frequency(1, 1) == 1.0);
    CHECK(shared.is_tabu(0, 0, 17));  // max expiry 12 + 6 = 18 > 17

    // Chains adopt the merged state; re-merging without new records must not
    // double count.
    a = shared;
    a.clear_deltas();
    b = shared;
    b.clear_deltas();
    shared.merge_from(a);
    shared.merge_from(b);
    CHECK(shared.frequency(0, 0) == 2.0);
}

TEST_CASE("best_improving keeps the best improving candidate, not the first") {
    const auto best = best_improving({mv(0, 1, 4.0), mv(1, 2, 2.0), mv(2, 3, 3.0)}, 3.5);
    REQUIRE(best.has_value());
    CHECK(best->move.slot == 1);  // energy 2.0 beats 3.0

    CHECK(!best_improving({mv(0, 1, 4.0)}, 3.5).has_value());
    CHECK(!best_improving({}, 3.5).has_value());
}

TEST_CASE("restart distributions") {
    // hard: one-hot on the minimum energy.
    CHECK(restart_probs({3.0, 1.0, 2.0}, RestartStrategy::hard, 5.0, 1.0) ==
          std::vector<double>{0.0, 1.0, 0.0});

    // rank with n = 4, m = 2: (0, 1/6, 1/3, 1/2) from worst to best.
    const auto rank = restart_probs({10.0, 5.0, 7.0, 1.0}, RestartStrategy::rank, 2.0, 1.0);
    CHECK(rank[0] == doctest::Approx(0.0).epsilon(1e-12));       // worst
    CHECK(rank[2] == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK(rank[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(rank[3] == doctest::Approx(1.0 / 2.0).epsilon(1e-12));  // best

    // The paper's m = 5 drives low ranks negative; they clamp to zero.
    const auto rank5 = restart_probs({10.0, 5.0, 7.0, 1.0}, RestartStrategy::rank, 5.0, 1.0);
    CHECK(rank5[0] == 0.0);
    CHECK(rank5[1] > 0.0);
    CHECK(rank5[3] > rank5[1]);

    // softmax at kappa = 0 is uniform.
    for (double p : restart_probs({9.0, 1.0, 4.0}, RestartStrategy::softmax, 5.0, 0.0))
        CHECK(p == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    // hard is the large-kappa limit of softmax on spread-1 energies.
    const auto hard = restart_probs({2.0, 1.0, 3.0}, RestartStrategy::hard, 5.0, 1.0);
    const auto hot = restart_probs({2.0, 1.0, 3.0}, RestartStrategy::softmax, 5.0, 1000.0);
    for (std::size_t i = 0; i < hard.size(); ++i) CHECK(std::abs(hard[i] - hot[i]) < 1e-9);

    // roulette handles negative and mixed energies via shifted fitness.
    const auto roulette = restart_probs({-5.0, 3.0, 1.0}, RestartStrategy::roulette, 5.0, 1.0);
    CHECK(roulette[0] > roulette[2]);
    CHECK(roulette[2] > roulette[1]);

    // Every strategy returns a distribution.
    for (auto strategy : {RestartStrategy::hard, RestartStrategy::roulette, RestartStrategy::rank,
                          RestartStrategy::softmax}) {
        const auto p = restart_probs({4.0, -2.0, 0.5, 9.0, 9.0}, strategy, 5.0, 1.0);
        double total = 0.0;
        for (double v : p) {
            CHECK(v >= 0.0);
            total += v;
        }
        CHECK(std::abs(total - 1.0) < 1e-12);
    }

    CHECK(restart_probs({1.0}, RestartStrategy::rank, 5.0, 1.0) == std::vector<double>{1.0});
    CHECK(restart_strategy_from_string("softmax") == RestartStrategy::softmax);
    CHECK_THROWS(restart_strategy_from_string("authoritarian"));
}

TEST_CASE("run_tabu is deterministic, budget-exact, and stalls gracefully") {
    const auto obj = benchmark_objective("neg_sphere", 6, -8, 8);
    TsConfig cfg;
    cfg.nchain = 4;
    cfg.chain_size = 4;
    cfg.sample_fraction = 0.4;

    auto run = [&] {
        WorkerPool pool(2);
        std::vector<double> stream;
        EvalDispatcher d(*obj, pool, 600, {"r", "tabu", 23},
                         [&](const RunRecord& r) { stream.push_back(r.objective); });
        const OptimizerResult res = run_tabu(*obj, cfg, 23, d);
        return std::pair{stream, res.best};
    };
    const auto [s1, b1] = run();
    const auto [s2, b2] = run();
    CHECK(s1 == s2);
    CHECK(b1 == b2);
    CHECK(s1.size() == 600);

    // Permanent tabu on a tiny domain: chains stall into none-moves but the
    // run still exhausts its budget.
    const auto tiny = benchmark_objective("neg_sphere", 2, 0, 1);
    TsConfig stall;
    stall.nchain = 2;
    stall.chain_size = 3;
    stall.sample_fraction = 1.0;
    stall.tenure = 1 << 28;
    WorkerPool pool(1);
    EvalDispatcher d(*tiny, pool, 200, {"r", "tabu", 3});
    run_tabu(*tiny, stall, 3, d);
    CHECK(d.used() == 200);
}

TEST_CASE("tenure 0 with zero penalization finds the toy4 optimum") {
    LoadingPatternObjective toy(builtin_instance("toy4"));
    const auto oracle = brute_force(toy);

    TsConfig cfg;
    cfg.nchain = 4;
    cfg.chain_size = 5;
    cfg.sample_fraction = 1.0;
    cfg.tenure = 0;
    cfg.penalization_weight = 0.0;

    WorkerPool pool(2);
    EvalDispatcher d(toy, pool, 1000, {"r", "tabu", 9});
    const OptimizerResult res = run_tabu(toy, cfg, 9, d);
    CHECK(res.objective == doctest::Approx(oracle.objective).epsilon(1e-12));
}

TEST_CASE("tabu attributes are not revisited before the tenure expires") {
    // Reconstructable trace check: walk a single chain's selected moves and
    // assert the tenure contract on the accepted attributes.
    const auto obj = benchmark_objective("neg_rastrigin", 5, -5, 5);
    TsConfig cfg;
    cfg.nchain = 1;
    cfg.chain_size = 1000000;  // no barriers: a single segment
    cfg.sample_fraction = 0.6;
    cfg.tenure = 4;

    WorkerPool pool(1);
    std::vector<DecisionVector> accepted;
    DecisionVector current;
    EvalDispatcher d(*obj, pool, 2000, {"r", "tabu", 31});
    // Reconstruct moves from consecutive currents via the record stream is
    // ambiguous; instead run with the public pieces: sample, evaluate,
    // select.
    Rng rng(31);
    DecisionVector x(5, 0);
    TabuMemory mem(cfg.tenure, cfg.penalization_weight);
    double best_energy = -obj->evaluate(x).objective;
    std::map<std::pair<int, int>, long> last_chosen;
    for (long step = 0; step < 400; ++step) {
        std::vector<EvaluatedMove> cands;
        for (auto& m : sample_moves(x, cfg.sample_fraction, *obj, rng))
            cands.push_back({m, -obj->evaluate(m.candidate).objective});
        const auto pick = select_move(cands, mem, best_energy, step);
        if (!pick) continue;
        const auto attr = std::pair{pick->move.slot, pick->move.value};
        const auto seen = last_chosen.find(attr);
        if (seen != last_chosen.end() && step - seen->second < cfg.tenure) {
            CHECK(pick->energy < best_energy);  // only aspiration readmits it
        }
        last_chosen[attr] = step;
        x = pick->move.candidate;
        best_energy = std::min(best_energy, pick->energy);
    }
}
