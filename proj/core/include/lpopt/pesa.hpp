// core/include/lpopt/pesa.hpp
//
// PESA ensemble: ES, SA and constriction PSO advancing in lockstep periods
// on equal evaluation budgets, exchanging solutions through a shared
// rank-prioritized replay buffer.

#pragma once

#include <cstdint>
#include <vector>

#include "lpopt/dispatch.hpp"
#include "lpopt/es.hpp"
#include "lpopt/psa.hpp"
#include "lpopt/rng.hpp"
#include "lpopt/surrogate.hpp"

namespace lpopt {

struct Particle {
    DecisionVector x;
    std::vector<double> v;
    DecisionVector pbest;
    double pbest_fitness = 0.0;
};

struct PsoCoeffs {
    double chi_c = 0.7298;  // constriction factor
    double c1 = 2.05;
    double c2 = 2.05;
    double vmax_frac = 0.25;  // velocity clamp as a fraction of each entry's range
};

struct PsoConfig {
    int npar = 10;
    int steps_per_period = 10;
    PsoCoeffs coeffs;
};

struct PesaConfig {
    EsConfig es;
    PsaConfig psa;
    PsoConfig pso;
    int buffer_capacity = 300;  // 10x the paper's 30-core worker pool
    double alpha_priority = 1.0;
    long max_samples = 0;

    // Equalized sub-budgets: es.lambda_pop = psa.nchain * psa.chain_size
    // = pso.npar * pso.steps_per_period, with the 10/10/10 worker split.
    static PesaConfig defaults();
    // Throws on a budget mismatch between the three members.
    void validate() const;
};

// Solutions kept sorted by fitness descending, deduplicated by decision
// vector (best fitness wins). Rank 1 = best.
class ReplayBuffer {
public:
    struct Entry {
        DecisionVector vector;
        double fitness = 0.0;
    };

    ReplayBuffer(int capacity, double alpha_priority);

    void append(const DecisionVector& v, double fitness);
    void append_batch(const std::vector<Entry>& batch);

    bool empty() const { return entries_.empty(); }
    int size() const { return static_cast<int>(entries_.size()); }
    const std::vector<Entry>& entries() const { return entries_; }

    // Eq-10 priorities: rho_i = (1/rank_i)^alpha / sum_k (1/rank_k)^alpha.
    std::vector<double> priorities() const;
    // n draws with replacement. Throws on an empty buffer.
    std::vector<Entry> sample(int n, Rng& rng) const;

private:
    void rebuild();

    int capacity_;
    double alpha_priority_;
    std::vector<Entry> entries_;
};

// One constriction-PSO kinematics update (no evaluation):
//   v <- chi_c (v + c1 r1 (pbest - x) + c2 r2 (gbest - x)), clamped to vmax,
//   x <- clamp(round(x + v), bounds).
void pso_step(std::vector<Particle>& swarm, const DecisionVector& gbest, const PsoCoeffs& coeffs,
              const Objective& bounds, Rng& rng);

OptimizerResult run_pesa(const Objective& obj, const PesaConfig& cfg, std::uint64_t seed,
                         EvalDispatcher& dispatcher);

}  // namespace lpopt
