// core/include/lpopt/es.hpp
//
// (mu, lambda) evolution strategy with truncation selection, two-point
// crossover over decision and strategy vectors, log-normal self-adaptive
// mutation (continuous step, round-and-clamp for the integer space), and
// cloning.

#pragma once

#include <cstdint>
#include <vector>

#include "lpopt/dispatch.hpp"
#include "lpopt/rng.hpp"
#include "lpopt/surrogate.hpp"

namespace lpopt {

struct EsConfig {
    int mu = 2;
    int lambda_pop = 32;
    double cxpb = 0.65;
    double mutpb = 0.3;
    double s_min_frac = 0.01;  // strategy bounds as fractions of each entry's range
    double s_max_frac = 0.5;
    double s_init_frac = 0.1;
    long max_samples = 0;
};

struct Individual {
    DecisionVector y;
    std::vector<double> s;  // per-entry mutation strength
    double fitness = 0.0;
};

// The mu highest-fitness individuals; ties keep insertion order.
std::vector<Individual> select_mu(const std::vector<Individual>& population, int mu);

// Replaces entries [pt1, pt2) of ind1's y and s with ind2's. Throws on
// length mismatch or bad points.
Individual crossover_splice(const Individual& ind1, const Individual& ind2, int pt1, int pt2);

// Draws pt1 < pt2 over 0..dim and splices.
Individual two_point_crossover(const Individual& ind1, const Individual& ind2, Rng& rng);

// Log-normal step factors for an n-dimensional problem:
// tau = 1/sqrt(2n), tau* = 1/sqrt(2 sqrt(n)).
double lognormal_tau(int dim);
double lognormal_tau_star(int dim);

// Deterministic core of the mutation: `normals` must hold dim entries, one
// per decision slot. s <- clamp(s exp(tau g + tau* g*)), then
// y <- clamp(round(y + s * normal)).
Individual mutate_with_draws(const Individual& ind, const Objective& bounds,
                             const std::vector<double>& s_min, const std::vector<double>& s_max,
                             double g, double g_star, const std::vector<double>& normals);

// Log-normal sigma-adaptation: one (g, g*) pair per individual plus one
// normal step per entry, drawn from rng.
Individual mutate_lognormal(const Individual& ind, const Objective& bounds,
                            const std::vector<double>& s_min, const std::vector<double>& s_max,
                            Rng& rng);

enum class OffspringOp { crossover, mutation, clone };

// One variation draw: crossover w.p. cxpb, else mutation w.p. mutpb, else a
// clone.
OffspringOp draw_offspring_op(const EsConfig& cfg, Rng& rng);

OptimizerResult run_es(const Objective& obj, const EsConfig& cfg, std::uint64_t seed,
                       EvalDispatcher& dispatcher);

}  // namespace lpopt
