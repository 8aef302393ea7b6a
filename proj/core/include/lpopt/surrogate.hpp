// core/include/lpopt/surrogate.hpp
//
// Deterministic stand-in for the core-physics code: per-assembly reactivity,
// a neighbor-coupled power map, the eight figures of merit, and the penalized
// objective. Also the Objective contract shared by every optimizer, two
// integer-lattice benchmark objectives, and a brute-force oracle.

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lpopt/foms.hpp"
#include "lpopt/problem.hpp"

namespace lpopt {

// ---------------------------------------------------------------------------
// Surrogate physics
// ---------------------------------------------------------------------------

// Fresh assembly: k = a0 + a1*enrichment - (w_ifba*ifba + w_waba*waba).
double kinf(const FuelType& fuel, const SurrogateCoefficients& coeffs);
// Burned assembly: the stored reactivity proxy.
double kinf(const BurnedAssembly& assembly);

// Normalized power map over per-cell k values:
//   q_i = (k_i + nu * sum_{j in N4(i)} k_j*) / (1 + 4 nu),
// where out-of-core neighbors reflect r * k_i, and p = q / mean(q).
std::vector<double> power_map(const std::vector<double>& k_by_cell, const CoreLayout& layout,
                              const SurrogateCoefficients& coeffs);

// All eight figures of merit for a decoded map.
FomVector evaluate_core(const CoreMap& core, const ProblemInstance& inst);

// Penalized objective (maximize):
//   -lcoe - sum_i gamma_i * Phi(x_i) + 1 if every constraint is satisfied,
// with Phi(x) = ((x - c)/c)^2 on violation and 0 otherwise. Equality
// constraints are satisfied within their tolerance band and penalized on both
// sides; range constraints use the nearest bound as c.
double score_foms(const FomVector& foms, const ConstraintSet& cs);
bool foms_feasible(const FomVector& foms, const ConstraintSet& cs);

// ---------------------------------------------------------------------------
// Objective contract
// ---------------------------------------------------------------------------

struct Evaluation {
    double objective = 0.0;
    bool feasible = true;
    std::optional<FomVector> foms;
};

// Pure, deterministic black-box objective over an integer lattice. Entries of
// a decision vector live in [lower(k), upper(k)] inclusive.
class Objective {
public:
    virtual ~Objective() = default;
    virtual int dim() const = 0;
    virtual int lower(int slot) const = 0;
    virtual int upper(int slot) const = 0;
    virtual Evaluation evaluate(const DecisionVector& v) const = 0;

    long double search_space_size() const;
};

// decode + evaluate_core + score_foms behind the Objective contract. Keeps a
// copy of the instance; safe to share across threads.
class LoadingPatternObjective : public Objective {
public:
    explicit LoadingPatternObjective(ProblemInstance inst);

    int dim() const override { return inst_.dim(); }
    int lower(int) const override { return 0; }
    int upper(int slot) const override { return inst_.cardinality(slot) - 1; }
    Evaluation evaluate(const DecisionVector& v) const override;

    const ProblemInstance& instance() const { return inst_; }

private:
    ProblemInstance inst_;
};

// name: "neg_sphere" or "neg_rastrigin"; maximum 0 at x = target.
std::unique_ptr<Objective> benchmark_objective(const std::string& name, int dim, int lo, int hi,
                                               int target = 0);

struct BruteForceResult {
    DecisionVector best;
    double objective = 0.0;
    long long enumerated = 0;
};

// Exhaustive lexicographic enumeration; ties keep the first optimum found.
// Rejects search spaces above the guard (1e6 points).
BruteForceResult brute_force(const Objective& obj);

}  // namespace lpopt
