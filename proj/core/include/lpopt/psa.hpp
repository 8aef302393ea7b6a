// core/include/lpopt/psa.hpp
//
// Parallel simulated annealing: independent Metropolis chains sharing one
// adaptive Lam temperature, with segment-end mixing restarts drawn from the
// per-chain best pool. Energies are negated objectives throughout.

#pragma once

#include <cstdint>
#include <vector>

#include "lpopt/dispatch.hpp"
#include "lpopt/rng.hpp"
#include "lpopt/surrogate.hpp"

namespace lpopt {

struct PsaConfig {
    int nchain = 32;
    int chain_size = 10;          // steps per chain between mixing barriers
    double chi = 0.1;             // per-entry perturbation probability
    double alpha = 1.0;           // T0 = alpha * sigma0 (warm-up)
    double lambda_quality = 1.0;  // Lam cooling-rate factor
    double tmin = 0.005;
    double min_accept_rate = 0.0;
    long max_samples = 0;  // 0 = inherit the dispatcher budget
};

struct LamState {
    double temperature = 1.0;
    double sigma = 0.0;        // std of accepted energies in the segment
    double accept_rate = 0.0;  // rho in the segment
};

struct ChainState {
    DecisionVector current;
    double current_energy = 0.0;
    DecisionVector best;
    double best_energy = 0.0;
};

// Each entry is independently resampled uniformly within its bounds with
// probability chi; if no entry got selected, one uniformly chosen entry is
// resampled so a step is never a guaranteed no-op.
DecisionVector propose(const DecisionVector& x, double chi, const Objective& bounds, Rng& rng);

// dE = E_current - E_new. Downhill in energy always accepts; otherwise
// accept with probability exp(dE / T).
bool metropolis_accept(double dE, double temperature, Rng& rng);

// Lam's target-tracking factor f(rho) = 4 rho (1-rho)^2 / (2-rho)^2.
double lam_f(double accept_rate);

// 1/T' = 1/T + lambda * (T^2 / sigma^2) * (1/sigma) * f(rho). Returns the
// unchanged temperature when sigma is zero (plateau segment).
double lam_update(const LamState& state, double lambda_quality);

// Softmin over best energies: rho_l = exp(-E_l/T) / sum_k exp(-E_k/T),
// max-shift stabilized.
std::vector<double> mixing_distribution(const std::vector<double>& best_energies, double temperature);

// temperature_trace, when given, receives the temperature after every Lam
// update (one entry per completed segment).
OptimizerResult run_psa(const Objective& obj, const PsaConfig& cfg, std::uint64_t seed,
                        EvalDispatcher& dispatcher, std::vector<double>* temperature_trace = nullptr);

}  // namespace lpopt
