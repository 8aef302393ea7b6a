#include "lpopt/psa.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lpopt {

DecisionVector propose(const DecisionVector& x, double chi, const Objective& bounds, Rng& rng) {
    DecisionVector out = x;
    const int dim = static_cast<int>(x.size());
    bool any = false;
    for (int k = 0; k < dim; ++k) {
        if (rng.uniform() < chi) {
            out[k] = rng.uniform_int(bounds.lower(k), bounds.upper(k));
            any = true;
        }
    }
    if (!any && dim > 0) {
        const int k = rng.uniform_int(0, dim - 1);
        out[k] = rng.uniform_int(bounds.lower(k), bounds.upper(k));
    }
    return out;
}

bool metropolis_accept(double dE, double temperature, Rng& rng) {
    if (dE > 0.0) return true;
    return rng.uniform() < std::exp(dE / temperature);
}

double lam_f(double accept_rate) {
    const double one_minus = 1.0 - accept_rate;
    const double denom = 2.0 - accept_rate;
    return 4.0 * accept_rate * one_minus * one_minus / (denom * denom);
}

double lam_update(const LamState& state, double lambda_quality) {
    if (state.sigma <= 0.0) return state.temperature;
    const double t = state.temperature;
    const double inv_next = 1.0 / t + lambda_quality * (t * t / (state.sigma * state.sigma)) *
                                          (1.0 / state.sigma) * lam_f(state.accept_rate);
    return 1.0 / inv_next;
}

std::vector<double> mixing_distribution(const std::vector<double>& best_energies,
                                        double temperature) {
    if (best_energies.empty()) throw std::invalid_argument("mixing over an empty chain pool");
    if (temperature <= 0.0) throw std::invalid_argument("mixing temperature must be positive");
    const double e_min = *std::min_element(best_energies.begin(), best_energies.end());
    std::vector<double> probs(best_energies.size());
    double total = 0.0;
    for (std::size_t i = 0; i < best_energies.size(); ++i) {
        probs[i] = std::exp(-(best_energies[i] - e_min) / temperature);
        total += probs[i];
    }
    for (double& p : probs) p /= total;
    return probs;
}

namespace {

int sample_index(const std::vector<double>& probs, Rng& rng) {
    const double u = rng.uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(probs.size()) - 1;
}

struct SegmentStats {
    std::vector<double> accepted_energies;
    long proposals = 0;

    double accept_rate() const {
        return proposals > 0 ? static_cast<double>(accepted_energies.size()) / proposals : 0.0;
    }
    double sigma() const {
        const std::size_t n = accepted_energies.size();
        if (n < 2) return 0.0;
        double mean = 0.0;
        for (double e : accepted_energies) mean += e;
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (double e : accepted_energies) var += (e - mean) * (e - mean);
        return std::sqrt(var / static_cast<double>(n));
    }
};

}  // namespace

OptimizerResult run_psa(const Objective& obj, const PsaConfig& cfg, std::uint64_t seed,
                        EvalDispatcher& dispatcher, std::vector<double>* temperature_trace) {
    if (cfg.nchain < 1 || cfg.chain_size < 1)
        throw std::invalid_argument("psa: nchain and chain_size must be >= 1");
    if (cfg.chi <= 0.0 || cfg.chi > 1.0) throw std::invalid_argument("psa: chi must be in (0, 1]");

    const int nchain = cfg.nchain;
    const int dim = obj.dim();

    std::vector<Rng> rng;
    rng.reserve(static_cast<std::size_t>(nchain));
    for (int l = 0; l < nchain; ++l) rng.push_back(Rng::stream(seed, static_cast<std::uint64_t>(l)));

    std::vector<ChainState> chains(static_cast<std::size_t>(nchain));
    {
        std::vector<DecisionVector> init(static_cast<std::size_t>(nchain));
        for (int l = 0; l < nchain; ++l) {
            init[l].resize(static_cast<std::size_t>(dim));
            for (int k = 0; k < dim; ++k) init[l][k] = rng[l].uniform_int(obj.lower(k), obj.upper(k));
        }
        const auto evals = dispatcher.evaluate(init);
        for (std::size_t l = 0; l < evals.size(); ++l) {
            chains[l].current = init[l];
            chains[l].current_energy = -evals[l].objective;
            chains[l].best = init[l];
            chains[l].best_energy = chains[l].current_energy;
        }
        if (evals.size() < init.size())
            return {dispatcher.best_vector(), dispatcher.best_objective(), dispatcher.used()};
    }

    // Warm-up: one chain_size sweep per chain with unconditional acceptance,
    // establishing sigma0 and T0 = alpha * sigma0.
    SegmentStats warmup;
    for (auto& c : chains) warmup.accepted_energies.push_back(c.current_energy);
    for (int step = 0; step < cfg.chain_size; ++step) {
        std::vector<DecisionVector> proposals(static_cast<std::size_t>(nchain));
        for (int l = 0; l < nchain; ++l) proposals[l] = propose(chains[l].current, cfg.chi, obj, rng[l]);
        const auto evals = dispatcher.evaluate(proposals);
        for (std::size_t l = 0; l < evals.size(); ++l) {
            chains[l].current = proposals[l];
            chains[l].current_energy = -evals[l].objective;
            warmup.accepted_energies.push_back(chains[l].current_energy);
            if (chains[l].current_energy < chains[l].best_energy) {
                chains[l].best = chains[l].current;
                chains[l].best_energy = chains[l].current_energy;
            }
        }
        if (evals.size() < proposals.size())
            return {dispatcher.best_vector(), dispatcher.best_objective(), dispatcher.used()};
    }
    const double sigma0 = warmup.sigma();
    double temperature = cfg.alpha * (sigma0 > 0.0 ? sigma0 : 1.0);

    while (!dispatcher.exhausted() && temperature >= cfg.tmin) {
        SegmentStats seg;
        for (int step = 0; step < cfg.chain_size; ++step) {
            std::vector<DecisionVector> proposals(static_cast<std::size_t>(nchain));
            for (int l = 0; l < nchain; ++l)
                proposals[l] = propose(chains[l].current, cfg.chi, obj, rng[l]);
            const auto evals = dispatcher.evaluate(proposals);
            for (std::size_t l = 0; l < evals.size(); ++l) {
                const double e_new = -evals[l].objective;
                ++seg.proposals;
                if (metropolis_accept(chains[l].current_energy - e_new, temperature, rng[l])) {
                    chains[l].current = proposals[l];
                    chains[l].current_energy = e_new;
                    seg.accepted_energies.push_back(e_new);
                    if (e_new < chains[l].best_energy) {
                        chains[l].best = proposals[l];
                        chains[l].best_energy = e_new;
                    }
                }
            }
            if (evals.size() < proposals.size())
                return {dispatcher.best_vector(), dispatcher.best_objective(), dispatcher.used()};
        }

        LamState lam{temperature, seg.sigma(), seg.accept_rate()};
        temperature = lam_update(lam, cfg.lambda_quality);
        if (temperature_trace) temperature_trace->push_back(temperature);
        if (seg.accept_rate() < cfg.min_accept_rate) break;
        if (temperature < cfg.tmin) break;

        // Mixing of states: every chain restarts from the per-chain best pool.
        std::vector<double> pool(static_cast<std::size_t>(nchain));
        for (int l = 0; l < nchain; ++l) pool[l] = chains[l].best_energy;
        const std::vector<double> probs = mixing_distribution(pool, temperature);
        std::vector<int> sources(static_cast<std::size_t>(nchain));
        for (int l = 0; l < nchain; ++l) sources[l] = sample_index(probs, rng[l]);
        std::vector<DecisionVector> best_copy(static_cast<std::size_t>(nchain));
        std::vector<double> best_energy_copy(static_cast<std::size_t>(nchain));
        for (int l = 0; l < nchain; ++l) {
            best_copy[l] = chains[l].best;
            best_energy_copy[l] = chains[l].best_energy;
        }
        for (int l = 0; l < nchain; ++l) {
            chains[l].current = best_copy[sources[l]];
            chains[l].current_energy = best_energy_copy[sources[l]];
            if (best_energy_copy[sources[l]] < chains[l].best_energy) {
                chains[l].best = best_copy[sources[l]];
                chains[l].best_energy = best_energy_copy[sources[l]];
            }
        }
    }

    return {dispatcher.best_vector(), dispatcher.best_objective(), dispatcher.used()};
}

}  // namespace lpopt
