#include "lpopt/pesa.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace lpopt {

PesaConfig PesaConfig::defaults() {
    PesaConfig cfg;
    cfg.psa.nchain = 10;
    cfg.psa.chain_size = 10;
    cfg.es.lambda_pop = 100;
    cfg.es.mu = 2;
    cfg.pso.npar = 10;
    cfg.pso.steps_per_period = 10;
    return cfg;
}

void PesaConfig::validate() const {
    const long es_budget = es.lambda_pop;
    const long psa_budget = static_cast<long>(psa.nchain) * psa.chain_size;
    const long pso_budget = static_cast<long>(pso.npar) * pso.steps_per_period;
    if (es_budget != psa_budget || psa_budget != pso_budget)
        throw std::invalid_argument(
            "pesa: sub-algorithm period budgets must match (es.lambda_pop = "
            "psa.nchain*psa.chain_size = pso.npar*pso.steps_per_period)");
    if (buffer_capacity < 1) throw std::invalid_argument("pesa: buffer capacity must be >= 1");
    if (alpha_priority < 0.0 || alpha_priority > 1.0)
        throw std::invalid_argument("pesa: alpha_priority must be in [0, 1]");
}

ReplayBuffer::ReplayBuffer(int capacity, double alpha_priority)
    : capacity_(capacity), alpha_priority_(alpha_priority) {
    if (capacity < 1) throw std::invalid_argument("replay buffer capacity must be >= 1");
}

void ReplayBuffer::append(const DecisionVector& v, double fitness) {
    append_batch({{v, fitness}});
}

void ReplayBuffer::append_batch(const std::vector<Entry>& batch) {
    if (batch.empty()) return;
    std::map<DecisionVector, double> best;
    for (const auto& e : entries_) best.emplace(e.vector, e.fitness);
    for (const auto& e : batch) {
        auto [it, inserted] = best.emplace(e.vector, e.fitness);
        if (!inserted && e.fitness > it->second) it->second = e.fitness;
    }
    entries_.clear();
    entries_.reserve(best.size());
    for (const auto& [vec, fit] : best) entries_.push_back({vec, fit});
    rebuild();
}

void ReplayBuffer::rebuild() {
    // Fitness descending; equal fitness ordered by vector for determinism.
    std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
        if (a.fitness != b.fitness) return a.fitness > b.fitness;
        return a.vector < b.vector;
    });
    if (static_cast<int>(entries_.size()) > capacity_) entries_.resize(static_cast<std::size_t>(capacity_));
}

std::vector<double> ReplayBuffer::priorities() const {
    std::vector<double> p(entries_.size());
    double total = 0.0;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        p[i] = std::pow(1.0 / static_cast<double>(i + 1), alpha_priority_);
        total += p[i];
    }
    for (double& v : p) v /= total;
    return p;
}

std::vector<ReplayBuffer::Entry> ReplayBuffer::sample(int n, Rng& rng) const {
    if (entries_.empty()) throw std::invalid_argument("sampling from an empty replay buffer");
    const std::vector<double> probs = priorities();
    std::vector<Entry> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        double acc = 0.0;
        std::size_t pick = entries_.size() - 1;
        for (std::size_t j = 0; j < probs.size(); ++j) {
            acc += probs[j];
            if (u < acc) {
                pick = j;
                break;
            }
        }
        out.push_back(entries_[pick]);
    }
    return out;
}

void pso_step(std::vector<Particle>& swarm, const DecisionVector& gbest, const PsoCoeffs& coeffs,
              const Objective& bounds, Rng& rng) {
    const int dim = bounds.dim();
    for (auto& particle : swarm) {
        for (int k = 0; k < dim; ++k) {
            const double range = static_cast<double>(bounds.upper(k)) - bounds.lower(k);
            const double vmax = coeffs.vmax_frac * range;
            const double r1 = rng.uniform();
            const double r2 = rng.uniform();
            double v = coeffs.chi_c * (particle.v[k] +
                                       coeffs.c1 * r1 * (particle.pbest[k] - particle.x[k]) +
                                       coeffs.c2 * r2 * (gbest[k] - particle.x[k]));
            v = std::clamp(v, -vmax, vmax);
            particle.v[k] = v;
            const long moved = std::lround(particle.x[k] + v);
            particle.x[k] = static_cast<int>(std::clamp<long>(moved, bounds.lower(k), bounds.upper(k)));
        }
    }
}

namespace {

struct EsMember {
    std::vector<Individual> population;
    std::vector<double> s_min, s_max, s_init;
};

struct SaMember {
    std::vector<ChainState> chains;
    double temperature = 1.0;
    bool warmed_up = false;
};

struct PsoMember {
    std::vector<Particle> swarm;
    DecisionVector gbest;
    double gbest_fitness = 0.0;
    bool initialized = false;
};

DecisionVector random_vector(const Objective& obj, Rng& rng) {
    DecisionVector v(static_cast<std::size_t>(obj.dim()));
    for (int k = 0; k < obj.dim(); ++k) v[k] = rng.uniform_int(obj.lower(k), obj.upper(k));
    return v;
}

}  // namespace

OptimizerResult run_pesa(const Objective& obj, const PesaConfig& cfg, std::uint64_t seed,
                         EvalDispatcher& dispatcher) {
    cfg.validate();
    const int dim = obj.dim();

    Rng es_rng = Rng::stream(seed, 1);
    Rng pso_rng = Rng::stream(seed, 2);
    Rng buffer_rng = Rng::stream(seed, 3);
    std::vector<Rng> sa_rng;
    for (int l = 0; l < cfg.psa.nchain; ++l)
        sa_rng.push_back(Rng::stream(seed, 100 + static_cast<std::uint64_t>(l)));

    ReplayBuffer buffer(cfg.buffer_capacity, cfg.alpha_priority);
    std::vector<ReplayBuffer::Entry> period_entries;

    auto evaluate_batch = [&](const std::vector<DecisionVector>& batch) {
        auto evals = dispatcher.evaluate(batch);
        for (std::size_t i = 0; i < evals.size(); ++i)
            period_entries.push_back({batch[i], evals[i].objective});
        return evals;
    };

    // --- member setup ------------------------------------------------------
    EsMember es;
    es.s_min.resize(static_cast<std::size_t>(dim));
    es.s_max.resize(static_cast<std::size_t>(dim));
    es.s_init.resize(static_cast<std::size_t>(dim));
    for (int k = 0; k < dim; ++k) {
        const double range = static_cast<double>(obj.upper(k)) - obj.lower(k);
        es.s_min[k] = cfg.es.s_min_frac * range;
        es.s_max[k] = cfg.es.s_max_frac * range;
        es.s_init[k] = std::clamp(cfg.es.s_init_frac * range, es.s_min[k], es.s_max[k]);
    }
    es.population.resize(static_cast<std::size_t>(cfg.es.lambda_pop));
    for (auto& ind : es.population) {
        ind.y = random_vector(obj, es_rng);
        ind.s = es.s_init;
    }

    SaMember sa;
    sa.chains.resize(static_cast<std::size_t>(cfg.psa.nchain));

    PsoMember pso;
    pso.swarm.resize(static_cast<std::size_t>(cfg.pso.npar));

    while (!dispatcher.exhausted()) {
        period_entries.clear();

        // --- ES inner loop: evaluate, inject, select, vary ------------------
        {
            std::vector<DecisionVector> batch(es.population.size());
            for (std::size_t i = 0; i < batch.size(); ++i) batch[i] = es.population[i].y;
            const auto evals = evaluate_batch(batch);
            if (evals.size() < batch.size()) break;
            for (std::size_t i = 0; i < evals.size(); ++i)
                es.population[i].fitness = evals[i].objective;

            if (!buffer.empty()) {
                // Replace the worst mu individuals with buffer samples.
                std::vector<int> order(es.population.size());
                for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
                std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
                    return es.population[a].fitness < es.population[b].fitness;
                });
                const auto injected = buffer.sample(cfg.es.mu, buffer_rng);
                for (int i = 0; i < cfg.es.mu && i < static_cast<int>(order.size()); ++i) {
                    Individual& ind = es.population[static_cast<std::size_t>(order[i])];
                    ind.y = injected[static_cast<std::size_t>(i)].vector;
                    ind.s = es.s_init;
                    ind.fitness = injected[static_cast<std::size_t>(i)].fitness;
                }
            }

            const auto parents = select_mu(es.population, cfg.es.mu);
            std::vector<Individual> offspring;
            offspring.reserve(es.population.size());
            for (int i = 0; i < cfg.es.lambda_pop; ++i) {
                const double u = es_rng.uniform();
                if (u < cfg.es.cxpb && cfg.es.mu >= 2) {
                    int a = es_rng.uniform_int(0, cfg.es.mu - 1);
                    int b = es_rng.uniform_int(0, cfg.es.mu - 2);
                    if (b >= a) ++b;
                    offspring.push_back(two_point_crossover(parents[a], parents[b], es_rng));
                } else if (u < cfg.es.cxpb + cfg.es.mutpb) {
                    const int a = es_rng.uniform_int(0, cfg.es.mu - 1);
                    offspring.push_back(mutate_lognormal(parents[a], obj, es.s_min, es.s_max, es_rng));
                } else {
                    offspring.push_back(parents[static_cast<std::size_t>(i % cfg.es.mu)]);
                }
            }
            es.population = std::move(offspring);
        }
        if (dispatcher.exhausted()) break;

        // --- SA inner loop: one segment of chain_size Metropolis steps ------
        {
            if (!sa.warmed_up) {
                std::vector<DecisionVector> init(sa.chains.size());
                for (std::size_t l = 0; l < sa.chains.size(); ++l) init[l] = random_vector(obj, sa_rng[l]);
                const auto evals = evaluate_batch(init);
                if (evals.size() < init.size()) break;
                std::vector<double> warmup_energies;
                for (std::size_t l = 0; l < sa.chains.size(); ++l) {
                    sa.chains[l].current = init[l];
                    sa.chains[l].current_energy = -evals[l].objective;
                    sa.chains[l].best = init[l];
                    sa.chains[l].best_energy = sa.chains[l].current_energy;
                    warmup_energies.push_back(sa.chains[l].current_energy);
                }
                bool truncated = false;
                for (int step = 0; step < cfg.psa.chain_size && !truncated; ++step) {
                    std::vector<DecisionVector> proposals(sa.chains.size());
                    for (std::size_t l = 0; l < sa.chains.size(); ++l)
                        proposals[l] = propose(sa.chains[l].current, cfg.psa.chi, obj, sa_rng[l]);
                    const auto step_evals = evaluate_batch(proposals);
                    for (std::size_t l = 0; l < step_evals.size(); ++l) {
                        sa.chains[l].current = proposals[l];
                        sa.chains[l].current_energy = -step_evals[l].objective;
                        warmup_energies.push_back(sa.chains[l].current_energy);
                        if (sa.chains[l].current_energy < sa.chains[l].best_energy) {
                            sa.chains[l].best = sa.chains[l].current;
                            sa.chains[l].best_energy = sa.chains[l].current_energy;
                        }
                    }
                    truncated = step_evals.size() < proposals.size();
                }
                if (truncated) break;
                double mean = 0.0;
                for (double e : warmup_energies) mean += e;
                mean /= static_cast<double>(warmup_energies.size());
                double var = 0.0;
                for (double e : warmup_energies) var += (e - mean) * (e - mean);
                const double sigma0 = std::sqrt(var / static_cast<double>(warmup_energies.size()));
                sa.temperature = cfg.psa.alpha * (sigma0 > 0.0 ? sigma0 : 1.0);
                sa.warmed_up = true;
            } else {
                std::vector<double> accepted;
                long proposals_made = 0;
                bool truncated = false;
                for (int step = 0; step < cfg.psa.chain_size && !truncated; ++step) {
                    std::vector<DecisionVector> proposals(sa.chains.size());
                    for (std::size_t l = 0; l < sa.chains.size(); ++l)
                        proposals[l] = propose(sa.chains[l].current, cfg.psa.chi, obj, sa_rng[l]);
                    const auto evals = evaluate_batch(proposals);
                    for (std::size_t l = 0; l < evals.size(); ++l) {
                        const double e_new = -evals[l].objective;
                        ++proposals_made;
                        if (metropolis_accept(sa.chains[l].current_energy - e_new, sa.temperature,
                                              sa_rng[l])) {
                            sa.chains[l].current = proposals[l];
                            sa.chains[l].current_energy = e_new;
                            accepted.push_back(e_new);
                            if (e_new < sa.chains[l].best_energy) {
                                sa.chains[l].best = proposals[l];
                                sa.chains[l].best_energy = e_new;
                            }
                        }
                    }
                    truncated = evals.size() < proposals.size();
                }
                if (truncated) break;
                double sigma = 0.0;
                if (accepted.size() >= 2) {
                    double mean = 0.0;
                    for (double e : accepted) mean += e;
                    mean /= static_cast<double>(accepted.size());
                    double var = 0.0;
                    for (double e : accepted) var += (e - mean) * (e - mean);
                    sigma = std::sqrt(var / static_cast<double>(accepted.size()));
                }
                const double rate =
                    proposals_made > 0 ? static_cast<double>(accepted.size()) / proposals_made : 0.0;
                sa.temperature = lam_update(LamState{sa.temperature, sigma, rate}, cfg.psa.lambda_quality);
            }
        }
        if (dispatcher.exhausted()) break;

        // --- PSO inner loop --------------------------------------------------
        {
            int steps = cfg.pso.steps_per_period;
            if (!pso.initialized) {
                std::vector<DecisionVector> init(pso.swarm.size());
                for (std::size_t i = 0; i < pso.swarm.size(); ++i) init[i] = random_vector(obj, pso_rng);
                const auto evals = evaluate_batch(init);
                if (evals.size() < init.size()) break;
                for (std::size_t i = 0; i < pso.swarm.size(); ++i) {
                    pso.swarm[i].x = init[i];
                    pso.swarm[i].v.assign(static_cast<std::size_t>(dim), 0.0);
                    pso.swarm[i].pbest = init[i];
                    pso.swarm[i].pbest_fitness = evals[i].objective;
                    if (i == 0 || evals[i].objective > pso.gbest_fitness) {
                        pso.gbest = init[i];
                        pso.gbest_fitness = evals[i].objective;
                    }
                }
                pso.initialized = true;
                --steps;  // the init batch counts as this period's first move
            }
            bool truncated = false;
            for (int step = 0; step < steps && !truncated; ++step) {
                pso_step(pso.swarm, pso.gbest, cfg.pso.coeffs, obj, pso_rng);
                std::vector<DecisionVector> batch(pso.swarm.size());
                for (std::size_t i = 0; i < pso.swarm.size(); ++i) batch[i] = pso.swarm[i].x;
                const auto evals = evaluate_batch(batch);
                for (std::size_t i = 0; i < evals.size(); ++i) {
                    if (evals[i].objective > pso.swarm[i].pbest_fitness) {
                        pso.swarm[i].pbest = pso.swarm[i].x;
                        pso.swarm[i].pbest_fitness = evals[i].objective;
                    }
                    if (evals[i].objective > pso.gbest_fitness) {
                        pso.gbest = pso.swarm[i].x;
                        pso.gbest_fitness = evals[i].objective;
                    }
                }
                truncated = evals.size() < batch.size();
            }
            if (truncated) break;
        }

        // --- period barrier: share solutions, inject ------------------------
        buffer.append_batch(period_entries);
        if (!buffer.empty()) {
            const auto restarts = buffer.sample(cfg.psa.nchain, buffer_rng);
            for (std::size_t l = 0; l < sa.chains.size(); ++l) {
                sa.chains[l].current = restarts[l].vector;
                sa.chains[l].current_energy = -restarts[l].fitness;
                if (sa.chains[l].current_energy < sa.chains[l].best_energy) {
                    sa.chains[l].best = sa.chains[l].current;
                    sa.chains[l].best_energy = sa.chains[l].current_energy;
                }
            }

            const int replace = (cfg.pso.npar + 3) / 4;
            std::vector<int> order(pso.swarm.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
            std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
                return pso.swarm[a].pbest_fitness < pso.swarm[b].pbest_fitness;
            });
            const auto injected = buffer.sample(replace, buffer_rng);
            for (int i = 0; i < replace && i < static_cast<int>(order.size()); ++i) {
                Particle& p = pso.swarm[static_cast<std::size_t>(order[i])];
                p.x = injected[static_cast<std::size_t>(i)].vector;
                p.v.assign(static_cast<std::size_t>(dim), 0.0);
                p.pbest = p.x;
                p.pbest_fitness = injected[static_cast<std::size_t>(i)].fitness;
                if (p.pbest_fitness > pso.gbest_fitness) {
                    pso.gbest = p.pbest;
                    pso.gbest_fitness = p.pbest_fitness;
                }
            }
        }
    }

    return {dispatcher.best_vector(), dispatcher.best_objective(), dispatcher.used()};
}

}  // namespace lpopt
