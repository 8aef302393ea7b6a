#include "lpopt/tabu.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lpopt {

RestartStrategy restart_strategy_from_string(const std::string& s) {
    if (s == "hard") return RestartStrategy::hard;
    if (s == "roulette") return RestartStrategy::roulette;
    if (s == "rank") return RestartStrategy::rank;
    if (s == "softmax") return RestartStrategy::softmax;
    throw std::invalid_argument("unknown restart strategy: " + s);
}

bool TabuMemory::is_tabu(int slot, int value, long step) const {
    const auto it = expiry_.find({slot, value});
    return it != expiry_.end() && it->second > step;
}

double TabuMemory::frequency(int slot, int value) const {
    const auto it = freq_.find({slot, value});
    return it != freq_.end() ? static_cast<double>(it->second) : 0.0;
}

void TabuMemory::record(int slot, int value, long step) {
    const std::pair<int, int> attr{slot, value};
    const long until = step + tenure_;
    long& main_expiry = expiry_[attr];
    main_expiry = std::max(main_expiry, until);
    long& delta_expiry = delta_expiry_[attr];
    delta_expiry = std::max(delta_expiry, until);
    ++freq_[attr];
    ++delta_freq_[attr];
}

void TabuMemory::merge_from(const TabuMemory& other) {
    for (const auto& [attr, until] : other.delta_expiry_) {
        long& mine = expiry_[attr];
        mine = std::max(mine, until);
    }
    for (const auto& [attr, count] : other.delta_freq_) freq_[attr] += count;
}

void TabuMemory::clear_deltas() {
    delta_expiry_.clear();
    delta_freq_.clear();
}

namespace {

// Uniform value in [lo, hi] different from `current`; lo == hi has no
// alternative.
std::optional<int> draw_other_value(int lo, int hi, int current, Rng& rng) {
    if (hi <= lo) return std::nullopt;
    int v = rng.uniform_int(lo, hi - 1);
    if (v >= current) ++v;
    return v;
}

std::vector<int> pick_distinct_slots(int dim, int count, Rng& rng) {
    std::vector<int> slots(static_cast<std::size_t>(dim));
    std::iota(slots.begin(), slots.end(), 0);
    for (int i = 0; i < count; ++i) {
        const int j = rng.uniform_int(i, dim - 1);
        std::swap(slots[i], slots[j]);
    }
    slots.resize(static_cast<std::size_t>(count));
    return slots;
}

}  // namespace

std::vector<Move> sample_moves(const DecisionVector& x, double fraction, const Objective& bounds,
                               Rng& rng) {
    const int dim = static_cast<int>(x.size());
    if (fraction <= 0.0 || fraction > 1.0)
        throw std::invalid_argument("tabu: sample fraction must be in (0, 1]");
    const int count = std::min(dim, static_cast<int>(std::ceil(fraction * dim)));
    std::vector<Move> moves;
    moves.reserve(static_cast<std::size_t>(count));
    for (int slot : pick_distinct_slots(dim, count, rng)) {
        const auto value = draw_other_value(bounds.lower(slot), bounds.upper(slot), x[slot], rng);
        if (!value) continue;
        Move m{slot, *value, x};
        m.candidate[slot] = *value;
        moves.push_back(std::move(m));
    }
    return moves;
}

std::optional<EvaluatedMove> select_move(const std::vector<EvaluatedMove>& candidates,
                                         TabuMemory& memory, double best_energy, long step) {
    int chosen = -1;
    double chosen_score = 0.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const EvaluatedMove& cand = candidates[i];
        const bool tabu = memory.is_tabu(cand.move.slot, cand.move.value, step);
        if (tabu && !(cand.energy < best_energy)) continue;  // aspiration gate
        const double score =
            cand.energy + memory.penalization_weight() * memory.frequency(cand.move.slot, cand.move.value);
        if (chosen < 0 || score < chosen_score) {
            chosen = static_cast<int>(i);
            chosen_score = score;
        }
    }
    if (chosen < 0) return std::nullopt;
    const EvaluatedMove& pick = candidates[static_cast<std::size_t>(chosen)];
    memory.record(pick.move.slot, pick.move.value, step);
    return pick;
}

std::vector<Move> remainder_moves(const DecisionVector& x, const std::vector<int>& sampled_slots,
                                  const Objective& bounds, Rng& rng) {
    std::vector<char> sampled(x.size(), 0);
    for (int s : sampled_slots) sampled[static_cast<std::size_t>(s)] = 1;
    std::vector<Move> moves;
    for (int slot = 0; slot < static_cast<int>(x.size()); ++slot) {
        if (sampled[static_cast<std::size_t>(slot)]) continue;
        const auto value = draw_other_value(bounds.lower(slot), bounds.upper(slot), x[slot], rng);
        if (!value) continue;
        Move m{slot, *value, x};
        m.candidate[slot] = *value;
        moves.push_back(std::move(m));
    }
    return moves;
}

std::optional<EvaluatedMove> best_improving(const std::vector<EvaluatedMove>& candidates,
                                            double best_energy) {
    const EvaluatedMove* pick = nullptr;
    for (const auto& cand : candidates)
        if (cand.energy < best_energy && (!pick || cand.energy < pick->energy)) pick = &cand;
    if (!pick) return std::nullopt;
    return *pick;
}

std::vector<double> restart_probs(const std::vector<double>& best_energies,
                                  RestartStrategy strategy, double m, double kappa) {
    const int n = static_cast<int>(best_energies.size());
    if (n < 1) throw std::invalid_argument("restart over an empty chain pool");
    std::vector<double> probs(static_cast<std::size_t>(n), 0.0);
    if (n == 1) {
        probs[0] = 1.0;
        return probs;
    }

    switch (strategy) {
        case RestartStrategy::hard: {
            int best = 0;
            for (int i = 1; i < n; ++i)
                if (best_energies[i] < best_energies[best]) best = i;
            probs[static_cast<std::size_t>(best)] = 1.0;
            return probs;
        }
        case RestartStrategy::roulette: {
            // Shifted fitness keeps the distribution well-defined for
            // negative or mixed energies.
            const double e_max = *std::max_element(best_energies.begin(), best_energies.end());
            double total = 0.0;
            for (int i = 0; i < n; ++i) {
                probs[i] = e_max - best_energies[i] + 1e-9;
                total += probs[i];
            }
            for (double& p : probs) p /= total;
            return probs;
        }
        case RestartStrategy::rank: {
            // rank 1 = worst (highest energy); linear ranking clamped at 0.
            std::vector<int> order(static_cast<std::size_t>(n));
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
                return best_energies[a] > best_energies[b];
            });
            double total = 0.0;
            for (int pos = 0; pos < n; ++pos) {
                const double rank = pos + 1.0;
                const double raw =
                    (2.0 - m + 2.0 * (m - 1.0) * (rank - 1.0) / (n - 1.0)) / n;
                const double p = std::max(0.0, raw);
                probs[static_cast<std::size_t>(order[pos])] = p;
                total += p;
            }
            if (total <= 0.0) {  // fully clamped; fall back to best-only
                int best = 0;
                for (int i = 1; i < n; ++i)
                    if (best_energies[i] < best_energies[best]) best = i;
                probs.assign(static_cast<std::size_t>(n), 0.0);
                probs[static_cast<std::size_t>(best)] = 1.0;
                return probs;
            }
            for (double& p : probs) p /= total;
            return probs;
        }
        case RestartStrategy::softmax: {
            const double e_min = *std::min_element(best_energies.begin(), best_energies.end());
            double total = 0.0;
            for (int i = 0; i < n; ++i) {
                probs[i] = std::exp(-kappa * (best_energies[i] - e_min));
                total += probs[i];
            }
            for (double& p : probs) p /= total;
            return probs;
        }
    }
    throw std::invalid_argument("unhandled restart strategy");
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

struct TsChain {
    DecisionVector current;
    double current_energy = 0.0;
    DecisionVector best;
    double best_energy = 0.0;
    TabuMemory memory;
    std::vector<int> sampled_slots;      // scratch, per step
    std::vector<EvaluatedMove> sampled;  // scratch, per step
};

}  // namespace

OptimizerResult run_tabu(const Objective& obj, const TsConfig& cfg, std::uint64_t seed,
                         EvalDispatcher& dispatcher) {
    if (cfg.nchain < 1 || cfg.chain_size < 1)
        throw std::invalid_argument("tabu: nchain and chain_size must be >= 1");
    if (cfg.tenure < 0) throw std::invalid_argument("tabu: tenure must be non-negative");

    const int nchain = cfg.nchain;
    const int dim = obj.dim();

    std::vector<Rng> rng;
    rng.reserve(static_cast<std::size_t>(nchain));
    for (int l = 0; l < nchain; ++l) rng.push_back(Rng::stream(seed, static_cast<std::uint64_t>(l)));

    std::vector<TsChain> chains(static_cast<std::size_t>(nchain),
                                TsChain{{}, 0.0, {}, 0.0,
                                        TabuMemory(cfg.tenure, cfg.penalization_weight), {}, {}});
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

    TabuMemory shared(cfg.tenure, cfg.penalization_weight);
    long step = 0;

    while (!dispatcher.exhausted()) {
        for (int s = 0; s < cfg.chain_size && !dispatcher.exhausted(); ++s, ++step) {
            // Sampled neighborhoods of all chains go out as one batch.
            std::vector<DecisionVector> batch;
            std::vector<std::pair<int, Move>> owners;  // (chain, move)
            for (int l = 0; l < nchain; ++l) {
                auto moves = sample_moves(chains[l].current, cfg.sample_fraction, obj, rng[l]);
                chains[l].sampled_slots.clear();
                chains[l].sampled.clear();
                for (auto& mv : moves) {
                    chains[l].sampled_slots.push_back(mv.slot);
                    batch.push_back(mv.candidate);
                    owners.emplace_back(l, std::move(mv));
                }
            }
            const auto evals = dispatcher.evaluate(batch);
            for (std::size_t i = 0; i < evals.size(); ++i)
                chains[owners[i].first].sampled.push_back({owners[i].second, -evals[i].objective});
            const bool truncated = evals.size() < batch.size();

            // Remainder sweep for chains whose sample found no improvement.
            std::vector<DecisionVector> extra_batch;
            std::vector<std::pair<int, Move>> extra_owners;
            std::vector<std::vector<EvaluatedMove>> remainder(static_cast<std::size_t>(nchain));
            if (!truncated && !dispatcher.exhausted()) {
                for (int l = 0; l < nchain; ++l) {
                    bool improved = false;
                    for (const auto& cand : chains[l].sampled)
                        if (cand.energy < chains[l].best_energy) {
                            improved = true;
                            break;
                        }
                    if (improved) continue;
                    for (auto& mv :
                         remainder_moves(chains[l].current, chains[l].sampled_slots, obj, rng[l])) {
                        extra_batch.push_back(mv.candidate);
                        extra_owners.emplace_back(l, std::move(mv));
                    }
                }
                const auto extra_evals = dispatcher.evaluate(extra_batch);
                for (std::size_t i = 0; i < extra_evals.size(); ++i)
                    remainder[extra_owners[i].first].push_back(
                        {extra_owners[i].second, -extra_evals[i].objective});
            }

            for (int l = 0; l < nchain; ++l) {
                // An improving remainder candidate (the best of them)
                // overrides the sampled-neighborhood selection.
                std::optional<EvaluatedMove> pick =
                    best_improving(remainder[static_cast<std::size_t>(l)], chains[l].best_energy);
                if (pick) {
                    chains[l].memory.record(pick->move.slot, pick->move.value, step);
                } else {
                    pick = select_move(chains[l].sampled, chains[l].memory, chains[l].best_energy,
                                       step);
                }
                if (!pick) continue;
                chains[l].current = pick->move.candidate;
                chains[l].current_energy = pick->energy;
                if (pick->energy < chains[l].best_energy) {
                    chains[l].best = pick->move.candidate;
                    chains[l].best_energy = pick->energy;
                }
            }
        }
        if (dispatcher.exhausted()) break;

        // Barrier: share the tabu structure, then restart every chain from
        // the per-chain best pool.
        for (int l = 0; l < nchain; ++l) shared.merge_from(chains[l].memory);
        for (int l = 0; l < nchain; ++l) {
            chains[l].memory = shared;
            chains[l].memory.clear_deltas();
        }

        std::vector<double> pool(static_cast<std::size_t>(nchain));
        for (int l = 0; l < nchain; ++l) pool[l] = chains[l].best_energy;
        const auto probs = restart_probs(pool, cfg.reinforce_best, cfg.m, cfg.kappa);
        std::vector<DecisionVector> best_copy(static_cast<std::size_t>(nchain));
        std::vector<double> best_energy_copy(static_cast<std::size_t>(nchain));
        for (int l = 0; l < nchain; ++l) {
            best_copy[l] = chains[l].best;
            best_energy_copy[l] = chains[l].best_energy;
        }
        for (int l = 0; l < nchain; ++l) {
            const int src = sample_index(probs, rng[l]);
            chains[l].current = best_copy[src];
            chains[l].current_energy = best_energy_copy[src];
            if (best_energy_copy[src] < chains[l].best_energy) {
                chains[l].best = best_copy[src];
                chains[l].best_energy = best_energy_copy[src];
            }
        }
    }

    return {dispatcher.best_vector(), dispatcher.best_objective(), dispatcher.used()};
}

}  // namespace lpopt
