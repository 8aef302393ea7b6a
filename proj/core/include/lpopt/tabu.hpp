// core/include/lpopt/tabu.hpp
//
// Parallel tabu search: per-chain candidate sampling with short-term (tenure)
// and long-term (frequency) memory, aspiration on the chain best, a
// remainder sweep when the sampled moves fail to improve, and four
// chain-restart distributions (hard / roulette / rank / softmax). Memories
// are merged across chains at segment barriers. Energies are negated
// objectives.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lpopt/dispatch.hpp"
#include "lpopt/rng.hpp"
#include "lpopt/surrogate.hpp"

namespace lpopt {

enum class RestartStrategy { hard, roulette, rank, softmax };

RestartStrategy restart_strategy_from_string(const std::string& s);

struct TsConfig {
    int nchain = 32;
    int chain_size = 10;           // select_move steps between barriers
    double sample_fraction = 0.1;  // fraction of slots sampled per step
    int tenure = 6;
    double penalization_weight = 1.0;
    RestartStrategy reinforce_best = RestartStrategy::rank;
    double m = 5.0;       // rank selection pressure
    double kappa = 1.0;   // softmax inverse temperature
    long max_samples = 0;
};

// (slot, value) attributes. Short-term entries expire; long-term frequencies
// only grow.
class TabuMemory {
public:
    explicit TabuMemory(int tenure = 6, double penalization_weight = 1.0)
        : tenure_(tenure), penalization_weight_(penalization_weight) {}

    bool is_tabu(int slot, int value, long step) const;
    double frequency(int slot, int value) const;
    void record(int slot, int value, long step);

    // Shared-memory merge at a segment barrier: short-term entries union with
    // the later expiry, frequencies add.
    void merge_from(const TabuMemory& other);
    void clear_deltas();

    int tenure() const { return tenure_; }
    double penalization_weight() const { return penalization_weight_; }
    const std::map<std::pair<int, int>, long>& expiries() const { return expiry_; }
    const std::map<std::pair<int, int>, long>& frequencies() const { return freq_; }

private:
    int tenure_;
    double penalization_weight_;
    std::map<std::pair<int, int>, long> expiry_;
    std::map<std::pair<int, int>, long> freq_;
    // Records since the last barrier; merge_from consumes these so shared
    // history is never double-counted.
    std::map<std::pair<int, int>, long> delta_expiry_;
    std::map<std::pair<int, int>, long> delta_freq_;
};

struct Move {
    int slot = 0;
    int value = 0;
    DecisionVector candidate;
};

struct EvaluatedMove {
    Move move;
    double energy = 0.0;
};

// ceil(fraction * dim) distinct slots chosen uniformly; each contributes one
// candidate with a uniformly drawn value different from the current one.
// Slots with a single admissible value are skipped.
std::vector<Move> sample_moves(const DecisionVector& x, double fraction, const Objective& bounds,
                               Rng& rng);

// Ranks candidates by energy + penalization_weight * frequency; returns the
// best non-tabu one. A tabu candidate wins only when its raw energy beats the
// chain best (aspiration). Returns nullopt when everything is tabu and
// nothing aspirates. The chosen attribute is recorded into the memory.
std::optional<EvaluatedMove> select_move(const std::vector<EvaluatedMove>& candidates,
                                         TabuMemory& memory, double best_energy, long step);

// One candidate per not-yet-sampled slot; the best *improving* candidate over
// the chain best is kept, not the first.
std::vector<Move> remainder_moves(const DecisionVector& x, const std::vector<int>& sampled_slots,
                                  const Objective& bounds, Rng& rng);

// The lowest-energy candidate strictly better than best_energy, or nullopt.
std::optional<EvaluatedMove> best_improving(const std::vector<EvaluatedMove>& candidates,
                                            double best_energy);

// Restart distribution over per-chain best energies (lower is better).
std::vector<double> restart_probs(const std::vector<double>& best_energies,
                                  RestartStrategy strategy, double m, double kappa);

OptimizerResult run_tabu(const Objective& obj, const TsConfig& cfg, std::uint64_t seed,
                         EvalDispatcher& dispatcher);

}  // namespace lpopt
