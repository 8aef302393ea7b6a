// core/include/lpopt/ppo.hpp
//
// Proximal policy optimization in its contextual-bandit form: a factored
// categorical policy (one logit row per slot) emits a full decision vector
// per step, the objective value is the reward, and a learned scalar baseline
// stands in for the value function. Losses and gradients are analytic.

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lpopt/dispatch.hpp"
#include "lpopt/rng.hpp"
#include "lpopt/surrogate.hpp"

namespace lpopt {

struct PolicyParams {
    std::vector<std::vector<double>> logits;  // [slot][choice]
    double value = 0.0;                       // scalar baseline V

    static PolicyParams zeros(const Objective& bounds);
};

// Gradient with the same shape as the parameters.
struct PolicyGradient {
    std::vector<std::vector<double>> logits;
    double value = 0.0;

    static PolicyGradient zeros_like(const PolicyParams& params);
};

struct TrajectorySample {
    DecisionVector action;
    std::vector<double> old_slot_logprobs;  // per slot, from the behavior snapshot
    double reward = 0.0;
};

struct TrajectoryBatch {
    std::vector<TrajectorySample> samples;
};

struct PpoConfig {
    int ncores = 32;
    int n_steps = 8;
    double clip_eps = 0.2;
    double vf_coef = 0.5;
    double ent_coef = 0.01;
    double lr = 3e-3;
    int epochs = 4;
    int minibatch = 64;
    bool reward_norm = true;
    bool incumbent_conditioning = false;  // bias the policy toward the best-ever vector
    double incumbent_bias = 1.0;
    long max_samples = 0;
};

// Samples each slot independently from softmax(logits); returns the action
// and its per-slot log-probabilities.
std::pair<DecisionVector, std::vector<double>> sample_action(const PolicyParams& params, Rng& rng);

// (log pi(a), total entropy), both summed over slots, max-shift stabilized.
std::pair<double, double> logprob_and_entropy(const PolicyParams& params,
                                              const DecisionVector& action);

// Clipped-surrogate loss over a batch (to MINIMIZE):
//   -mean(min(r A, g*(eps, A))) + vf_coef mean((V - R)^2) - ent_coef H,
// with A = R - V and r the new/old probability ratio. The gradient is
// analytic; clipped samples contribute no policy gradient.
std::pair<double, PolicyGradient> ppo_loss(const TrajectoryBatch& batch, const PolicyParams& params,
                                           const PpoConfig& cfg);

// Adam moments; persists across updates within one run.
struct AdamState {
    std::vector<std::vector<double>> m_logits, v_logits;
    double m_value = 0.0, v_value = 0.0;
    long step = 0;
    double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;

    static AdamState zeros_like(const PolicyParams& params);
};

// epochs x minibatch adaptive-moment descent steps on ppo_loss. Reward
// standardization (when enabled) happens once over the whole batch.
void update(PolicyParams& params, const TrajectoryBatch& batch, const PpoConfig& cfg,
            AdamState& adam, Rng& rng);

OptimizerResult run_ppo(const Objective& obj, const PpoConfig& cfg, std::uint64_t seed,
                        EvalDispatcher& dispatcher);

}  // namespace lpopt
