#include "lpopt/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lpopt {

namespace {

// Per-slot softmax scratch: probabilities, log-probabilities and entropy.
struct SlotDistribution {
    std::vector<double> p;
    std::vector<double> logp;
    double entropy = 0.0;
};

SlotDistribution slot_distribution(const std::vector<double>& logits) {
    SlotDistribution d;
    const std::size_t n = logits.size();
    d.p.resize(n);
    d.logp.resize(n);
    const double zmax = *std::max_element(logits.begin(), logits.end());
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        d.p[j] = std::exp(logits[j] - zmax);
        total += d.p[j];
    }
    const double log_total = std::log(total);
    for (std::size_t j = 0; j < n; ++j) {
        d.logp[j] = logits[j] - zmax - log_total;
        d.p[j] /= total;
        d.entropy -= d.p[j] * d.logp[j];
    }
    return d;
}

std::vector<SlotDistribution> all_distributions(const PolicyParams& params) {
    std::vector<SlotDistribution> out;
    out.reserve(params.logits.size());
    for (const auto& row : params.logits) out.push_back(slot_distribution(row));
    return out;
}

}  // namespace

PolicyParams PolicyParams::zeros(const Objective& bounds) {
    PolicyParams p;
    p.logits.resize(static_cast<std::size_t>(bounds.dim()));
    for (int k = 0; k < bounds.dim(); ++k)
        p.logits[k].assign(static_cast<std::size_t>(bounds.upper(k) - bounds.lower(k) + 1), 0.0);
    return p;
}

PolicyGradient PolicyGradient::zeros_like(const PolicyParams& params) {
    PolicyGradient g;
    g.logits.resize(params.logits.size());
    for (std::size_t k = 0; k < params.logits.size(); ++k)
        g.logits[k].assign(params.logits[k].size(), 0.0);
    return g;
}

AdamState AdamState::zeros_like(const PolicyParams& params) {
    AdamState a;
    a.m_logits.resize(params.logits.size());
    a.v_logits.resize(params.logits.size());
    for (std::size_t k = 0; k < params.logits.size(); ++k) {
        a.m_logits[k].assign(params.logits[k].size(), 0.0);
        a.v_logits[k].assign(params.logits[k].size(), 0.0);
    }
    return a;
}

std::pair<DecisionVector, std::vector<double>> sample_action(const PolicyParams& params, Rng& rng) {
    const std::size_t dim = params.logits.size();
    DecisionVector action(dim);
    std::vector<double> logprobs(dim);
    for (std::size_t k = 0; k < dim; ++k) {
        const SlotDistribution d = slot_distribution(params.logits[k]);
        const double u = rng.uniform();
        double acc = 0.0;
        std::size_t pick = d.p.size() - 1;
        for (std::size_t j = 0; j < d.p.size(); ++j) {
            acc += d.p[j];
            if (u < acc) {
                pick = j;
                break;
            }
        }
        action[k] = static_cast<int>(pick);
        logprobs[k] = d.logp[pick];
    }
    return {std::move(action), std::move(logprobs)};
}

std::pair<double, double> logprob_and_entropy(const PolicyParams& params,
                                              const DecisionVector& action) {
    if (action.size() != params.logits.size())
        throw std::invalid_argument("ppo: action length does not match the policy");
    double logprob = 0.0;
    double entropy = 0.0;
    for (std::size_t k = 0; k < params.logits.size(); ++k) {
        const SlotDistribution d = slot_distribution(params.logits[k]);
        const int a = action[k];
        if (a < 0 || a >= static_cast<int>(d.logp.size()))
            throw std::invalid_argument("ppo: action entry out of range at slot " + std::to_string(k));
        logprob += d.logp[static_cast<std::size_t>(a)];
        entropy += d.entropy;
    }
    return {logprob, entropy};
}

std::pair<double, PolicyGradient> ppo_loss(const TrajectoryBatch& batch, const PolicyParams& params,
                                           const PpoConfig& cfg) {
    const std::size_t n = batch.samples.size();
    if (n == 0) throw std::invalid_argument("ppo: empty batch");
    const std::size_t dim = params.logits.size();
    const double inv_n = 1.0 / static_cast<double>(n);
    const double eps = cfg.clip_eps;

    const auto dists = all_distributions(params);
    double total_entropy = 0.0;
    for (const auto& d : dists) total_entropy += d.entropy;

    PolicyGradient grad = PolicyGradient::zeros_like(params);
    double surrogate = 0.0;
    double value_mse = 0.0;
    double dloss_dv = 0.0;
    // Sum over unclipped samples of r*A, per slot fanned out below through
    // (onehot - p).
    double unclipped_coef_total = 0.0;

    for (const auto& sample : batch.samples) {
        double logp_new = 0.0;
        for (std::size_t k = 0; k < dim; ++k)
            logp_new += dists[k].logp[static_cast<std::size_t>(sample.action[k])];
        double logp_old = 0.0;
        for (double lp : sample.old_slot_logprobs) logp_old += lp;

        const double ratio = std::exp(logp_new - logp_old);
        const double advantage = sample.reward - params.value;
        const double clipped_slope = advantage >= 0.0 ? 1.0 + eps : 1.0 - eps;
        const double g_star = clipped_slope * advantage;
        const double raw = ratio * advantage;
        const bool unclipped = raw <= g_star;
        surrogate += unclipped ? raw : g_star;

        if (unclipped) {
            const double coef = ratio * advantage;
            unclipped_coef_total += coef;
            for (std::size_t k = 0; k < dim; ++k)
                grad.logits[k][static_cast<std::size_t>(sample.action[k])] -= inv_n * coef;
            dloss_dv += inv_n * ratio;
        } else {
            dloss_dv += inv_n * clipped_slope;
        }

        const double verr = params.value - sample.reward;
        value_mse += verr * verr;
        dloss_dv += inv_n * 2.0 * cfg.vf_coef * verr;
    }

    // Softmax fan-out of the policy term plus the entropy gradient (the
    // entropy does not depend on the samples).
    for (std::size_t k = 0; k < dim; ++k) {
        const auto& d = dists[k];
        for (std::size_t j = 0; j < d.p.size(); ++j) {
            grad.logits[k][j] += inv_n * unclipped_coef_total * d.p[j];
            grad.logits[k][j] += cfg.ent_coef * d.p[j] * (d.logp[j] + d.entropy);
        }
    }
    grad.value = dloss_dv;

    const double loss =
        -surrogate * inv_n + cfg.vf_coef * value_mse * inv_n - cfg.ent_coef * total_entropy;
    return {loss, std::move(grad)};
}

namespace {

void adam_step(PolicyParams& params, const PolicyGradient& grad, const PpoConfig& cfg,
               AdamState& adam) {
    ++adam.step;
    const double bc1 = 1.0 - std::pow(adam.beta1, static_cast<double>(adam.step));
    const double bc2 = 1.0 - std::pow(adam.beta2, static_cast<double>(adam.step));
    auto apply = [&](double& param, double g, double& m, double& v) {
        m = adam.beta1 * m + (1.0 - adam.beta1) * g;
        v = adam.beta2 * v + (1.0 - adam.beta2) * g * g;
        param -= cfg.lr * (m / bc1) / (std::sqrt(v / bc2) + adam.eps);
    };
    for (std::size_t k = 0; k < params.logits.size(); ++k)
        for (std::size_t j = 0; j < params.logits[k].size(); ++j)
            apply(params.logits[k][j], grad.logits[k][j], adam.m_logits[k][j], adam.v_logits[k][j]);
    apply(params.value, grad.value, adam.m_value, adam.v_value);
}

}  // namespace

void update(PolicyParams& params, const TrajectoryBatch& batch, const PpoConfig& cfg,
            AdamState& adam, Rng& rng) {
    if (batch.samples.empty()) return;

    TrajectoryBatch work = batch;
    if (cfg.reward_norm) {
        double mean = 0.0;
        for (const auto& s : work.samples) mean += s.reward;
        mean /= static_cast<double>(work.samples.size());
        double var = 0.0;
        for (const auto& s : work.samples) var += (s.reward - mean) * (s.reward - mean);
        const double sd = std::sqrt(var / static_cast<double>(work.samples.size()));
        for (auto& s : work.samples) s.reward = (s.reward - mean) / (sd + 1e-8);
    }

    const int n = static_cast<int>(work.samples.size());
    const int mb = std::max(1, std::min(cfg.minibatch, n));
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (int i = n - 1; i > 0; --i) {
            const int j = rng.uniform_int(0, i);
            std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
        }
        for (int start = 0; start < n; start += mb) {
            const int end = std::min(start + mb, n);
            TrajectoryBatch mini;
            mini.samples.reserve(static_cast<std::size_t>(end - start));
            for (int i = start; i < end; ++i)
                mini.samples.push_back(work.samples[static_cast<std::size_t>(order[i])]);
            const auto [loss, grad] = ppo_loss(mini, params, cfg);
            (void)loss;
            adam_step(params, grad, cfg, adam);
        }
    }
}

namespace {

// Moves the additive incumbent bias from the previous best vector to the
// current one inside the logits table.
void apply_incumbent_bias(PolicyParams& params, std::vector<int>& applied,
                          const DecisionVector& incumbent, double bias) {
    if (applied.empty()) {
        applied.assign(incumbent.size(), -1);
    }
    for (std::size_t k = 0; k < incumbent.size(); ++k) {
        if (applied[k] == incumbent[k]) continue;
        if (applied[k] >= 0) params.logits[k][static_cast<std::size_t>(applied[k])] -= bias;
        params.logits[k][static_cast<std::size_t>(incumbent[k])] += bias;
        applied[k] = incumbent[k];
    }
}

}  // namespace

OptimizerResult run_ppo(const Objective& obj, const PpoConfig& cfg, std::uint64_t seed,
                        EvalDispatcher& dispatcher) {
    if (cfg.clip_eps <= 0.0 || cfg.clip_eps >= 1.0)
        throw std::invalid_argument("ppo: clip_eps must be in (0, 1)");
    if (cfg.epochs < 1) throw std::invalid_argument("ppo: epochs must be >= 1");
    if (cfg.ncores < 1 || cfg.n_steps < 1)
        throw std::invalid_argument("ppo: ncores and n_steps must be >= 1");

    const int dim = obj.dim();
    PolicyParams params = PolicyParams::zeros(obj);
    AdamState adam = AdamState::zeros_like(params);

    std::vector<Rng> worker_rng;
    for (int w = 0; w < cfg.ncores; ++w)
        worker_rng.push_back(Rng::stream(seed, static_cast<std::uint64_t>(w)));
    Rng update_rng = Rng::stream(seed, 1'000'000);

    std::vector<int> bias_applied;  // incumbent entries currently biased

    while (!dispatcher.exhausted()) {
        if (cfg.incumbent_conditioning && dispatcher.has_best()) {
            DecisionVector incumbent = dispatcher.best_vector();  // -> 0-based slot indices
            for (int k = 0; k < dim; ++k) incumbent[k] -= obj.lower(k);
            apply_incumbent_bias(params, bias_applied, incumbent, cfg.incumbent_bias);
        }

        TrajectoryBatch batch;
        std::vector<DecisionVector> actions;
        const int batch_size = cfg.ncores * cfg.n_steps;
        batch.samples.reserve(static_cast<std::size_t>(batch_size));
        actions.reserve(static_cast<std::size_t>(batch_size));
        for (int step = 0; step < cfg.n_steps; ++step)
            for (int w = 0; w < cfg.ncores; ++w) {
                auto [action, logprobs] = sample_action(params, worker_rng[w]);
                // Policy actions are 0-based slot indices; shift into the
                // objective's bounds.
                DecisionVector shifted(action.size());
                for (int k = 0; k < dim; ++k) shifted[k] = action[k] + obj.lower(k);
                actions.push_back(std::move(shifted));
                batch.samples.push_back({std::move(action), std::move(logprobs), 0.0});
            }

        const auto evals = dispatcher.evaluate(actions);
        if (evals.size() < actions.size()) break;  // budget hit mid-batch
        for (std::size_t i = 0; i < evals.size(); ++i) batch.samples[i].reward = evals[i].objective;

        update(params, batch, cfg, adam, update_rng);
    }

    return {dispatcher.best_vector(), dispatcher.best_objective(), dispatcher.used()};
}

}  // namespace lpopt
