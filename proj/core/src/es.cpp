#include "lpopt/es.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lpopt {

std::vector<Individual> select_mu(const std::vector<Individual>& population, int mu) {
    if (mu < 1 || mu > static_cast<int>(population.size()))
        throw std::invalid_argument("es: mu must be in [1, population size]");
    std::vector<int> order(population.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return population[a].fitness > population[b].fitness; });
    std::vector<Individual> parents;
    parents.reserve(static_cast<std::size_t>(mu));
    for (int i = 0; i < mu; ++i) parents.push_back(population[static_cast<std::size_t>(order[i])]);
    return parents;
}

Individual crossover_splice(const Individual& ind1, const Individual& ind2, int pt1, int pt2) {
    const int dim = static_cast<int>(ind1.y.size());
    if (ind2.y.size() != ind1.y.size() || ind1.s.size() != ind1.y.size() ||
        ind2.s.size() != ind2.y.size())
        throw std::invalid_argument("es: crossover length mismatch");
    if (pt1 < 0 || pt2 > dim || pt1 >= pt2)
        throw std::invalid_argument("es: crossover points must satisfy 0 <= pt1 < pt2 <= dim");

    Individual child = ind1;
    for (int k = pt1; k < pt2; ++k) {
        child.y[k] = ind2.y[k];
        child.s[k] = ind2.s[k];
    }
    return child;
}

Individual two_point_crossover(const Individual& ind1, const Individual& ind2, Rng& rng) {
    const int dim = static_cast<int>(ind1.y.size());
    int pt1 = rng.uniform_int(0, dim);
    int pt2 = rng.uniform_int(0, dim);
    if (pt1 == pt2) {  // degenerate draw: swap the full span
        pt1 = 0;
        pt2 = dim;
    } else if (pt1 > pt2) {
        std::swap(pt1, pt2);
    }
    return crossover_splice(ind1, ind2, pt1, pt2);
}

double lognormal_tau(int dim) { return 1.0 / std::sqrt(2.0 * dim); }

double lognormal_tau_star(int dim) { return 1.0 / std::sqrt(2.0 * std::sqrt(static_cast<double>(dim))); }

Individual mutate_with_draws(const Individual& ind, const Objective& bounds,
                             const std::vector<double>& s_min, const std::vector<double>& s_max,
                             double g, double g_star, const std::vector<double>& normals) {
    const int dim = static_cast<int>(ind.y.size());
    if (static_cast<int>(normals.size()) != dim)
        throw std::invalid_argument("es: need one normal draw per entry");
    const double tau = lognormal_tau(dim);
    const double tau_star = lognormal_tau_star(dim);

    Individual child = ind;
    const double factor = std::exp(tau * g + tau_star * g_star);
    for (int k = 0; k < dim; ++k) {
        child.s[k] = std::clamp(ind.s[k] * factor, s_min[k], s_max[k]);
        const long rounded = std::lround(ind.y[k] + child.s[k] * normals[k]);
        child.y[k] = static_cast<int>(std::clamp<long>(rounded, bounds.lower(k), bounds.upper(k)));
    }
    return child;
}

Individual mutate_lognormal(const Individual& ind, const Objective& bounds,
                            const std::vector<double>& s_min, const std::vector<double>& s_max,
                            Rng& rng) {
    const double g = rng.normal();
    const double g_star = rng.normal();
    std::vector<double> normals(ind.y.size());
    for (double& z : normals) z = rng.normal();
    return mutate_with_draws(ind, bounds, s_min, s_max, g, g_star, normals);
}

OffspringOp draw_offspring_op(const EsConfig& cfg, Rng& rng) {
    const double u = rng.uniform();
    if (u < cfg.cxpb) return OffspringOp::crossover;
    if (u < cfg.cxpb + cfg.mutpb) return OffspringOp::mutation;
    return OffspringOp::clone;
}

OptimizerResult run_es(const Objective& obj, const EsConfig& cfg, std::uint64_t seed,
                       EvalDispatcher& dispatcher) {
    if (cfg.cxpb + cfg.mutpb > 1.0 + 1e-12)
        throw std::invalid_argument("es: cxpb + mutpb must not exceed 1");
    if (cfg.mu < 1 || cfg.mu > cfg.lambda_pop)
        throw std::invalid_argument("es: need 1 <= mu <= lambda_pop");

    const int dim = obj.dim();
    Rng rng(seed);

    std::vector<double> s_min(static_cast<std::size_t>(dim));
    std::vector<double> s_max(static_cast<std::size_t>(dim));
    std::vector<double> s_init(static_cast<std::size_t>(dim));
    for (int k = 0; k < dim; ++k) {
        const double range = static_cast<double>(obj.upper(k)) - obj.lower(k);
        s_min[k] = cfg.s_min_frac * range;
        s_max[k] = cfg.s_max_frac * range;
        s_init[k] = std::clamp(cfg.s_init_frac * range, s_min[k], s_max[k]);
    }

    std::vector<Individual> population(static_cast<std::size_t>(cfg.lambda_pop));
    for (auto& ind : population) {
        ind.y.resize(static_cast<std::size_t>(dim));
        for (int k = 0; k < dim; ++k) ind.y[k] = rng.uniform_int(obj.lower(k), obj.upper(k));
        ind.s = s_init;
    }

    while (!dispatcher.exhausted()) {
        std::vector<DecisionVector> batch(population.size());
        for (std::size_t i = 0; i < population.size(); ++i) batch[i] = population[i].y;
        const auto evals = dispatcher.evaluate(batch);
        for (std::size_t i = 0; i < evals.size(); ++i) population[i].fitness = evals[i].objective;
        if (evals.size() < batch.size()) break;

        const std::vector<Individual> parents = select_mu(population, cfg.mu);

        std::vector<Individual> offspring;
        offspring.reserve(population.size());
        for (int i = 0; i < cfg.lambda_pop; ++i) {
            const OffspringOp op = draw_offspring_op(cfg, rng);
            if (op == OffspringOp::crossover && cfg.mu >= 2) {
                int a = rng.uniform_int(0, cfg.mu - 1);
                int b = rng.uniform_int(0, cfg.mu - 2);
                if (b >= a) ++b;
                offspring.push_back(two_point_crossover(parents[a], parents[b], rng));
            } else if (op == OffspringOp::mutation) {
                const int a = rng.uniform_int(0, cfg.mu - 1);
                offspring.push_back(mutate_lognormal(parents[a], obj, s_min, s_max, rng));
            } else {
                // Clones (and crossover draws when mu < 2) cycle through the
                // parents so pure cloning preserves the population multiset.
                offspring.push_back(parents[static_cast<std::size_t>(i % cfg.mu)]);
            }
        }
        population = std::move(offspring);
    }

    return {dispatcher.best_vector(), dispatcher.best_objective(), dispatcher.used()};
}

}  // namespace lpopt
