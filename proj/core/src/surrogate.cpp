#include "lpopt/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <utility>

namespace lpopt {

ConstraintSet ConstraintSet::pwr_default() {
    ConstraintSet cs;
    cs.items = {
        {"l_cy", Sense::eq, 500.0, 0.0, 0.0, 0.05, 25000.0},
        {"f_dh", Sense::le, 1.45, 0.0, 0.0, 0.0, 25000.0},
        {"f_q", Sense::le, 1.85, 0.0, 0.0, 0.0, 25000.0},
        {"cb", Sense::le, 1200.0, 0.0, 0.0, 0.0, 25000.0},
        {"bu_max", Sense::le, 62.0, 0.0, 0.0, 0.0, 25000.0},
        {"n_enr", Sense::range, 0.0, 2.0, 3.0, 0.0, 25000.0},
        {"n_ifba", Sense::range, 0.0, 1.0, 3.0, 0.0, 25000.0},
    };
    return cs;
}

double kinf(const FuelType& fuel, const SurrogateCoefficients& coeffs) {
    return coeffs.a0 + coeffs.a1 * fuel.enrichment -
           (coeffs.w_ifba * fuel.ifba + coeffs.w_waba * fuel.waba);
}

double kinf(const BurnedAssembly& assembly) { return assembly.k_value; }

std::vector<double> power_map(const std::vector<double>& k_by_cell, const CoreLayout& layout,
                              const SurrogateCoefficients& coeffs) {
    const int n = layout.n_cells();
    std::vector<double> q(static_cast<std::size_t>(n));
    for (int cell = 0; cell < n; ++cell) {
        double nb_sum = 0.0;
        for (int nb : layout.neighbors[cell])
            nb_sum += nb >= 0 ? k_by_cell[nb] : coeffs.reflector * k_by_cell[cell];
        q[cell] = (k_by_cell[cell] + coeffs.nu * nb_sum) / (1.0 + 4.0 * coeffs.nu);
    }
    double mean = 0.0;
    for (double v : q) mean += v;
    mean /= n;
    for (double& v : q) v /= mean;
    return q;
}

namespace {

struct CellData {
    double k = 0.0;
    double bp_worth = 0.0;  // poison worth; zero for burned assemblies
    double bu0 = 0.0;
};

CellData cell_data(const CoreMap& core, const ProblemInstance& inst, int cell) {
    if (core.is_fresh(cell)) {
        const FuelType& f = inst.catalog[core.fresh_type[cell]];
        const double worth = inst.coeffs.w_ifba * f.ifba + inst.coeffs.w_waba * f.waba;
        return {kinf(f, inst.coeffs), worth, 0.0};
    }
    const BurnedAssembly& b = inst.burned[core.burned_index[cell]];
    return {kinf(b), 0.0, b.bu0};
}

}  // namespace

FomVector evaluate_core(const CoreMap& core, const ProblemInstance& inst) {
    const CoreLayout& lay = inst.layout;
    const SurrogateCoefficients& co = inst.coeffs;
    const int n = lay.n_cells();

    std::vector<double> k(static_cast<std::size_t>(n));
    std::vector<double> worth(static_cast<std::size_t>(n));
    std::vector<double> bu0(static_cast<std::size_t>(n));
    double k_mean = 0.0, worth_mean = 0.0;
    for (int cell = 0; cell < n; ++cell) {
        const CellData d = cell_data(core, inst, cell);
        k[cell] = d.k;
        worth[cell] = d.bp_worth;
        bu0[cell] = d.bu0;
        k_mean += d.k;
        worth_mean += d.bp_worth;
    }
    k_mean /= n;
    worth_mean /= n;

    const std::vector<double> p = power_map(k, lay, co);

    FomVector fom;
    fom.l_cy = co.a_cy * std::max(0.0, k_mean - 1.0);
    fom.f_dh = *std::max_element(p.begin(), p.end());
    fom.f_q = co.axial * fom.f_dh;
    fom.cb = co.a_cb * (k_mean + worth_mean - 1.0) - co.b_cb * worth_mean;

    double bu_max = 0.0;
    for (int cell = 0; cell < n; ++cell)
        bu_max = std::max(bu_max, bu0[cell] + co.dbu * p[cell] * fom.l_cy / 500.0);
    fom.bu_max = bu_max;

    double fresh_cost = 0.0;
    std::set<double> enrichments;
    std::set<std::pair<int, int>> bp_loadings;
    for (int cell = 0; cell < n; ++cell) {
        if (!core.is_fresh(cell)) continue;
        const FuelType& f = inst.catalog[core.fresh_type[cell]];
        fresh_cost += co.c0 + co.c_e * f.enrichment + co.c_if * f.ifba + co.c_wa * f.waba;
        enrichments.insert(f.enrichment);
        bp_loadings.insert({f.ifba, f.waba});
    }
    // Degenerate zero-length cycles get a large finite sentinel cost.
    fom.lcoe = fom.l_cy > 0.0 ? co.a_cost * fresh_cost / (n * fom.l_cy) : 1000.0;
    fom.n_enr = static_cast<int>(enrichments.size());
    fom.n_ifba = static_cast<int>(bp_loadings.size());
    return fom;
}

namespace {

double fom_value(const FomVector& foms, const std::string& name) {
    if (name == "l_cy") return foms.l_cy;
    if (name == "f_dh") return foms.f_dh;
    if (name == "f_q") return foms.f_q;
    if (name == "cb") return foms.cb;
    if (name == "bu_max") return foms.bu_max;
    if (name == "lcoe") return foms.lcoe;
    if (name == "n_enr") return foms.n_enr;
    if (name == "n_ifba") return foms.n_ifba;
    throw std::invalid_argument("unknown constraint name: " + name);
}

// Returns the reference value c when violated, 0 if satisfied.
double violation_reference(const Constraint& con, double x) {
    switch (con.sense) {
        case Sense::le:
            return x > con.target ? con.target : 0.0;
        case Sense::ge:
            return x < con.target ? con.target : 0.0;
        case Sense::eq:
            return std::abs(x - con.target) > con.tolerance ? con.target : 0.0;
        case Sense::range:
            if (x < con.lo) return con.lo;
            if (x > con.hi) return con.hi;
            return 0.0;
    }
    return 0.0;
}

}  // namespace

bool foms_feasible(const FomVector& foms, const ConstraintSet& cs) {
    for (const auto& con : cs.items)
        if (violation_reference(con, fom_value(foms, con.name)) != 0.0) return false;
    return true;
}

double score_foms(const FomVector& foms, const ConstraintSet& cs) {
    double penalty = 0.0;
    bool all_satisfied = true;
    for (const auto& con : cs.items) {
        const double x = fom_value(foms, con.name);
        const double c = violation_reference(con, x);
        if (c != 0.0) {
            const double rel = (x - c) / c;
            penalty += con.gamma * rel * rel;
            all_satisfied = false;
        }
    }
    return -foms.lcoe - penalty + (all_satisfied ? 1.0 : 0.0);
}

// ---------------------------------------------------------------------------
// Objective contract
// ---------------------------------------------------------------------------

long double Objective::search_space_size() const {
    long double size = 1.0L;
    for (int k = 0; k < dim(); ++k) {
        size *= static_cast<long double>(upper(k)) - lower(k) + 1.0L;
        if (size > 1e30L) return size;
    }
    return size;
}

LoadingPatternObjective::LoadingPatternObjective(ProblemInstance inst) : inst_(std::move(inst)) {
    validate_instance(inst_);
}

Evaluation LoadingPatternObjective::evaluate(const DecisionVector& v) const {
    const CoreMap core = decode(v, inst_);
    const FomVector foms = evaluate_core(core, inst_);
    Evaluation out;
    out.objective = score_foms(foms, inst_.constraints);
    out.feasible = foms_feasible(foms, inst_.constraints);
    out.foms = foms;
    return out;
}

namespace {

class LatticeBenchmark : public Objective {
public:
    enum class Kind { sphere, rastrigin };

    LatticeBenchmark(Kind kind, int dim, int lo, int hi, int target)
        : kind_(kind), dim_(dim), lo_(lo), hi_(hi), target_(target) {
        if (dim <= 0) throw std::invalid_argument("benchmark dim must be positive");
        if (hi < lo) throw std::invalid_argument("benchmark bounds reversed");
    }

    int dim() const override { return dim_; }
    int lower(int) const override { return lo_; }
    int upper(int) const override { return hi_; }

    Evaluation evaluate(const DecisionVector& v) const override {
        if (static_cast<int>(v.size()) != dim_)
            throw std::invalid_argument("benchmark vector length mismatch");
        double total = 0.0;
        for (int x : v) {
            const double d = x - target_;
            if (kind_ == Kind::sphere) {
                total += d * d;
            } else {
                total += d * d - 10.0 * std::cos(2.0 * 3.14159265358979323846 * d) + 10.0;
            }
        }
        return {-total, true, std::nullopt};
    }

private:
    Kind kind_;
    int dim_, lo_, hi_, target_;
};

}  // namespace

std::unique_ptr<Objective> benchmark_objective(const std::string& name, int dim, int lo, int hi,
                                               int target) {
    if (name == "neg_sphere")
        return std::make_unique<LatticeBenchmark>(LatticeBenchmark::Kind::sphere, dim, lo, hi, target);
    if (name == "neg_rastrigin")
        return std::make_unique<LatticeBenchmark>(LatticeBenchmark::Kind::rastrigin, dim, lo, hi,
                                                  target);
    throw std::invalid_argument("unknown benchmark objective: " + name);
}

BruteForceResult brute_force(const Objective& obj) {
    const long double size = obj.search_space_size();
    constexpr long double kGuard = 1e6L;
    if (size > kGuard)
        throw std::invalid_argument("search space too large for brute force: ~" +
                                    std::to_string(static_cast<double>(size)) + " points");

    const int dim = obj.dim();
    DecisionVector v(static_cast<std::size_t>(dim));
    for (int k = 0; k < dim; ++k) v[k] = obj.lower(k);

    BruteForceResult best;
    best.enumerated = 0;
    bool have_best = false;
    while (true) {
        const Evaluation e = obj.evaluate(v);
        ++best.enumerated;
        if (!have_best || e.objective > best.objective) {
            best.best = v;
            best.objective = e.objective;
            have_best = true;
        }
        int k = dim - 1;
        while (k >= 0 && v[k] == obj.upper(k)) {
            v[k] = obj.lower(k);
            --k;
        }
        if (k < 0) break;
        ++v[k];
    }
    return best;
}

}  // namespace lpopt
