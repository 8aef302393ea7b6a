// core/include/lpopt/foms.hpp
//
// Figures of merit, the penalized-objective constraint set, and the surrogate
// coefficient block. Split out so the problem types can embed them without
// pulling in the evaluator.

#pragma once

#include <string>
#include <vector>

namespace lpopt {

// The eight figures of merit of one evaluated core.
struct FomVector {
    double l_cy = 0.0;    // cycle length, EFPD
    double f_dh = 0.0;    // rod-integrated peaking factor
    double f_q = 0.0;     // peak pin power
    double cb = 0.0;      // boron concentration, ppm
    double bu_max = 0.0;  // peak burnup, GWd/tHm
    double lcoe = 0.0;    // levelized cost of electricity, $/MWh
    int n_enr = 0;        // distinct fresh enrichments
    int n_ifba = 0;       // distinct fresh burnable-poison loadings
};

enum class Sense { le, ge, eq, range };

struct Constraint {
    std::string name;
    Sense sense = Sense::le;
    double target = 0.0;       // threshold for le/ge/eq
    double lo = 0.0;           // for range
    double hi = 0.0;           // for range
    double tolerance = 0.0;    // equality satisfaction band
    double gamma = 25000.0;    // penalty weight
};

struct ConstraintSet {
    std::vector<Constraint> items;

    // The seven PWR constraints with the cycle-length equality at 500 EFPD
    // (tolerance 0.05) and gamma = 25,000 everywhere.
    static ConstraintSet pwr_default();
};

// Named constants of the surrogate formulas. All strictly positive; every one
// can be overridden from an instance file's [surrogate] section.
struct SurrogateCoefficients {
    double a0 = 0.92;        // fresh-k intercept
    double a1 = 0.040;       // fresh-k slope per wt% enrichment
    double w_ifba = 0.00020; // poison worth per IFBA rod
    double w_waba = 0.0020;  // poison worth per WABA pad
    double nu = 0.25;        // neighbor coupling weight
    double reflector = 0.65; // out-of-core neighbor reflectivity
    double axial = 1.28;     // F_q / F_dh axial factor
    double a_cy = 9500.0;    // cycle-length scale, EFPD per unit excess k
    double a_cb = 11000.0;   // boron scale, ppm
    double b_cb = 45000.0;   // boron poison credit, ppm
    double dbu = 24.0;       // cycle burnup increment, GWd/tHm
    double a_cost = 1000.0;  // LCOE scale
    double c0 = 1.5;         // assembly base cost
    double c_e = 0.9;        // cost per wt% enrichment
    double c_if = 0.004;     // cost per IFBA rod
    double c_wa = 0.02;      // cost per WABA pad
};

}  // namespace lpopt
