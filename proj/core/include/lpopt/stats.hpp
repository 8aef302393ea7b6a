// core/include/lpopt/stats.hpp
//
// Friedman omnibus test and Nemenyi post-hoc pairwise p-values over an
// experiments-by-algorithms score matrix. Rank 1 is the best (highest)
// score; ties receive average ranks.

#pragma once

#include <string>
#include <vector>

namespace lpopt {
namespace stats {

struct ScoreMatrix {
    std::vector<std::string> labels;            // k algorithm names
    std::vector<std::vector<double>> scores;    // N rows x k columns

    int n_rows() const { return static_cast<int>(scores.size()); }
    int n_cols() const { return static_cast<int>(labels.size()); }
};

struct FriedmanResult {
    std::vector<double> avg_ranks;  // per algorithm; sums to k(k+1)/2
    double statistic = 0.0;         // chi^2_F
    double p_value = 1.0;
};

struct NemenyiResult {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> p;  // k x k, symmetric, unit diagonal
};

// Average ranks of one row (rank 1 = highest value, ties averaged).
std::vector<double> rank_row(const std::vector<double>& row);

FriedmanResult friedman(const ScoreMatrix& m);
NemenyiResult nemenyi(const ScoreMatrix& m);

// Survival function of the studentized range with k groups and infinite
// degrees of freedom: 1 - k * Int phi(z) [Phi(z) - Phi(z-q)]^{k-1} dz,
// fixed-step quadrature over z in [-8, 8].
double studentized_range_sf(double q, int k);

// Chi-squared upper tail for integer degrees of freedom (exact recurrence).
double chi_squared_sf(double x, int df);

double normal_cdf(double z);

// "0.000"-style fixed 3-decimal cell used in the report tables; values below
// 5e-4 print as 0.000 while full precision stays in the CSVs.
std::string format_p(double p);

}  // namespace stats
}  // namespace lpopt
