#include "lpopt/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace lpopt {
namespace stats {

namespace {
constexpr double kPi = 3.14159265358979323846;

void check_matrix(const ScoreMatrix& m) {
    if (m.n_rows() < 2 || m.n_cols() < 2)
        throw std::invalid_argument("stats: need at least 2 experiments and 2 algorithms");
    for (const auto& row : m.scores)
        if (static_cast<int>(row.size()) != m.n_cols())
            throw std::invalid_argument("stats: ragged score matrix");
}
}  // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double chi_squared_sf(double x, int df) {
    if (df < 1) throw std::invalid_argument("chi_squared_sf: df must be >= 1");
    if (x <= 0.0) return 1.0;
    // Q(x; 1) = erfc(sqrt(x/2)), Q(x; 2) = exp(-x/2), then
    // Q(x; k+2) = Q(x; k) + (x/2)^{k/2} e^{-x/2} / Gamma(k/2 + 1).
    const double half = x / 2.0;
    double q, term;
    int k;
    if (df % 2 == 1) {
        q = std::erfc(std::sqrt(half));
        term = std::sqrt(half / kPi) * 2.0 * std::exp(-half);  // (x/2)^{1/2} e^{-x/2} / Gamma(3/2)
        k = 1;
    } else {
        q = std::exp(-half);
        term = half * std::exp(-half);  // (x/2)^1 e^{-x/2} / Gamma(2)
        k = 2;
    }
    while (k + 2 <= df) {
        q += term;
        k += 2;
        term *= half / (static_cast<double>(k) / 2.0 + 0.0);
        // term for the next step: (x/2)^{k/2} e^{-x/2} / Gamma(k/2 + 1)
    }
    return std::min(1.0, std::max(0.0, q));
}

std::vector<double> rank_row(const std::vector<double>& row) {
    const int k = static_cast<int>(row.size());
    std::vector<int> order(static_cast<std::size_t>(k));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return row[a] > row[b]; });
    std::vector<double> ranks(static_cast<std::size_t>(k));
    int i = 0;
    while (i < k) {
        int j = i;
        while (j + 1 < k && row[order[j + 1]] == row[order[i]]) ++j;
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (int t = i; t <= j; ++t) ranks[static_cast<std::size_t>(order[t])] = avg;
        i = j + 1;
    }
    return ranks;
}

FriedmanResult friedman(const ScoreMatrix& m) {
    check_matrix(m);
    const int n = m.n_rows();
    const int k = m.n_cols();

    std::vector<double> rank_sums(static_cast<std::size_t>(k), 0.0);
    for (const auto& row : m.scores) {
        const auto ranks = rank_row(row);
        for (int j = 0; j < k; ++j) rank_sums[static_cast<std::size_t>(j)] += ranks[j];
    }

    double sum_sq = 0.0;
    for (double r : rank_sums) sum_sq += r * r;
    const double statistic =
        12.0 / (static_cast<double>(n) * k * (k + 1)) * sum_sq - 3.0 * n * (k + 1);

    FriedmanResult out;
    out.avg_ranks.resize(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) out.avg_ranks[j] = rank_sums[j] / n;
    out.statistic = std::max(0.0, statistic);
    out.p_value = chi_squared_sf(out.statistic, k - 1);
    return out;
}

double studentized_range_sf(double q, int k) {
    if (k < 2) throw std::invalid_argument("studentized_range_sf: k must be >= 2");
    if (q <= 0.0) return 1.0;

    // CDF = k Int phi(z) [Phi(z) - Phi(z - q)]^{k-1} dz, Simpson over [-8, 8].
    constexpr double kLo = -8.0, kHi = 8.0;
    constexpr int kIntervals = 16000;  // step 1e-3
    const double h = (kHi - kLo) / kIntervals;

    auto integrand = [&](double z) {
        const double phi = std::exp(-0.5 * z * z) / std::sqrt(2.0 * kPi);
        const double inner = normal_cdf(z) - normal_cdf(z - q);
        return phi * std::pow(inner, k - 1);
    };

    double total = integrand(kLo) + integrand(kHi);
    for (int i = 1; i < kIntervals; ++i)
        total += integrand(kLo + h * i) * (i % 2 == 1 ? 4.0 : 2.0);
    const double cdf = k * total * h / 3.0;
    return std::min(1.0, std::max(0.0, 1.0 - cdf));
}

NemenyiResult nemenyi(const ScoreMatrix& m) {
    check_matrix(m);
    const int n = m.n_rows();
    const int k = m.n_cols();
    const FriedmanResult fr = friedman(m);

    const double scale = std::sqrt(static_cast<double>(k) * (k + 1) / (6.0 * n));
    NemenyiResult out;
    out.labels = m.labels;
    out.p.assign(static_cast<std::size_t>(k), std::vector<double>(static_cast<std::size_t>(k), 1.0));
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            const double z = std::abs(fr.avg_ranks[i] - fr.avg_ranks[j]) / scale;
            const double p = studentized_range_sf(z * std::sqrt(2.0), k);
            out.p[i][j] = p;
            out.p[j][i] = p;
        }
    return out;
}

std::string format_p(double p) {
    if (p < 5e-4) return "0.000";
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%.3f", p);
    return buf;
}

}  // namespace stats
}  // namespace lpopt
