#include "reviewrank/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <vector>

namespace reviewrank::stats {

namespace {

// Sizes of runs of equal values in ascending order.
std::vector<std::size_t> tie_groups(std::span<const double> a, std::span<const double> b) {
    std::vector<double> all(a.begin(), a.end());
    all.insert(all.end(), b.begin(), b.end());
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> groups;
    for (std::size_t i = 0; i < all.size();) {
        std::size_t j = i;
        while (j < all.size() && all[j] == all[i]) ++j;
        groups.push_back(j - i);
        i = j;
    }
    return groups;
}

double u_statistic(std::span<const double> a, std::span<const double> b) {
    std::vector<std::pair<double, int>> all;
    all.reserve(a.size() + b.size());
    for (double x : a) all.emplace_back(x, 0);
    for (double x : b) all.emplace_back(x, 1);
    std::sort(all.begin(), all.end());
    double rank_sum_a = 0.0;
    for (std::size_t i = 0; i < all.size();) {
        std::size_t j = i;
        while (j < all.size() && all[j].first == all[i].first) ++j;
        double mid = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k)
            if (all[k].second == 0) rank_sum_a += mid;
        i = j;
    }
    double n = static_cast<double>(a.size());
    return rank_sum_a - n * (n + 1.0) / 2.0;
}

double binomial(std::size_t n, std::size_t k) {
    double r = 1.0;
    for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return std::round(r);
}

// Exact two-sided tail of U under random labelling, processing tie groups in
// ascending order and tracking twice the statistic so half-ties stay integral.
double exact_p(std::size_t n, std::size_t m, double u_obs, const std::vector<std::size_t>& groups) {
    const std::size_t max2u = 2 * n * m;
    std::vector<std::vector<double>> dp(n + 1, std::vector<double>(max2u + 1, 0.0));
    dp[0][0] = 1.0;
    std::size_t processed = 0;
    for (std::size_t g : groups) {
        std::vector<std::vector<double>> next(n + 1, std::vector<double>(max2u + 1, 0.0));
        for (std::size_t chosen = 0; chosen <= n && chosen <= processed; ++chosen) {
            std::size_t b_before = processed - chosen;
            if (b_before > m) continue;
            for (std::size_t u2 = 0; u2 <= max2u; ++u2) {
                double ways = dp[chosen][u2];
                if (ways == 0.0) continue;
                for (std::size_t j = 0; j <= g && chosen + j <= n; ++j) {
                    if (b_before + (g - j) > m) continue;
                    std::size_t add = 2 * j * b_before + j * (g - j);
                    next[chosen + j][u2 + add] += ways * binomial(g, j);
                }
            }
        }
        dp = std::move(next);
        processed += g;
    }
    const double total = binomial(n + m, n);
    const long long centre = static_cast<long long>(n * m);
    const long long observed = std::llabs(std::llround(2.0 * u_obs) - centre);
    double tail = 0.0;
    for (std::size_t u2 = 0; u2 <= max2u; ++u2) {
        if (std::llabs(static_cast<long long>(u2) - centre) >= observed) tail += dp[n][u2];
    }
    return std::min(1.0, tail / total);
}

void require_non_empty(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw StatsError("Mann-Whitney U requires two non-empty samples");
}

} // namespace

double mann_whitney_normal_p(std::span<const double> a, std::span<const double> b) {
    require_non_empty(a, b);
    const double n = static_cast<double>(a.size());
    const double m = static_cast<double>(b.size());
    const double big_n = n + m;
    double tie_term = 0.0;
    for (auto t : tie_groups(a, b)) {
        double td = static_cast<double>(t);
        tie_term += td * td * td - td;
    }
    double var = n * m / 12.0 * ((big_n + 1.0) - (big_n > 1.0 ? tie_term / (big_n * (big_n - 1.0)) : 0.0));
    if (var <= 0.0) return 1.0;
    double u = u_statistic(a, b);
    double dev = std::max(0.0, std::fabs(u - n * m / 2.0) - 0.5);
    double z = dev / std::sqrt(var);
    return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b) {
    require_non_empty(a, b);
    MannWhitneyResult r;
    r.u_a = u_statistic(a, b);
    r.u_b = static_cast<double>(a.size() * b.size()) - r.u_a;
    if (static_cast<double>(a.size() * b.size()) <= kExactLimit) {
        r.exact = true;
        // The two-sided tail is symmetric in the samples; label the smaller one A.
        r.p_value = a.size() <= b.size() ? exact_p(a.size(), b.size(), r.u_a, tie_groups(a, b))
                                         : exact_p(b.size(), a.size(), r.u_b, tie_groups(a, b));
    } else {
        r.p_value = mann_whitney_normal_p(a, b);
    }
    return r;
}

double mean(std::span<const double> xs) {
    if (xs.empty()) throw StatsError("mean of an empty sample");
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double sample_sd(std::span<const double> xs) {
    if (xs.size() < 2) throw StatsError("degenerate variance");
    double mu = mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - mu) * (x - mu);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double cohens_d(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty() || a.size() + b.size() < 3) throw StatsError("degenerate variance");
    auto ss = [](std::span<const double> xs) {
        double mu = mean(xs);
        double s = 0.0;
        for (double x : xs) s += (x - mu) * (x - mu);
        return s;
    };
    double pooled = std::sqrt((ss(a) + ss(b)) / static_cast<double>(a.size() + b.size() - 2));
    if (pooled == 0.0) throw StatsError("degenerate variance");
    return (mean(a) - mean(b)) / pooled;
}

double glass_delta(std::span<const double> a, std::span<const double> b) {
    if (a.empty()) throw StatsError("degenerate variance");
    double sd = sample_sd(b);
    if (sd == 0.0) throw StatsError("degenerate variance");
    return (mean(a) - mean(b)) / sd;
}

} // namespace reviewrank::stats
