#pragma once

#include <span>
#include <stdexcept>

namespace reviewrank::stats {

class StatsError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct MannWhitneyResult {
    double u_a = 0.0; ///< pairs (a, b) with a > b, ties counted half
    double u_b = 0.0;
    double p_value = 1.0; ///< two-sided
    bool exact = false;   ///< p from the exact permutation distribution
};

/// Sample products up to this size use the exact tie-aware null
/// distribution; larger ones the tie-corrected normal approximation with
/// continuity correction.
inline constexpr double kExactLimit = 400;

MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b);

/// Two-sided p from the normal approximation alone.
double mann_whitney_normal_p(std::span<const double> a, std::span<const double> b);

double mean(std::span<const double> xs);
/// Sample standard deviation (n - 1 denominator).
double sample_sd(std::span<const double> xs);

/// (mean(a) - mean(b)) / pooled sd. Throws StatsError("degenerate variance").
double cohens_d(std::span<const double> a, std::span<const double> b);

/// (mean(a) - mean(b)) / sd(b). Throws StatsError("degenerate variance").
double glass_delta(std::span<const double> a, std::span<const double> b);

} // namespace reviewrank::stats
