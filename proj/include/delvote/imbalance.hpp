#pragma once

#include <span>
#include <vector>

namespace delvote {

/// Real-valued (pre-quantization) weights, as sampled in the numerical
/// study. Validation happens in the measures themselves.
using RealWeights = std::vector<double>;

struct ImbalanceMeasures {
    double gini = 0.0;
    double variance = 0.0;  ///< population variance (divides by n)
    double theil = 0.0;     ///< unscaled variant, see theil_index
    double hoover = 0.0;
};

enum class TheilVariant {
    /// (1/n) * sum_i w_i * ln(w_i / mean) — entries enter unscaled, so the
    /// index grows linearly with a uniform rescale of the weights.
    Unscaled,
    /// (1/n) * sum_i (w_i / mean) * ln(w_i / mean) — the conventional
    /// scale-invariant form, kept for comparison.
    MeanNormalized,
};

/// Theil entropy index with 0*ln(0) taken as 0. Requires nonnegative
/// entries with a positive sum.
double theil_index(std::span<const double> values,
                   TheilVariant variant = TheilVariant::Unscaled);

/// All four imbalance measures of a weight sample:
///   gini     (1/n) * (n + 1 - 2 * sum_i cum_i / cum_n), ascending order
///   variance (1/n) * sum_i (w_i - mean)^2
///   theil    unscaled variant
///   hoover   (1/2) * sum_i |w_i - mean| / sum_j w_j
/// Requires nonnegative entries with a positive sum.
ImbalanceMeasures imbalance_measures(std::span<const double> values);

/// Product-moment correlation. Requires equal lengths >= 2 and throws for
/// constant inputs (the correlation is undefined, not zero).
double pearson(std::span<const double> xs, std::span<const double> ys);

}  // namespace delvote
