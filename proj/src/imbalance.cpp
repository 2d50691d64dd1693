#include "delvote/imbalance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "delvote/core.hpp"

namespace delvote {
namespace {

double checked_sum(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("imbalance measures need at least one weight");
    }
    NeumaierSum sum;
    for (double v : values) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("weights must be finite and nonnegative");
        }
        sum.add(v);
    }
    const double total = sum.value();
    if (!(total > 0.0)) {
        throw std::invalid_argument("imbalance measures are undefined for an all-zero sample");
    }
    return total;
}

}  // namespace

double theil_index(std::span<const double> values, TheilVariant variant) {
    const double total = checked_sum(values);
    const double n = static_cast<double>(values.size());
    const double mean = total / n;
    NeumaierSum acc;
    for (double v : values) {
        if (v == 0.0) continue;  // 0*ln(0) := 0
        const double scaled = variant == TheilVariant::Unscaled ? v : v / mean;
        acc.add(scaled * std::log(v / mean));
    }
    return acc.value() / n;
}

ImbalanceMeasures imbalance_measures(std::span<const double> values) {
    const double total = checked_sum(values);
    const double n = static_cast<double>(values.size());
    const double mean = total / n;

    std::vector<double> ascending(values.begin(), values.end());
    std::sort(ascending.begin(), ascending.end());
    NeumaierSum cum_ratio;  // sum of cum_i / cum_n
    double cum = 0.0;
    for (double v : ascending) {
        cum += v;
        cum_ratio.add(cum / total);
    }
    const double gini = (n + 1.0 - 2.0 * cum_ratio.value()) / n;

    NeumaierSum sq_dev;
    NeumaierSum abs_dev;
    for (double v : values) {
        sq_dev.add((v - mean) * (v - mean));
        abs_dev.add(std::abs(v - mean));
    }

    return ImbalanceMeasures{
        gini,
        sq_dev.value() / n,
        theil_index(values, TheilVariant::Unscaled),
        0.5 * abs_dev.value() / total,
    };
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) {
        throw std::invalid_argument("correlation inputs must have equal length");
    }
    if (xs.size() < 2) {
        throw std::invalid_argument("correlation needs at least two points");
    }
    NeumaierSum sx, sy;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx.add(xs[i]);
        sy.add(ys[i]);
    }
    const double mx = sx.value() / static_cast<double>(xs.size());
    const double my = sy.value() / static_cast<double>(ys.size());
    NeumaierSum cov, vx, vy;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        cov.add(dx * dy);
        vx.add(dx * dx);
        vy.add(dy * dy);
    }
    if (vx.value() == 0.0 || vy.value() == 0.0) {
        throw std::invalid_argument("undefined correlation: an input is constant");
    }
    return std::clamp(cov.value() / std::sqrt(vx.value() * vy.value()), -1.0, 1.0);
}

}  // namespace delvote
