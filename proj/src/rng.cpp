#include "delvote/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace delvote {

std::uint64_t CounterRng::next_below(std::uint64_t bound) {
    if (bound == 0) {
        throw std::invalid_argument("next_below requires a positive bound");
    }
    unsigned __int128 product = static_cast<unsigned __int128>(next_u64()) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
        while (low < threshold) {
            product = static_cast<unsigned __int128>(next_u64()) * bound;
            low = static_cast<std::uint64_t>(product);
        }
    }
    return static_cast<std::uint64_t>(product >> 64);
}

namespace {

std::uint64_t poisson_inversion(CounterRng& rng, double mean) {
    const double u = rng.next_u01();
    double pmf = std::exp(-mean);
    double cdf = pmf;
    std::uint64_t k = 0;
    // Hard stop far beyond any realistic quantile, in case cdf stalls in fp.
    const std::uint64_t limit =
        static_cast<std::uint64_t>(mean + 40.0 * std::sqrt(mean + 1.0) + 50.0);
    while (u > cdf && k < limit) {
        ++k;
        pmf *= mean / static_cast<double>(k);
        cdf += pmf;
    }
    return k;
}

// Transformed rejection with squeeze (Hoermann's PTRS), valid for mean >= 10.
std::uint64_t poisson_ptrs(CounterRng& rng, double mean) {
    const double log_mean = std::log(mean);
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = rng.next_u01() - 0.5;
        const double v = rng.next_u01();
        const double us = 0.5 - std::abs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) {
            return static_cast<std::uint64_t>(kf);
        }
        if (kf < 0.0 || (us < 0.013 && v > us)) {
            continue;
        }
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            kf * log_mean - mean - std::lgamma(kf + 1.0)) {
            return static_cast<std::uint64_t>(kf);
        }
    }
}

}  // namespace

std::uint64_t sample_poisson(CounterRng& rng, double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) {
        throw std::invalid_argument("Poisson mean must be finite and nonnegative");
    }
    if (mean == 0.0) return 0;
    if (mean < 30.0) return poisson_inversion(rng, mean);
    return poisson_ptrs(rng, mean);
}

}  // namespace delvote
