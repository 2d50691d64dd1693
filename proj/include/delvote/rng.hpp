#pragma once

#include <cstdint>

namespace delvote {

/// Counter-based pseudo-random stream keyed by (seed, stream index).
///
/// The k-th output is the SplitMix64 finalizer applied to
/// key + k * golden_gamma, where key is itself a mix of seed and stream.
/// Draws therefore depend only on (seed, stream, draw index), never on
/// which thread runs the stream — the property the Monte-Carlo estimators
/// rely on for scheduling-independent reproducibility. The scheme is fixed;
/// changing it would change every seeded result.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(derive(seed, stream)) {}

    std::uint64_t next_u64() noexcept {
        counter_ += kGamma;
        return mix(key_ + counter_);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double next_u01() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, bound), unbiased (multiply-shift with
    /// rejection). bound must be positive.
    std::uint64_t next_below(std::uint64_t bound);

    bool next_bernoulli(double p) noexcept { return next_u01() < p; }

  private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    static constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) noexcept {
        return mix(seed + kGamma) ^ mix(stream * 0xA24BAED4963EE407ull + 0x9FB21C651E98DF25ull);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Poisson draw with the given mean. Sequential CDF inversion (one uniform)
/// below mean 30; Hoermann's PTRS transformed rejection at and above. Both
/// methods are part of the seeded contract and must not be swapped out.
std::uint64_t sample_poisson(CounterRng& rng, double mean);

}  // namespace delvote
