#pragma once

#include <cstdint>

#include "delvote/core.hpp"
#include "delvote/delegation.hpp"

namespace delvote {

enum class CiMethod {
    NormalContinuity,  ///< 95% normal approximation with 1/(2R) continuity correction
    Wilson,            ///< 95% Wilson score interval on the tie-adjusted win count
};

/// Monte-Carlo point estimate with a 95% confidence interval. Bit-identical
/// for a fixed (inputs, seed, replicates) triple regardless of thread count.
struct Estimate {
    double point = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::uint64_t replicates = 0;
    std::uint64_t seed = 0;

    double half_width() const noexcept { return (ci_high - ci_low) / 2.0; }

    friend bool operator==(const Estimate&, const Estimate&) = default;
};

/// Sampling estimator of the post-delegation win probability. Each
/// replicate r uses the counter stream (seed, r) and draws, in this fixed
/// order: one Bernoulli(p) support per voter, then one uniform target per
/// delegator. The replicate scores 1, 1/2 or 0 by exact integer comparison
/// of the A-side weight against the rest. Replicates reduce into integer
/// {win, tie} tallies, so parallel runs reproduce the serial result
/// bit-for-bit. Requires replicates >= 100.
Estimate mc_win_probability(const DelegationScenario& scenario, std::uint64_t replicates,
                            std::uint64_t seed, CiMethod ci = CiMethod::NormalContinuity,
                            unsigned threads = 1);

/// Large election with unit weights: the number of A-voters is
/// Poisson(n*p), the number of B-voters Poisson(n*(1-p)), and m unit
/// delegations each land on a uniformly chosen voter (A-side with
/// probability K/(K+L)). A wins on a strict surplus; exact ties and the
/// empty electorate score 1/2.
struct LargeElectionParams {
    double scale;  ///< Poisson parameter n; must be positive and finite
    SupportProbability p;
    std::uint64_t delegators;  ///< m unit-weight delegators
};

/// Estimate the large-election win probability. Per replicate, the stream
/// (seed, r) draws the A-voter count, the B-voter count, then m delegation
/// Bernoullis. Same determinism contract as mc_win_probability.
Estimate mc_large_election(const LargeElectionParams& params, std::uint64_t replicates,
                           std::uint64_t seed, CiMethod ci = CiMethod::NormalContinuity,
                           unsigned threads = 1);

}  // namespace delvote
