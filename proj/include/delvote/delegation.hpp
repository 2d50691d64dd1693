#pragma once

#include <cstdint>
#include <vector>

#include "delvote/core.hpp"

namespace delvote {

/// Voters with exact weights, delegators with exact weights, and the
/// per-voter support probability: the full input of the post-delegation
/// model. Each delegator hands their entire weight to one voter chosen
/// uniformly at random (zero-weight voters are eligible recipients like any
/// other). Delegators may be absent (conventional voting).
class DelegationScenario {
  public:
    DelegationScenario(WeightVector voters, std::vector<std::uint64_t> delegators,
                       SupportProbability p);

    const WeightVector& voters() const noexcept { return voters_; }
    const std::vector<std::uint64_t>& delegators() const noexcept { return delegators_; }
    SupportProbability p() const noexcept { return p_; }
    /// Total voter weight plus total delegator weight; every post-delegation
    /// vector carries exactly this total.
    std::uint64_t combined_total() const noexcept { return combined_total_; }

  private:
    WeightVector voters_;
    std::vector<std::uint64_t> delegators_;
    SupportProbability p_;
    std::uint64_t combined_total_;
};

/// The exact distribution over post-delegation weight vectors. Entries are
/// position-sensitive (voter identity preserved), sorted lexicographically,
/// and carry both the exact assignment count and the derived probability
/// count / total_assignments.
struct OutcomeDistribution {
    struct Entry {
        WeightVector weights;
        std::uint64_t assignments;
        double probability;
    };

    std::vector<Entry> entries;
    std::uint64_t total_assignments = 0;
};

/// Enumerate all n^m delegation assignments (each with probability n^-m),
/// grouping identical resulting weight vectors. The walk recurses one
/// delegator at a time and merges eagerly, so memory follows the number of
/// distinct vectors rather than n^m. Throws CapExceeded when n^m exceeds
/// max_assignments.
OutcomeDistribution enumerate_post_delegation(const DelegationScenario& scenario,
                                              std::uint64_t max_assignments = Caps::kAssignments);

/// Exact post-delegation win probability: the outcome-distribution average
/// of the conventional win probability of each post-delegation vector.
/// Accumulates exact assignment counts and divides once, so degenerate
/// cases (p = 1, p = 1/2) come out exact.
double post_delegation_win_probability(const DelegationScenario& scenario,
                                       std::uint64_t max_assignments = Caps::kAssignments,
                                       std::size_t max_voters = Caps::kEnumVoters,
                                       std::uint64_t max_weight_sum = Caps::kDpWeightSum);

/// Fast path for m unit-weight delegators: sums over support subsets S the
/// probability that the delegations landing in S push S's weight past half
/// of (total + m). The inner binomial tail over the number of delegations
/// received by S is shared across subsets of equal cardinality via
/// precomputed pmf/suffix tables, giving O(n*m + 2^n) instead of O(2^n * m).
/// Agrees with enumerate_post_delegation-based evaluation within 1e-10
/// wherever both are feasible.
double equalweight_delegation_probability(const WeightVector& voters, std::uint64_t m,
                                          SupportProbability p,
                                          std::size_t max_voters = Caps::kEnumVoters,
                                          std::uint64_t max_delegators = Caps::kFastPathDelegators);

/// Delegator weights that force a dominant voter no matter who receives
/// what: m-1 unit weights plus one delegator of weight (m-1) + total + 1,
/// heavier than everything else combined. Post-delegation, the recipient of
/// the heavy delegation is always dominant, so A wins with probability
/// exactly p.
std::vector<std::uint64_t> adversarial_delegator_weights(const WeightVector& voters,
                                                         std::uint64_t m);

}  // namespace delvote
