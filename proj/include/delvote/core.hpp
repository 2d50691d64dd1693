#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace delvote {

/// Thrown when an instance exceeds a configured feasibility cap (cost, not
/// validity). Callers that want to fall back to another method catch this
/// separately from std::invalid_argument.
class CapExceeded : public std::runtime_error {
  public:
    explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// Default feasibility caps. All of them are overridable per call.
struct Caps {
    /// Subset enumeration is O(2^n); refuse above this voter count.
    static constexpr std::size_t kEnumVoters = 25;
    /// The weight-sum DP is O(n * total_weight); refuse above this total.
    static constexpr std::uint64_t kDpWeightSum = 10'000'000;
    /// Delegation enumeration visits n^m assignments; refuse above this.
    static constexpr std::uint64_t kAssignments = 10'000'000;
    /// Equal-weight fast path is O(n*m + 2^n); refuse above this m.
    static constexpr std::uint64_t kFastPathDelegators = 100'000;
};

/// Exact nonnegative integer voting weights, one entry per voter.
///
/// Weights are kept as integers so that the exact-tie case (a subset holding
/// exactly half of the total weight) is decidable; fractional stakes should
/// be scaled to fixed-point units by the caller. Construction checks that
/// the vector is non-empty, has at least one positive entry, and that the
/// total fits in 64 bits.
class WeightVector {
  public:
    explicit WeightVector(std::vector<std::uint64_t> weights);
    WeightVector(std::initializer_list<std::uint64_t> weights)
        : WeightVector(std::vector<std::uint64_t>(weights)) {}

    std::size_t size() const noexcept { return weights_.size(); }
    std::uint64_t operator[](std::size_t i) const { return weights_[i]; }
    std::uint64_t total() const noexcept { return total_; }
    const std::vector<std::uint64_t>& values() const noexcept { return weights_; }

    /// n voters of weight one.
    static WeightVector ones(std::size_t n);

    friend bool operator==(const WeightVector&, const WeightVector&) = default;

  private:
    std::vector<std::uint64_t> weights_;
    std::uint64_t total_ = 0;
};

/// Probability that a single voter supports alternative A. Checked to lie
/// in [0,1]; results that rely on the majority assumption (p > 1/2) validate
/// that at the call site.
class SupportProbability {
  public:
    explicit SupportProbability(double p);

    double value() const noexcept { return p_; }
    double complement() const noexcept { return 1.0 - p_; }
    bool is_majority() const noexcept { return p_ > 0.5; }

    friend bool operator==(const SupportProbability&, const SupportProbability&) = default;

  private:
    double p_;
};

/// A set of voter indices, stored as a bitmask (supports up to 64 voters,
/// far beyond the enumeration cap). Index validity against a concrete
/// weight vector is checked by the operations that combine the two.
class VoterSubset {
  public:
    constexpr VoterSubset() = default;
    constexpr explicit VoterSubset(std::uint64_t bits) : bits_(bits) {}

    static VoterSubset of(std::initializer_list<std::size_t> indices);
    /// All voters 0..n-1.
    static VoterSubset full(std::size_t n);

    constexpr std::uint64_t bits() const noexcept { return bits_; }
    bool contains(std::size_t i) const;
    VoterSubset with(std::size_t i) const;
    std::size_t count() const noexcept;
    constexpr bool empty() const noexcept { return bits_ == 0; }

    friend bool operator==(const VoterSubset&, const VoterSubset&) = default;

  private:
    std::uint64_t bits_ = 0;
};

enum class WeightClass {
    EqualWeight,    ///< all voters hold the same weight
    DominantWeight, ///< one voter holds strictly more than half the total
    Other,
};

struct DistributionClass {
    WeightClass kind = WeightClass::Other;
    /// Set iff kind == DominantWeight.
    std::optional<std::size_t> dominant_index;

    friend bool operator==(const DistributionClass&, const DistributionClass&) = default;
};

/// Neumaier-compensated accumulator. Exact when every addend is exactly
/// representable and no partial sum rounds (the p=1/2 symmetry case relies
/// on this).
class NeumaierSum {
  public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Sum of the weights of the subset's members. Throws std::out_of_range if
/// the subset references an index >= weights.size().
std::uint64_t total_weight(VoterSubset subset, const WeightVector& weights);

/// Outcome indicator for A when exactly the members of `subset` support A:
/// 1 if they hold strictly more than half of the total weight, 1/2 on an
/// exact half split, 0 otherwise. The comparison is done in integer
/// arithmetic (subset weight vs. remaining weight), never by halving.
double outcome_share(VoterSubset subset, const WeightVector& weights);

/// Probability that A wins under conventional weighted voting, by explicit
/// enumeration of all 2^n support subsets. Each subset of size k occurs
/// with probability p^k (1-p)^(n-k) and contributes its outcome share.
///
/// Internally tallies, per subset cardinality, the exact number of winning
/// and tieing subsets (a Gray-code walk keeps the subset weight
/// incremental), then combines the n+1 tallies with compensated summation.
/// With `threads > 1` the bitmask range is partitioned; the integer tallies
/// make the reduction order-independent, so results are bit-identical to
/// the serial mode.
///
/// Throws CapExceeded when n > max_voters.
double win_probability_enum(const WeightVector& weights, SupportProbability p,
                            std::size_t max_voters = Caps::kEnumVoters,
                            unsigned threads = 1);

/// Same value as win_probability_enum (within 1e-12), via a dynamic program
/// over achievable A-side weight sums: per-voter convolution of a
/// probability table indexed by total A weight, then the mass strictly
/// above half the total plus half the mass exactly at half.
///
/// Throws CapExceeded when the total weight exceeds max_weight_sum.
double win_probability_dp(const WeightVector& weights, SupportProbability p,
                          std::uint64_t max_weight_sum = Caps::kDpWeightSum);

/// Win probability with automatic method choice: the closed forms for
/// dominant-weight and equal-weight vectors, otherwise whichever of
/// enumeration and DP is feasible and cheaper. Throws CapExceeded when no
/// exact method applies (the message suggests Monte Carlo).
double win_probability(const WeightVector& weights, SupportProbability p,
                       std::size_t max_voters = Caps::kEnumVoters,
                       std::uint64_t max_weight_sum = Caps::kDpWeightSum,
                       unsigned threads = 1);

/// Classify a weight vector: DominantWeight(i) iff voter i holds strictly
/// more than half of the total (such an i is unique), EqualWeight iff all
/// entries are equal, Other otherwise. A single-voter vector is dominant.
DistributionClass classify(const WeightVector& weights);

/// Closed-form win probability for n equal-weight voters: the binomial
/// upper tail P[X > n/2] plus, for even n, half the mass at exactly n/2.
/// Exact Pascal-triangle coefficients are used up to n = 56 (the last row
/// whose entries fit a double exactly); beyond that, terms are evaluated in
/// log space.
double ew_win_probability(std::uint64_t n, SupportProbability p);

/// Closed-form win probability when a dominant voter exists: A wins iff
/// the dominant voter supports A, so the value is p for any weights.
double dw_win_probability(SupportProbability p);

}  // namespace delvote
