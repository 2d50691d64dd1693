#include "delvote/core.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <span>
#include <thread>

namespace delvote {
namespace {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b, const char* what) {
    std::uint64_t out = 0;
    if (__builtin_add_overflow(a, b, &out)) {
        throw std::overflow_error(what);
    }
    return out;
}

struct SubsetTallies {
    // Per subset-cardinality counts of winning and exactly-tied subsets.
    std::vector<std::uint64_t> win;
    std::vector<std::uint64_t> tie;

    explicit SubsetTallies(std::size_t n) : win(n + 1, 0), tie(n + 1, 0) {}

    void merge(const SubsetTallies& other) {
        for (std::size_t k = 0; k < win.size(); ++k) {
            win[k] += other.win[k];
            tie[k] += other.tie[k];
        }
    }
};

// Walks masks lo..hi-1 in Gray-code order so the subset weight and
// cardinality update by a single voter per step.
void scan_masks(const std::vector<std::uint64_t>& w, std::uint64_t total,
                std::uint64_t lo, std::uint64_t hi, SubsetTallies& tallies) {
    const std::size_t n = w.size();
    std::uint64_t gray = lo ^ (lo >> 1);
    std::uint64_t weight = 0;
    std::size_t members = 0;
    for (std::size_t b = 0; b < n; ++b) {
        if ((gray >> b) & 1u) {
            weight += w[b];
            ++members;
        }
    }
    for (std::uint64_t i = lo; i < hi; ++i) {
        const std::uint64_t rest = total - weight;
        if (weight > rest) {
            ++tallies.win[members];
        } else if (weight == rest) {
            ++tallies.tie[members];
        }
        const std::uint64_t next = i + 1;
        if (next < hi) {
            const unsigned b = static_cast<unsigned>(std::countr_zero(next));
            const std::uint64_t bit = std::uint64_t{1} << b;
            gray ^= bit;
            if (gray & bit) {
                weight += w[b];
                ++members;
            } else {
                weight -= w[b];
                --members;
            }
        }
    }
}

double combine_tallies(const SubsetTallies& tallies, std::size_t n, double p) {
    const double q = 1.0 - p;
    NeumaierSum acc;
    for (std::size_t k = 0; k <= n; ++k) {
        const double coeff =
            static_cast<double>(tallies.win[k]) + 0.5 * static_cast<double>(tallies.tie[k]);
        if (coeff != 0.0) {
            acc.add(coeff * std::pow(p, static_cast<double>(k)) *
                    std::pow(q, static_cast<double>(n - k)));
        }
    }
    return std::clamp(acc.value(), 0.0, 1.0);
}

// Row n of Pascal's triangle; every entry is an exact integer in a double
// for n <= 56.
std::vector<double> binomial_row(std::uint64_t n) {
    std::vector<double> row{1.0};
    for (std::uint64_t i = 1; i <= n; ++i) {
        std::vector<double> next(i + 1, 1.0);
        for (std::uint64_t k = 1; k < i; ++k) {
            next[k] = row[k - 1] + row[k];
        }
        row = std::move(next);
    }
    return row;
}

double log_choose(std::uint64_t n, std::uint64_t k) {
    return std::lgamma(static_cast<double>(n) + 1.0) -
           std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

}  // namespace

WeightVector::WeightVector(std::vector<std::uint64_t> weights)
    : weights_(std::move(weights)) {
    if (weights_.empty()) {
        throw std::invalid_argument("weight vector must have at least one voter");
    }
    bool any_positive = false;
    for (std::uint64_t w : weights_) {
        total_ = checked_add(total_, w, "total voter weight overflows 64 bits");
        any_positive |= w > 0;
    }
    if (!any_positive) {
        throw std::invalid_argument("weight vector must have at least one positive weight");
    }
}

WeightVector WeightVector::ones(std::size_t n) {
    return WeightVector(std::vector<std::uint64_t>(n, 1));
}

SupportProbability::SupportProbability(double p) : p_(p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("support probability must lie in [0, 1]");
    }
}

VoterSubset VoterSubset::of(std::initializer_list<std::size_t> indices) {
    VoterSubset s;
    for (std::size_t i : indices) {
        s = s.with(i);
    }
    return s;
}

VoterSubset VoterSubset::full(std::size_t n) {
    if (n > 64) {
        throw std::out_of_range("voter subsets support at most 64 voters");
    }
    if (n == 64) {
        return VoterSubset(~std::uint64_t{0});
    }
    return VoterSubset((std::uint64_t{1} << n) - 1);
}

bool VoterSubset::contains(std::size_t i) const {
    return i < 64 && ((bits_ >> i) & 1u) != 0;
}

VoterSubset VoterSubset::with(std::size_t i) const {
    if (i >= 64) {
        throw std::out_of_range("voter index exceeds bitmask capacity (64)");
    }
    return VoterSubset(bits_ | (std::uint64_t{1} << i));
}

std::size_t VoterSubset::count() const noexcept {
    return static_cast<std::size_t>(std::popcount(bits_));
}

std::uint64_t total_weight(VoterSubset subset, const WeightVector& weights) {
    const std::size_t n = weights.size();
    if (n < 64 && (subset.bits() >> n) != 0) {
        throw std::out_of_range("subset references a voter index out of range");
    }
    std::uint64_t sum = 0;
    std::uint64_t bits = subset.bits();
    while (bits != 0) {
        const unsigned b = static_cast<unsigned>(std::countr_zero(bits));
        sum += weights[b];
        bits &= bits - 1;
    }
    return sum;
}

double outcome_share(VoterSubset subset, const WeightVector& weights) {
    const std::uint64_t side = total_weight(subset, weights);
    const std::uint64_t rest = weights.total() - side;
    if (side > rest) return 1.0;
    if (side == rest) return 0.5;
    return 0.0;
}

double win_probability_enum(const WeightVector& weights, SupportProbability p,
                            std::size_t max_voters, unsigned threads) {
    const std::size_t n = weights.size();
    max_voters = std::min<std::size_t>(max_voters, 63);
    if (n > max_voters) {
        throw CapExceeded("instance too large for enumeration (" + std::to_string(n) +
                          " voters > cap " + std::to_string(max_voters) +
                          "); use win_probability_dp or Monte Carlo");
    }
    const std::uint64_t masks = std::uint64_t{1} << n;
    SubsetTallies tallies(n);
    if (threads <= 1 || masks < (std::uint64_t{1} << 18)) {
        scan_masks(weights.values(), weights.total(), 0, masks, tallies);
    } else {
        const std::uint64_t chunks = std::min<std::uint64_t>(threads, masks);
        std::vector<SubsetTallies> partial(chunks, SubsetTallies(n));
        std::vector<std::thread> workers;
        workers.reserve(chunks);
        for (std::uint64_t c = 0; c < chunks; ++c) {
            const std::uint64_t lo = masks / chunks * c;
            const std::uint64_t hi = (c + 1 == chunks) ? masks : masks / chunks * (c + 1);
            workers.emplace_back([&, lo, hi, c] {
                scan_masks(weights.values(), weights.total(), lo, hi, partial[c]);
            });
        }
        for (auto& t : workers) t.join();
        for (const auto& part : partial) tallies.merge(part);
    }
    return combine_tallies(tallies, n, p.value());
}

double win_probability_dp(const WeightVector& weights, SupportProbability p,
                          std::uint64_t max_weight_sum) {
    const std::uint64_t total = weights.total();
    if (total > max_weight_sum) {
        throw CapExceeded("instance too large for the weight-sum DP (total weight " +
                          std::to_string(total) + " > cap " + std::to_string(max_weight_sum) +
                          "); use enumeration or Monte Carlo");
    }
    const double pv = p.value();
    const double qv = 1.0 - pv;
    std::vector<double> mass(total + 1, 0.0);
    mass[0] = 1.0;
    std::uint64_t reach = 0;
    for (std::uint64_t w : weights.values()) {
        if (w == 0) continue;  // a zero-weight supporter never moves the sum
        reach += w;
        for (std::uint64_t s = reach;; --s) {
            const double hit = (s >= w) ? mass[s - w] * pv : 0.0;
            mass[s] = mass[s] * qv + hit;
            if (s == 0) break;
        }
    }
    NeumaierSum acc;
    for (std::uint64_t s = total; s > total - s; --s) {
        acc.add(mass[s]);
    }
    double result = acc.value();
    if (total % 2 == 0) {
        result += 0.5 * mass[total / 2];
    }
    return std::clamp(result, 0.0, 1.0);
}

double win_probability(const WeightVector& weights, SupportProbability p,
                       std::size_t max_voters, std::uint64_t max_weight_sum,
                       unsigned threads) {
    const DistributionClass cls = classify(weights);
    if (cls.kind == WeightClass::DominantWeight) {
        return dw_win_probability(p);
    }
    if (cls.kind == WeightClass::EqualWeight) {
        return ew_win_probability(weights.size(), p);
    }
    const std::size_t n = weights.size();
    const bool enum_ok = n <= std::min<std::size_t>(max_voters, 63);
    const bool dp_ok = weights.total() <= max_weight_sum;
    if (enum_ok && dp_ok) {
        const long double enum_cost = std::pow(2.0L, static_cast<long double>(n));
        const long double dp_cost =
            static_cast<long double>(n) * (static_cast<long double>(weights.total()) + 1);
        return enum_cost <= dp_cost ? win_probability_enum(weights, p, max_voters, threads)
                                    : win_probability_dp(weights, p, max_weight_sum);
    }
    if (enum_ok) return win_probability_enum(weights, p, max_voters, threads);
    if (dp_ok) return win_probability_dp(weights, p, max_weight_sum);
    throw CapExceeded("instance too large for exact computation (" + std::to_string(n) +
                      " voters > cap " + std::to_string(max_voters) + " and total weight " +
                      std::to_string(weights.total()) + " > cap " +
                      std::to_string(max_weight_sum) + "); use Monte Carlo");
}

DistributionClass classify(const WeightVector& weights) {
    const auto& v = weights.values();
    std::size_t arg_max = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] > v[arg_max]) arg_max = i;
    }
    // 2*w_i > total, written without doubling to avoid overflow.
    if (v[arg_max] > weights.total() - v[arg_max]) {
        return {WeightClass::DominantWeight, arg_max};
    }
    if (std::all_of(v.begin(), v.end(), [&](std::uint64_t w) { return w == v[0]; })) {
        return {WeightClass::EqualWeight, std::nullopt};
    }
    return {WeightClass::Other, std::nullopt};
}

double ew_win_probability(std::uint64_t n, SupportProbability p) {
    if (n < 1) {
        throw std::invalid_argument("equal-weight closed form needs at least one voter");
    }
    const double pv = p.value();
    const double qv = 1.0 - pv;
    if (pv == 0.0) return 0.0;
    if (pv == 1.0) return 1.0;
    const std::uint64_t k_min = n / 2 + 1;  // smallest strict-majority count
    NeumaierSum acc;
    if (n <= 56) {
        const std::vector<double> binom = binomial_row(n);
        for (std::uint64_t k = k_min; k <= n; ++k) {
            acc.add(binom[k] * std::pow(pv, static_cast<double>(k)) *
                    std::pow(qv, static_cast<double>(n - k)));
        }
        if (n % 2 == 0) {
            const double half = static_cast<double>(n / 2);
            acc.add(0.5 * binom[n / 2] * std::pow(pv, half) * std::pow(qv, half));
        }
    } else {
        const double log_p = std::log(pv);
        const double log_q = std::log1p(-pv);
        for (std::uint64_t k = k_min; k <= n; ++k) {
            acc.add(std::exp(log_choose(n, k) + static_cast<double>(k) * log_p +
                             static_cast<double>(n - k) * log_q));
        }
        if (n % 2 == 0) {
            acc.add(0.5 * std::exp(log_choose(n, n / 2) +
                                   static_cast<double>(n / 2) * (log_p + log_q)));
        }
    }
    return std::clamp(acc.value(), 0.0, 1.0);
}

double dw_win_probability(SupportProbability p) {
    // A wins exactly when the dominant voter supports A.
    return p.value();
}

}  // namespace delvote
