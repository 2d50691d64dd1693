#include "delvote/delegation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <string>

namespace delvote {
namespace {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b, const char* what) {
    std::uint64_t out = 0;
    if (__builtin_add_overflow(a, b, &out)) {
        throw std::overflow_error(what);
    }
    return out;
}

// n^m, or throws CapExceeded when it exceeds cap.
std::uint64_t assignment_count(std::uint64_t n, std::size_t m, std::uint64_t cap) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < m; ++i) {
        if (count > cap / n) {
            throw CapExceeded("delegation enumeration too large (" + std::to_string(n) + "^" +
                              std::to_string(m) + " assignments > cap " + std::to_string(cap) +
                              "); use the equal-weight fast path or Monte Carlo");
        }
        count *= n;
    }
    return count;
}

double log_choose(std::uint64_t n, std::uint64_t k) {
    return std::lgamma(static_cast<double>(n) + 1.0) -
           std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

// Binomial(m, q) pmf for 0 < q < 1, built outward from the mode so far
// tails underflow to zero instead of poisoning the recurrence.
std::vector<double> binomial_pmf(std::uint64_t m, double q) {
    std::vector<double> pmf(m + 1, 0.0);
    std::uint64_t mode = static_cast<std::uint64_t>(
        std::floor((static_cast<double>(m) + 1.0) * q));
    mode = std::min(mode, m);
    pmf[mode] = std::exp(log_choose(m, mode) + static_cast<double>(mode) * std::log(q) +
                         static_cast<double>(m - mode) * std::log1p(-q));
    const double odds = q / (1.0 - q);
    for (std::uint64_t h = mode; h < m; ++h) {
        pmf[h + 1] = pmf[h] * (static_cast<double>(m - h) / static_cast<double>(h + 1)) * odds;
    }
    for (std::uint64_t h = mode; h > 0; --h) {
        pmf[h - 1] = pmf[h] * (static_cast<double>(h) / static_cast<double>(m - h + 1)) / odds;
    }
    return pmf;
}

// suffix[h] = P[X >= h]; suffix[m+1] = 0.
std::vector<double> suffix_sums(const std::vector<double>& pmf) {
    std::vector<double> suffix(pmf.size() + 1, 0.0);
    long double acc = 0.0L;
    for (std::size_t h = pmf.size(); h-- > 0;) {
        acc += pmf[h];
        suffix[h] = static_cast<double>(std::min<long double>(acc, 1.0L));
    }
    return suffix;
}

}  // namespace

DelegationScenario::DelegationScenario(WeightVector voters,
                                       std::vector<std::uint64_t> delegators,
                                       SupportProbability p)
    : voters_(std::move(voters)), delegators_(std::move(delegators)), p_(p),
      combined_total_(voters_.total()) {
    if (voters_.size() < 2) {
        throw std::invalid_argument("a delegation scenario needs at least two voters");
    }
    for (std::uint64_t d : delegators_) {
        combined_total_ =
            checked_add(combined_total_, d, "combined voter+delegator weight overflows 64 bits");
    }
}

OutcomeDistribution enumerate_post_delegation(const DelegationScenario& scenario,
                                              std::uint64_t max_assignments) {
    const std::vector<std::uint64_t>& base = scenario.voters().values();
    const std::uint64_t n = base.size();
    const std::uint64_t total =
        assignment_count(n, scenario.delegators().size(), max_assignments);

    // One merge pass per delegator keeps the map at the distinct-vector size.
    std::map<std::vector<std::uint64_t>, std::uint64_t> grouped;
    grouped.emplace(base, 1);
    for (std::uint64_t d : scenario.delegators()) {
        std::map<std::vector<std::uint64_t>, std::uint64_t> next;
        for (const auto& [vec, count] : grouped) {
            for (std::uint64_t j = 0; j < n; ++j) {
                std::vector<std::uint64_t> grown = vec;
                grown[j] += d;
                next[std::move(grown)] += count;
            }
        }
        grouped = std::move(next);
    }

    OutcomeDistribution dist;
    dist.total_assignments = total;
    dist.entries.reserve(grouped.size());
    for (auto& [vec, count] : grouped) {
        dist.entries.push_back({WeightVector(vec), count,
                                static_cast<double>(count) / static_cast<double>(total)});
    }
    return dist;
}

double post_delegation_win_probability(const DelegationScenario& scenario,
                                       std::uint64_t max_assignments,
                                       std::size_t max_voters,
                                       std::uint64_t max_weight_sum) {
    const OutcomeDistribution dist = enumerate_post_delegation(scenario, max_assignments);
    NeumaierSum acc;
    for (const auto& entry : dist.entries) {
        acc.add(static_cast<double>(entry.assignments) *
                win_probability(entry.weights, scenario.p(), max_voters, max_weight_sum));
    }
    return std::clamp(acc.value() / static_cast<double>(dist.total_assignments), 0.0, 1.0);
}

double equalweight_delegation_probability(const WeightVector& voters, std::uint64_t m,
                                          SupportProbability p, std::size_t max_voters,
                                          std::uint64_t max_delegators) {
    const std::size_t n = voters.size();
    max_voters = std::min<std::size_t>(max_voters, 63);
    if (n > max_voters) {
        throw CapExceeded("instance too large for enumeration (" + std::to_string(n) +
                          " voters > cap " + std::to_string(max_voters) + "); use Monte Carlo");
    }
    if (m > max_delegators) {
        throw CapExceeded("too many unit-weight delegators (" + std::to_string(m) + " > cap " +
                          std::to_string(max_delegators) + "); use Monte Carlo");
    }
    if (m == 0) {
        return win_probability_enum(voters, p, max_voters);
    }
    const std::uint64_t grand_total =
        checked_add(voters.total(), m, "combined voter+delegator weight overflows 64 bits");

    // Per-cardinality pmf of the number of delegations landing inside the
    // support set, and its upper-tail sums. Cardinality 0 and n are
    // deterministic (no table needed).
    std::vector<std::vector<double>> pmf(n + 1), tail(n + 1);
    for (std::size_t k = 1; k < n; ++k) {
        pmf[k] = binomial_pmf(m, static_cast<double>(k) / static_cast<double>(n));
        tail[k] = suffix_sums(pmf[k]);
    }

    const double pv = p.value();
    const double qv = 1.0 - pv;
    std::vector<double> p_pow(n + 1), q_pow(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        p_pow[k] = std::pow(pv, static_cast<double>(k));
        q_pow[k] = std::pow(qv, static_cast<double>(k));
    }

    const auto& w = voters.values();
    const std::uint64_t masks = std::uint64_t{1} << n;
    NeumaierSum acc;
    std::uint64_t gray = 0;
    std::uint64_t side = 0;
    std::size_t members = 0;
    for (std::uint64_t i = 0;; ++i) {
        // A wins with h delegations into S iff 2*(side + h) > grand_total,
        // ties at equality; deficit below is what 2h has to overcome.
        const __int128 deficit =
            static_cast<__int128>(grand_total) - 2 * static_cast<__int128>(side);
        double share;
        if (members == 0) {
            // h = 0 always; grand_total >= 1 so A never reaches half.
            share = 0.0;
        } else if (members == n) {
            // h = m always; 2*(total + m) > total + m holds whenever the
            // grand total is positive.
            share = 1.0;
        } else {
            const std::uint64_t h_win =
                deficit < 0 ? 0 : static_cast<std::uint64_t>(deficit / 2) + 1;
            share = h_win <= m ? tail[members][h_win] : 0.0;
            if (deficit >= 0 && deficit % 2 == 0) {
                const std::uint64_t h_tie = static_cast<std::uint64_t>(deficit / 2);
                if (h_tie <= m) share += 0.5 * pmf[members][h_tie];
            }
        }
        if (share != 0.0) {
            acc.add(p_pow[members] * q_pow[n - members] * share);
        }
        const std::uint64_t next = i + 1;
        if (next == masks) break;
        const unsigned b = static_cast<unsigned>(std::countr_zero(next));
        const std::uint64_t bit = std::uint64_t{1} << b;
        gray ^= bit;
        if (gray & bit) {
            side += w[b];
            ++members;
        } else {
            side -= w[b];
            --members;
        }
    }
    return std::clamp(acc.value(), 0.0, 1.0);
}

std::vector<std::uint64_t> adversarial_delegator_weights(const WeightVector& voters,
                                                         std::uint64_t m) {
    if (m < 1) {
        throw std::invalid_argument("the adversarial construction needs at least one delegator");
    }
    // Heavy delegator outweighs the other m-1 unit delegators and every
    // voter combined; overflow of the combined total is rejected up front.
    std::uint64_t heavy = checked_add(m - 1, voters.total(), "combined weight overflows 64 bits");
    heavy = checked_add(heavy, 1, "combined weight overflows 64 bits");
    std::uint64_t combined = checked_add(heavy, m - 1, "combined weight overflows 64 bits");
    combined = checked_add(combined, voters.total(), "combined weight overflows 64 bits");
    std::vector<std::uint64_t> delegators(m - 1, 1);
    delegators.push_back(heavy);
    return delegators;
}

}  // namespace delvote
