#include "delvote/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>
#include <vector>

#include "delvote/rng.hpp"

namespace delvote {
namespace {

constexpr double kZ95 = 1.959963984540054;

struct Tally {
    std::uint64_t wins = 0;
    std::uint64_t ties = 0;
};

// Runs `replicate(r, tally)` for r in [0, replicates), chunked across
// threads. Integer tallies merge exactly, so the thread count never changes
// the result.
template <typename Replicate>
Tally run_replicates(std::uint64_t replicates, unsigned threads, Replicate replicate) {
    if (threads <= 1 || replicates < 2048) {
        Tally tally;
        for (std::uint64_t r = 0; r < replicates; ++r) replicate(r, tally);
        return tally;
    }
    const std::uint64_t chunks = std::min<std::uint64_t>(threads, replicates);
    std::vector<Tally> partial(chunks);
    std::vector<std::thread> workers;
    workers.reserve(chunks);
    for (std::uint64_t c = 0; c < chunks; ++c) {
        const std::uint64_t lo = replicates / chunks * c;
        const std::uint64_t hi = (c + 1 == chunks) ? replicates : replicates / chunks * (c + 1);
        workers.emplace_back([&, lo, hi, c] {
            for (std::uint64_t r = lo; r < hi; ++r) replicate(r, partial[c]);
        });
    }
    for (auto& t : workers) t.join();
    Tally tally;
    for (const Tally& part : partial) {
        tally.wins += part.wins;
        tally.ties += part.ties;
    }
    return tally;
}

Estimate make_estimate(const Tally& tally, std::uint64_t replicates, std::uint64_t seed,
                       CiMethod ci) {
    const double r = static_cast<double>(replicates);
    const double score_sum =
        static_cast<double>(tally.wins) + 0.5 * static_cast<double>(tally.ties);
    const double score_sq_sum =
        static_cast<double>(tally.wins) + 0.25 * static_cast<double>(tally.ties);
    const double mean = score_sum / r;
    double lo = mean;
    double hi = mean;
    if (ci == CiMethod::NormalContinuity) {
        const double denom = replicates > 1 ? r - 1.0 : 1.0;
        const double var = std::max(0.0, (score_sq_sum - r * mean * mean) / denom);
        const double half = kZ95 * std::sqrt(var / r) + 0.5 / r;
        lo = mean - half;
        hi = mean + half;
    } else {
        const double z2 = kZ95 * kZ95;
        const double denom = 1.0 + z2 / r;
        const double center = (mean + z2 / (2.0 * r)) / denom;
        const double half =
            kZ95 * std::sqrt(mean * (1.0 - mean) / r + z2 / (4.0 * r * r)) / denom;
        lo = center - half;
        hi = center + half;
    }
    return Estimate{mean, std::clamp(lo, 0.0, 1.0), std::clamp(hi, 0.0, 1.0), replicates, seed};
}

void require_replicates(std::uint64_t replicates) {
    if (replicates < 100) {
        throw std::invalid_argument("replicates too small (minimum 100)");
    }
}

}  // namespace

Estimate mc_win_probability(const DelegationScenario& scenario, std::uint64_t replicates,
                            std::uint64_t seed, CiMethod ci, unsigned threads) {
    require_replicates(replicates);
    const std::vector<std::uint64_t>& w = scenario.voters().values();
    const std::vector<std::uint64_t>& d = scenario.delegators();
    const std::uint64_t n = w.size();
    const std::uint64_t total = scenario.combined_total();
    const double p = scenario.p().value();

    auto replicate = [&](std::uint64_t r, Tally& tally) {
        CounterRng rng(seed, r);
        static thread_local std::vector<std::uint8_t> supports;
        supports.assign(n, 0);
        std::uint64_t a_side = 0;
        for (std::uint64_t j = 0; j < n; ++j) {
            const bool s = rng.next_bernoulli(p);
            supports[j] = s ? 1 : 0;
            if (s) a_side += w[j];
        }
        for (std::uint64_t dw : d) {
            const std::uint64_t target = rng.next_below(n);
            if (supports[target]) a_side += dw;
        }
        const std::uint64_t rest = total - a_side;
        if (a_side > rest) {
            ++tally.wins;
        } else if (a_side == rest) {
            ++tally.ties;
        }
    };
    return make_estimate(run_replicates(replicates, threads, replicate), replicates, seed, ci);
}

Estimate mc_large_election(const LargeElectionParams& params, std::uint64_t replicates,
                           std::uint64_t seed, CiMethod ci, unsigned threads) {
    require_replicates(replicates);
    if (!(params.scale > 0.0) || !std::isfinite(params.scale)) {
        throw std::invalid_argument("large-election scale must be positive and finite");
    }
    const double p = params.p.value();
    const double mean_a = params.scale * p;
    const double mean_b = params.scale * (1.0 - p);
    const std::uint64_t m = params.delegators;

    auto replicate = [&](std::uint64_t r, Tally& tally) {
        CounterRng rng(seed, r);
        const std::uint64_t a_voters = sample_poisson(rng, mean_a);
        const std::uint64_t b_voters = sample_poisson(rng, mean_b);
        if (a_voters + b_voters == 0) {
            ++tally.ties;  // empty electorate scores 1/2
            return;
        }
        const double to_a =
            static_cast<double>(a_voters) / static_cast<double>(a_voters + b_voters);
        std::uint64_t a_delegated = 0;
        for (std::uint64_t i = 0; i < m; ++i) {
            if (rng.next_bernoulli(to_a)) ++a_delegated;
        }
        const std::uint64_t a_total = a_voters + a_delegated;
        const std::uint64_t b_total = b_voters + (m - a_delegated);
        if (a_total > b_total) {
            ++tally.wins;
        } else if (a_total == b_total) {
            ++tally.ties;
        }
    };
    return make_estimate(run_replicates(replicates, threads, replicate), replicates, seed, ci);
}

}  // namespace delvote
