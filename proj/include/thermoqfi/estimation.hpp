// Copyright 2026 The thermoqfi Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Monte-Carlo Ramsey experiments and maximum-likelihood temperature estimates.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "channel.hpp"
#include "dephasing_law.hpp"
#include "errors.hpp"
#include "optimize.hpp"
#include "ramsey.hpp"

namespace thermoqfi {

struct ExperimentPlan {
    double true_T = 1.0;
    RamseySetup setup;
    DephasingLaw law;
    EnvironmentChannel channel = EnvironmentChannel::none();
    std::int64_t shots = 1;
    std::uint64_t seed = 0;

    void validate() const {
        detail::require_input(shots >= 1, "experiment plan: shots must be positive");
        detail::require(true_T > 0.0, "experiment plan: temperature must be positive");
        setup.validate();
    }

    /// Two-outcome samples per shot: n for product probes, one parity for GHZ.
    [[nodiscard]] std::int64_t samples() const { return shots * detail::signal_count(setup.ensemble); }
};

struct Counts {
    std::int64_t n0 = 0;
    std::int64_t n1 = 0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t stream_key(std::uint64_t seed, std::uint64_t trial) {
    return splitmix64(splitmix64(seed) ^ splitmix64(trial + 0x632BE59BD9B4E019ULL));
}

inline double checked_p0(const ExperimentPlan &plan, double T) {
    const double p0 = ramsey_probabilities(plan.setup, plan.law, plan.channel, T).p0;
    if (!(p0 >= 0.0 && p0 <= 1.0)) {
        throw NumericalError("simulate_counts: outcome probability outside [0, 1]");
    }
    return p0;
}

} // namespace detail

/// Binomial counts for one trial; the stream depends only on (seed, trial).
inline Counts simulate_counts(const ExperimentPlan &plan, std::uint64_t trial = 0) {
    plan.validate();
    const double p0 = detail::checked_p0(plan, plan.true_T);
    std::mt19937_64 gen(detail::stream_key(plan.seed, trial));
    std::binomial_distribution<std::int64_t> dist(plan.samples(), p0);
    Counts c;
    c.n0 = dist(gen);
    c.n1 = plan.samples() - c.n0;
    return c;
}

struct MleResult {
    double T_hat = 0.0;
    bool saturated = false;
};

struct TemperatureBracket {
    double lo = 0.0;
    double hi = 0.0;
};

namespace detail {

inline double log_likelihood(const Counts &c, double p0) {
    const double q0 = std::clamp(p0, 1e-300, 1.0);
    const double q1 = std::clamp(1.0 - p0, 1e-300, 1.0);
    return double(c.n0) * std::log(q0) + double(c.n1) * std::log(q1);
}

} // namespace detail

/// Maximizes n0 log p0(T) + n1 log p1(T) over the bracket.
///
/// A golden-section search to relative 1e-10 is polished by inverting
/// p0(T) = n0 / (n0 + n1) when the bracket contains the root.
inline MleResult mle_estimate(const Counts &counts, const RamseySetup &setup, const DephasingLaw &law,
                              const EnvironmentChannel &channel, TemperatureBracket bracket) {
    detail::require_input(bracket.lo > 0.0 && bracket.lo < bracket.hi, "mle: invalid temperature bracket");
    detail::require_input(counts.n0 >= 0 && counts.n1 >= 0 && counts.n0 + counts.n1 > 0, "mle: invalid counts");
    auto p0 = [&](double T) { return ramsey_probabilities(setup, law, channel, T).p0; };
    auto nll = [&](double T) { return -detail::log_likelihood(counts, p0(T)); };
    MleResult out;
    if (counts.n0 == 0 || counts.n1 == 0) {
        out.saturated = true;
        out.T_hat = nll(bracket.lo) <= nll(bracket.hi) ? bracket.lo : bracket.hi;
        return out;
    }
    const auto gs = golden_section(nll, bracket.lo, bracket.hi, 1e-10);
    out.T_hat = gs.x;
    const double freq = double(counts.n0) / double(counts.n0 + counts.n1);
    auto g = [&](double T) { return p0(T) - freq; };
    const double glo = g(bracket.lo);
    const double ghi = g(bracket.hi);
    if (std::signbit(glo) != std::signbit(ghi)) {
        const double root = bisect(g, bracket.lo, bracket.hi);
        if (nll(root) <= nll(out.T_hat)) {
            out.T_hat = root;
        }
    }
    return out;
}

/// Inverts p0(T) = freq on the bracket, clamping to the nearer endpoint.
inline MleResult mle_from_frequency(double freq, const RamseySetup &setup, const DephasingLaw &law,
                                    const EnvironmentChannel &channel, TemperatureBracket bracket) {
    detail::require_input(freq >= 0.0 && freq <= 1.0, "mle: frequency outside [0, 1]");
    detail::require_input(bracket.lo > 0.0 && bracket.lo < bracket.hi, "mle: invalid temperature bracket");
    auto g = [&](double T) { return ramsey_probabilities(setup, law, channel, T).p0 - freq; };
    const double glo = g(bracket.lo);
    const double ghi = g(bracket.hi);
    MleResult out;
    if (std::signbit(glo) == std::signbit(ghi) && glo != 0.0 && ghi != 0.0) {
        out.saturated = true;
        out.T_hat = std::abs(glo) <= std::abs(ghi) ? bracket.lo : bracket.hi;
        return out;
    }
    out.T_hat = bisect(g, bracket.lo, bracket.hi);
    return out;
}

struct EstimateReport {
    double mean_T_hat = 0.0;
    double sample_variance = 0.0;
    double crb = 0.0;   ///< 1 / (shots F_per_shot)
    double ratio = 0.0; ///< sample_variance / crb
    double bias = 0.0;
    int trials = 0;
    int saturated = 0;
    std::vector<double> estimates;
};

/// Worker count: hardware concurrency capped by THERMOQFI_THREADS.
inline unsigned worker_count() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char *env = std::getenv("THERMOQFI_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) {
            n = std::min(n, static_cast<unsigned>(cap));
        }
    }
    return n;
}

/// Runs `trials` independent experiments; the default bracket is
/// [T/2, 2T] around the true temperature.
inline EstimateReport run_montecarlo(const ExperimentPlan &plan, int trials,
                                     std::optional<TemperatureBracket> bracket = std::nullopt,
                                     unsigned threads = 0) {
    plan.validate();
    detail::require_input(trials >= 2, "montecarlo: need at least two trials");
    const TemperatureBracket br = bracket.value_or(TemperatureBracket{0.5 * plan.true_T, 2.0 * plan.true_T});
    EstimateReport rep;
    rep.trials = trials;
    rep.estimates.assign(static_cast<std::size_t>(trials), 0.0);
    std::vector<char> sat(static_cast<std::size_t>(trials), 0);
    const unsigned workers = std::min<unsigned>(threads == 0 ? worker_count() : threads, unsigned(trials));
    auto work = [&](unsigned w) {
        for (int k = int(w); k < trials; k += int(workers)) {
            const Counts c = simulate_counts(plan, std::uint64_t(k));
            const auto r = mle_estimate(c, plan.setup, plan.law, plan.channel, br);
            rep.estimates[std::size_t(k)] = r.T_hat;
            sat[std::size_t(k)] = r.saturated ? 1 : 0;
        }
    };
    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work, w);
        }
        for (auto &th : pool) {
            th.join();
        }
    }
    double sum = 0.0;
    for (int k = 0; k < trials; ++k) {
        sum += rep.estimates[std::size_t(k)];
        rep.saturated += sat[std::size_t(k)];
    }
    rep.mean_T_hat = sum / trials;
    double ss = 0.0;
    for (double e : rep.estimates) {
        ss += (e - rep.mean_T_hat) * (e - rep.mean_T_hat);
    }
    rep.sample_variance = ss / (trials - 1);
    const double f = classical_fisher(plan.setup, plan.law, plan.channel, plan.true_T).fisher_per_shot;
    rep.crb = 1.0 / (double(plan.shots) * f);
    rep.ratio = rep.sample_variance / rep.crb;
    rep.bias = rep.mean_T_hat - plan.true_T;
    return rep;
}

} // namespace thermoqfi
