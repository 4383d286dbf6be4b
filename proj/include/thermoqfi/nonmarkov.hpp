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
 * Fisher-information non-Markovianity measure for a single qubit.
 *
 * The initial state is the equal superposition of |psi+> and |psi->, with
 * |psi+> pointing along the Bloch direction n. The reference dephasing acts
 * in the {|psi+>, |psi->} basis; external channels act in the computational
 * basis. Trajectories are propagated on the Bloch ball together with their
 * temperature derivative.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "channel.hpp"
#include "dephasing_law.hpp"
#include "errors.hpp"
#include "linalg.hpp"
#include "qfi.hpp"

namespace thermoqfi {

enum class RateKind { dephasing_rate, damping_rate };

/// Sampled rate with a trapezoid cumulative integral.
struct RateTrajectory {
    std::vector<double> times;
    std::vector<double> rates;
    RateKind kind = RateKind::dephasing_rate;

    void validate() const {
        detail::require_input(times.size() == rates.size(), "rate trajectory: size mismatch");
        detail::require_input(times.size() >= 2, "rate trajectory: need at least two samples");
        detail::require_input(times.front() <= 0.0, "rate trajectory: grid must start at t = 0");
        for (std::size_t i = 1; i < times.size(); ++i) {
            detail::require_input(times[i] > times[i - 1], "rate trajectory: times must be strictly increasing");
        }
    }

    [[nodiscard]] EnvironmentChannel channel() const {
        validate();
        auto rf = RateFunction::tabulated(times, rates);
        return kind == RateKind::dephasing_rate ? EnvironmentChannel::dephasing_rate(std::move(rf))
                                                : EnvironmentChannel::amplitude_damping(std::move(rf));
    }
};

using Bloch = std::array<double, 3>;

struct BlochState {
    Bloch r{};  ///< Bloch vector, +z is |0>
    Bloch dr{}; ///< temperature derivative
};

struct NonMarkovReference {
    DephasingLaw law;
    double T = 1.0;
};

struct FisherTrajectories {
    std::vector<double> times;
    std::vector<double> fisher_env; ///< F_E(t)
    std::vector<double> fisher_ref; ///< F(t)
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    [[nodiscard]] double length() const { return hi - lo; }
};

namespace detail {

inline double dot(const Bloch &a, const Bloch &b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

inline Bloch direction(double theta, double phi) {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

/// d n / d theta: the initial Bloch vector, orthogonal to n.
inline Bloch theta_tangent(double theta, double phi) {
    return {std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi), -std::sin(theta)};
}

/// Shrinks the part of (r, dr) orthogonal to axis by exp(-dg); d(dg)/dT = dg_T.
inline void reference_step(BlochState &s, const Bloch &axis, double dg, double dg_T) {
    const double f = std::exp(-dg);
    const double pr = dot(s.r, axis);
    const double pd = dot(s.dr, axis);
    for (int k = 0; k < 3; ++k) {
        const double perp_r = s.r[k] - pr * axis[k];
        const double perp_d = s.dr[k] - pd * axis[k];
        s.r[k] = pr * axis[k] + f * perp_r;
        s.dr[k] = pd * axis[k] + f * perp_d - dg_T * f * perp_r;
    }
}

/// External channel increment between t0 and t1 in the computational basis.
inline void external_step(BlochState &s, const EnvironmentChannel &env, double t0, double t1) {
    switch (env.kind()) {
    case ChannelKind::none:
        return;
    case ChannelKind::extra_dephasing: {
        const double f = std::exp(-(env.kappa(t1) - env.kappa(t0)));
        for (int k = 0; k < 2; ++k) {
            s.r[k] *= f;
            s.dr[k] *= f;
        }
        return;
    }
    case ChannelKind::amplitude_damping: {
        const double lam = env.survival(t1) / env.survival(t0);
        const double c = std::sqrt(lam);
        for (int k = 0; k < 2; ++k) {
            s.r[k] *= c;
            s.dr[k] *= c;
        }
        s.r[2] = lam * s.r[2] + (1.0 - lam);
        s.dr[2] *= lam;
        return;
    }
    }
}

inline Matrix bloch_operator(const Bloch &v, double identity_weight) {
    Matrix m(2, 2);
    m(0, 0) = Complex(identity_weight + v[2], 0.0);
    m(1, 1) = Complex(identity_weight - v[2], 0.0);
    m(0, 1) = Complex(v[0], -v[1]);
    m(1, 0) = Complex(v[0], v[1]);
    return 0.5 * m;
}

} // namespace detail

/// SLD QFI of the qubit state (I + r.sigma) / 2 with derivative dr.sigma / 2.
inline double bloch_qfi(const BlochState &s) {
    return sld_qfi(detail::bloch_operator(s.r, 1.0), detail::bloch_operator(s.dr, 0.0));
}

/// Propagates the state along the grid; sub-steps per interval use a
/// symmetric split (half reference, external, half reference).
inline std::vector<BlochState> propagate_bloch(const NonMarkovReference &ref, const EnvironmentChannel &env,
                                               double theta, double phi, const std::vector<double> &grid,
                                               int substeps = 4) {
    const Bloch axis = detail::direction(theta, phi);
    BlochState s;
    s.r = detail::theta_tangent(theta, phi);
    std::vector<BlochState> out;
    out.reserve(grid.size());
    double t_prev = 0.0;
    for (double t : grid) {
        if (t > t_prev) {
            for (int k = 0; k < substeps; ++k) {
                const double a = t_prev + (t - t_prev) * k / substeps;
                const double b = k + 1 == substeps ? t : t_prev + (t - t_prev) * (k + 1) / substeps;
                const double m = 0.5 * (a + b);
                const double g1 = ref.law.gamma(m, ref.T) - ref.law.gamma(a, ref.T);
                const double g1T = ref.law.dgamma_dT(m, ref.T) - ref.law.dgamma_dT(a, ref.T);
                const double g2 = ref.law.gamma(b, ref.T) - ref.law.gamma(m, ref.T);
                const double g2T = ref.law.dgamma_dT(b, ref.T) - ref.law.dgamma_dT(m, ref.T);
                detail::reference_step(s, axis, g1, g1T);
                detail::external_step(s, env, a, b);
                detail::reference_step(s, axis, g2, g2T);
            }
            t_prev = t;
        }
        out.push_back(s);
    }
    return out;
}

namespace detail {

inline void check_grid(const std::vector<double> &grid) {
    require_input(grid.size() >= 50, "non-Markovianity: grid needs at least 50 points");
    require_input(grid.front() >= 0.0, "non-Markovianity: grid must be nonnegative");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        require_input(grid[i] > grid[i - 1], "non-Markovianity: grid must be strictly increasing");
    }
}

inline void check_reference(const NonMarkovReference &ref) {
    require(ref.T > 0.0, "non-Markovianity: temperature must be positive");
    require(ref.law.dalpha(ref.T) != 0.0, "non-Markovianity: reference has zero temperature sensitivity");
}

} // namespace detail

inline FisherTrajectories fisher_trajectories(const NonMarkovReference &ref, const EnvironmentChannel &env,
                                              double theta, double phi, const std::vector<double> &grid) {
    detail::check_grid(grid);
    detail::check_reference(ref);
    FisherTrajectories out;
    out.times = grid;
    const auto with_env = propagate_bloch(ref, env, theta, phi, grid);
    const auto bare = propagate_bloch(ref, EnvironmentChannel::none(), theta, phi, grid);
    out.fisher_env.reserve(grid.size());
    out.fisher_ref.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out.fisher_env.push_back(bloch_qfi(with_env[i]));
        out.fisher_ref.push_back(bloch_qfi(bare[i]));
    }
    return out;
}

/// D(t) = d(F_E - F)/dt by central differences (one-sided at the ends).
inline std::vector<double> information_flow(const FisherTrajectories &tr) {
    const auto &t = tr.times;
    const std::size_t n = t.size();
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = tr.fisher_env[i] - tr.fisher_ref[i];
    }
    std::vector<double> d(n);
    d[0] = (g[1] - g[0]) / (t[1] - t[0]);
    d[n - 1] = (g[n - 1] - g[n - 2]) / (t[n - 1] - t[n - 2]);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        d[i] = (g[i + 1] - g[i - 1]) / (t[i + 1] - t[i - 1]);
    }
    return d;
}

/// Maximal runs of grid points where pred holds, as [first, last] intervals.
template <class Pred>
std::vector<Interval> intervals_where(const std::vector<double> &grid, Pred pred) {
    std::vector<Interval> out;
    bool open = false;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (pred(i)) {
            if (!open) {
                out.push_back({grid[i], grid[i]});
                open = true;
            }
            out.back().hi = grid[i];
        } else {
            open = false;
        }
    }
    return out;
}

inline std::vector<Interval> negativity_witness(const EnvironmentChannel &env, const std::vector<double> &grid) {
    return intervals_where(grid, [&](std::size_t i) { return env.rate(grid[i]) < 0.0; });
}

inline std::vector<Interval> negativity_witness(const RateTrajectory &rt) {
    rt.validate();
    return intervals_where(rt.times, [&](std::size_t i) { return rt.rates[i] < 0.0; });
}

/// |A n B| / |A u B| for two unions of disjoint intervals; 1 when both are empty.
inline double jaccard(const std::vector<Interval> &a, const std::vector<Interval> &b) {
    auto total = [](const std::vector<Interval> &v) {
        double s = 0.0;
        for (const auto &i : v) {
            s += i.length();
        }
        return s;
    };
    double inter = 0.0;
    for (const auto &x : a) {
        for (const auto &y : b) {
            inter += std::max(0.0, std::min(x.hi, y.hi) - std::max(x.lo, y.lo));
        }
    }
    const double uni = total(a) + total(b) - inter;
    if (uni <= 0.0) {
        return (a.empty() && b.empty()) ? 1.0 : 0.0;
    }
    return inter / uni;
}

struct StateSearchBudget {
    int lattice_points = 128;   ///< Fibonacci points; the two poles are added
    int max_refinements = 200;  ///< pattern-search evaluations
    double min_step = 1e-4;     ///< radians
    double positive_tol = 0.0;  ///< D > tol counts as information backflow
};

struct NonMarkovReport {
    double measure = 0.0;
    double theta = 0.0; ///< Bloch polar angle of |psi+>
    double phi = 0.0;   ///< Bloch azimuth of |psi+>
    std::vector<Interval> positive_intervals;
    std::string reference;
    double lattice_measure = 0.0;
    bool refinement_converged = true;
    int evaluations = 0;
};

struct MeasureAtState {
    double value = 0.0;
    std::vector<Interval> intervals;
};

inline MeasureAtState measure_at_state(const NonMarkovReference &ref, const EnvironmentChannel &env, double theta,
                                       double phi, const std::vector<double> &grid, double tol = 0.0) {
    const auto tr = fisher_trajectories(ref, env, theta, phi, grid);
    const auto d = information_flow(tr);
    MeasureAtState out;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        out.value += 0.5 * (std::max(d[i], 0.0) + std::max(d[i + 1], 0.0)) * (grid[i + 1] - grid[i]);
    }
    out.intervals = intervals_where(grid, [&](std::size_t i) { return d[i] > tol; });
    return out;
}

/// Poles first, then a Fibonacci lattice of `count` points.
inline std::vector<std::pair<double, double>> bloch_lattice(int count) {
    std::vector<std::pair<double, double>> pts{{0.0, 0.0}, {pi, 0.0}};
    const double golden = pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
        const double z = 1.0 - (2.0 * i + 1.0) / count;
        pts.emplace_back(std::acos(z), std::fmod(golden * i, 2.0 * pi));
    }
    return pts;
}

/// max over pure initial states of the integral of max(D, 0).
inline NonMarkovReport nonmarkov_measure(const NonMarkovReference &ref, const EnvironmentChannel &env,
                                         const std::vector<double> &grid, const StateSearchBudget &budget = {}) {
    detail::check_grid(grid);
    detail::check_reference(ref);
    detail::require_input(budget.lattice_points >= 128, "non-Markovianity: lattice needs at least 128 points");
    NonMarkovReport rep;
    rep.reference = ref.law.describe() + ";T=" + std::to_string(ref.T);
    const auto lattice = bloch_lattice(budget.lattice_points);
    double best = -1.0;
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < lattice.size(); ++i) {
        const double v = measure_at_state(ref, env, lattice[i].first, lattice[i].second, grid).value;
        ++rep.evaluations;
        if (v > best) {
            best = v;
            best_i = i;
        }
    }
    double theta = lattice[best_i].first;
    double phi = lattice[best_i].second;
    rep.lattice_measure = best;

    double step = std::sqrt(4.0 * pi / double(lattice.size()));
    int evals = 0;
    while (step >= budget.min_step && evals < budget.max_refinements) {
        bool improved = false;
        const std::array<std::pair<double, double>, 4> moves{{{step, 0.0}, {-step, 0.0}, {0.0, step}, {0.0, -step}}};
        for (const auto &[dt, dp] : moves) {
            const double th = std::clamp(theta + dt, 0.0, pi);
            const double v = measure_at_state(ref, env, th, phi + dp, grid).value;
            ++evals;
            if (v > best) {
                best = v;
                theta = th;
                phi += dp;
                improved = true;
                break;
            }
        }
        if (!improved) {
            step *= 0.5;
        }
    }
    rep.evaluations += evals;
    rep.refinement_converged = step < budget.min_step;
    if (!rep.refinement_converged) {
        theta = lattice[best_i].first;
        phi = lattice[best_i].second;
        best = rep.lattice_measure;
    }
    phi = std::fmod(phi, 2.0 * pi);
    if (phi < 0.0) {
        phi += 2.0 * pi;
    }
    const auto at = measure_at_state(ref, env, theta, phi, grid, budget.positive_tol);
    rep.measure = at.value;
    rep.theta = theta;
    rep.phi = phi;
    rep.positive_intervals = at.intervals;
    return rep;
}

/// Uniform grid of `points` samples on [0, t_end].
inline std::vector<double> uniform_grid(double t_end, std::size_t points) {
    detail::require_input(t_end > 0.0 && points >= 2, "uniform_grid: invalid arguments");
    std::vector<double> g(points);
    for (std::size_t i = 0; i < points; ++i) {
        g[i] = t_end * double(i) / double(points - 1);
    }
    return g;
}

} // namespace thermoqfi
