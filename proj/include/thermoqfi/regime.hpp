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
 * Interrogation-time optimization and the asymptotic regime tables.
 *
 * The objective is the closed-form dT^2(t) of ramsey.hpp, evaluated in
 * log space so that very long interrogation times do not overflow. The
 * asymptotic branch formulas are evaluated as a "predicted"
 * column; the exact optimum is always computed independently.
 */
#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "dephasing_law.hpp"
#include "errors.hpp"
#include "optimize.hpp"
#include "probe.hpp"
#include "ramsey.hpp"

namespace thermoqfi {

enum class PhaseKind { optimal, suboptimal };

enum class BoundaryFlag { interior, at_t_cha, t_to_zero, at_t_max, no_information };

inline std::string to_string(BoundaryFlag f) {
    switch (f) {
    case BoundaryFlag::interior:
        return "interior";
    case BoundaryFlag::at_t_cha:
        return "at_t_cha";
    case BoundaryFlag::t_to_zero:
        return "t_to_zero";
    case BoundaryFlag::at_t_max:
        return "at_t_max";
    case BoundaryFlag::no_information:
        return "no_information";
    }
    return "?";
}

inline std::string to_string(PhaseKind p) { return p == PhaseKind::optimal ? "optimal" : "suboptimal"; }

struct RegimeSpec {
    int n = 1;
    double tau = 1.0;
    DephasingLaw law;
    double T = 1.0;
    StateKind kind = StateKind::product;
    PhaseKind phase = PhaseKind::optimal;
    std::optional<double> t_min; ///< default 1e-8 t_ref
    std::optional<double> t_max; ///< default 1e3 t_ref

    void validate() const {
        detail::require(n >= 1, "regime: n must be at least 1");
        detail::require(tau > 0.0, "regime: tau must be positive");
        detail::require(T > 0.0, "regime: temperature must be positive");
    }
};

struct RegimeBranch {
    std::string label = "crossover";
    double predicted = std::numeric_limits<double>::quiet_NaN();
};

struct OptimumReport {
    double t_star = 0.0;
    double delta_T_star = std::numeric_limits<double>::infinity();
    BoundaryFlag boundary_flag = BoundaryFlag::interior;
    std::string regime_label = "crossover";
    double predicted_delta_T = std::numeric_limits<double>::quiet_NaN();
    bool fallback_used = false; ///< the coarse scan was not unimodal
};

namespace detail {

inline ClosedForm closed_form_for(StateKind kind, PhaseKind phase) {
    if (kind == StateKind::product) {
        return phase == PhaseKind::optimal ? ClosedForm::product_opt : ClosedForm::product_sub;
    }
    return phase == PhaseKind::optimal ? ClosedForm::ghz_opt : ClosedForm::ghz_sub;
}

struct Objective {
    const RegimeSpec &spec;
    double m;     // coherence order
    double scale; // n or n^2

    explicit Objective(const RegimeSpec &s)
        : spec(s), m(s.kind == StateKind::ghz ? s.n : 1.0),
          scale(s.kind == StateKind::ghz ? double(s.n) * s.n : double(s.n)) {}

    [[nodiscard]] bool optimal() const { return spec.phase == PhaseKind::optimal; }

    /// ln dT^2(t)
    [[nodiscard]] double log_value(double t) const {
        const double g = spec.law.gamma(t, spec.T);
        const double gT = spec.law.dgamma_dT(t, spec.T);
        const double x = 2.0 * m * g;
        double log_a = 0.0;
        if (optimal()) {
            log_a = x > 30.0 ? x + std::log1p(-std::exp(-x)) : std::log(std::expm1(x));
        } else {
            log_a = x + std::log(2.0 - std::exp(-x));
        }
        return std::log(t) + log_a - std::log(scale * spec.tau * gT * gT);
    }

    /// d ln dT^2 / d ln t for a given local log slope of f(t).
    [[nodiscard]] double log_derivative(double t, double slope) const {
        const double g = spec.law.gamma(t, spec.T);
        const double x = 2.0 * m * g;
        const double dlog_a = optimal() ? -2.0 * m / std::expm1(-x) : 4.0 * m / (2.0 - std::exp(-x));
        return 1.0 + dlog_a * g * slope - 2.0 * slope;
    }

    [[nodiscard]] double log_derivative(double t) const { return log_derivative(t, spec.law.log_slope(t)); }
};

inline double log_spaced(double lo, double hi, std::size_t i, std::size_t count) {
    return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * double(i) / double(count - 1));
}

} // namespace detail

/// Closed-form limit of dT as t -> 0 for single-phase laws (0 for nu < 1
/// at the optimal fringe, the Markovian value at nu = 1).
inline std::optional<double> small_time_limit(const RegimeSpec &spec) {
    if (spec.law.two_phase()) {
        return std::nullopt;
    }
    const double a = spec.law.alpha(spec.T);
    const double da = spec.law.dalpha(spec.T);
    const double nu = spec.law.nu();
    const double exponent = spec.phase == PhaseKind::optimal ? 1.0 - nu : 1.0 - 2.0 * nu;
    if (exponent > 0.0) {
        return 0.0;
    }
    if (exponent == 0.0) {
        const double scale = spec.kind == StateKind::ghz ? double(spec.n) * spec.n : double(spec.n);
        const double prefactor = spec.phase == PhaseKind::optimal ? 2.0 * a / (spec.n * spec.tau * da * da)
                                                                  : 1.0 / (scale * spec.tau * da * da);
        return std::sqrt(prefactor);
    }
    return std::nullopt;
}

/// Verbatim asymptotic branch for the (n, nu, t_cha) point; "crossover"
/// with no prediction when no branch condition holds. "<<" is taken as a
/// ratio <= 0.01, ">>" as >= 100 and "~" as a ratio in [0.5, 2].
inline RegimeBranch classify_regime(int n, double nu, double t_cha, double alpha, double dalpha, double tau,
                                    StateKind kind, PhaseKind phase) {
    const double tc_nu = std::pow(t_cha, nu);
    const double q = n * alpha * tc_nu; // t_cha^nu relative to 1 / (n alpha)
    const double r = alpha * tc_nu;     // t_cha^nu relative to 1 / alpha
    const double D = tau * dalpha * dalpha;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double p = 2.0 - 1.0 / nu;
    const double c_u = std::pow(2.0 * p * alpha, p) * std::exp(-p);
    const double c_e = std::pow(2.0 * p * n * alpha, p) * std::exp(-p);
    const double k_u = std::pow(3.0 * alpha, 1.5) * std::exp(-1.5);
    const double k_e = std::pow(3.0 * n * alpha, 1.5) * std::exp(-1.5);
    const bool ghz = kind == StateKind::ghz;
    const double nn = double(n) * n;
    auto markov_like = [&](double time_term) { return std::sqrt(2.0 * alpha * time_term / (n * D)); };

    RegimeBranch b;
    if (phase == PhaseKind::optimal) {
        if (q <= 0.01) {
            b.label = "short_t_cha";
            if (nu > 0.5 && nu <= 1.0) {
                b.predicted = markov_like(std::pow(t_cha, 1.0 - nu));
            } else if (nu > 1.0) {
                b.predicted = ghz ? std::sqrt(c_e / (nn * D)) : std::sqrt(c_u / (n * D));
            } else {
                b.predicted = nan;
            }
        } else if (r <= 0.01 && q >= 100.0) {
            b.label = "intermediate_t_cha";
            if (ghz) {
                b.predicted = std::sqrt(k_e / (nn * D));
            } else if (nu <= 1.0) {
                b.predicted = markov_like(std::pow(t_cha, 1.0 - nu));
            } else {
                b.predicted = std::sqrt(c_u / (n * D));
            }
        } else if (r >= 100.0) {
            b.label = "long_t_cha";
            b.predicted = ghz ? std::sqrt(k_e / (nn * D)) : std::sqrt(k_u / (n * D));
        } else if (q >= 0.5 && q <= 2.0) {
            b.label = "matched_t_cha";
            if (ghz) {
                if (nu > 0.5 && nu < 2.0) {
                    b.predicted = std::sqrt(c_e / (nn * D));
                } else if (nu >= 2.0) {
                    b.predicted = std::sqrt(k_e / (nn * D));
                } else {
                    b.predicted = nan;
                }
            } else if (nu > 0.5 && nu < 1.0) {
                b.predicted = markov_like(std::pow(1.0 / n, 1.0 - nu));
            } else if (nu > 1.0) {
                b.predicted = std::sqrt(c_u / (n * D));
            } else {
                b.predicted = nan;
            }
        }
        return b;
    }
    if (q <= 1.0) {
        b.label = "short_t_cha";
        if (nu > 0.5) {
            b.predicted = ghz ? std::sqrt(2.0 * c_e / (nn * D)) : std::sqrt(2.0 * c_u / (n * D));
        } else {
            b.predicted = nan;
        }
    } else if (r <= 0.01 && q >= 100.0) {
        b.label = "intermediate_t_cha";
        b.predicted = ghz ? std::sqrt(2.0 * k_e / (nn * D)) : std::sqrt(2.0 * c_u / (n * D));
    } else if (r >= 100.0) {
        b.label = "long_t_cha";
        b.predicted = ghz ? std::sqrt(2.0 * k_e / (nn * D)) : std::sqrt(2.0 * k_u / (n * D));
    }
    return b;
}

/// Minimizes the closed-form dT(t) over t in [t_min, t_max].
///
/// A 400-point log scan checks unimodality; a unimodal objective is then
/// refined by golden-section search on ln t and polished by bisection on
/// the analytic d ln dT^2 / d ln t. Otherwise a 10^4-point scan replaces
/// the coarse one and fallback_used is set.
inline OptimumReport optimize_time(const RegimeSpec &spec) {
    spec.validate();
    OptimumReport rep;
    const auto branch = classify_regime(spec.n, spec.law.nu(), spec.law.t_cha().value_or(0.0),
                                        spec.law.alpha(spec.T), spec.law.dalpha(spec.T), spec.tau, spec.kind,
                                        spec.phase);
    rep.regime_label = branch.label;
    rep.predicted_delta_T = branch.predicted;
    if (spec.law.dalpha(spec.T) == 0.0) {
        rep.boundary_flag = BoundaryFlag::no_information;
        rep.t_star = std::numeric_limits<double>::quiet_NaN();
        return rep;
    }
    const double t_ref = spec.law.reference_time(spec.T);
    const double lo = spec.t_min.value_or(1e-8 * t_ref);
    const double hi = spec.t_max.value_or(1e3 * t_ref);
    detail::require(lo > 0.0 && lo < hi, "optimize_time: invalid time bracket");
    const detail::Objective obj(spec);

    auto scan = [&](std::size_t count) {
        std::vector<double> ts(count);
        std::vector<double> ls(count);
        for (std::size_t i = 0; i < count; ++i) {
            ts[i] = detail::log_spaced(lo, hi, i, count);
            ls[i] = obj.log_value(ts[i]);
        }
        return std::pair{ts, ls};
    };
    auto [ts, ls] = scan(400);
    int sign_changes = 0;
    int last_sign = 0;
    for (std::size_t i = 1; i < ts.size(); ++i) {
        const double diff = ls[i] - ls[i - 1];
        if (!std::isfinite(diff) || std::abs(diff) <= 1e-13 * (std::abs(ls[i]) + 1.0)) {
            continue;
        }
        const int s = diff > 0 ? 1 : -1;
        if (last_sign != 0 && s != last_sign) {
            ++sign_changes;
        }
        last_sign = s;
    }
    if (sign_changes > 1) {
        rep.fallback_used = true;
        std::tie(ts, ls) = scan(10000);
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < ts.size(); ++i) {
        if (ls[i] < ls[best]) {
            best = i;
        }
    }

    if (best == 0) {
        rep.boundary_flag = BoundaryFlag::t_to_zero;
        rep.t_star = 0.0;
        const auto limit = small_time_limit(spec);
        rep.delta_T_star = limit ? *limit : std::exp(0.5 * ls[0]);
        return rep;
    }
    if (best + 1 == ts.size()) {
        rep.boundary_flag = BoundaryFlag::at_t_max;
        rep.t_star = ts.back();
        rep.delta_T_star = std::exp(0.5 * ls.back());
        return rep;
    }

    const double a = std::log(ts[best - 1]);
    const double b = std::log(ts[best + 1]);
    const auto gs = golden_section([&](double u) { return obj.log_value(std::exp(u)); }, a, b, 1e-12, 400);
    double t_star = std::exp(gs.x);

    const auto t_cha = spec.law.t_cha();
    if (t_cha && *t_cha > ts[best - 1] && *t_cha < ts[best + 1]) {
        const auto [left, right] = spec.law.log_slopes_at_t_cha();
        const double d_left = obj.log_derivative(*t_cha, left);
        const double d_right = obj.log_derivative(*t_cha, right);
        if (d_left <= 0.0 && d_right >= 0.0) {
            rep.boundary_flag = BoundaryFlag::at_t_cha;
            rep.t_star = *t_cha;
            rep.delta_T_star = std::exp(0.5 * obj.log_value(*t_cha));
            return rep;
        }
    }
    // polish on the analytic stationarity condition
    auto dlog = [&](double u) { return obj.log_derivative(std::exp(u)); };
    double ua = a;
    double ub = b;
    if (t_cha) {
        const double uc = std::log(*t_cha);
        if (uc > ua && uc < ub) {
            (gs.x < uc ? ub : ua) = uc;
        }
    }
    if (dlog(ua) < 0.0 && dlog(ub) > 0.0) {
        t_star = std::exp(bisect(dlog, ua, ub));
    }
    rep.boundary_flag = BoundaryFlag::interior;
    rep.t_star = t_star;
    rep.delta_T_star = std::exp(0.5 * obj.log_value(t_star));
    return rep;
}

struct RegimeGrid {
    std::vector<int> ns;
    std::vector<double> nus;
    std::vector<double> t_chas; ///< 0 means single phase
    double T = 1.0;
    double tau = 1.0;
    TemperatureModel model = TemperatureModel::linear(1.0);
    StateKind kind = StateKind::product;
    PhaseKind phase = PhaseKind::optimal;
};

struct RegimeRow {
    int n = 1;
    double nu = 1.0;
    double t_cha = 0.0;
    std::string regime;
    double t_star = 0.0;
    double delta_T_exact = 0.0;
    double delta_T_branch = std::numeric_limits<double>::quiet_NaN();
    double ratio = std::numeric_limits<double>::quiet_NaN(); ///< exact / branch
    BoundaryFlag boundary_flag = BoundaryFlag::interior;
};

/// One row per (n, nu, t_cha) in grid-index order (n outermost).
inline std::vector<RegimeRow> regime_table(const RegimeGrid &grid) {
    std::vector<RegimeRow> rows;
    for (int n : grid.ns) {
        for (double nu : grid.nus) {
            for (double tc : grid.t_chas) {
                RegimeSpec spec{n, grid.tau, DephasingLaw(nu, grid.model, tc), grid.T, grid.kind, grid.phase, {}, {}};
                const auto rep = optimize_time(spec);
                RegimeRow row;
                row.n = n;
                row.nu = nu;
                row.t_cha = tc;
                row.regime = rep.regime_label;
                row.t_star = rep.t_star;
                row.delta_T_exact = rep.delta_T_star;
                row.delta_T_branch = rep.predicted_delta_T;
                row.ratio = rep.delta_T_star / rep.predicted_delta_T;
                row.boundary_flag = rep.boundary_flag;
                rows.push_back(row);
            }
        }
    }
    return rows;
}

struct ScalingFit {
    double beta = 0.0;      ///< dT* ~ n^(-beta)
    double intercept = 0.0; ///< ln dT* at n = 1
    std::vector<double> delta_T;
};

/// Least-squares slope of ln dT* against ln n.
inline ScalingFit scaling_fit(StateKind kind, const DephasingLaw &law, const std::vector<int> &ns, double tau,
                              double T, PhaseKind phase = PhaseKind::optimal) {
    detail::require(ns.size() >= 3, "scaling_fit: need at least three particle numbers");
    ScalingFit fit;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int n : ns) {
        const auto rep = optimize_time(RegimeSpec{n, tau, law, T, kind, phase, {}, {}});
        detail::require(std::isfinite(rep.delta_T_star) && rep.delta_T_star > 0.0,
                        "scaling_fit: optimum is not finite and positive");
        fit.delta_T.push_back(rep.delta_T_star);
        const double x = std::log(double(n));
        const double y = std::log(rep.delta_T_star);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double k = double(ns.size());
    const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    fit.beta = -slope;
    fit.intercept = (sy - slope * sx) / k;
    return fit;
}

} // namespace thermoqfi
