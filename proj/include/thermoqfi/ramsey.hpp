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
 * Ramsey readout of a dephased ensemble: outcome probabilities, classical
 * Fisher information and the closed-form temperature uncertainties.
 *
 * Product probes are read out one by one with p0 = (1 + cos(phase) V) / 2,
 * V = e^{-gamma - kappa} sqrt(lambda). GHZ probes use the two-outcome
 * parity signal p0 = (1 + cos(n phase) V_n) / 2 with V_n = V^n.
 */
#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "channel.hpp"
#include "dephasing_law.hpp"
#include "errors.hpp"
#include "probe.hpp"
#include "qfi.hpp"

namespace thermoqfi {

struct RamseySetup {
    ProbeEnsemble ensemble;
    double phase = pi; ///< w t, set directly
    double t = 1.0;    ///< interrogation time
    double tau = 1.0;  ///< total time budget

    /// N = tau / t, kept real-valued.
    [[nodiscard]] double repetitions() const { return tau / t; }

    void validate() const {
        ensemble.validate();
        detail::require(t > 0.0, "ramsey setup: t must be positive");
        detail::require(tau >= t, "ramsey setup: tau must be at least t");
    }
};

struct FisherResult {
    double fisher_per_shot = 0.0;
    double fisher_total = 0.0;
    double delta_T = std::numeric_limits<double>::infinity();
    bool divergent = false;

    static FisherResult from_per_shot(double per_shot, double repetitions) {
        FisherResult r;
        r.fisher_per_shot = per_shot;
        r.fisher_total = per_shot * repetitions;
        r.divergent = std::isinf(per_shot);
        r.delta_T = r.fisher_total > 0.0 ? 1.0 / std::sqrt(r.fisher_total) : std::numeric_limits<double>::infinity();
        return r;
    }
};

struct Probabilities {
    double p0 = 0.5;
    double p1 = 0.5;
};

namespace detail {

/// Number of probes sharing one coherence (1 for product, n for GHZ) and
/// the number of independent two-outcome signals (n for product, 1 for GHZ).
inline int coherence_order(const ProbeEnsemble &e) { return e.kind == StateKind::ghz ? e.n : 1; }
inline int signal_count(const ProbeEnsemble &e) { return e.kind == StateKind::ghz ? 1 : e.n; }

inline double fringe(const ProbeEnsemble &e, double phase) { return std::cos(coherence_order(e) * phase); }

} // namespace detail

/// Signal visibility: e^{-m(gamma + kappa)} lambda^{m/2} with m the coherence order.
inline double ramsey_visibility(const ProbeEnsemble &ensemble, const DephasingLaw &law,
                                const EnvironmentChannel &channel, double t, double T) {
    const int m = detail::coherence_order(ensemble);
    return std::exp(-m * (law.gamma(t, T) + channel.kappa(t))) * std::pow(channel.survival(t), 0.5 * m);
}

inline Probabilities ramsey_probabilities(const RamseySetup &setup, const DephasingLaw &law,
                                          const EnvironmentChannel &channel, double T) {
    setup.validate();
    detail::require(T > 0.0, "ramsey: temperature must be positive");
    const double v = ramsey_visibility(setup.ensemble, law, channel, setup.t, T);
    const double c = detail::fringe(setup.ensemble, setup.phase);
    Probabilities p;
    p.p0 = 0.5 * (1.0 + c * v);
    p.p1 = 0.5 * (1.0 - c * v);
    return p;
}

/// Closed-form Fisher information of the Ramsey readout.
///
/// Per shot: s m^2 c^2 V^2 gamma_T^2 / (1 - c^2 V^2), with s independent
/// signals and coherence order m.
inline FisherResult classical_fisher(const RamseySetup &setup, const DephasingLaw &law,
                                     const EnvironmentChannel &channel, double T) {
    setup.validate();
    detail::require(T > 0.0, "ramsey: temperature must be positive");
    const int m = detail::coherence_order(setup.ensemble);
    const int s = detail::signal_count(setup.ensemble);
    const double dgamma = law.dgamma_dT(setup.t, T);
    if (dgamma == 0.0) {
        return FisherResult::from_per_shot(0.0, setup.repetitions());
    }
    const double v = ramsey_visibility(setup.ensemble, law, channel, setup.t, T);
    const double c = detail::fringe(setup.ensemble, setup.phase);
    const double cv2 = c * c * v * v;
    const double denom = 1.0 - cv2;
    if (denom <= 0.0) {
        return FisherResult::from_per_shot(std::numeric_limits<double>::infinity(), setup.repetitions());
    }
    const double per_shot = s * double(m) * m * cv2 * dgamma * dgamma / denom;
    return FisherResult::from_per_shot(per_shot, setup.repetitions());
}

/// Sum_k (dp_k/dT)^2 / p_k. The derivative is analytic when dprob is given,
/// otherwise a five-point central difference with step 1e-5 T.
inline double fisher_from_probabilities(const std::function<std::vector<double>(double)> &prob, double T,
                                        const std::function<std::vector<double>(double)> &dprob = {}) {
    detail::require(T > 0.0, "fisher: temperature must be positive");
    const std::vector<double> p = prob(T);
    for (double pk : p) {
        detail::require_input(pk >= -1e-14, "fisher: negative probability");
    }
    std::vector<double> dp;
    if (dprob) {
        dp = dprob(T);
    } else {
        const double h = fd_relative_step * T;
        const auto m2 = prob(T - 2 * h);
        const auto m1 = prob(T - h);
        const auto p1 = prob(T + h);
        const auto p2 = prob(T + 2 * h);
        dp.resize(p.size());
        for (std::size_t k = 0; k < p.size(); ++k) {
            dp[k] = (m2[k] - 8.0 * m1[k] + 8.0 * p1[k] - p2[k]) / (12.0 * h);
        }
    }
    detail::require_input(dp.size() == p.size(), "fisher: derivative has the wrong length");
    double f = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k] <= 0.0) {
            if (dp[k] != 0.0) {
                return std::numeric_limits<double>::infinity();
            }
            continue;
        }
        f += dp[k] * dp[k] / p[k];
    }
    return f;
}

enum class ClosedForm { product_opt, ghz_opt, product_sub, ghz_sub };

/// Closed-form squared uncertainty
///
///     dT^2 = t (A - e^{-2 m gamma}) / (s_n tau e^{-2 m gamma} gamma_T^2)
///
/// with A = 1 at the optimal fringe (cos^2 = 1), A = 2 at cos^2 = 1/2,
/// m = 1, s_n = n for product and m = n, s_n = n^2 for GHZ. For
/// single-phase laws gamma_T^2 / t = alpha'^2 t^{2 nu - 1}.
inline double delta_T_squared_closed_form(ClosedForm kind, int n, double tau, const DephasingLaw &law, double t,
                                          double T) {
    detail::require(n >= 1, "closed form: n must be at least 1");
    detail::require(t > 0.0, "closed form: t must be positive");
    detail::require(tau > 0.0, "closed form: tau must be positive");
    const bool ghz = kind == ClosedForm::ghz_opt || kind == ClosedForm::ghz_sub;
    const bool sub = kind == ClosedForm::product_sub || kind == ClosedForm::ghz_sub;
    const double m = ghz ? n : 1.0;
    const double scale = ghz ? double(n) * n : double(n);
    const double dgamma = law.dgamma_dT(t, T);
    if (dgamma == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    const double x = 2.0 * m * law.gamma(t, T);
    // (A - e^{-x}) / e^{-x} = A e^{x} - 1
    const double ratio = sub ? 2.0 * std::exp(x) - 1.0 : std::expm1(x);
    return t * ratio / (scale * tau * dgamma * dgamma);
}

inline double delta_T_closed_form(ClosedForm kind, int n, double tau, const DephasingLaw &law, double t, double T) {
    return std::sqrt(delta_T_squared_closed_form(kind, n, tau, law, t, T));
}

// ---------------------------------------------------------------------------
// Density-matrix readout (the measurement oracle for the closed forms).

namespace detail {

/// U with U |m_+> = |0>, U |m_-> = |1>, m_pm = (|0> pm e^{i phase} |1>) / sqrt 2.
inline Matrix2 ramsey_rotation(double phase) {
    const double s = 1.0 / std::sqrt(2.0);
    const Complex e = std::exp(Complex(0.0, phase));
    Matrix2 u;
    u << s, s * std::conj(e), s, -s * std::conj(e);
    return u;
}

} // namespace detail

namespace detail {

inline double parity_expectation(const Matrix &rho, double phase) {
    const auto d = static_cast<std::size_t>(rho.rows());
    const int n = qubits_of(d);
    Complex expect = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
        const std::size_t comp = (d - 1) ^ a;
        const int ones = std::popcount(a);
        const Complex m = std::exp(Complex(0.0, phase * ((n - ones) - ones)));
        expect += rho(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(comp)) * m;
    }
    return expect.real();
}

inline std::vector<double> rotated_diagonal(const Matrix &rho, double phase) {
    const auto d = static_cast<std::size_t>(rho.rows());
    const int n = qubits_of(d);
    const std::array<Matrix2, 1> u{ramsey_rotation(phase)};
    Matrix r = rho;
    for (int q = 0; q < n; ++q) {
        r = apply_local_kraus(r, q, n, u);
    }
    std::vector<double> out(d);
    for (std::size_t a = 0; a < d; ++a) {
        out[a] = r(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a)).real();
    }
    return out;
}

} // namespace detail

/// Outcome distribution of the Ramsey readout applied to an n-probe state.
///
/// Product kind: every probe is measured in the {m_+, m_-} basis, giving
/// 2^n outcomes. GHZ kind: the parity observable
/// M = prod_i (e^{-i phase}|0><1| + e^{i phase}|1><0|), two outcomes.
inline std::vector<double> ramsey_outcomes(const Matrix &rho, StateKind kind, double phase) {
    if (kind == StateKind::ghz) {
        const double e = detail::parity_expectation(rho, phase);
        return {0.5 * (1.0 + e), 0.5 * (1.0 - e)};
    }
    return detail::rotated_diagonal(rho, phase);
}

/// Temperature derivative of ramsey_outcomes given drho/dT (the map is linear).
inline std::vector<double> ramsey_outcome_derivatives(const Matrix &drho, StateKind kind, double phase) {
    if (kind == StateKind::ghz) {
        const double e = detail::parity_expectation(drho, phase);
        return {0.5 * e, -0.5 * e};
    }
    return detail::rotated_diagonal(drho, phase);
}

/// Exact Ramsey and quantum Fisher information of the Kraus-evolved state,
/// next to the closed form that assumes only visibility loss.
struct ChannelFisherDiagnostic {
    double closed_form = 0.0;  ///< coherence-only closed form (per shot)
    double exact_ramsey = 0.0; ///< readout of the evolved density matrix
    double exact_qfi = 0.0;    ///< SLD QFI of the evolved density matrix
    double readout_gap = 0.0;  ///< exact_ramsey - closed_form
    double qfi_gap = 0.0;      ///< exact_qfi - closed_form
};

inline ChannelFisherDiagnostic channel_fisher_diagnostic(const RamseySetup &setup, const DephasingLaw &law,
                                                         const EnvironmentChannel &channel, double T) {
    setup.validate();
    ChannelFisherDiagnostic out;
    out.closed_form = classical_fisher(setup, law, channel, T).fisher_per_shot;
    const DensityMatrix rho0 = DensityMatrix::pure(setup.ensemble.initial_state());
    auto state = [&](double temp) {
        return evolve(rho0, setup.ensemble, law, channel, setup.t, temp).matrix();
    };
    auto probs = [&](double temp) { return ramsey_outcomes(state(temp), setup.ensemble.kind, setup.phase); };
    const auto ev = evolve_with_derivative(rho0, setup.ensemble, law, channel, setup.t, T);
    auto dprobs = [&](double) {
        return ramsey_outcome_derivatives(ev.drho_dT, setup.ensemble.kind, setup.phase);
    };
    out.exact_ramsey = fisher_from_probabilities(probs, T, dprobs);
    out.exact_qfi = sld_qfi(ev.rho.matrix(), ev.drho_dT);
    out.readout_gap = out.exact_ramsey - out.closed_form;
    out.qfi_gap = out.exact_qfi - out.closed_form;
    return out;
}

} // namespace thermoqfi
