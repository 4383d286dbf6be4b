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
 * Variational quantum Fisher information through an explicit purification.
 *
 * Every probe i is paired with one ancilla qubit and the dephased state is
 * purified as
 *
 *     |Phi> = prod_i e^{-i phi t Z_i / 2} e^{-i theta Z_i Y_i^E} |psi>|0...0>_E
 *
 * with cos(2 theta) = e^{-gamma}. The QFI is the minimum over ancilla
 * generators h_E of 4 Var(H - h_E), where H |Phi> = i d|Phi>/dT. The
 * ansatz is h_E = sum_i (zeta X_i + eta Y_i + delta Z_i) on the ancillas.
 */
#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "dephasing_law.hpp"
#include "errors.hpp"
#include "linalg.hpp"
#include "optimize.hpp"
#include "probe.hpp"

namespace thermoqfi {

struct VariationalOperator {
    double zeta = 0.0;
    double eta_v = 0.0;
    double delta = 0.0;

    /// zeta X + eta Y + delta Z on one ancilla qubit (Hermitian).
    [[nodiscard]] Matrix2 single_ancilla() const {
        return zeta * detail::pauli_x() + eta_v * detail::pauli_y() + delta * detail::pauli_z();
    }

    [[nodiscard]] Eigen::Vector3d as_vector() const { return {zeta, eta_v, delta}; }

    static VariationalOperator from_vector(const Eigen::Vector3d &v) { return {v(0), v(1), v(2)}; }
};

/// Purified dephased ensemble. Amplitudes are indexed s * 2^n + e with the
/// system index s in the high bits.
class Purification {
  public:
    Purification(Vector system_state, DephasingLaw law, double t, double phase_rate = 0.0)
        : psi_(std::move(system_state)), law_(std::move(law)), t_(t), phase_rate_(phase_rate) {
        detail::require_input(detail::is_power_of_two(static_cast<std::size_t>(psi_.size())),
                              "purification: state dimension must be a power of two");
        detail::require_input(std::abs(psi_.norm() - 1.0) <= 1e-12, "purification: state is not normalized");
        detail::require(t_ >= 0.0, "purification: time must be nonnegative");
        n_ = detail::qubits_of(static_cast<std::size_t>(psi_.size()));
    }

    [[nodiscard]] int qubits() const { return n_; }
    [[nodiscard]] double time() const { return t_; }
    [[nodiscard]] const DephasingLaw &law() const { return law_; }
    [[nodiscard]] const Vector &system_state() const { return psi_; }

    [[nodiscard]] Vector state(double T) const { return build(T, false); }

    /// Analytic d|Phi>/dT.
    [[nodiscard]] Vector derivative(double T) const { return build(T, true); }

    /// Amplitudes reshaped to a (system x ancilla) matrix.
    [[nodiscard]] Matrix as_matrix(const Vector &phi) const {
        const auto d = static_cast<Eigen::Index>(detail::dimension(n_));
        Matrix m(d, d);
        for (Eigen::Index s = 0; s < d; ++s) {
            for (Eigen::Index e = 0; e < d; ++e) {
                m(s, e) = phi(s * d + e);
            }
        }
        return m;
    }

    [[nodiscard]] Matrix reduced_system(double T) const {
        const Matrix m = as_matrix(state(T));
        return m * m.adjoint();
    }

    [[nodiscard]] Matrix reduced_environment(double T) const {
        const Matrix m = as_matrix(state(T));
        return (m.transpose() * m.conjugate()).eval();
    }

    /// sin(theta), cos(theta) and d theta / dT with cos(2 theta) = e^{-gamma}.
    struct Angle {
        double sin;
        double cos;
        double dtheta;
    };

    [[nodiscard]] Angle angle(double T) const {
        const double g = law_.gamma(t_, T);
        const double gT = law_.dgamma_dT(t_, T);
        Angle a{};
        a.sin = std::sqrt(-0.5 * std::expm1(-g));
        a.cos = std::sqrt(0.5 * (1.0 + std::exp(-g)));
        // d theta = gamma_T e^{-gamma} / (2 sqrt(1 - e^{-2 gamma}))
        const double one_minus = -std::expm1(-2.0 * g);
        a.dtheta = (gT == 0.0 || one_minus <= 0.0) ? 0.0 : 0.5 * gT * std::exp(-g) / std::sqrt(one_minus);
        return a;
    }

  private:
    [[nodiscard]] Vector build(double T, bool derivative) const {
        const Angle ang = angle(T);
        const auto d = detail::dimension(n_);
        Vector out = Vector::Zero(static_cast<Eigen::Index>(d * d));
        for (std::size_t s = 0; s < d; ++s) {
            const Complex amp = psi_(static_cast<Eigen::Index>(s));
            if (amp == Complex(0.0, 0.0)) {
                continue;
            }
            const Complex phase =
                std::exp(Complex(0.0, -0.5 * phase_rate_ * t_ * detail::total_z(s, n_)));
            for (std::size_t e = 0; e < d; ++e) {
                // ancilla i ends in cos(theta)|0> + z_i sin(theta)|1>
                std::array<double, 64> f{};
                std::array<double, 64> df{};
                for (int i = 0; i < n_; ++i) {
                    const int z = detail::bit(s, i, n_) ? 1 : -1;
                    if (detail::bit(e, i, n_) == 0) {
                        f[i] = ang.cos;
                        df[i] = -ang.sin * ang.dtheta;
                    } else {
                        f[i] = z * ang.sin;
                        df[i] = z * ang.cos * ang.dtheta;
                    }
                }
                double value = 0.0;
                if (!derivative) {
                    value = 1.0;
                    for (int i = 0; i < n_; ++i) {
                        value *= f[i];
                    }
                } else {
                    for (int j = 0; j < n_; ++j) {
                        double term = df[j];
                        for (int i = 0; i < n_; ++i) {
                            if (i != j) {
                                term *= f[i];
                            }
                        }
                        value += term;
                    }
                }
                out(static_cast<Eigen::Index>(s * d + e)) = amp * phase * value;
            }
        }
        return out;
    }

    Vector psi_;
    DephasingLaw law_;
    double t_;
    double phase_rate_;
    int n_ = 1;
};

namespace detail {

/// (1 (x) sum_i g_i) |phi> with the same 2x2 g on every ancilla.
inline Vector apply_ancilla_sum(const Vector &phi, const Matrix2 &g, int n) {
    const auto d = dimension(n);
    Vector out = Vector::Zero(phi.size());
    for (std::size_t s = 0; s < d; ++s) {
        for (std::size_t e = 0; e < d; ++e) {
            const Complex amp = phi(static_cast<Eigen::Index>(s * d + e));
            if (amp == Complex(0.0, 0.0)) {
                continue;
            }
            for (int i = 0; i < n; ++i) {
                const std::size_t mask = std::size_t{1} << (n - 1 - i);
                const int b = (e & mask) ? 1 : 0;
                const std::size_t e0 = e & ~mask;
                const std::size_t e1 = e | mask;
                out(static_cast<Eigen::Index>(s * d + e0)) += g(0, b) * amp;
                out(static_cast<Eigen::Index>(s * d + e1)) += g(1, b) * amp;
            }
        }
    }
    return out;
}

/// Full 2^n x 2^n ancilla operator sum_i g_i.
inline Matrix ancilla_operator(const Matrix2 &g, int n) {
    const auto d = static_cast<Eigen::Index>(dimension(n));
    Matrix h = Matrix::Zero(d, d);
    for (Eigen::Index e = 0; e < d; ++e) {
        Vector basis = Vector::Zero(d);
        basis(e) = 1.0;
        for (int i = 0; i < n; ++i) {
            const std::size_t mask = std::size_t{1} << (n - 1 - i);
            const auto ue = static_cast<std::size_t>(e);
            const int b = (ue & mask) ? 1 : 0;
            h(static_cast<Eigen::Index>(ue & ~mask), e) += g(0, b);
            h(static_cast<Eigen::Index>(ue | mask), e) += g(1, b);
        }
    }
    return h;
}

} // namespace detail

/// 4 [<chi|chi> - |<Phi|chi>|^2] with |chi> = i d|Phi> - h_E |Phi>.
inline double variational_objective(const Vector &phi, const Vector &dphi, int n, const VariationalOperator &h) {
    const Vector chi = detail::I * dphi - detail::apply_ancilla_sum(phi, h.single_ancilla(), n);
    return 4.0 * (chi.squaredNorm() - std::norm(phi.dot(chi)));
}

inline double variational_objective(const Purification &p, double T, const VariationalOperator &h) {
    return variational_objective(p.state(T), p.derivative(T), p.qubits(), h);
}

struct OptimizerBudget {
    int max_iterations = 200;
    double gradient_tol = 1e-9;
    double lattice_scale = 0.5;
};

struct VariationalResult {
    double qfi = std::numeric_limits<double>::infinity();
    VariationalOperator argmin;
    bool converged = false;
    double gradient_norm = std::numeric_limits<double>::infinity();
    int starts = 0;
};

/// Multi-start BFGS over (zeta, eta, delta) from the 8 corners of a cube.
/// A non-converged result still carries the best point found.
inline VariationalResult variational_qfi(const Purification &p, double T, const OptimizerBudget &budget = {}) {
    detail::require(T > 0.0, "variational_qfi: temperature must be positive");
    const Vector phi = p.state(T);
    const Vector dphi = p.derivative(T);
    const int n = p.qubits();
    std::function<double(const Eigen::Vector3d &)> f = [&](const Eigen::Vector3d &v) {
        return variational_objective(phi, dphi, n, VariationalOperator::from_vector(v));
    };
    BfgsOptions opt;
    opt.gradient_tol = budget.gradient_tol;
    opt.max_iterations = budget.max_iterations;
    VariationalResult best;
    bool have = false;
    for (int corner = 0; corner < 8; ++corner) {
        const Eigen::Vector3d start{(corner & 1) ? budget.lattice_scale : -budget.lattice_scale,
                                    (corner & 2) ? budget.lattice_scale : -budget.lattice_scale,
                                    (corner & 4) ? budget.lattice_scale : -budget.lattice_scale};
        const auto r = minimize_bfgs<3>(f, start, opt);
        ++best.starts;
        // strict improvement keeps the lowest corner index on ties
        const bool better = !have || (r.converged && !best.converged) ||
                            (r.converged == best.converged && r.value < best.qfi);
        if (better) {
            best.qfi = r.value;
            best.argmin = VariationalOperator::from_vector(r.x);
            best.converged = r.converged;
            best.gradient_norm = r.gradient_norm;
            have = true;
        }
    }
    best.qfi = std::max(best.qfi, 0.0);
    return best;
}

/// Frobenius norm of h rho_E + rho_E h - i Tr_S(|dPhi><Phi| - |Phi><dPhi|),
/// evaluated for the representative h + c 1 whose generator has zero mean
/// (F is blind to c; the stationarity condition is not).
inline double optimality_residual(const VariationalOperator &h, const Purification &p, double T) {
    const Vector phi = p.state(T);
    const Vector dphi = p.derivative(T);
    const int n = p.qubits();
    const Matrix m = p.as_matrix(phi);
    const Matrix dm = p.as_matrix(dphi);
    const Matrix rho_e = m.transpose() * m.conjugate();
    const Matrix a = dm.transpose() * m.conjugate() - m.transpose() * dm.conjugate();
    Matrix hm = detail::ancilla_operator(h.single_ancilla(), n);
    const double mean_h = (hm * rho_e).trace().real();
    const double mean_gen = (detail::I * phi.dot(dphi)).real();
    hm += (mean_gen - mean_h) * Matrix::Identity(hm.rows(), hm.cols());
    const Matrix r = hm * rho_e + rho_e * hm - detail::I * a;
    return r.norm();
}

/// Squared uncertainty from the closed form with the (1 - <sum Z_i / n>)
/// factor, written with gamma and gamma_T so two-phase laws are accepted.
inline double optimal_precision_squared_tilted(int n, double tau, const DephasingLaw &law, double t, double T,
                                             double mean_z) {
    detail::require(n >= 1, "optimal precision: n must be at least 1");
    detail::require(t > 0.0 && tau > 0.0, "optimal precision: t and tau must be positive");
    detail::require(std::abs(mean_z) <= 1.0, "optimal precision: |<Z>| must not exceed 1");
    const double dgamma = law.dgamma_dT(t, T);
    if (mean_z == 1.0 || dgamma == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    const double g = law.gamma(t, T);
    return t * std::expm1(2.0 * g) / (n * tau * dgamma * dgamma * (1.0 - mean_z));
}

inline double optimal_precision_tilted(int n, double tau, const DephasingLaw &law, double t, double T, double mean_z) {
    return std::sqrt(optimal_precision_squared_tilted(n, tau, law, t, T, mean_z));
}

} // namespace thermoqfi
