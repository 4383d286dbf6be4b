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
 * Probe ensembles, density matrices and their exact evolution under
 * independent dephasing plus an optional external channel.
 *
 * Conventions: Z = |1><1| - |0><0| on every probe; qubit 0 is the most
 * significant bit of a basis index; a single-qubit coherence decays as
 * e^{-gamma(t, T)}.
 */
#pragma once

#include <array>
#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>

#include "channel.hpp"
#include "dephasing_law.hpp"
#include "errors.hpp"
#include "linalg.hpp"

namespace thermoqfi {

enum class StateKind { product, ghz };

inline std::string to_string(StateKind k) { return k == StateKind::product ? "product" : "ghz"; }

struct ProbeEnsemble {
    int n = 1;
    StateKind kind = StateKind::product;
    double omega0 = 0.0;            ///< level splitting w0
    double ramsey_phase_rate = 0.0; ///< detuning w in cos(w t)

    void validate() const {
        detail::require(n >= 1, "ensemble: n must be at least 1");
        detail::require(n <= 12, "ensemble: n above 12 is not supported by dense evolution");
    }

    [[nodiscard]] std::size_t dim() const { return detail::dimension(n); }

    /// Normalized initial state vector of the ensemble.
    [[nodiscard]] Vector initial_state() const {
        validate();
        const auto d = static_cast<Eigen::Index>(dim());
        Vector psi = Vector::Zero(d);
        if (kind == StateKind::product) {
            psi.setConstant(Complex(std::pow(2.0, -0.5 * n), 0.0));
        } else {
            psi(0) = psi(d - 1) = Complex(1.0 / std::sqrt(2.0), 0.0);
        }
        return psi;
    }
};

/// Product of identical single-qubit states with <Z> = mean_z and real
/// positive amplitudes.
inline Vector tilted_product_state(int n, double mean_z) {
    detail::require(std::abs(mean_z) <= 1.0, "tilted state: |<Z>| must not exceed 1");
    const double a0 = std::sqrt(0.5 * (1.0 - mean_z));
    const double a1 = std::sqrt(0.5 * (1.0 + mean_z));
    const auto d = static_cast<Eigen::Index>(detail::dimension(n));
    Vector psi(d);
    for (Eigen::Index a = 0; a < d; ++a) {
        const int ones = std::popcount(static_cast<std::size_t>(a));
        psi(a) = std::pow(a0, n - ones) * std::pow(a1, ones);
    }
    return psi;
}

/// <sum_i Z_i / n> of a pure state.
inline double mean_z(const Vector &psi) {
    const int n = detail::qubits_of(static_cast<std::size_t>(psi.size()));
    double acc = 0.0;
    for (Eigen::Index a = 0; a < psi.size(); ++a) {
        acc += std::norm(psi(a)) * detail::total_z(static_cast<std::size_t>(a), n);
    }
    return acc / n;
}

/// Hermitian, unit-trace, positive semidefinite matrix on 2^n levels.
class DensityMatrix {
  public:
    static constexpr double hermiticity_tol = 1e-12;
    static constexpr double trace_tol = 1e-12;
    static constexpr double eigen_tol = 1e-10;

    explicit DensityMatrix(Matrix m) : m_(std::move(m)) {
        detail::require_input(m_.rows() == m_.cols(), "density matrix must be square");
        detail::require_input(detail::is_power_of_two(static_cast<std::size_t>(m_.rows())),
                              "density matrix dimension must be a power of two");
        detail::require_input((m_ - m_.adjoint()).norm() <= hermiticity_tol, "density matrix is not Hermitian");
        detail::require_input(std::abs(m_.trace() - Complex(1.0, 0.0)) <= trace_tol,
                              "density matrix trace differs from 1");
        const Matrix h = 0.5 * (m_ + m_.adjoint());
        Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
        detail::require_input(es.eigenvalues().minCoeff() >= -eigen_tol,
                              "density matrix has a negative eigenvalue");
    }

    static DensityMatrix pure(const Vector &psi) {
        detail::require_input(std::abs(psi.norm() - 1.0) <= 1e-12, "state vector is not normalized");
        return DensityMatrix(psi * psi.adjoint());
    }

    [[nodiscard]] const Matrix &matrix() const { return m_; }
    [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
    [[nodiscard]] int qubits() const { return detail::qubits_of(dim()); }

  private:
    Matrix m_;
};

/// Extra dephasing exponent kappa(t) is added to gamma; amplitude damping is
/// the exact Kraus pair with survival lambda(t).
struct EvolvedState {
    DensityMatrix rho;
    Matrix drho_dT;
};

namespace detail {

inline std::array<Matrix2, 2> damping_kraus(double lambda) {
    Matrix2 e0 = Matrix2::Zero();
    Matrix2 e1 = Matrix2::Zero();
    e0(0, 0) = 1.0;
    e0(1, 1) = std::sqrt(lambda);
    e1(0, 1) = std::sqrt(1.0 - lambda);
    return {e0, e1};
}

inline Matrix apply_damping(Matrix m, int qubits, double lambda) {
    if (lambda == 1.0) {
        return m;
    }
    const auto kraus = damping_kraus(lambda);
    for (int q = 0; q < qubits; ++q) {
        m = apply_local_kraus(m, q, qubits, kraus);
    }
    return m;
}

} // namespace detail

/// Exact evolution plus the analytic temperature derivative of the result.
inline EvolvedState evolve_with_derivative(const DensityMatrix &rho0, const ProbeEnsemble &ensemble,
                                           const DephasingLaw &law, const EnvironmentChannel &channel, double t,
                                           double T) {
    ensemble.validate();
    detail::require(rho0.dim() == ensemble.dim(), "evolve: density matrix dimension does not match 2^n");
    detail::require(t >= 0.0, "evolve: time must be nonnegative");
    detail::require(T > 0.0, "evolve: temperature must be positive");

    const int n = ensemble.n;
    const double gamma = law.gamma(t, T);
    const double dgamma = law.dgamma_dT(t, T);
    const double kappa = channel.kappa(t);
    const double lambda = channel.survival(t);
    detail::require(lambda >= 0.0 && lambda <= 1.0 + 1e-15, "evolve: damping survival outside [0, 1]");

    const auto d = static_cast<Eigen::Index>(ensemble.dim());
    const Matrix &r0 = rho0.matrix();
    Matrix rho(d, d);
    Matrix drho(d, d);
    for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index b = 0; b < d; ++b) {
            const auto ua = static_cast<std::size_t>(a);
            const auto ub = static_cast<std::size_t>(b);
            const int k = detail::hamming(ua, ub);
            const double zdiff = detail::total_z(ua, n) - detail::total_z(ub, n);
            const Complex phase = std::exp(Complex(0.0, -0.5 * ensemble.omega0 * t * zdiff));
            const double decay = k == 0 ? 1.0 : std::exp(-k * (gamma + kappa));
            rho(a, b) = r0(a, b) * phase * decay;
            drho(a, b) = -static_cast<double>(k) * dgamma * rho(a, b);
        }
    }
    rho = detail::apply_damping(std::move(rho), n, std::min(lambda, 1.0));
    drho = detail::apply_damping(std::move(drho), n, std::min(lambda, 1.0));
    // clean rounding asymmetry before validation
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return {DensityMatrix(std::move(rho)), std::move(drho)};
}

inline DensityMatrix evolve(const DensityMatrix &rho0, const ProbeEnsemble &ensemble, const DephasingLaw &law,
                            const EnvironmentChannel &channel, double t, double T) {
    return evolve_with_derivative(rho0, ensemble, law, channel, t, T).rho;
}

/// Extreme GHZ coherence factor e^{-n(gamma + kappa)} lambda^{n/2}.
inline double ghz_signal_coherence(int n, const DephasingLaw &law, const EnvironmentChannel &channel, double t,
                                   double T) {
    detail::require(n >= 1, "ghz coherence: n must be at least 1");
    const double g = law.gamma(t, T);
    return std::exp(-n * (g + channel.kappa(t))) * std::pow(channel.survival(t), 0.5 * n);
}

} // namespace thermoqfi
