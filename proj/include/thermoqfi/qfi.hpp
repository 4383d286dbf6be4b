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
 * Quantum Fisher information of pure-state families and, through the
 * spectral formula of the symmetric logarithmic derivative, of mixed states.
 */
#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Eigenvalues>

#include "errors.hpp"
#include "linalg.hpp"

namespace thermoqfi {

/// Relative step of every five-point temperature derivative in the library.
inline constexpr double fd_relative_step = 1e-5;

/// Five-point central difference of a (vector- or matrix-valued) family.
template <class Fn>
auto five_point_derivative(const Fn &f, double x, double h) {
    return ((f(x - 2 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2 * h)) / (12.0 * h)).eval();
}

inline double five_point_scalar(const std::function<double(double)> &f, double x, double h) {
    return (f(x - 2 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2 * h)) / (12.0 * h);
}

/// 4 [<dpsi|dpsi> - |<dpsi|psi>|^2] for a normalized psi.
inline double pure_qfi(const Vector &psi, const Vector &dpsi) {
    detail::require_input(std::abs(psi.norm() - 1.0) <= 1e-10, "pure_qfi: state is not normalized");
    detail::require_input(psi.size() == dpsi.size(), "pure_qfi: derivative has the wrong size");
    const double f = 4.0 * (dpsi.squaredNorm() - std::norm(dpsi.dot(psi)));
    return std::max(f, 0.0);
}

/// Pure-state QFI of a family psi(T); uses dpsi when given, else a
/// five-point difference with step 1e-5 T.
inline double pure_qfi(const std::function<Vector(double)> &psi, double T,
                       const std::function<Vector(double)> &dpsi = {}) {
    detail::require(T > 0.0, "pure_qfi: temperature must be positive");
    const Vector v = psi(T);
    const Vector dv = dpsi ? dpsi(T) : five_point_derivative(psi, T, fd_relative_step * T);
    return pure_qfi(v, dv);
}

struct SldDiagnostics {
    double qfi = 0.0;
    std::vector<double> eigenvalues;
    int skipped_pairs = 0;
};

/// 2 sum_{ij} |<i|drho|j>|^2 / (l_i + l_j) over pairs with l_i + l_j > eps.
inline SldDiagnostics sld_qfi_diagnostics(const Matrix &rho, const Matrix &drho, double eps = 1e-14) {
    detail::require_input(rho.rows() == rho.cols() && rho.rows() == drho.rows() && drho.rows() == drho.cols(),
                          "sld_qfi: shape mismatch");
    detail::require_input((rho - rho.adjoint()).norm() <= 1e-10, "sld_qfi: rho is not Hermitian");
    const Matrix h = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    detail::require_input(es.eigenvalues().minCoeff() >= -1e-10, "sld_qfi: rho is not positive semidefinite");
    const Matrix &v = es.eigenvectors();
    const Matrix dr = v.adjoint() * (0.5 * (drho + drho.adjoint())) * v;
    SldDiagnostics out;
    const auto d = rho.rows();
    out.eigenvalues.resize(static_cast<std::size_t>(d));
    for (Eigen::Index i = 0; i < d; ++i) {
        out.eigenvalues[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    }
    double acc = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            const double s = std::max(es.eigenvalues()(i), 0.0) + std::max(es.eigenvalues()(j), 0.0);
            if (s <= eps) {
                ++out.skipped_pairs;
                continue;
            }
            acc += std::norm(dr(i, j)) / s;
        }
    }
    out.qfi = 2.0 * acc;
    return out;
}

inline double sld_qfi(const Matrix &rho, const Matrix &drho, double eps = 1e-14) {
    return sld_qfi_diagnostics(rho, drho, eps).qfi;
}

/// SLD QFI of a family rho(T) with a five-point derivative of step 1e-5 T.
inline double sld_qfi(const std::function<Matrix(double)> &rho, double T) {
    detail::require(T > 0.0, "sld_qfi: temperature must be positive");
    const Matrix drho = five_point_derivative(rho, T, fd_relative_step * T);
    return sld_qfi(rho(T), drho);
}

} // namespace thermoqfi
