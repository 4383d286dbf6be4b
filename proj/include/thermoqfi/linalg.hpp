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
 * Dense complex linear-algebra aliases and small qubit helpers.
 */
#pragma once

#include <bit>
#include <complex>
#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

namespace thermoqfi {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Matrix2 = Eigen::Matrix2cd;

inline constexpr double pi = 3.14159265358979323846;

namespace detail {

inline constexpr Complex I{0.0, 1.0};

inline std::size_t dimension(int qubits) { return std::size_t{1} << qubits; }

inline bool is_power_of_two(std::size_t d) { return d != 0 && (d & (d - 1)) == 0; }

inline int qubits_of(std::size_t dim) { return std::countr_zero(dim); }

inline int hamming(std::size_t a, std::size_t b) { return std::popcount(a ^ b); }

/// Eigenvalue of Z = |1><1| - |0><0| summed over all qubits of basis state a.
inline int total_z(std::size_t a, int qubits) {
    const int ones = std::popcount(a);
    return ones - (qubits - ones);
}

/// Bit of qubit q (qubit 0 is the most significant bit).
inline int bit(std::size_t a, int q, int qubits) {
    return static_cast<int>((a >> (qubits - 1 - q)) & 1U);
}

inline Matrix2 pauli_x() {
    Matrix2 m;
    m << 0, 1, 1, 0;
    return m;
}

inline Matrix2 pauli_y() {
    Matrix2 m;
    m << 0, -I, I, 0;
    return m;
}

inline Matrix2 pauli_z() {
    Matrix2 m;
    m << 1, 0, 0, -1;
    return m;
}

/// rho -> sum_k K rho K^dagger with each K acting on qubit q only.
template <class KrausRange>
Matrix apply_local_kraus(const Matrix &rho, int q, int qubits, const KrausRange &kraus) {
    const auto dim = static_cast<Eigen::Index>(dimension(qubits));
    const std::size_t mask = std::size_t{1} << (qubits - 1 - q);
    Matrix out = Matrix::Zero(dim, dim);
    for (const Matrix2 &k : kraus) {
        // left multiply by K on qubit q
        Matrix left(dim, dim);
        for (Eigen::Index r = 0; r < dim; ++r) {
            const auto ur = static_cast<std::size_t>(r);
            const int br = (ur & mask) ? 1 : 0;
            const auto r0 = static_cast<Eigen::Index>(ur & ~mask);
            const auto r1 = static_cast<Eigen::Index>(ur | mask);
            left.row(r) = k(br, 0) * rho.row(r0) + k(br, 1) * rho.row(r1);
        }
        const Matrix2 kd = k.adjoint();
        for (Eigen::Index c = 0; c < dim; ++c) {
            const auto uc = static_cast<std::size_t>(c);
            const int bc = (uc & mask) ? 1 : 0;
            const auto c0 = static_cast<Eigen::Index>(uc & ~mask);
            const auto c1 = static_cast<Eigen::Index>(uc | mask);
            out.col(c) += left.col(c0) * kd(0, bc) + left.col(c1) * kd(1, bc);
        }
    }
    return out;
}

} // namespace detail
} // namespace thermoqfi
