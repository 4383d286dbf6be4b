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
 * Small deterministic optimizers: golden-section search, bisection and a
 * BFGS minimizer driven by central-difference gradients.
 */
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>

#include <Eigen/Dense>

#include "errors.hpp"

namespace thermoqfi {

struct ScalarMinimum {
    double x = 0.0;
    double value = 0.0;
    int iterations = 0;
};

/// Golden-section minimization of f on [lo, hi]; stops when the bracket is
/// narrower than rel_tol (|x| + 1e-300) or after max_iter steps.
inline ScalarMinimum golden_section(const std::function<double(double)> &f, double lo, double hi,
                                    double rel_tol = 1e-10, int max_iter = 500) {
    detail::require(lo < hi, "golden section: empty bracket");
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    int it = 0;
    for (; it < max_iter; ++it) {
        if (b - a <= rel_tol * (std::abs(0.5 * (a + b)) + 1e-300)) {
            break;
        }
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    ScalarMinimum out;
    if (fc <= fd) {
        out.x = c;
        out.value = fc;
    } else {
        out.x = d;
        out.value = fd;
    }
    out.iterations = it;
    return out;
}

/// Root of g on [lo, hi] given g(lo) and g(hi) of opposite sign.
inline double bisect(const std::function<double(double)> &g, double lo, double hi, int max_iter = 200) {
    double glo = g(lo);
    const double ghi = g(hi);
    detail::require(std::signbit(glo) != std::signbit(ghi) || glo == 0.0 || ghi == 0.0,
                    "bisect: root not bracketed");
    if (glo == 0.0) {
        return lo;
    }
    if (ghi == 0.0) {
        return hi;
    }
    for (int i = 0; i < max_iter; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        const double gm = g(mid);
        if (gm == 0.0) {
            return mid;
        }
        if (std::signbit(gm) == std::signbit(glo)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

template <int Dim>
struct BfgsResult {
    Eigen::Matrix<double, Dim, 1> x;
    double value = std::numeric_limits<double>::infinity();
    double gradient_norm = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;
};

struct BfgsOptions {
    double gradient_tol = 1e-9;
    double fd_step = 1e-4;
    int max_iterations = 200;
};

/// BFGS with central-difference gradients and Armijo backtracking.
template <int Dim>
BfgsResult<Dim> minimize_bfgs(const std::function<double(const Eigen::Matrix<double, Dim, 1> &)> &f,
                              Eigen::Matrix<double, Dim, 1> x, const BfgsOptions &opt = {}) {
    using Vec = Eigen::Matrix<double, Dim, 1>;
    using Mat = Eigen::Matrix<double, Dim, Dim>;
    auto gradient = [&](const Vec &p) {
        Vec g;
        for (int i = 0; i < Dim; ++i) {
            Vec a = p;
            Vec b = p;
            a(i) += opt.fd_step;
            b(i) -= opt.fd_step;
            g(i) = (f(a) - f(b)) / (2.0 * opt.fd_step);
        }
        return g;
    };
    BfgsResult<Dim> out;
    Mat H = Mat::Identity();
    double fx = f(x);
    Vec g = gradient(x);
    int it = 0;
    for (; it < opt.max_iterations; ++it) {
        if (g.norm() < opt.gradient_tol) {
            break;
        }
        Vec dir = -H * g;
        if (dir.dot(g) >= 0.0) {
            H = Mat::Identity();
            dir = -g;
        }
        double step = 1.0;
        Vec xn = x + step * dir;
        double fn = f(xn);
        int backtracks = 0;
        while (fn > fx + 1e-4 * step * g.dot(dir) && backtracks < 60) {
            step *= 0.5;
            xn = x + step * dir;
            fn = f(xn);
            ++backtracks;
        }
        if (backtracks == 60) {
            break;
        }
        const Vec gn = gradient(xn);
        const Vec s = xn - x;
        const Vec y = gn - g;
        const double sy = s.dot(y);
        if (sy > 1e-300) {
            const double rho = 1.0 / sy;
            const Mat I = Mat::Identity();
            H = (I - rho * s * y.transpose()) * H * (I - rho * y * s.transpose()) + rho * s * s.transpose();
        }
        x = xn;
        fx = fn;
        g = gn;
    }
    out.x = x;
    out.value = fx;
    out.gradient_norm = g.norm();
    out.iterations = it;
    out.converged = out.gradient_norm < opt.gradient_tol;
    return out;
}

} // namespace thermoqfi
