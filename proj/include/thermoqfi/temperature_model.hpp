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
 * Temperature dependence of the dephasing prefactor alpha(T).
 *
 * The probe only sees the temperature through alpha(T) and its derivative,
 * so the model is pluggable: linear (g T), power (g T^p) and a tabulated
 * model interpolated with a monotone piecewise-cubic Hermite spline.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace thermoqfi {

enum class TemperatureModelKind { linear, power, table };

/// Monotone cubic Hermite interpolant (Fritsch-Carlson slopes).
class MonotoneCubic {
  public:
    MonotoneCubic(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)) {
        detail::require_input(x_.size() == y_.size(), "table: column lengths differ");
        detail::require_input(x_.size() >= 2, "table: need at least two rows");
        for (std::size_t i = 1; i < x_.size(); ++i) {
            detail::require_input(x_[i] > x_[i - 1], "table: abscissae must be strictly increasing");
        }
        const std::size_t n = x_.size();
        std::vector<double> h(n - 1);
        std::vector<double> delta(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            h[i] = x_[i + 1] - x_[i];
            delta[i] = (y_[i + 1] - y_[i]) / h[i];
        }
        slope_.assign(n, 0.0);
        if (n == 2) {
            slope_[0] = slope_[1] = delta[0];
            return;
        }
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (delta[i - 1] * delta[i] > 0.0) {
                const double w1 = 2.0 * h[i] + h[i - 1];
                const double w2 = h[i] + 2.0 * h[i - 1];
                slope_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
            }
        }
        slope_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
        slope_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    }

    [[nodiscard]] double front() const { return x_.front(); }
    [[nodiscard]] double back() const { return x_.back(); }

    [[nodiscard]] double value(double x) const {
        const auto [i, s, hh] = locate(x);
        const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
        const double h10 = s * (1 - s) * (1 - s);
        const double h01 = s * s * (3 - 2 * s);
        const double h11 = s * s * (s - 1);
        return h00 * y_[i] + h10 * hh * slope_[i] + h01 * y_[i + 1] + h11 * hh * slope_[i + 1];
    }

    [[nodiscard]] double derivative(double x) const {
        const auto [i, s, hh] = locate(x);
        const double d00 = 6 * s * s - 6 * s;
        const double d10 = 3 * s * s - 4 * s + 1;
        const double d01 = -d00;
        const double d11 = 3 * s * s - 2 * s;
        return (d00 * y_[i] + d01 * y_[i + 1]) / hh + d10 * slope_[i] + d11 * slope_[i + 1];
    }

    [[nodiscard]] const std::vector<double> &xs() const { return x_; }
    [[nodiscard]] const std::vector<double> &ys() const { return y_; }

  private:
    struct Cell {
        std::size_t index;
        double s;
        double h;
    };

    static double end_slope(double h0, double h1, double d0, double d1) {
        double d = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (d * d0 <= 0.0) {
            d = 0.0;
        } else if (d0 * d1 <= 0.0 && std::abs(d) > std::abs(3 * d0)) {
            d = 3 * d0;
        }
        return d;
    }

    [[nodiscard]] Cell locate(double x) const {
        detail::require(x >= x_.front() && x <= x_.back(),
                        "table: temperature outside tabulated range");
        auto it = std::upper_bound(x_.begin(), x_.end(), x);
        std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
        i = std::min(i, x_.size() - 2);
        const double h = x_[i + 1] - x_[i];
        return {i, (x - x_[i]) / h, h};
    }

    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> slope_;
};

/// alpha(T) together with its analytic derivative.
class TemperatureModel {
  public:
    /// alpha = g T
    static TemperatureModel linear(double gain) {
        detail::require(gain > 0.0, "linear model: gain must be positive");
        return TemperatureModel(TemperatureModelKind::linear, gain, 1.0, nullptr);
    }

    /// alpha = g T^p. p = 0 gives a temperature-blind probe.
    static TemperatureModel power(double gain, double exponent) {
        detail::require(gain > 0.0, "power model: gain must be positive");
        detail::require(exponent >= 0.0, "power model: exponent must be nonnegative");
        return TemperatureModel(TemperatureModelKind::power, gain, exponent, nullptr);
    }

    /// Tabulated alpha(T); every alpha must be positive.
    static TemperatureModel table(std::vector<double> temperatures, std::vector<double> alphas) {
        for (double a : alphas) {
            detail::require_input(a > 0.0, "table model: alpha values must be positive");
        }
        for (double T : temperatures) {
            detail::require_input(T > 0.0, "table model: temperatures must be positive");
        }
        auto spline = std::make_shared<const MonotoneCubic>(std::move(temperatures), std::move(alphas));
        return TemperatureModel(TemperatureModelKind::table, 1.0, 1.0, std::move(spline));
    }

    [[nodiscard]] TemperatureModelKind kind() const { return kind_; }
    [[nodiscard]] double gain() const { return gain_; }
    [[nodiscard]] double exponent() const { return exponent_; }

    [[nodiscard]] double alpha(double T) const {
        check(T);
        switch (kind_) {
        case TemperatureModelKind::linear:
            return gain_ * T;
        case TemperatureModelKind::power:
            return gain_ * std::pow(T, exponent_);
        case TemperatureModelKind::table:
            return table_->value(T);
        }
        return 0.0;
    }

    [[nodiscard]] double dalpha(double T) const {
        check(T);
        switch (kind_) {
        case TemperatureModelKind::linear:
            return gain_;
        case TemperatureModelKind::power:
            return exponent_ == 0.0 ? 0.0 : gain_ * exponent_ * std::pow(T, exponent_ - 1.0);
        case TemperatureModelKind::table:
            return table_->derivative(T);
        }
        return 0.0;
    }

    [[nodiscard]] std::string describe() const {
        std::ostringstream os;
        os.precision(17);
        switch (kind_) {
        case TemperatureModelKind::linear:
            os << "linear:g=" << gain_;
            break;
        case TemperatureModelKind::power:
            os << "power:g=" << gain_ << ",p=" << exponent_;
            break;
        case TemperatureModelKind::table:
            os << "table:rows=" << table_->xs().size();
            break;
        }
        return os.str();
    }

  private:
    TemperatureModel(TemperatureModelKind kind, double gain, double exponent,
                     std::shared_ptr<const MonotoneCubic> table)
        : kind_(kind), gain_(gain), exponent_(exponent), table_(std::move(table)) {}

    static void check(double T) { detail::require(T > 0.0, "temperature must be positive"); }

    TemperatureModelKind kind_;
    double gain_;
    double exponent_;
    std::shared_ptr<const MonotoneCubic> table_;
};

} // namespace thermoqfi
