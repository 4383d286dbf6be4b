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
 * Power-law dephasing factor gamma(t, T) = alpha(T) f(t).
 *
 * Single-phase laws use f(t) = t^nu. Two-phase laws switch to a quadratic
 * onset below a characteristic time t_cha:
 *
 *     f(t) = t_cha^(nu - 2) t^2   for t <= t_cha
 *     f(t) = t^nu                 for t >  t_cha
 *
 * The branches agree in value at t_cha; the slope jumps unless nu = 2.
 */
#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include "errors.hpp"
#include "temperature_model.hpp"

namespace thermoqfi {

class DephasingLaw {
  public:
    DephasingLaw(double nu, TemperatureModel model, std::optional<double> t_cha = std::nullopt)
        : nu_(nu), model_(std::move(model)), t_cha_(t_cha) {
        detail::require(nu_ > 0.0, "dephasing law: nu must be positive");
        if (t_cha_) {
            detail::require(*t_cha_ >= 0.0, "dephasing law: t_cha must be nonnegative");
            if (*t_cha_ == 0.0) {
                t_cha_.reset();
            }
        }
    }

    [[nodiscard]] double nu() const { return nu_; }
    [[nodiscard]] const TemperatureModel &model() const { return model_; }
    [[nodiscard]] std::optional<double> t_cha() const { return t_cha_; }
    [[nodiscard]] bool two_phase() const { return t_cha_.has_value(); }

    /// f(t) with gamma = alpha(T) f(t).
    [[nodiscard]] double time_factor(double t) const {
        detail::require(t >= 0.0, "dephasing law: time must be nonnegative");
        if (t_cha_ && t <= *t_cha_) {
            return std::pow(*t_cha_, nu_ - 2.0) * t * t;
        }
        return std::pow(t, nu_);
    }

    /// t f'(t) / f(t): 2 on the quadratic branch, nu otherwise.
    [[nodiscard]] double log_slope(double t) const {
        return (t_cha_ && t <= *t_cha_) ? 2.0 : nu_;
    }

    /// One-sided log slopes at t_cha (left, right).
    [[nodiscard]] std::pair<double, double> log_slopes_at_t_cha() const { return {2.0, nu_}; }

    [[nodiscard]] double alpha(double T) const { return model_.alpha(T); }
    [[nodiscard]] double dalpha(double T) const { return model_.dalpha(T); }

    [[nodiscard]] double gamma(double t, double T) const { return model_.alpha(T) * time_factor(t); }

    /// Partial derivative of gamma with respect to T at fixed t.
    [[nodiscard]] double dgamma_dT(double t, double T) const {
        return model_.dalpha(T) * time_factor(t);
    }

    /// (1 / alpha)^(1 / nu): the time at which a single-phase law reaches gamma = 1.
    [[nodiscard]] double reference_time(double T) const {
        return std::pow(1.0 / model_.alpha(T), 1.0 / nu_);
    }

    [[nodiscard]] std::string describe() const {
        std::ostringstream os;
        os.precision(17);
        os << "nu=" << nu_ << ";" << model_.describe();
        if (t_cha_) {
            os << ";t_cha=" << *t_cha_;
        }
        return os.str();
    }

  private:
    double nu_;
    TemperatureModel model_;
    std::optional<double> t_cha_;
};

} // namespace thermoqfi
