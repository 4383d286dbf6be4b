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
 * External noise acting on every probe besides the sample: extra dephasing
 * (power law or integrated rate) and amplitude damping towards |0>.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"

namespace thermoqfi {

/// A time-dependent rate r(t) together with its integral from 0.
class RateFunction {
  public:
    static RateFunction constant(double rate) {
        return RateFunction([rate](double) { return rate; }, [rate](double t) { return rate * t; },
                            "constant");
    }

    /// Piecewise-constant rate: values[k] on [breaks[k-1], breaks[k]) with
    /// breaks[-1] = 0 and the last value extending to infinity.
    static RateFunction piecewise_constant(std::vector<double> breaks, std::vector<double> values) {
        detail::require_input(values.size() == breaks.size() + 1,
                              "piecewise rate: need one more value than breakpoints");
        for (std::size_t i = 0; i < breaks.size(); ++i) {
            detail::require_input(breaks[i] > 0.0 && (i == 0 || breaks[i] > breaks[i - 1]),
                                  "piecewise rate: breakpoints must be positive and increasing");
        }
        auto b = std::make_shared<const std::vector<double>>(std::move(breaks));
        auto v = std::make_shared<const std::vector<double>>(std::move(values));
        auto rate = [b, v](double t) {
            const auto k = static_cast<std::size_t>(std::upper_bound(b->begin(), b->end(), t) - b->begin());
            return (*v)[k];
        };
        auto integral = [b, v](double t) {
            double acc = 0.0;
            double lo = 0.0;
            for (std::size_t k = 0; k < v->size(); ++k) {
                const double hi = k < b->size() ? (*b)[k] : t;
                if (t <= hi) {
                    return acc + (*v)[k] * (t - lo);
                }
                acc += (*v)[k] * (hi - lo);
                lo = hi;
            }
            return acc;
        };
        return RateFunction(rate, integral, "piecewise");
    }

    /// Linear interpolation between samples; the integral is the exact
    /// cumulative trapezoid. The first value extends back to t = 0 and the
    /// last one forward to infinity.
    static RateFunction tabulated(std::vector<double> times, std::vector<double> rates) {
        detail::require_input(times.size() == rates.size(), "rate table: column lengths differ");
        detail::require_input(times.size() >= 2, "rate table: need at least two rows");
        detail::require_input(times.front() >= 0.0, "rate table: times must be nonnegative");
        for (std::size_t i = 1; i < times.size(); ++i) {
            detail::require_input(times[i] > times[i - 1], "rate table: times must be strictly increasing");
        }
        std::vector<double> cumulative(times.size());
        cumulative[0] = rates[0] * times[0];
        for (std::size_t i = 1; i < times.size(); ++i) {
            cumulative[i] = cumulative[i - 1] + 0.5 * (rates[i] + rates[i - 1]) * (times[i] - times[i - 1]);
        }
        struct Table {
            std::vector<double> t, r, c;
        };
        auto tab = std::make_shared<const Table>(Table{std::move(times), std::move(rates), std::move(cumulative)});
        auto rate = [tab](double t) {
            const auto &[ts, rs, cs] = *tab;
            if (t <= ts.front()) {
                return rs.front();
            }
            if (t >= ts.back()) {
                return rs.back();
            }
            const auto i = static_cast<std::size_t>(std::upper_bound(ts.begin(), ts.end(), t) - ts.begin()) - 1;
            const double s = (t - ts[i]) / (ts[i + 1] - ts[i]);
            return rs[i] + s * (rs[i + 1] - rs[i]);
        };
        auto integral = [tab](double t) {
            const auto &[ts, rs, cs] = *tab;
            if (t <= ts.front()) {
                return rs.front() * t;
            }
            if (t >= ts.back()) {
                return cs.back() + rs.back() * (t - ts.back());
            }
            const auto i = static_cast<std::size_t>(std::upper_bound(ts.begin(), ts.end(), t) - ts.begin()) - 1;
            const double dt = t - ts[i];
            const double slope = (rs[i + 1] - rs[i]) / (ts[i + 1] - ts[i]);
            return cs[i] + rs[i] * dt + 0.5 * slope * dt * dt;
        };
        return RateFunction(rate, integral, "tabulated");
    }

    static RateFunction closed_form(std::function<double(double)> rate, std::function<double(double)> integral) {
        return RateFunction(std::move(rate), std::move(integral), "closed-form");
    }

    [[nodiscard]] double rate(double t) const { return rate_(t); }
    [[nodiscard]] double integral(double t) const { return integral_(t); }
    [[nodiscard]] const std::string &label() const { return label_; }

  private:
    RateFunction(std::function<double(double)> rate, std::function<double(double)> integral, std::string label)
        : rate_(std::move(rate)), integral_(std::move(integral)), label_(std::move(label)) {}

    std::function<double(double)> rate_;
    std::function<double(double)> integral_;
    std::string label_;
};

enum class ChannelKind { none, extra_dephasing, amplitude_damping };

/// kappa(t) = kappa t^nu'
struct PowerLawDephasing {
    double kappa;
    double nu_prime;
};

class EnvironmentChannel {
  public:
    static EnvironmentChannel none() { return EnvironmentChannel(ChannelKind::none, std::monostate{}); }

    static EnvironmentChannel power_dephasing(double kappa, double nu_prime) {
        detail::require(kappa > 0.0, "extra dephasing: kappa must be positive");
        detail::require(nu_prime > 0.0, "extra dephasing: nu' must be positive");
        return EnvironmentChannel(ChannelKind::extra_dephasing, PowerLawDephasing{kappa, nu_prime});
    }

    /// Extra dephasing whose exponent is the integral of a (possibly negative) rate.
    static EnvironmentChannel dephasing_rate(RateFunction rate) {
        return EnvironmentChannel(ChannelKind::extra_dephasing, std::move(rate));
    }

    static EnvironmentChannel amplitude_damping(RateFunction eta) {
        return EnvironmentChannel(ChannelKind::amplitude_damping, std::move(eta));
    }

    [[nodiscard]] ChannelKind kind() const { return kind_; }

    /// Accumulated extra dephasing exponent kappa(t); zero for other kinds.
    [[nodiscard]] double kappa(double t) const {
        if (kind_ != ChannelKind::extra_dephasing) {
            return 0.0;
        }
        if (const auto *p = std::get_if<PowerLawDephasing>(&spec_)) {
            return p->kappa * std::pow(t, p->nu_prime);
        }
        return std::get<RateFunction>(spec_).integral(t);
    }

    /// Amplitude-damping survival lambda(t) = exp(-2 int_0^t eta); one for other kinds.
    [[nodiscard]] double survival(double t) const {
        if (kind_ != ChannelKind::amplitude_damping) {
            return 1.0;
        }
        return std::exp(-2.0 * std::get<RateFunction>(spec_).integral(t));
    }

    /// Instantaneous rate: d kappa / dt for dephasing, eta(t) for damping.
    [[nodiscard]] double rate(double t) const {
        switch (kind_) {
        case ChannelKind::none:
            return 0.0;
        case ChannelKind::extra_dephasing:
            if (const auto *p = std::get_if<PowerLawDephasing>(&spec_)) {
                return t == 0.0 ? (p->nu_prime == 1.0 ? p->kappa : 0.0)
                                : p->kappa * p->nu_prime * std::pow(t, p->nu_prime - 1.0);
            }
            return std::get<RateFunction>(spec_).rate(t);
        case ChannelKind::amplitude_damping:
            return std::get<RateFunction>(spec_).rate(t);
        }
        return 0.0;
    }

    /// Factor multiplying every single-qubit coherence: e^{-kappa} sqrt(lambda).
    [[nodiscard]] double coherence_factor(double t) const {
        return std::exp(-kappa(t)) * std::sqrt(survival(t));
    }

    [[nodiscard]] std::string describe() const {
        std::ostringstream os;
        os.precision(17);
        switch (kind_) {
        case ChannelKind::none:
            os << "none";
            break;
        case ChannelKind::extra_dephasing:
            if (const auto *p = std::get_if<PowerLawDephasing>(&spec_)) {
                os << "dephasing:kappa=" << p->kappa << ",nu=" << p->nu_prime;
            } else {
                os << "dephasing-rate:" << std::get<RateFunction>(spec_).label();
            }
            break;
        case ChannelKind::amplitude_damping:
            os << "damping:" << std::get<RateFunction>(spec_).label();
            break;
        }
        return os.str();
    }

  private:
    using Spec = std::variant<std::monostate, PowerLawDephasing, RateFunction>;

    EnvironmentChannel(ChannelKind kind, Spec spec) : kind_(kind), spec_(std::move(spec)) {}

    ChannelKind kind_;
    Spec spec_;
};

} // namespace thermoqfi
