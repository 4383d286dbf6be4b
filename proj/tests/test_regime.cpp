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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "thermoqfi/thermoqfi.hpp"

using namespace thermoqfi;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const TemperatureModel linear = TemperatureModel::linear(1.0);

RegimeSpec spec(int n, double nu, StateKind k, double T = 0.5, double tau = 100.0, double t_cha = 0.0,
                PhaseKind ph = PhaseKind::optimal) {
    return RegimeSpec{n, tau, DephasingLaw(nu, linear, t_cha), T, k, ph, {}, {}};
}

// root of x e^x = s (e^x - 1) on (0, inf) by plain bisection
double stationary_x(double s) {
    double lo = 1e-6;
    double hi = 50.0;
    auto g = [s](double x) { return x * std::exp(x) - s * std::expm1(x); };
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("markovian optimum sits at the short-time boundary", "[regime]") {
    const auto rep = optimize_time(spec(4, 1.0, StateKind::product, 0.2, 100.0));
    CHECK(rep.boundary_flag == BoundaryFlag::t_to_zero);
    CHECK_THAT(rep.delta_T_star, WithinRel(std::sqrt(2 * 0.2 / 400.0), 1e-10));
    CHECK_THAT(rep.delta_T_star, WithinAbs(0.03162, 1e-5));

    // the objective increases monotonically with t
    const DephasingLaw law(1.0, linear);
    double prev = 0.0;
    for (int i = 0; i <= 200; ++i) {
        const double t = std::pow(10.0, -6.0 + 8.0 * i / 200.0);
        const double v = delta_T_closed_form(ClosedForm::product_opt, 4, 100.0, law, t, 0.2);
        CHECK(v > prev);
        CHECK(v >= rep.delta_T_star);
        prev = v;
    }
}

TEST_CASE("quadratic law has an interior optimum", "[regime]") {
    const double x_star = stationary_x(1.5);
    CHECK_THAT(x_star, WithinAbs(0.874, 1e-3));
    for (double T : {0.3, 0.5, 1.0}) {
        const auto rep = optimize_time(spec(1, 2.0, StateKind::product, T));
        CHECK(rep.boundary_flag == BoundaryFlag::interior);
        CHECK_FALSE(rep.fallback_used);
        const double x = 2 * T * rep.t_star * rep.t_star;
        CHECK_THAT(x, WithinRel(x_star, 1e-8));
    }
    // GHZ at n: same stationarity in x = 2 n alpha t^2
    const auto g = optimize_time(spec(3, 2.0, StateKind::ghz, 0.5));
    CHECK_THAT(2 * 3 * 0.5 * g.t_star * g.t_star, WithinRel(x_star, 1e-8));
}

TEST_CASE("temperature-blind law carries no information", "[regime]") {
    RegimeSpec s{2, 1.0, DephasingLaw(1.0, TemperatureModel::power(1.0, 0.0)), 0.5, StateKind::product,
                 PhaseKind::optimal, {}, {}};
    const auto rep = optimize_time(s);
    CHECK(rep.boundary_flag == BoundaryFlag::no_information);
    CHECK(std::isinf(rep.delta_T_star));
}

TEST_CASE("optimum never exceeds a dense grid of the objective", "[regime]") {
    for (double nu : {0.5, 1.0, 1.5, 2.0}) {
        for (double tc : {0.0, 0.05, 1.0}) {
            for (auto k : {StateKind::product, StateKind::ghz}) {
                for (auto ph : {PhaseKind::optimal, PhaseKind::suboptimal}) {
                    const auto s = spec(3, nu, k, 0.5, 10.0, tc, ph);
                    const auto rep = optimize_time(s);
                    const auto cf = detail::closed_form_for(k, ph);
                    for (int i = 0; i <= 2000; ++i) {
                        const double t = std::pow(10.0, -5.0 + 7.0 * i / 2000.0);
                        const double v = delta_T_closed_form(cf, 3, 10.0, s.law, t, 0.5);
                        CHECK(rep.delta_T_star <= v * (1 + 1e-9));
                    }
                }
            }
        }
    }
}

TEST_CASE("optimum is nonincreasing in n", "[regime]") {
    for (double nu : {0.5, 1.0, 2.0}) {
        for (auto k : {StateKind::product, StateKind::ghz}) {
            double prev = std::numeric_limits<double>::infinity();
            for (int n = 1; n <= 16; ++n) {
                const double v = optimize_time(spec(n, nu, k)).delta_T_star;
                CHECK(v <= prev * (1 + 1e-10));
                prev = v;
            }
        }
    }
}

TEST_CASE("product and ghz comparisons", "[regime]") {
    for (double nu : {0.5, 1.0, 2.0}) {
        const auto a = optimize_time(spec(1, nu, StateKind::product));
        const auto b = optimize_time(spec(1, nu, StateKind::ghz));
        CHECK_THAT(a.delta_T_star, WithinRel(b.delta_T_star, 1e-12));
    }
    for (int n = 2; n <= 8; ++n) {
        const auto p1 = optimize_time(spec(n, 1.0, StateKind::product));
        const auto g1 = optimize_time(spec(n, 1.0, StateKind::ghz));
        CHECK_THAT(g1.delta_T_star, WithinRel(p1.delta_T_star, 1e-6));
        const auto p2 = optimize_time(spec(n, 2.0, StateKind::product));
        const auto g2 = optimize_time(spec(n, 2.0, StateKind::ghz));
        CHECK(g2.delta_T_star > p2.delta_T_star);
    }
}

TEST_CASE("suboptimal phase is never better", "[regime]") {
    for (double nu : {0.5, 1.0, 2.0}) {
        for (int n : {1, 2, 5}) {
            for (auto k : {StateKind::product, StateKind::ghz}) {
                const double opt = optimize_time(spec(n, nu, k)).delta_T_star;
                const double sub = optimize_time(spec(n, nu, k, 0.5, 100.0, 0.0, PhaseKind::suboptimal)).delta_T_star;
                CHECK(sub >= opt * (1 - 1e-12));
            }
        }
    }
    // at nu = 1 only the optimal fringe can exploit t -> 0
    const auto opt = optimize_time(spec(2, 1.0, StateKind::product));
    const auto sub = optimize_time(spec(2, 1.0, StateKind::product, 0.5, 100.0, 0.0, PhaseKind::suboptimal));
    CHECK(opt.boundary_flag == BoundaryFlag::t_to_zero);
    CHECK(sub.boundary_flag == BoundaryFlag::interior);
    CHECK(sub.delta_T_star / opt.delta_T_star > std::sqrt(2.0));
}

TEST_CASE("regime branches", "[regime]") {
    // vanishing t_cha at nu = 1 reproduces the Markovian boundary value
    for (int n : {1, 4}) {
        const auto rep = optimize_time(spec(n, 1.0, StateKind::product, 0.5, 100.0, 1e-6));
        CHECK(rep.regime_label == "short_t_cha");
        CHECK(std::abs(rep.delta_T_star / rep.predicted_delta_T - 1.0) <= 0.02);
        CHECK_THAT(rep.predicted_delta_T, WithinRel(std::sqrt(2 * 0.5 / (n * 100.0)), 1e-12));
    }
    const auto mid = classify_regime(4, 2.0, 1.5, 0.5, 1.0, 100.0, StateKind::product, PhaseKind::optimal);
    CHECK(mid.label == "crossover");
    CHECK(std::isnan(mid.predicted));
    const auto matched =
        classify_regime(4, 1.0, 0.5, 0.5, 1.0, 100.0, StateKind::product, PhaseKind::optimal);
    CHECK(matched.label == "matched_t_cha");
    const auto lng = classify_regime(4, 2.0, 20.0, 0.5, 1.0, 100.0, StateKind::product, PhaseKind::optimal);
    CHECK(lng.label == "long_t_cha");
    CHECK(std::isfinite(lng.predicted));
    const auto inter = classify_regime(40000, 1.0, 0.005, 1.0, 1.0, 100.0, StateKind::product, PhaseKind::optimal);
    CHECK(inter.label == "intermediate_t_cha");
}

TEST_CASE("regime table layout", "[regime]") {
    RegimeGrid grid;
    grid.ns = {1, 2};
    grid.nus = {1.0, 2.0};
    grid.t_chas = {0.0, 0.1};
    grid.T = 0.5;
    grid.tau = 10.0;
    const auto rows = regime_table(grid);
    REQUIRE(rows.size() == 8);
    CHECK(rows[0].n == 1);
    CHECK(rows[0].nu == 1.0);
    CHECK(rows[1].t_cha == 0.1);
    CHECK(rows[2].nu == 2.0);
    CHECK(rows[4].n == 2);
    for (const auto &r : rows) {
        CHECK(std::isfinite(r.delta_T_exact));
        if (std::isfinite(r.delta_T_branch)) {
            CHECK_THAT(r.ratio, WithinRel(r.delta_T_exact / r.delta_T_branch, 1e-15));
        }
    }
}

TEST_CASE("scaling exponents", "[regime]") {
    const std::vector<int> ns{2, 4, 8, 16, 32};
    const auto p1 = scaling_fit(StateKind::product, DephasingLaw(1.0, linear), ns, 100.0, 0.5);
    CHECK_THAT(p1.beta, WithinAbs(0.5, 0.01));
    const auto p2 = scaling_fit(StateKind::product, DephasingLaw(2.0, linear), ns, 100.0, 0.5);
    CHECK_THAT(p2.beta, WithinAbs(0.5, 0.01));
    // the GHZ optimum at nu = 2 shrinks as n^(-1/4)
    const auto g2 = scaling_fit(StateKind::ghz, DephasingLaw(2.0, linear), ns, 100.0, 0.5);
    CHECK_THAT(g2.beta, WithinAbs(0.25, 0.01));
    const auto tp = scaling_fit(StateKind::product, DephasingLaw(0.75, linear, 1e-6), ns, 100.0, 0.5);
    CHECK_THAT(tp.beta, WithinAbs(0.5, 0.01));
    CHECK_THROWS_AS(scaling_fit(StateKind::product, DephasingLaw(1.0, linear), {1, 2}, 100.0, 0.5), DomainError);
}
