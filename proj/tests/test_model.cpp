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

#include "oracles.hpp"
#include "thermoqfi/thermoqfi.hpp"

using namespace thermoqfi;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("temperature models expose consistent derivatives", "[model]") {
    const std::vector<TemperatureModel> models{
        TemperatureModel::linear(1.0), TemperatureModel::linear(2.5), TemperatureModel::power(0.7, 2.0),
        TemperatureModel::power(1.3, 0.5),
        TemperatureModel::table({0.1, 0.3, 0.6, 1.0, 2.0}, {0.05, 0.2, 0.5, 0.8, 2.4})};
    for (const auto &m : models) {
        for (double T : {0.2, 0.45, 0.9, 1.5}) {
            const double h = 1e-6 * T;
            const double fd = (m.alpha(T + h) - m.alpha(T - h)) / (2 * h);
            CHECK(m.alpha(T) > 0.0);
            CHECK_THAT(m.dalpha(T), WithinRel(fd, 1e-6));
        }
    }
}

TEST_CASE("temperature models reject bad input", "[model]") {
    CHECK_THROWS_AS(TemperatureModel::linear(1.0).alpha(0.0), DomainError);
    CHECK_THROWS_AS(TemperatureModel::linear(1.0).alpha(-1.0), DomainError);
    CHECK_THROWS_AS(TemperatureModel::linear(-1.0), DomainError);
    CHECK_THROWS(TemperatureModel::table({0.1, 0.2}, {1.0, -1.0}));
    const auto tab = TemperatureModel::table({0.1, 0.5, 1.0}, {0.1, 0.4, 1.1});
    CHECK_THROWS(tab.alpha(2.0));
    CHECK_THAT(tab.alpha(0.5), WithinAbs(0.4, 1e-15));
}

TEST_CASE("temperature-blind power model has zero sensitivity", "[model]") {
    const auto m = TemperatureModel::power(1.0, 0.0);
    CHECK(m.dalpha(0.7) == 0.0);
    CHECK(m.alpha(0.7) == 1.0);
}

TEST_CASE("gamma examples", "[model]") {
    const DephasingLaw law(1.0, TemperatureModel::linear(1.0));
    CHECK(law.gamma(0.0, 0.5) == 0.0);
    CHECK_THAT(law.gamma(1.0, 0.5), WithinAbs(0.5, 1e-15));
    CHECK_THROWS_AS(law.gamma(-0.1, 0.5), DomainError);
    CHECK_THROWS_AS(law.gamma(1.0, 0.0), DomainError);

    const DephasingLaw two(0.5, TemperatureModel::linear(1.0), 0.04);
    CHECK_THAT(two.gamma(0.02, 1.0), WithinRel(std::pow(0.04, -1.5) * 0.02 * 0.02, 1e-14));
    CHECK_THAT(two.gamma(0.02, 1.0), WithinRel(0.05, 1e-12));
}

TEST_CASE("two-phase law is continuous and quadratic before t_cha", "[model]") {
    for (double nu : {0.5, 0.75, 1.5, 2.0}) {
        const double tc = 0.3;
        const DephasingLaw law(nu, TemperatureModel::power(1.7, 1.2), tc);
        const double T = 0.8;
        const double left = law.gamma(tc * (1 - 1e-14), T);
        const double at = law.gamma(tc, T);
        const double right = law.gamma(tc * (1 + 1e-14), T);
        CHECK_THAT(at, WithinRel(law.alpha(T) * std::pow(tc, nu), 1e-12));
        CHECK_THAT(left, WithinRel(at, 1e-12));
        CHECK_THAT(right, WithinRel(at, 1e-12));
        for (double t : {0.01, 0.05, 0.15}) {
            CHECK_THAT(law.gamma(2 * t, T) / law.gamma(t, T), WithinRel(4.0, 1e-12));
        }
        double prev = 0.0;
        for (int k = 0; k <= 200; ++k) {
            const double g = law.gamma(0.005 * k, T);
            CHECK(g >= prev);
            prev = g;
        }
    }
}

TEST_CASE("dgamma_dT matches a finite difference", "[model]") {
    const DephasingLaw law(0.75, TemperatureModel::power(0.9, 1.5), 0.2);
    for (double t : {0.05, 0.2, 0.7}) {
        const double T = 0.6;
        const double h = 1e-6 * T;
        const double fd = (law.gamma(t, T + h) - law.gamma(t, T - h)) / (2 * h);
        CHECK_THAT(law.dgamma_dT(t, T), WithinRel(fd, 1e-7));
    }
}

TEST_CASE("rate functions integrate correctly", "[channel]") {
    const auto c = RateFunction::constant(0.3);
    CHECK_THAT(c.integral(2.0), WithinRel(0.6, 1e-15));

    const auto p = RateFunction::piecewise_constant({0.4, 0.7}, {0.1, -0.1, 0.1});
    CHECK_THAT(p.integral(0.4), WithinRel(0.04, 1e-14));
    CHECK_THAT(p.integral(0.7), WithinAbs(0.01, 1e-14));
    CHECK_THAT(p.integral(1.0), WithinAbs(0.04, 1e-14));
    CHECK(p.rate(0.5) < 0.0);

    std::vector<double> ts;
    std::vector<double> rs;
    for (int i = 0; i <= 400; ++i) {
        ts.push_back(0.0025 * i);
        rs.push_back(std::sin(2 * pi * ts.back()));
    }
    const auto tab = RateFunction::tabulated(ts, rs);
    for (double t : {0.13, 0.5, 0.77, 1.0}) {
        CHECK_THAT(tab.integral(t), WithinAbs((1 - std::cos(2 * pi * t)) / (2 * pi), 2e-5));
    }
    CHECK_THROWS(RateFunction::tabulated({0.0, 0.2, 0.1}, {1.0, 1.0, 1.0}));
}

TEST_CASE("channel invariants", "[channel]") {
    const auto pd = EnvironmentChannel::power_dephasing(0.4, 2.0);
    CHECK(pd.kappa(0.0) == 0.0);
    CHECK_THAT(pd.kappa(0.5), WithinRel(0.1, 1e-14));
    const auto ad = EnvironmentChannel::amplitude_damping(RateFunction::constant(0.2));
    CHECK(ad.survival(0.0) == 1.0);
    for (double t : {0.1, 1.0, 5.0}) {
        CHECK(ad.survival(t) >= 0.0);
        CHECK(ad.survival(t) <= 1.0);
        CHECK_THAT(ad.survival(t), WithinRel(std::exp(-0.4 * t), 1e-14));
    }
    CHECK(EnvironmentChannel::none().coherence_factor(3.0) == 1.0);
}

TEST_CASE("initial states", "[probe]") {
    for (int n = 1; n <= 5; ++n) {
        for (auto k : {StateKind::product, StateKind::ghz}) {
            const ProbeEnsemble e{n, k, 0.0, 0.0};
            const Vector psi = e.initial_state();
            CHECK_THAT(psi.norm(), WithinAbs(1.0, 1e-14));
            CHECK_THAT(mean_z(psi), WithinAbs(0.0, 1e-14));
        }
    }
    const Vector ghz = ProbeEnsemble{3, StateKind::ghz, 0, 0}.initial_state();
    CHECK_THAT(ghz(0).real(), WithinAbs(1 / std::sqrt(2.0), 1e-15));
    CHECK_THAT(ghz(7).real(), WithinAbs(1 / std::sqrt(2.0), 1e-15));
    CHECK_THAT(mean_z(tilted_product_state(3, 0.5)), WithinAbs(0.5, 1e-14));
}

TEST_CASE("density matrix validation", "[probe]") {
    Matrix m = Matrix::Identity(2, 2) * 0.5;
    CHECK_NOTHROW(DensityMatrix(m));
    Matrix bad_trace = Matrix::Identity(2, 2);
    CHECK_THROWS_AS(DensityMatrix(bad_trace), InvalidInput);
    Matrix non_herm = m;
    non_herm(0, 1) = Complex(0.1, 0.0);
    CHECK_THROWS_AS(DensityMatrix(non_herm), InvalidInput);
    Matrix neg(2, 2);
    neg << 1.5, 0.0, 0.0, -0.5;
    CHECK_THROWS_AS(DensityMatrix(neg), InvalidInput);
    CHECK_THROWS_AS(DensityMatrix(Matrix::Identity(3, 3) / 3.0), InvalidInput);
}

TEST_CASE("evolve examples", "[probe]") {
    const DephasingLaw law(1.0, TemperatureModel::linear(1.0));
    const auto none = EnvironmentChannel::none();
    const ProbeEnsemble one{1, StateKind::product, 0.0, 0.0};
    const auto plus = DensityMatrix::pure(one.initial_state());

    const auto r = evolve(plus, one, law, none, 1.0, 0.5).matrix();
    CHECK_THAT(r(0, 1).real(), WithinAbs(0.5 * std::exp(-0.5), 1e-15));
    CHECK_THAT(r(0, 1).real(), WithinAbs(0.3033, 1e-4));

    // ten sequential Markovian steps of 0.1
    Matrix seq = plus.matrix();
    for (int k = 0; k < 10; ++k) {
        seq = evolve(DensityMatrix(seq), one, law, none, 0.1, 0.5).matrix();
    }
    CHECK((seq - r).cwiseAbs().maxCoeff() <= 1e-12);

    const auto full = evolve(plus, one, law, none, 200.0, 0.5).matrix();
    CHECK((full - 0.5 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-15);

    Matrix one_state = Matrix::Zero(2, 2);
    one_state(1, 1) = 1.0;
    const double lambda = 0.25;
    const auto ad = EnvironmentChannel::amplitude_damping(RateFunction::constant(-std::log(lambda) / 2.0));
    const auto damped = evolve(DensityMatrix(one_state), one, law, ad, 1.0, 0.5).matrix();
    const Matrix expected = oracle::kraus_damping(one_state, lambda);
    CHECK_THAT(damped(0, 0).real(), WithinAbs(0.75, 1e-14));
    CHECK_THAT(damped(1, 1).real(), WithinAbs(0.25, 1e-14));
    CHECK((damped - expected).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("evolve agrees with per-qubit Kraus composition", "[probe]") {
    const DephasingLaw law(0.8, TemperatureModel::power(1.1, 1.3), 0.1);
    const auto kd = EnvironmentChannel::power_dephasing(0.3, 1.5);
    const auto ad = EnvironmentChannel::amplitude_damping(RateFunction::constant(0.15));
    for (int n = 1; n <= 3; ++n) {
        for (auto kind : {StateKind::product, StateKind::ghz}) {
            const ProbeEnsemble e{n, kind, 0.7, 0.0};
            const auto rho0 = DensityMatrix::pure(e.initial_state());
            for (const auto *ch : {&kd, &ad}) {
                const double t = 0.6;
                const double T = 0.9;
                const Matrix got = evolve(rho0, e, law, *ch, t, T).matrix();
                const double coh = std::exp(-law.gamma(t, T) - ch->kappa(t));
                const Matrix want = oracle::evolve_kraus(rho0.matrix(), n, e.omega0 * t, coh, ch->survival(t));
                CHECK((got - want).cwiseAbs().maxCoeff() <= 1e-12);
            }
        }
    }
}

TEST_CASE("evolve derivative matches finite difference", "[probe]") {
    const DephasingLaw law(1.5, TemperatureModel::power(0.8, 2.0));
    const auto ad = EnvironmentChannel::amplitude_damping(RateFunction::constant(0.2));
    const ProbeEnsemble e{2, StateKind::ghz, 0.0, 0.0};
    const auto rho0 = DensityMatrix::pure(e.initial_state());
    const double T = 0.7;
    const auto ev = evolve_with_derivative(rho0, e, law, ad, 0.8, T);
    const Matrix fd = five_point_derivative(
        [&](double x) { return evolve(rho0, e, law, ad, 0.8, x).matrix(); }, T, 1e-4 * T);
    CHECK((ev.drho_dT - fd).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("ghz signal coherence", "[probe]") {
    const auto model = TemperatureModel::linear(1.0);
    const DephasingLaw law(1.0, model);
    CHECK_THAT(ghz_signal_coherence(3, law, EnvironmentChannel::none(), 1.0, 0.5), WithinRel(std::exp(-1.5), 1e-14));
    CHECK_THAT(ghz_signal_coherence(3, law, EnvironmentChannel::none(), 1.0, 0.5), WithinAbs(0.2231, 1e-4));
    CHECK(ghz_signal_coherence(1, law, EnvironmentChannel::none(), 0.0, 0.5) == 1.0);
    const auto kd = EnvironmentChannel::power_dephasing(0.25, 1.0);
    CHECK_THAT(ghz_signal_coherence(2, law, kd, 1.0, 0.25), WithinRel(std::exp(-1.0), 1e-14));

    // matrix oracle: extreme coherence of the evolved GHZ state
    for (int n : {2, 3}) {
        const ProbeEnsemble e{n, StateKind::ghz, 0.0, 0.0};
        const auto d = static_cast<Eigen::Index>(e.dim());
        const Matrix r = evolve(DensityMatrix::pure(e.initial_state()), e, law, kd, 1.0, 0.25).matrix();
        const Matrix want = oracle::evolve_kraus(DensityMatrix::pure(e.initial_state()).matrix(), n, 0.0,
                                                 std::exp(-0.5), 1.0);
        CHECK_THAT(2.0 * r(0, d - 1).real(), WithinRel(ghz_signal_coherence(n, law, kd, 1.0, 0.25), 1e-12));
        CHECK_THAT(2.0 * want(0, d - 1).real(), WithinRel(ghz_signal_coherence(n, law, kd, 1.0, 0.25), 1e-12));
    }
}

TEST_CASE("composability holds only for Markovian dephasing", "[probe]") {
    const auto model = TemperatureModel::linear(1.0);
    const ProbeEnsemble e{2, StateKind::product, 0.0, 0.0};
    const auto rho0 = DensityMatrix::pure(e.initial_state());
    const auto ad = EnvironmentChannel::amplitude_damping(RateFunction::constant(0.3));
    auto deviation = [&](const DephasingLaw &law, const EnvironmentChannel &ch) {
        const Matrix direct = evolve(rho0, e, law, ch, 0.7, 0.5).matrix();
        const Matrix step = evolve(evolve(rho0, e, law, ch, 0.3, 0.5), e, law, ch, 0.4, 0.5).matrix();
        return (direct - step).cwiseAbs().maxCoeff();
    };
    CHECK(deviation(DephasingLaw(1.0, model), ad) <= 1e-10);
    CHECK(deviation(DephasingLaw(2.0, model), EnvironmentChannel::none()) > 1e-6);
}
