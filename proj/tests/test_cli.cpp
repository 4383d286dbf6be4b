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

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "thermoqfi/thermoqfi.hpp"

using namespace thermoqfi;

namespace {

namespace fs = std::filesystem;

const std::string cli = THERMOQFI_CLI;
const std::string data = THERMOQFI_TEST_DATA;

struct Run {
    int status = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string &name) {
    const auto dir = fs::temp_directory_path() / "thermoqfi_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

Run run(const std::string &args, const std::string &env = "") {
    static int counter = 0;
    const auto out = scratch("out" + std::to_string(counter));
    const auto err = scratch("err" + std::to_string(counter++));
    const std::string cmd = env + " '" + cli + "' " + args + " > '" + out.string() + "' 2> '" + err.string() + "'";
    const int raw = std::system(cmd.c_str());
    Run r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::vector<std::string> lines(const std::string &s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string l;
    while (std::getline(is, l)) {
        out.push_back(l);
    }
    return out;
}

std::vector<std::string> cells(const std::string &line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string c;
    while (std::getline(is, c, ',')) {
        out.push_back(c);
    }
    return out;
}

} // namespace

TEST_CASE("qfi subcommand prints the single-qubit value", "[cli]") {
    const auto r = run("qfi --nu 1 --alpha-model linear:g=1 --T 0.5 --t 1 --n 1");
    REQUIRE(r.status == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 2);
    CHECK(ls[0] == "n,nu,T,t,state,qfi");
    const auto c = cells(ls[1]);
    CHECK(std::abs(std::stod(c.back()) - 0.58198) <= 1e-5);
    CHECK(c.back() == "0.58197670686932645");
    CHECK(r.out.find('\r') == std::string::npos);
}

TEST_CASE("exit codes", "[cli]") {
    const auto unknown = run("qfi --nu 1 --T 0.5 --t 1 --n 1 --bogus-flag 3");
    CHECK(unknown.status == 2);
    CHECK(unknown.err.find("--bogus-flag") != std::string::npos);
    CHECK(run("").status == 2);
    CHECK(run("frobnicate").status == 2);
    CHECK(run("qfi --nu 1 --T -1 --t 1 --n 1").status == 2);
    CHECK(run("qfi --nu 1 --T 0.5 --t 1 --n 1 --state w").status == 2);
    CHECK(run("optimal-time --nu 1 --T 0.5 --n 2 --phase 1.0").status == 2);
    const auto numeric = run("montecarlo --nu 1 --T 0.5 --t 1 --n 1 --phase 0 --trials 4 --shots 10 --channel damping:csv=" +
                             data + "/negative_rate.csv");
    CHECK(numeric.status == 1);
    CHECK(run("--help").status == 0);
}

TEST_CASE("regime table header", "[cli]") {
    const auto r = run("regime-table --nu 2 --n 2,4,8 --T 0.5 --tau 100");
    REQUIRE(r.status == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 4);
    CHECK(ls[0] == "n,nu,t_cha,regime,t_star,delta_T_exact,delta_T_paper_branch,ratio,boundary_flag");
}

TEST_CASE("printed values match library calls bit for bit", "[cli]") {
    const auto r = run("ramsey-fi --nu 1.5 --alpha-model power:g=1.2,p=2 --T 0.4 --t-grid 0.1:2:5 --n 3 --state ghz "
                       "--phase pi --tau 20");
    REQUIRE(r.status == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 6);
    const auto grid = io::parse_log_grid("0.1:2:5");
    const DephasingLaw law(1.5, TemperatureModel::power(1.2, 2.0));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const RamseySetup s{ProbeEnsemble{3, StateKind::ghz, 0.0, 0.0}, pi, grid[i], 20.0};
        const auto f = classical_fisher(s, law, EnvironmentChannel::none(), 0.4);
        const auto c = cells(ls[i + 1]);
        REQUIRE(c.size() == 8);
        CHECK(c[3] == io::format_double(grid[i]));
        CHECK(c[5] == io::format_double(f.fisher_per_shot));
        CHECK(c[6] == io::format_double(f.fisher_total));
        CHECK(c[7] == io::format_double(f.delta_T));
    }

    const auto q = run("qfi --nu 2 --T 0.7 --t 0.3 --n 2 --state ghz");
    REQUIRE(q.status == 0);
    const ProbeEnsemble e{2, StateKind::ghz, 0.0, 0.0};
    const auto ev = evolve_with_derivative(DensityMatrix::pure(e.initial_state()), e,
                                           DephasingLaw(2.0, TemperatureModel::linear(1.0)),
                                           EnvironmentChannel::none(), 0.3, 0.7);
    CHECK(cells(lines(q.out)[1]).back() == io::format_double(sld_qfi(ev.rho.matrix(), ev.drho_dT)));
}

TEST_CASE("montecarlo output is deterministic", "[cli]") {
    const std::string args = "montecarlo --seed 7 --nu 1 --T 0.5 --t 1 --n 3 --state ghz --shots 20000 --trials 60 "
                             "--format json --out ";
    const auto a = scratch("mc_a.json");
    const auto b = scratch("mc_b.json");
    const auto c = scratch("mc_c.json");
    REQUIRE(run(args + "'" + a.string() + "'").status == 0);
    REQUIRE(run(args + "'" + b.string() + "'").status == 0);
    REQUIRE(run(args + "'" + c.string() + "'", "THERMOQFI_THREADS=1").status == 0);
    const auto d = scratch("mc_d.json");
    REQUIRE(run(args + "'" + d.string() + "'", "THERMOQFI_THREADS=4").status == 0);
    const std::string ref = slurp(a);
    CHECK(!ref.empty());
    CHECK(ref == slurp(b));
    CHECK(ref == slurp(c));
    CHECK(ref == slurp(d));
    CHECK(ref.find("\"estimates\"") != std::string::npos);
    const auto other = scratch("mc_e.json");
    REQUIRE(run("montecarlo --seed 8 --nu 1 --T 0.5 --t 1 --n 3 --state ghz --shots 20000 --trials 60 --format json "
                "--out '" + other.string() + "'")
                .status == 0);
    CHECK(ref != slurp(other));
}

TEST_CASE("config file with flags taking precedence", "[cli]") {
    const auto direct = run("qfi --nu 1 --alpha-model linear:g=1 --T 0.5 --t 1 --n 1 --state product");
    const auto from_config = run("qfi --config " + data + "/config.json");
    REQUIRE(from_config.status == 0);
    CHECK(from_config.out == direct.out);
    const auto override_T = run("qfi --config " + data + "/config.json --T 0.25");
    const auto direct_T = run("qfi --nu 1 --alpha-model linear:g=1 --T 0.25 --t 1 --n 1 --state product");
    REQUIRE(override_T.status == 0);
    CHECK(override_T.out == direct_T.out);
    CHECK(override_T.out != direct.out);
    CHECK(run("qfi --config /nonexistent/thermoqfi.json").status == 2);
}

TEST_CASE("remaining subcommands", "[cli]") {
    const auto ot = run("optimal-time --nu 1 --T 0.2 --n 4 --tau 100");
    REQUIRE(ot.status == 0);
    const auto row = cells(lines(ot.out)[1]);
    CHECK(row[7] == "t_to_zero");
    CHECK(std::abs(std::stod(row[6]) - std::sqrt(2 * 0.2 / 400.0)) <= 1e-10);

    const auto cs = run("compare-states --nu 1 --T 0.5 --t 1 --n 2");
    REQUIRE(cs.status == 0);
    CHECK(lines(cs.out)[0] == "n,nu,T,t,qfi_product,qfi_ghz,per_particle_product,per_particle_ghz,"
                              "delta_T_star_product,delta_T_star_ghz");

    const auto nm = run("nonmarkov --nu 1 --T 0.5 --channel dephasing:csv=" + data + "/step_rate.csv --points 400");
    REQUIRE(nm.status == 0);
    CHECK(nm.out.find("\"measure\"") != std::string::npos);
    CHECK(nm.out.find("\"positive_intervals\"") != std::string::npos);
    CHECK(run("nonmarkov --nu 1 --T 0.5 --channel none --points 20").status == 2);

    const auto js = run("ramsey-fi --nu 1 --T 0.5 --t 1 --n 1 --format json");
    REQUIRE(js.status == 0);
    CHECK(js.out.find("\"fi_per_shot\": 0.5819767068693265") != std::string::npos);
}
