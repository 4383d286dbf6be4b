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

// Command-line front end. Exit status: 0 success, 2 usage error, 1 numerical failure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "thermoqfi/thermoqfi.hpp"

namespace {

using namespace thermoqfi;
using Json = nlohmann::ordered_json;

constexpr int exit_usage = 2;
constexpr int exit_numerical = 1;

struct Options {
    std::string nu = "1";
    std::string alpha_model = "linear:g=1";
    double T = 1.0;
    std::optional<double> t;
    std::string t_grid;
    std::string n = "1";
    std::string state = "product";
    std::string phase = "pi";
    std::optional<double> tau;
    std::string t_cha = "0";
    std::string channel = "none";
    std::uint64_t seed = 0;
    std::int64_t shots = 100000;
    int trials = 400;
    std::string out;
    std::string format = "csv";
    std::string config;
    bool verbose = false;
    double t_end = 1.0;
    int points = 2000;
    int lattice = 128;
};

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

void add_common(CLI::App *sub, Options &o) {
    sub->add_option("--nu", o.nu, "dephasing exponent (comma list for regime-table)");
    sub->add_option("--alpha-model", o.alpha_model, "linear:g=G | power:g=G,p=P | table:PATH");
    sub->add_option("--T", o.T, "temperature");
    sub->add_option("--t", o.t, "interrogation time");
    sub->add_option("--t-grid", o.t_grid, "lo:hi:steps, log-spaced");
    sub->add_option("--n", o.n, "probe count (comma list allowed)");
    sub->add_option("--state", o.state, "product | ghz")->check(CLI::IsMember({"product", "ghz"}));
    sub->add_option("--phase", o.phase, "pi | pi4 | value");
    sub->add_option("--tau", o.tau, "total time budget");
    sub->add_option("--t-cha", o.t_cha, "two-phase crossover time, 0 for single phase (comma list allowed)");
    sub->add_option("--channel", o.channel,
                    "none | dephasing:kappa=K,nu=V | dephasing:csv=PATH | damping:eta=E | damping:csv=PATH");
    sub->add_option("--seed", o.seed, "random seed");
    sub->add_option("--shots", o.shots, "repetitions per Monte-Carlo trial");
    sub->add_option("--trials", o.trials, "Monte-Carlo trials");
    sub->add_option("--out", o.out, "output path (stdout when absent)");
    sub->add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--config", o.config, "JSON file of flag values; flags on the command line win");
    sub->add_flag("--verbose", o.verbose, "JSON diagnostics on stderr");
    sub->add_option("--t-end", o.t_end, "nonmarkov: end of the time window");
    sub->add_option("--points", o.points, "nonmarkov: grid points");
    sub->add_option("--lattice", o.lattice, "nonmarkov: Bloch lattice size");
}

// Config values are spliced into argv ahead of the given flags, so any
// flag given explicitly takes precedence.
std::vector<std::string> expand_config(const std::vector<std::string> &args) {
    std::string path;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (path.empty()) {
        return args;
    }
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot open config file '" + path + "'");
    }
    Json j;
    try {
        in >> j;
    } catch (const std::exception &e) {
        throw UsageError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    if (!j.is_object()) {
        throw UsageError("config file '" + path + "' must hold a JSON object");
    }
    auto given = [&](const std::string &flag) {
        for (const auto &a : rest) {
            if (a == flag || a.rfind(flag + "=", 0) == 0) {
                return true;
            }
        }
        return false;
    };
    std::vector<std::string> out;
    if (!rest.empty()) {
        out.push_back(rest.front());
    }
    for (const auto &[key, value] : j.items()) {
        const std::string flag = "--" + key;
        if (given(flag)) {
            continue;
        }
        if (value.is_boolean()) {
            if (value.get<bool>()) {
                out.push_back(flag);
            }
        } else if (value.is_array()) {
            std::string joined;
            for (const auto &v : value) {
                joined += (joined.empty() ? "" : ",") + (v.is_string() ? v.get<std::string>() : v.dump());
            }
            out.push_back(flag);
            out.push_back(joined);
        } else {
            out.push_back(flag);
            out.push_back(value.is_string() ? value.get<std::string>() : value.dump());
        }
    }
    out.insert(out.end(), rest.begin() + (rest.empty() ? 0 : 1), rest.end());
    return out;
}

class Output {
  public:
    explicit Output(const std::string &path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary | std::ios::trunc);
            if (!file_) {
                throw UsageError("cannot open output '" + path + "'");
            }
        }
    }
    std::ostream &stream() { return file_.is_open() ? static_cast<std::ostream &>(file_) : std::cout; }

  private:
    std::ofstream file_;
};

std::string fmt(double v) { return io::format_double(v); }

StateKind state_kind(const Options &o) { return o.state == "ghz" ? StateKind::ghz : StateKind::product; }

double single_nu(const Options &o) {
    const auto v = io::parse_double_list(o.nu);
    if (v.size() != 1) {
        throw UsageError("--nu takes a single value for this subcommand");
    }
    return v.front();
}

double single_t_cha(const Options &o) {
    const auto v = io::parse_double_list(o.t_cha);
    if (v.size() != 1) {
        throw UsageError("--t-cha takes a single value for this subcommand");
    }
    return v.front();
}

int single_n(const Options &o) {
    const auto v = io::parse_int_list(o.n);
    if (v.size() != 1) {
        throw UsageError("--n takes a single value for this subcommand");
    }
    return v.front();
}

DephasingLaw make_law(const Options &o) {
    return DephasingLaw(single_nu(o), io::parse_alpha_model(o.alpha_model), single_t_cha(o));
}

std::vector<double> times(const Options &o) {
    if (!o.t_grid.empty()) {
        if (o.t) {
            throw UsageError("--t and --t-grid are mutually exclusive");
        }
        return io::parse_log_grid(o.t_grid);
    }
    if (!o.t) {
        throw UsageError("one of --t or --t-grid is required");
    }
    return {*o.t};
}

PhaseKind phase_kind(const Options &o) {
    if (o.phase == "pi") {
        return PhaseKind::optimal;
    }
    if (o.phase == "pi4") {
        return PhaseKind::suboptimal;
    }
    throw UsageError("--phase must be pi or pi4 for time optimization");
}

/// Finite numeric cells become JSON numbers; labels, nan and inf stay strings.
Json cell_to_json(const std::string &cell) {
    if (cell.empty()) {
        return cell;
    }
    char *end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end != cell.c_str() + cell.size() || !std::isfinite(v)) {
        return cell;
    }
    if (cell.find_first_of(".eE") == std::string::npos && std::abs(v) < 9e15) {
        return static_cast<std::int64_t>(v);
    }
    return v;
}

Json rows_to_json(const std::vector<std::string> &header, const std::vector<std::vector<std::string>> &rows) {
    Json arr = Json::array();
    for (const auto &r : rows) {
        Json obj = Json::object();
        for (std::size_t i = 0; i < header.size(); ++i) {
            obj[header[i]] = cell_to_json(r[i]);
        }
        arr.push_back(obj);
    }
    return arr;
}

void emit_table(const Options &o, const std::vector<std::string> &header,
                const std::vector<std::vector<std::string>> &rows) {
    Output out(o.out);
    if (o.format == "json") {
        out.stream() << rows_to_json(header, rows).dump(2) << '\n';
        return;
    }
    io::CsvWriter w(out.stream(), header);
    for (const auto &r : rows) {
        w.row(r);
    }
}

void cmd_qfi(const Options &o) {
    const auto law = make_law(o);
    const auto channel = io::parse_channel(o.channel);
    const ProbeEnsemble ens{single_n(o), state_kind(o), 0.0, 0.0};
    ens.validate();
    const auto rho0 = DensityMatrix::pure(ens.initial_state());
    std::vector<std::vector<std::string>> rows;
    Json diag = Json::array();
    for (double t : times(o)) {
        const auto ev = evolve_with_derivative(rho0, ens, law, channel, t, o.T);
        const auto d = sld_qfi_diagnostics(ev.rho.matrix(), ev.drho_dT);
        rows.push_back({std::to_string(ens.n), fmt(law.nu()), fmt(o.T), fmt(t), to_string(ens.kind), fmt(d.qfi)});
        if (o.verbose) {
            Json e = Json::object();
            e["t"] = t;
            e["qfi"] = d.qfi;
            e["skipped_pairs"] = d.skipped_pairs;
            e["eigenvalues"] = d.eigenvalues;
            diag.push_back(e);
        }
    }
    emit_table(o, {"n", "nu", "T", "t", "state", "qfi"}, rows);
    if (o.verbose) {
        std::cerr << diag.dump(2) << '\n';
    }
}

void cmd_ramsey_fi(const Options &o) {
    const auto law = make_law(o);
    const auto channel = io::parse_channel(o.channel);
    const ProbeEnsemble ens{single_n(o), state_kind(o), 0.0, 0.0};
    const double phase = io::parse_phase(o.phase);
    std::vector<std::vector<std::string>> rows;
    for (double t : times(o)) {
        const RamseySetup setup{ens, phase, t, o.tau.value_or(t)};
        const auto f = classical_fisher(setup, law, channel, o.T);
        rows.push_back({std::to_string(ens.n), fmt(law.nu()), fmt(o.T), fmt(t), fmt(phase), fmt(f.fisher_per_shot),
                        fmt(f.fisher_total), fmt(f.delta_T)});
    }
    emit_table(o, {"n", "nu", "T", "t", "phase", "fi_per_shot", "fi_total", "delta_T"}, rows);
}

void cmd_optimal_time(const Options &o) {
    const auto law = make_law(o);
    const auto pk = phase_kind(o);
    std::vector<std::vector<std::string>> rows;
    for (int n : io::parse_int_list(o.n)) {
        const RegimeSpec spec{n, o.tau.value_or(1.0), law, o.T, state_kind(o), pk, {}, {}};
        const auto r = optimize_time(spec);
        rows.push_back({std::to_string(n), fmt(law.nu()), fmt(law.t_cha().value_or(0.0)), o.state, to_string(pk),
                        fmt(r.t_star), fmt(r.delta_T_star), to_string(r.boundary_flag), r.regime_label,
                        fmt(r.predicted_delta_T), r.fallback_used ? "1" : "0"});
    }
    emit_table(o,
               {"n", "nu", "t_cha", "state", "phase_kind", "t_star", "delta_T_star", "boundary_flag", "regime",
                "predicted_delta_T", "fallback"},
               rows);
}

void cmd_regime_table(const Options &o) {
    RegimeGrid grid;
    grid.ns = io::parse_int_list(o.n);
    grid.nus = io::parse_double_list(o.nu);
    grid.t_chas = io::parse_double_list(o.t_cha);
    grid.T = o.T;
    grid.tau = o.tau.value_or(1.0);
    grid.model = io::parse_alpha_model(o.alpha_model);
    grid.kind = state_kind(o);
    grid.phase = phase_kind(o);
    std::vector<std::vector<std::string>> rows;
    for (const auto &r : regime_table(grid)) {
        rows.push_back({std::to_string(r.n), fmt(r.nu), fmt(r.t_cha), r.regime, fmt(r.t_star), fmt(r.delta_T_exact),
                        fmt(r.delta_T_branch), fmt(r.ratio), to_string(r.boundary_flag)});
    }
    emit_table(o,
               {"n", "nu", "t_cha", "regime", "t_star", "delta_T_exact", "delta_T_paper_branch", "ratio",
                "boundary_flag"},
               rows);
}

Json intervals_json(const std::vector<Interval> &v) {
    Json arr = Json::array();
    for (const auto &i : v) {
        arr.push_back(Json::array({i.lo, i.hi}));
    }
    return arr;
}

void cmd_nonmarkov(const Options &o) {
    const NonMarkovReference ref{make_law(o), o.T};
    const auto env = io::parse_channel(o.channel);
    const auto grid = uniform_grid(o.t_end, static_cast<std::size_t>(std::max(o.points, 2)));
    StateSearchBudget budget;
    budget.lattice_points = o.lattice;
    const auto rep = nonmarkov_measure(ref, env, grid, budget);
    const auto witness = negativity_witness(env, grid);
    Json j = Json::object();
    j["measure"] = rep.measure;
    j["theta"] = rep.theta;
    j["phi"] = rep.phi;
    j["positive_intervals"] = intervals_json(rep.positive_intervals);
    j["negative_rate_intervals"] = intervals_json(witness);
    j["jaccard"] = jaccard(witness, rep.positive_intervals);
    j["lattice_measure"] = rep.lattice_measure;
    j["refinement_converged"] = rep.refinement_converged;
    j["evaluations"] = rep.evaluations;
    Json meta = Json::object();
    meta["law"] = ref.law.describe();
    meta["T"] = ref.T;
    meta["channel"] = env.describe();
    meta["t_end"] = o.t_end;
    meta["points"] = o.points;
    meta["lattice"] = o.lattice;
    j["reference"] = meta;
    Output out(o.out);
    out.stream() << j.dump(2) << '\n';
}

void cmd_montecarlo(const Options &o) {
    const auto law = make_law(o);
    const ProbeEnsemble ens{single_n(o), state_kind(o), 0.0, 0.0};
    if (!o.t) {
        throw UsageError("montecarlo requires --t");
    }
    const RamseySetup setup{ens, io::parse_phase(o.phase), *o.t, o.tau.value_or(*o.t)};
    const ExperimentPlan plan{o.T, setup, law, io::parse_channel(o.channel), o.shots, o.seed};
    const auto rep = run_montecarlo(plan, o.trials);
    Output out(o.out);
    if (o.format == "json") {
        Json j = Json::object();
        j["n"] = ens.n;
        j["state"] = o.state;
        j["nu"] = law.nu();
        j["T"] = o.T;
        j["t"] = *o.t;
        j["shots"] = o.shots;
        j["trials"] = o.trials;
        j["seed"] = o.seed;
        j["mean_T_hat"] = rep.mean_T_hat;
        j["sample_variance"] = rep.sample_variance;
        j["crb"] = rep.crb;
        j["ratio"] = rep.ratio;
        j["bias"] = rep.bias;
        j["saturated"] = rep.saturated;
        j["estimates"] = rep.estimates;
        out.stream() << j.dump(2) << '\n';
        return;
    }
    io::CsvWriter w(out.stream(), {"n", "state", "nu", "T", "t", "shots", "trials", "seed", "mean_T_hat",
                                   "sample_variance", "crb", "ratio", "bias", "saturated"});
    w.row({std::to_string(ens.n), o.state, fmt(law.nu()), fmt(o.T), fmt(*o.t), std::to_string(o.shots),
           std::to_string(o.trials), std::to_string(o.seed), fmt(rep.mean_T_hat), fmt(rep.sample_variance),
           fmt(rep.crb), fmt(rep.ratio), fmt(rep.bias), std::to_string(rep.saturated)});
}

void cmd_compare_states(const Options &o) {
    const auto law = make_law(o);
    const auto channel = io::parse_channel(o.channel);
    const auto pk = phase_kind(o);
    std::vector<std::vector<std::string>> rows;
    for (int n : io::parse_int_list(o.n)) {
        for (double t : times(o)) {
            double q[2] = {0.0, 0.0};
            double best[2] = {0.0, 0.0};
            int k = 0;
            for (auto kind : {StateKind::product, StateKind::ghz}) {
                const ProbeEnsemble ens{n, kind, 0.0, 0.0};
                ens.validate();
                const auto ev = evolve_with_derivative(DensityMatrix::pure(ens.initial_state()), ens, law, channel,
                                                       t, o.T);
                q[k] = sld_qfi(ev.rho.matrix(), ev.drho_dT);
                best[k] = optimize_time(RegimeSpec{n, o.tau.value_or(1.0), law, o.T, kind, pk, {}, {}}).delta_T_star;
                ++k;
            }
            rows.push_back({std::to_string(n), fmt(law.nu()), fmt(o.T), fmt(t), fmt(q[0]), fmt(q[1]), fmt(q[0] / n),
                            fmt(q[1] / n), fmt(best[0]), fmt(best[1])});
        }
    }
    emit_table(o,
               {"n", "nu", "T", "t", "qfi_product", "qfi_ghz", "per_particle_product", "per_particle_ghz",
                "delta_T_star_product", "delta_T_star_ghz"},
               rows);
}

} // namespace

int main(int argc, char **argv) {
    Options o;
    CLI::App app{"thermoqfi: Fisher-information thermometry with dephasing qubit probes"};
    app.require_subcommand(1);
    struct Entry {
        const char *name;
        const char *help;
        void (*run)(const Options &);
    };
    const Entry entries[] = {
        {"qfi", "SLD quantum Fisher information of the dephased probe", cmd_qfi},
        {"ramsey-fi", "Ramsey classical Fisher information and precision", cmd_ramsey_fi},
        {"optimal-time", "optimal interrogation time", cmd_optimal_time},
        {"regime-table", "exact optima against the asymptotic branch formulas", cmd_regime_table},
        {"nonmarkov", "Fisher-information non-Markovianity measure", cmd_nonmarkov},
        {"montecarlo", "Monte-Carlo maximum-likelihood estimation", cmd_montecarlo},
        {"compare-states", "product against GHZ probes", cmd_compare_states},
    };
    std::vector<std::pair<CLI::App *, const Entry *>> subs;
    for (const auto &e : entries) {
        auto *sub = app.add_subcommand(e.name, e.help);
        add_common(sub, o);
        subs.emplace_back(sub, &e);
    }
    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = expand_config(args);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const UsageError &e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_usage;
    }
    try {
        for (const auto &[sub, entry] : subs) {
            if (sub->parsed()) {
                entry->run(o);
            }
        }
    } catch (const UsageError &e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const InvalidInput &e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const DomainError &e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception &e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return exit_numerical;
    }
    return 0;
}
