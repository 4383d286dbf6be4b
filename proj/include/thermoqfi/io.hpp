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
 * Text formats: 17-digit CSV, two-column CSV input and the compact spec
 * strings used for temperature models, channels, phases and time grids.
 */
#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "channel.hpp"
#include "errors.hpp"
#include "linalg.hpp"
#include "temperature_model.hpp"

namespace thermoqfi::io {

/// %.17g, with "nan", "inf" and "-inf" for non-finite values.
inline std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class CsvWriter {
  public:
    CsvWriter(std::ostream &os, const std::vector<std::string> &header) : os_(os), columns_(header.size()) {
        row(header);
    }

    void row(const std::vector<std::string> &cells) {
        detail::require_input(cells.size() == columns_, "csv: row has the wrong number of cells");
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) {
                os_ << ',';
            }
            os_ << cells[i];
        }
        os_ << '\n';
    }

  private:
    std::ostream &os_;
    std::size_t columns_;
};

struct TwoColumns {
    std::vector<double> first;
    std::vector<double> second;
};

namespace detail {

inline std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) {
        out.push_back(trim(cur));
    }
    if (!s.empty() && s.back() == sep) {
        out.emplace_back();
    }
    return out;
}

inline double parse_number(const std::string &s, const std::string &what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception &) {
        throw InvalidInput(what + ": '" + s + "' is not a number");
    }
    if (used != s.size()) {
        throw InvalidInput(what + ": '" + s + "' is not a number");
    }
    return v;
}

/// "k1=v1,k2=v2" into a map of numbers; string values are kept verbatim.
inline std::map<std::string, std::string> parse_pairs(const std::string &s, const std::string &what) {
    std::map<std::string, std::string> out;
    if (trim(s).empty()) {
        return out;
    }
    for (const auto &item : split(s, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw InvalidInput(what + ": expected key=value, got '" + item + "'");
        }
        out[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
    }
    return out;
}

inline const std::string &need(const std::map<std::string, std::string> &m, const std::string &key,
                               const std::string &what) {
    const auto it = m.find(key);
    if (it == m.end()) {
        throw InvalidInput(what + ": missing '" + key + "'");
    }
    return it->second;
}

} // namespace detail

/// Two numeric columns; a non-numeric first line is taken as a header.
/// The first column must be strictly increasing.
inline TwoColumns read_two_column_csv(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidInput("cannot open '" + path + "'");
    }
    TwoColumns out;
    std::string line;
    bool first_line = true;
    while (std::getline(in, line)) {
        line = detail::trim(line);
        if (line.empty() || line[0] == '#') {
            continue;
        }
        const auto cells = detail::split(line, ',');
        if (cells.size() != 2) {
            throw InvalidInput(path + ": expected two columns in '" + line + "'");
        }
        if (first_line) {
            first_line = false;
            try {
                (void)detail::parse_number(cells[0], path);
            } catch (const InvalidInput &) {
                continue;
            }
        }
        out.first.push_back(detail::parse_number(cells[0], path));
        out.second.push_back(detail::parse_number(cells[1], path));
        if (out.first.size() > 1) {
            thermoqfi::detail::require_input(out.first.back() > out.first[out.first.size() - 2],
                                             path + ": first column must be strictly increasing");
        }
    }
    thermoqfi::detail::require_input(out.first.size() >= 2, path + ": need at least two rows");
    return out;
}

/// linear:g=1 | power:g=1,p=2 | table:path.csv
inline TemperatureModel parse_alpha_model(const std::string &spec) {
    const auto colon = spec.find(':');
    const std::string kind = detail::trim(spec.substr(0, colon));
    const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
    const std::string what = "alpha model";
    if (kind == "linear") {
        const auto kv = detail::parse_pairs(rest, what);
        return TemperatureModel::linear(kv.count("g") ? detail::parse_number(kv.at("g"), what) : 1.0);
    }
    if (kind == "power") {
        const auto kv = detail::parse_pairs(rest, what);
        return TemperatureModel::power(detail::parse_number(detail::need(kv, "g", what), what),
                                       detail::parse_number(detail::need(kv, "p", what), what));
    }
    if (kind == "table") {
        auto cols = read_two_column_csv(detail::trim(rest));
        return TemperatureModel::table(std::move(cols.first), std::move(cols.second));
    }
    throw InvalidInput("unknown alpha model '" + spec + "'");
}

/// none | dephasing:kappa=,nu= | dephasing:csv=path | damping:eta= | damping:csv=path
inline EnvironmentChannel parse_channel(const std::string &spec) {
    const auto colon = spec.find(':');
    const std::string kind = detail::trim(spec.substr(0, colon));
    const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
    const std::string what = "channel";
    if (kind == "none") {
        return EnvironmentChannel::none();
    }
    const auto kv = detail::parse_pairs(rest, what);
    if (kind == "dephasing") {
        if (kv.count("csv")) {
            auto cols = read_two_column_csv(kv.at("csv"));
            return EnvironmentChannel::dephasing_rate(
                RateFunction::tabulated(std::move(cols.first), std::move(cols.second)));
        }
        return EnvironmentChannel::power_dephasing(detail::parse_number(detail::need(kv, "kappa", what), what),
                                                   detail::parse_number(detail::need(kv, "nu", what), what));
    }
    if (kind == "damping") {
        if (kv.count("csv")) {
            auto cols = read_two_column_csv(kv.at("csv"));
            return EnvironmentChannel::amplitude_damping(
                RateFunction::tabulated(std::move(cols.first), std::move(cols.second)));
        }
        return EnvironmentChannel::amplitude_damping(
            RateFunction::constant(detail::parse_number(detail::need(kv, "eta", what), what)));
    }
    throw InvalidInput("unknown channel '" + spec + "'");
}

/// pi | pi2 | pi4 | numeric value
inline double parse_phase(const std::string &spec) {
    const std::string s = detail::trim(spec);
    if (s == "pi") {
        return pi;
    }
    if (s == "pi2") {
        return pi / 2.0;
    }
    if (s == "pi4") {
        return pi / 4.0;
    }
    return detail::parse_number(s, "phase");
}

/// lo:hi:steps, log-spaced and inclusive of both ends.
inline std::vector<double> parse_log_grid(const std::string &spec) {
    const auto parts = detail::split(spec, ':');
    thermoqfi::detail::require_input(parts.size() == 3, "t-grid: expected lo:hi:steps");
    const double lo = detail::parse_number(parts[0], "t-grid");
    const double hi = detail::parse_number(parts[1], "t-grid");
    const double steps = detail::parse_number(parts[2], "t-grid");
    thermoqfi::detail::require_input(lo > 0.0 && hi >= lo, "t-grid: need 0 < lo <= hi");
    thermoqfi::detail::require_input(steps >= 1.0 && steps == std::floor(steps), "t-grid: steps must be a positive integer");
    const auto k = static_cast<std::size_t>(steps);
    std::vector<double> out(k);
    for (std::size_t i = 0; i < k; ++i) {
        out[i] = k == 1 ? lo : std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * double(i) / double(k - 1));
    }
    return out;
}

inline std::vector<int> parse_int_list(const std::string &spec) {
    std::vector<int> out;
    for (const auto &item : detail::split(spec, ',')) {
        const double v = detail::parse_number(item, "integer list");
        thermoqfi::detail::require_input(v == std::floor(v) && v >= 1 && v <= 1e9,
                                         "integer list: '" + item + "' is not a positive integer");
        out.push_back(static_cast<int>(v));
    }
    thermoqfi::detail::require_input(!out.empty(), "integer list: empty");
    return out;
}

inline std::vector<double> parse_double_list(const std::string &spec) {
    std::vector<double> out;
    for (const auto &item : detail::split(spec, ',')) {
        out.push_back(detail::parse_number(item, "number list"));
    }
    thermoqfi::detail::require_input(!out.empty(), "number list: empty");
    return out;
}

} // namespace thermoqfi::io
