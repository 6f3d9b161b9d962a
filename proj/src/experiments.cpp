#include "tocgeo/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "tocgeo/dynamics.hpp"
#include "tocgeo/geometry.hpp"
#include "tocgeo/parallel.hpp"

namespace tocgeo {

std::vector<double> linspace(double start, double stop, int count) {
    if (count < 1) throw std::invalid_argument("linspace: count must be >= 1");
    std::vector<double> xs(count);
    if (count == 1) {
        xs[0] = start;
        return xs;
    }
    for (int k = 0; k < count; ++k)
        xs[k] = start + (stop - start) * static_cast<double>(k) / (count - 1);
    return xs;
}

std::string format_double(double value) {
    char buf[40];
    const auto res =
        std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

void write_csv(const ResultTable& table, std::ostream& out) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c) out << ',';
        out << table.columns[c];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ',';
            out << format_double(row[c]);
        }
        out << '\n';
    }
}

namespace {

nlohmann::ordered_json manifest_json(const ResultTable& table) {
    nlohmann::ordered_json m = nlohmann::ordered_json::object();
    for (const auto& [key, value] : table.manifest) m[key] = value;
    return m;
}

}  // namespace

void write_json(const ResultTable& table, std::ostream& out) {
    nlohmann::ordered_json j;
    j["manifest"] = manifest_json(table);
    j["columns"] = table.columns;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        auto r = nlohmann::ordered_json::array();
        for (double v : row) {
            if (std::isnan(v))
                r.push_back(nullptr);
            else
                r.push_back(v);
        }
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    out << j.dump(2) << '\n';
}

void write_table(const ResultTable& table, const std::string& path, OutputFormat format) {
    if (path.empty()) {
        if (format == OutputFormat::Csv)
            write_csv(table, std::cout);
        else
            write_json(table, std::cout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError(path, "cannot open output file");
    if (format == OutputFormat::Csv) {
        write_csv(table, out);
        std::ofstream side(path + ".manifest.json", std::ios::binary);
        if (!side) throw ConfigError(path + ".manifest.json", "cannot open manifest file");
        side << manifest_json(table).dump(2) << '\n';
    } else {
        write_json(table, out);
    }
}

TransmonParams RunConfig::transmon() const {
    return TransmonParams{alpha1, kappa_minus, kappa_z, 3};
}

CoupledSystemParams RunConfig::coupled() const {
    CoupledSystemParams p;
    p.g12 = g12;
    p.delta1 = delta1;
    p.q1 = TransmonParams{alpha1, kappa_minus, kappa_z, 3};
    p.q2 = TransmonParams{alpha2, kappa_minus, kappa_z, 3};
    return p;
}

IntegratorOptions RunConfig::integrator() const {
    IntegratorOptions opts;
    opts.dt = dt;
    opts.convergence_check = convergence_check;
    return opts;
}

// ---------------------------------------------------------------------------
// Configuration file

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_number(const std::string& text, const std::string& where) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(where, "expected a number, got '" + text + "'");
    }
}

int parse_count(const std::string& text, const std::string& where) {
    const double v = parse_number(text, where);
    const int n = static_cast<int>(std::lround(v));
    if (n < 1 || std::abs(v - n) > 1e-9)
        throw ConfigError(where, "expected a positive integer, got '" + text + "'");
    return n;
}

bool parse_bool(const std::string& text, const std::string& where) {
    if (text == "true" || text == "on" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "off" || text == "0" || text == "no") return false;
    throw ConfigError(where, "expected a boolean, got '" + text + "'");
}

Axis parse_axis(const std::string& text, const std::string& where) {
    if (text == "x" || text == "X") return Axis::X;
    if (text == "y" || text == "Y") return Axis::Y;
    throw ConfigError(where, "axis must be x or y, got '" + text + "'");
}

GateKind parse_kind(const std::string& text, const std::string& where) {
    if (text == "geometric") return GateKind::Geometric;
    if (text == "dynamical") return GateKind::Dynamical;
    throw ConfigError(where, "kind must be geometric or dynamical, got '" + text + "'");
}

double parse_angle_or_throw(const std::string& text, const std::string& where) {
    try {
        return parse_angle(text);
    } catch (const std::exception& e) {
        throw ConfigError(where, e.what());
    }
}

void apply_entry(RunConfig& cfg, const std::string& section, const std::string& key,
                 const std::string& value, const std::string& where) {
    if (section == "device") {
        if (key == "omega_max_mhz") cfg.omega_max = mhz(parse_number(value, where));
        else if (key == "alpha1_mhz") cfg.alpha1 = mhz(parse_number(value, where));
        else if (key == "alpha2_mhz") cfg.alpha2 = mhz(parse_number(value, where));
        else if (key == "kappa_minus_khz") cfg.kappa_minus = khz(parse_number(value, where));
        else if (key == "kappa_z_khz") cfg.kappa_z = khz(parse_number(value, where));
        else if (key == "g12_mhz") cfg.g12 = mhz(parse_number(value, where));
        else if (key == "delta1_mhz") cfg.delta1 = mhz(parse_number(value, where));
        else throw ConfigError(where, "unknown key '" + key + "' in [device]");
    } else if (section == "gate") {
        if (key == "axis") cfg.axis = parse_axis(value, where);
        else if (key == "angle") cfg.angle = parse_angle_or_throw(value, where);
        else if (key == "kind") cfg.kind = parse_kind(value, where);
        else if (key == "drag") cfg.drag = parse_bool(value, where);
        else if (key == "vartheta") cfg.vartheta = parse_angle_or_throw(value, where);
        else if (key == "varphi0") cfg.varphi0 = parse_angle_or_throw(value, where);
        else throw ConfigError(where, "unknown key '" + key + "' in [gate]");
    } else if (section == "sweep") {
        if (key == "theta_count") cfg.theta_count = parse_count(value, where);
        else if (key == "range") cfg.range = parse_number(value, where);
        else if (key == "steps") cfg.grid_steps = parse_count(value, where);
        else if (key == "omega_start_mhz") cfg.omega.start = mhz(parse_number(value, where));
        else if (key == "omega_stop_mhz") cfg.omega.stop = mhz(parse_number(value, where));
        else if (key == "omega_count") cfg.omega.count = parse_count(value, where);
        else if (key == "beta_start") cfg.beta.start = parse_number(value, where);
        else if (key == "beta_stop") cfg.beta.stop = parse_number(value, where);
        else if (key == "beta_count") cfg.beta.count = parse_count(value, where);
        else if (key == "nu_start_mhz") cfg.nu.start = mhz(parse_number(value, where));
        else if (key == "nu_stop_mhz") cfg.nu.stop = mhz(parse_number(value, where));
        else if (key == "nu_count") cfg.nu.count = parse_count(value, where);
        else if (key == "delta1_start_mhz")
            cfg.delta1_sweep.start = mhz(parse_number(value, where));
        else if (key == "delta1_stop_mhz")
            cfg.delta1_sweep.stop = mhz(parse_number(value, where));
        else if (key == "delta1_count") cfg.delta1_sweep.count = parse_count(value, where);
        else if (key == "axes") {
            if (value != "beta,nu" && value != "delta1,beta")
                throw ConfigError(where, "axes must be 'beta,nu' or 'delta1,beta'");
            cfg.fig5_axes = value;
        } else if (key == "n_states") cfg.n_states = parse_count(value, where);
        else if (key == "state_grid") cfg.state_grid = parse_count(value, where);
        else throw ConfigError(where, "unknown key '" + key + "' in [sweep]");
    } else if (section == "integrator") {
        if (key == "dt_ns") cfg.dt = parse_number(value, where);
        else if (key == "convergence_check") cfg.convergence_check = parse_bool(value, where);
        else throw ConfigError(where, "unknown key '" + key + "' in [integrator]");
    } else if (section == "output") {
        if (key == "path") cfg.out_path = value;
        else if (key == "format") {
            if (value == "csv") cfg.format = OutputFormat::Csv;
            else if (value == "json") cfg.format = OutputFormat::Json;
            else throw ConfigError(where, "format must be csv or json");
        } else if (key == "workers") cfg.workers = static_cast<unsigned>(parse_count(value, where));
        else throw ConfigError(where, "unknown key '" + key + "' in [output]");
    } else {
        throw ConfigError(where, "unknown section [" + section + "]");
    }
}

void validate_config(const RunConfig& cfg, const std::string& where) {
    auto check_sweep = [&](const SweepSpec& s, const char* name) {
        if (s.count < 1) throw ConfigError(where, std::string(name) + ": count must be >= 1");
        if (s.start > s.stop)
            throw ConfigError(where, std::string(name) + ": start must be <= stop");
    };
    check_sweep(cfg.omega, "omega sweep");
    check_sweep(cfg.beta, "beta sweep");
    check_sweep(cfg.nu, "nu sweep");
    check_sweep(cfg.delta1_sweep, "delta1 sweep");
    if (cfg.range < 0.0 || cfg.range > 0.2)
        throw ConfigError(where, "range must lie in [0, 0.2]");
    if (cfg.dt < 0.0) throw ConfigError(where, "dt_ns must be >= 0");
}

}  // namespace

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open config file");
    RunConfig cfg;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string where = path + ":" + std::to_string(lineno);
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where, "malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where, "expected key = value");
        if (section.empty()) throw ConfigError(where, "key outside of any section");
        apply_entry(cfg, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), where);
    }
    validate_config(cfg, path);
    return cfg;
}

// ---------------------------------------------------------------------------
// Figure runners

ResultTable run_fig1b(double omega_max, const std::vector<double>& angles) {
    ResultTable table;
    table.columns = {"theta", "tau_toc_x_ns", "tau_toc_y_ns", "tau_conventional_ns"};
    for (double theta : angles) {
        const auto px = synth_single_qubit_toc(Axis::X, theta, omega_max);
        const auto py = synth_single_qubit_toc(Axis::Y, theta, omega_max);
        table.rows.push_back({theta, px.tau, py.tau, conventional_gate_time(theta, omega_max)});
    }
    return table;
}

RobustnessGrid run_fig3(Axis axis, double angle, GateKind kind, double range, int steps,
                        double omega_max, const IntegratorOptions& opts) {
    if (range < 0.0 || range > 0.2)
        throw std::invalid_argument("run_fig3: range must lie in [0, 0.2]");
    const auto axis_values = linspace(-range, range, steps);
    return fill_robustness_grid(kind, axis, angle, omega_max, axis_values, axis_values, opts);
}

ResultTable robustness_table(const RobustnessGrid& grid) {
    ResultTable table;
    table.columns = {"delta", "epsilon", "fidelity"};
    for (std::size_t i = 0; i < grid.delta_axis.size(); ++i)
        for (std::size_t j = 0; j < grid.epsilon_axis.size(); ++j)
            table.rows.push_back({grid.delta_axis[i], grid.epsilon_axis[j], grid.values[i][j]});
    return table;
}

ResultTable run_fig4(Axis axis, double angle, const std::vector<double>& omega_values,
                     const DragCorrection& drag, const TransmonParams& params, int n_states,
                     const IntegratorOptions& opts) {
    ResultTable table;
    table.columns = {"omega_max_mhz", "fidelity", "leakage", "tau_ns", "delta_mhz"};
    for (double omega : omega_values) {
        const auto pulse = synth_single_qubit_toc(axis, angle, omega);
        const auto report = avg_gate_fidelity_1q(pulse, drag, params, n_states, opts);
        table.rows.push_back(
            {to_mhz(omega), report.value, report.mean_leakage, pulse.tau, to_mhz(pulse.delta)});
    }
    return table;
}

std::optional<TocTwoQubitDrive> fig5_drive(double beta, double nu,
                                           const CoupledSystemParams& params,
                                           double vartheta, double varphi0) {
    const double j1 = bessel_j1(beta);
    if (j1 <= 0.0) return std::nullopt;
    TocTwoQubitDrive d;
    d.vartheta = vartheta;
    d.varphi0 = varphi0;
    d.beta = beta;
    d.nu = nu;
    d.g_eff = 2.0 * j1 * params.g12;
    d.delta_t = nu - params.delta1;
    d.eta = std::cos(vartheta / 2.0) / std::sin(vartheta / 2.0) * d.g_eff - d.delta_t;
    if (d.eta >= 0.0) return std::nullopt;  // phi1 cannot wind to -pi
    d.duration = -kPi / d.eta;
    return d;
}

ResultTable run_fig5(const SweepSpec& beta, const SweepSpec& nu,
                     const CoupledSystemParams& params, double vartheta, double varphi0,
                     int state_grid, const IntegratorOptions& opts) {
    ResultTable table;
    table.columns = {"beta", "nu_mhz", "fidelity", "T_ns", "valid"};
    for (double b : linspace(beta.start, beta.stop, beta.count)) {
        for (double nu_val : linspace(nu.start, nu.stop, nu.count)) {
            const auto drive = fig5_drive(b, nu_val, params, vartheta, varphi0);
            double fidelity = std::numeric_limits<double>::quiet_NaN();
            double duration = std::numeric_limits<double>::quiet_NaN();
            double valid = 0.0;
            if (drive) {
                const auto report = avg_gate_fidelity_2q_process(
                    *drive, params, state_grid * state_grid, opts);
                fidelity = report.value;
                duration = drive->duration;
                valid = 1.0;
            }
            table.rows.push_back({b, to_mhz(nu_val), fidelity, duration, valid});
        }
    }
    return table;
}

ResultTable run_fig5_delta1(const SweepSpec& delta1, const SweepSpec& beta,
                            const CoupledSystemParams& params, double vartheta,
                            double varphi0, int state_grid, const IntegratorOptions& opts) {
    // Device-parameter scan: each cell re-derives the full drive (nu included)
    // from the time-optimal conditions, so every valid cell realizes the
    // target gate and the fidelity shows the leakage/sideband landscape.
    ResultTable table;
    table.columns = {"delta1_mhz", "beta", "nu_mhz", "fidelity", "T_ns", "valid"};
    for (double d1 : linspace(delta1.start, delta1.stop, delta1.count)) {
        for (double b : linspace(beta.start, beta.stop, beta.count)) {
            CoupledSystemParams cell = params;
            cell.delta1 = d1;
            double fidelity = std::numeric_limits<double>::quiet_NaN();
            double duration = std::numeric_limits<double>::quiet_NaN();
            double nu_val = std::numeric_limits<double>::quiet_NaN();
            double valid = 0.0;
            try {
                const auto drive = synth_two_qubit_toc(vartheta, varphi0, cell.g12, b, d1);
                const auto report = avg_gate_fidelity_2q_process(
                    drive, cell, state_grid * state_grid, opts);
                fidelity = report.value;
                duration = drive.duration;
                nu_val = to_mhz(drive.nu);
                valid = 1.0;
            } catch (const std::domain_error&) {
                // beta beyond the first Bessel zero: cell is unreachable
            }
            table.rows.push_back({to_mhz(d1), b, nu_val, fidelity, duration, valid});
        }
    }
    return table;
}

double parse_angle(const std::string& text) {
    std::string s = trim(text);
    if (s.empty()) throw std::invalid_argument("empty angle");
    double sign = 1.0;
    if (s.front() == '-') {
        sign = -1.0;
        s.erase(0, 1);
    } else if (s.front() == '+') {
        s.erase(0, 1);
    }
    if (s == "pi") return sign * kPi;
    if (s.rfind("pi/", 0) == 0) {
        const double denom = std::stod(s.substr(3));
        if (denom == 0.0) throw std::invalid_argument("angle: division by zero");
        return sign * kPi / denom;
    }
    if (s.size() > 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
        std::size_t used = 0;
        const double factor = std::stod(s.substr(0, s.size() - 2), &used);
        if (used != s.size() - 2) throw std::invalid_argument("bad angle '" + text + "'");
        return sign * factor * kPi;
    }
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("bad angle '" + text + "'");
    return sign * v;
}

}  // namespace tocgeo
