#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tocgeo/experiments.hpp"
#include "tocgeo/parallel.hpp"

namespace tocgeo {

namespace {

struct CliState {
    RunConfig cfg;
    std::string command;

    // raw flag storage; applied over the config file when present
    std::string config_path, out_path, format = "csv";
    std::string axis = "x", angle = "pi/2", kind = "geometric";
    std::string vartheta = "pi/2", varphi0 = "pi/2", sweep_axes = "beta,nu";
    double omega_max_mhz = 45.0, alpha1_mhz = 220.0, alpha2_mhz = 180.0;
    double g12_mhz = 8.0, delta1_mhz = 320.0, kappa_khz = 4.0, beta = 1.3;
    double range = 0.1, dt = 0.0;
    double omega_start_mhz = 20.0, omega_stop_mhz = 60.0;
    double beta_start = 1.0, beta_stop = 1.6;
    double nu_start_mhz = 330.0, nu_stop_mhz = 350.0;
    double delta1_start_mhz = 300.0, delta1_stop_mhz = 340.0;
    int steps = 41, theta_count = 50, omega_count = 41, beta_count = 31, nu_count = 21;
    int delta1_count = 21, n_states = 1001, state_grid = 21;
    unsigned workers = 0;
    bool no_drag = false, two_qubit = false, convergence_check = false;
};

void add_common(CLI::App* cmd, CliState& st) {
    cmd->add_option("--config", st.config_path, "configuration file (INI sections)");
    cmd->add_option("--out", st.out_path, "output path (stdout when omitted)");
    cmd->add_option("--format", st.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--workers", st.workers, "cap on worker threads");
    cmd->add_option("--dt", st.dt, "integrator step [ns], 0 = duration/4000");
    cmd->add_flag("--convergence-check", st.convergence_check,
                  "re-run at dt/2 and require agreement");
}

std::string echo_bool(bool b) { return b ? "true" : "false"; }

void fill_manifest(ResultTable& table, const RunConfig& cfg, const std::string& command) {
    auto& m = table.manifest;
    m["command"] = command;
    m["version"] = kVersion;
    m["device.omega_max_mhz"] = format_double(to_mhz(cfg.omega_max));
    m["device.omega_max_rad_ns"] = format_double(cfg.omega_max);
    m["device.alpha1_mhz"] = format_double(to_mhz(cfg.alpha1));
    m["device.alpha2_mhz"] = format_double(to_mhz(cfg.alpha2));
    m["device.kappa_minus_khz"] = format_double(to_khz(cfg.kappa_minus));
    m["device.kappa_z_khz"] = format_double(to_khz(cfg.kappa_z));
    m["device.g12_mhz"] = format_double(to_mhz(cfg.g12));
    m["device.delta1_mhz"] = format_double(to_mhz(cfg.delta1));
    m["gate.axis"] = cfg.axis == Axis::X ? "x" : "y";
    m["gate.angle_rad"] = format_double(cfg.angle);
    m["gate.kind"] = cfg.kind == GateKind::Geometric ? "geometric" : "dynamical";
    m["gate.drag"] = echo_bool(cfg.drag);
    m["gate.vartheta_rad"] = format_double(cfg.vartheta);
    m["gate.varphi0_rad"] = format_double(cfg.varphi0);
    m["sweep.theta_count"] = std::to_string(cfg.theta_count);
    m["sweep.range"] = format_double(cfg.range);
    m["sweep.steps"] = std::to_string(cfg.grid_steps);
    m["sweep.omega_mhz"] = format_double(to_mhz(cfg.omega.start)) + ".." +
                           format_double(to_mhz(cfg.omega.stop)) + " x" +
                           std::to_string(cfg.omega.count);
    m["sweep.beta"] = format_double(cfg.beta.start) + ".." + format_double(cfg.beta.stop) +
                      " x" + std::to_string(cfg.beta.count);
    m["sweep.nu_mhz"] = format_double(to_mhz(cfg.nu.start)) + ".." +
                        format_double(to_mhz(cfg.nu.stop)) + " x" +
                        std::to_string(cfg.nu.count);
    m["sweep.delta1_mhz"] = format_double(to_mhz(cfg.delta1_sweep.start)) + ".." +
                            format_double(to_mhz(cfg.delta1_sweep.stop)) + " x" +
                            std::to_string(cfg.delta1_sweep.count);
    m["sweep.axes"] = cfg.fig5_axes;
    m["sweep.n_states"] = std::to_string(cfg.n_states);
    m["sweep.state_grid"] = std::to_string(cfg.state_grid);
    m["integrator.dt_ns"] = cfg.dt > 0.0 ? format_double(cfg.dt) : "auto(duration/4000)";
    m["integrator.method"] = "piecewise-exponential/rk4";
    m["integrator.convergence_check"] = echo_bool(cfg.convergence_check);
    m["output.format"] = cfg.format == OutputFormat::Csv ? "csv" : "json";
    m["output.workers"] = std::to_string(cfg.workers == 0 ? worker_count() : cfg.workers);
}

int dispatch(const CLI::App& app, CliState& st) {
    RunConfig cfg;
    if (!st.config_path.empty()) cfg = load_config(st.config_path);

    const CLI::App* cmd = app.get_subcommands().front();
    auto given = [&](const std::string& name) {
        const CLI::Option* opt = cmd->get_option_no_throw(name);
        return opt != nullptr && opt->count() > 0;
    };

    if (given("--out")) cfg.out_path = st.out_path;
    if (given("--format")) cfg.format = st.format == "json" ? OutputFormat::Json : OutputFormat::Csv;
    if (given("--workers")) cfg.workers = st.workers;
    if (given("--dt")) cfg.dt = st.dt;
    if (given("--convergence-check")) cfg.convergence_check = true;
    if (given("--axis")) cfg.axis = st.axis == "y" || st.axis == "Y" ? Axis::Y : Axis::X;
    if (given("--angle")) cfg.angle = parse_angle(st.angle);
    if (given("--kind"))
        cfg.kind = st.kind == "dynamical" ? GateKind::Dynamical : GateKind::Geometric;
    if (given("--omega-max")) cfg.omega_max = mhz(st.omega_max_mhz);
    if (given("--alpha1")) cfg.alpha1 = mhz(st.alpha1_mhz);
    if (given("--alpha2")) cfg.alpha2 = mhz(st.alpha2_mhz);
    if (given("--g12")) cfg.g12 = mhz(st.g12_mhz);
    if (given("--delta1")) cfg.delta1 = mhz(st.delta1_mhz);
    if (given("--kappa")) cfg.kappa_minus = cfg.kappa_z = khz(st.kappa_khz);
    if (given("--no-drag")) cfg.drag = false;
    if (given("--vartheta")) cfg.vartheta = parse_angle(st.vartheta);
    if (given("--varphi0")) cfg.varphi0 = parse_angle(st.varphi0);
    if (given("--range")) cfg.range = st.range;
    if (given("--steps")) cfg.grid_steps = st.steps;
    if (given("--theta-count")) cfg.theta_count = st.theta_count;
    if (given("--omega-start")) cfg.omega.start = mhz(st.omega_start_mhz);
    if (given("--omega-stop")) cfg.omega.stop = mhz(st.omega_stop_mhz);
    if (given("--omega-count")) cfg.omega.count = st.omega_count;
    if (given("--beta-start")) cfg.beta.start = st.beta_start;
    if (given("--beta-stop")) cfg.beta.stop = st.beta_stop;
    if (given("--beta-count")) cfg.beta.count = st.beta_count;
    if (given("--nu-start")) cfg.nu.start = mhz(st.nu_start_mhz);
    if (given("--nu-stop")) cfg.nu.stop = mhz(st.nu_stop_mhz);
    if (given("--nu-count")) cfg.nu.count = st.nu_count;
    if (given("--delta1-start")) cfg.delta1_sweep.start = mhz(st.delta1_start_mhz);
    if (given("--delta1-stop")) cfg.delta1_sweep.stop = mhz(st.delta1_stop_mhz);
    if (given("--delta1-count")) cfg.delta1_sweep.count = st.delta1_count;
    if (given("--sweep-axes")) cfg.fig5_axes = st.sweep_axes;
    if (given("--n-states")) cfg.n_states = st.n_states;
    if (given("--state-grid")) cfg.state_grid = st.state_grid;

    if (cfg.workers > 0) {
        // worker_count() also honors TOCGEO_WORKERS; an explicit config value
        // wins by exporting it for this process.
        setenv("TOCGEO_WORKERS", std::to_string(cfg.workers).c_str(), 1);
    }

    const std::string name = cmd->get_name();
    if (name == "validate") {
        const int failures = run_validate(std::cout);
        if (failures) std::cerr << failures << " invariant(s) failed\n";
        return failures == 0 ? 0 : 1;
    }

    if (name == "synth") {
        if (st.two_qubit) {
            const auto d =
                synth_two_qubit_toc(cfg.vartheta, cfg.varphi0, cfg.g12, st.beta, cfg.delta1);
            std::cout << "vartheta_rad = " << format_double(d.vartheta) << '\n'
                      << "varphi0_rad = " << format_double(d.varphi0) << '\n'
                      << "beta = " << format_double(d.beta) << '\n'
                      << "g_eff_mhz = " << format_double(to_mhz(d.g_eff)) << '\n'
                      << "T_ns = " << format_double(d.duration) << '\n'
                      << "eta_rad_ns = " << format_double(d.eta) << '\n'
                      << "delta_t_mhz = " << format_double(to_mhz(d.delta_t)) << '\n'
                      << "nu_mhz = " << format_double(to_mhz(d.nu)) << '\n';
            return 0;
        }
        const auto p = synth_single_qubit_toc(cfg.axis, cfg.angle, cfg.omega_max);
        std::cout << "axis = " << (cfg.axis == Axis::X ? "x" : "y") << '\n'
                  << "theta_rad = " << format_double(p.theta) << '\n'
                  << "omega_max_mhz = " << format_double(to_mhz(p.envelope.omega_max)) << '\n'
                  << "tau_ns = " << format_double(p.tau) << '\n'
                  << "delta_mhz = " << format_double(to_mhz(p.delta)) << '\n'
                  << "delta_rad_ns = " << format_double(p.delta) << '\n'
                  << "c0 = " << format_double(p.c0) << '\n'
                  << "phi0_rad = " << format_double(p.phi0) << '\n'
                  << "pulse_area_rad = " << format_double(p.area()) << '\n'
                  << "conventional_tau_ns = "
                  << format_double(conventional_gate_time(p.theta, p.envelope.omega_max))
                  << '\n';
        return 0;
    }

    ResultTable table;
    if (name == "fig1b") {
        std::vector<double> angles(cfg.theta_count);
        for (int k = 1; k <= cfg.theta_count; ++k)
            angles[k - 1] = kPi * static_cast<double>(k) / cfg.theta_count;
        table = run_fig1b(cfg.omega_max, angles);
    } else if (name == "fig3") {
        const auto grid = run_fig3(cfg.axis, cfg.angle, cfg.kind, cfg.range, cfg.grid_steps,
                                   cfg.omega_max, cfg.integrator());
        table = robustness_table(grid);
    } else if (name == "fig4") {
        const auto omegas = linspace(cfg.omega.start, cfg.omega.stop, cfg.omega.count);
        table = run_fig4(cfg.axis, cfg.angle, omegas, DragCorrection{cfg.drag, cfg.alpha1},
                         cfg.transmon(), cfg.n_states, cfg.integrator());
    } else if (name == "fig5") {
        const auto params = cfg.coupled();
        const auto warning = coupled_params_warning(params);
        if (!warning.empty()) std::cerr << "warning: " << warning << '\n';
        if (cfg.fig5_axes == "delta1,beta")
            table = run_fig5_delta1(cfg.delta1_sweep, cfg.beta, params, cfg.vartheta,
                                    cfg.varphi0, cfg.state_grid, cfg.integrator());
        else
            table = run_fig5(cfg.beta, cfg.nu, params, cfg.vartheta, cfg.varphi0,
                             cfg.state_grid, cfg.integrator());
    } else if (name == "fidelity") {
        if (st.two_qubit) {
            const auto params = cfg.coupled();
            const auto warning = coupled_params_warning(params);
            if (!warning.empty()) std::cerr << "warning: " << warning << '\n';
            const auto drive =
                synth_two_qubit_toc(cfg.vartheta, cfg.varphi0, cfg.g12, st.beta, cfg.delta1);
            const auto report = avg_gate_fidelity_2q(drive, params,
                                                     cfg.state_grid * cfg.state_grid,
                                                     cfg.integrator());
            table.columns = {"fidelity", "mean_leakage", "max_leakage", "n_states", "T_ns"};
            table.rows = {{report.value, report.mean_leakage, report.max_leakage,
                           static_cast<double>(report.n_states), drive.duration}};
        } else {
            const auto pulse = synth_single_qubit_toc(cfg.axis, cfg.angle, cfg.omega_max);
            const auto report =
                avg_gate_fidelity_1q(pulse, DragCorrection{cfg.drag, cfg.alpha1},
                                     cfg.transmon(), cfg.n_states, cfg.integrator());
            table.columns = {"fidelity", "mean_leakage", "max_leakage", "n_states", "tau_ns"};
            table.rows = {{report.value, report.mean_leakage, report.max_leakage,
                           static_cast<double>(report.n_states), pulse.tau}};
        }
    } else {
        return 2;
    }

    fill_manifest(table, cfg, name);
    write_table(table, cfg.out_path, cfg.format);
    return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"time-optimal geometric gate synthesis and simulation for transmons"};
    app.require_subcommand(1);
    CliState st;

    auto* synth = app.add_subcommand("synth", "print synthesized pulse parameters");
    auto* fig1b = app.add_subcommand("fig1b", "gate-time comparison table");
    auto* fig3 = app.add_subcommand("fig3", "robustness grid over (delta, epsilon)");
    auto* fig4 = app.add_subcommand("fig4", "averaged fidelity vs peak amplitude");
    auto* fig5 = app.add_subcommand("fig5", "two-qubit fidelity over drive parameters");
    auto* fidelity = app.add_subcommand("fidelity", "one-off averaged gate fidelity");
    app.add_subcommand("validate", "run the cross-module invariant suite");

    for (auto* cmd : app.get_subcommands({})) add_common(cmd, st);

    for (auto* cmd : {synth, fig3, fig4, fidelity}) {
        cmd->add_option("--axis", st.axis, "x or y")->check(CLI::IsMember({"x", "y", "X", "Y"}));
        cmd->add_option("--angle", st.angle, "rotation angle, e.g. 0.5pi or pi/4");
        cmd->add_option("--omega-max", st.omega_max_mhz, "peak Rabi amplitude [MHz]");
    }
    for (auto* cmd : {synth, fig5, fidelity}) {
        cmd->add_option("--vartheta", st.vartheta, "two-qubit gate angle");
        cmd->add_option("--varphi0", st.varphi0, "two-qubit gate phase");
        cmd->add_option("--g12", st.g12_mhz, "static coupling [MHz]");
        cmd->add_option("--delta1", st.delta1_mhz, "qubit frequency difference [MHz]");
        cmd->add_option("--alpha2", st.alpha2_mhz, "anharmonicity of transmon 2 [MHz]");
    }
    for (auto* cmd : {synth, fidelity}) {
        cmd->add_flag("--two-qubit", st.two_qubit, "two-qubit drive instead of single-qubit");
        cmd->add_option("--beta", st.beta, "modulation index");
    }
    for (auto* cmd : {fig4, fig5, fidelity}) {
        cmd->add_option("--alpha1", st.alpha1_mhz, "anharmonicity of transmon 1 [MHz]");
        cmd->add_option("--kappa", st.kappa_khz, "relaxation = dephasing rate [kHz]");
        cmd->add_flag("--no-drag", st.no_drag, "disable the DRAG correction");
    }

    fig1b->add_option("--theta-count", st.theta_count, "angles between pi/count and pi");
    fig3->add_option("--kind", st.kind, "geometric or dynamical")
        ->check(CLI::IsMember({"geometric", "dynamical"}));
    fig3->add_option("--range", st.range, "grid half-width in units of omega_max");
    fig3->add_option("--steps", st.steps, "grid points per axis");
    fig4->add_option("--omega-start", st.omega_start_mhz, "sweep start [MHz]");
    fig4->add_option("--omega-stop", st.omega_stop_mhz, "sweep stop [MHz]");
    fig4->add_option("--omega-count", st.omega_count, "sweep points");
    fig4->add_option("--n-states", st.n_states, "averaging states");
    fidelity->add_option("--n-states", st.n_states, "averaging states (single-qubit)");
    fidelity->add_option("--state-grid", st.state_grid, "state grid per axis (two-qubit)");
    fig5->add_option("--beta-start", st.beta_start);
    fig5->add_option("--beta-stop", st.beta_stop);
    fig5->add_option("--beta-count", st.beta_count);
    fig5->add_option("--nu-start", st.nu_start_mhz, "[MHz]");
    fig5->add_option("--nu-stop", st.nu_stop_mhz, "[MHz]");
    fig5->add_option("--nu-count", st.nu_count);
    fig5->add_option("--state-grid", st.state_grid, "fidelity state grid per axis");
    fig5->add_option("--sweep-axes", st.sweep_axes,
                     "beta,nu (literal nu) or delta1,beta (nu derived per cell)")
        ->check(CLI::IsMember({"beta,nu", "delta1,beta"}));
    fig5->add_option("--delta1-start", st.delta1_start_mhz, "[MHz]");
    fig5->add_option("--delta1-stop", st.delta1_stop_mhz, "[MHz]");
    fig5->add_option("--delta1-count", st.delta1_count);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        return dispatch(app, st);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace tocgeo
