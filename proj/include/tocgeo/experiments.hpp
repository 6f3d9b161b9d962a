#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tocgeo/metrics.hpp"

// Sweep orchestration and the command-line surface: configuration ingestion
// (linear MHz / kHz at the boundary, rad/ns inside), deterministic CSV/JSON
// tables, and the figure-reproduction commands.

namespace tocgeo {

inline constexpr const char* kVersion = "0.1.0";

enum class OutputFormat { Csv, Json };

struct SweepSpec {
    double start = 0.0;
    double stop = 0.0;
    int count = 1;
};

std::vector<double> linspace(double start, double stop, int count);

struct RunConfig {
    // [device] (stored in rad/ns)
    double omega_max = mhz(45.0);
    double alpha1 = mhz(220.0);
    double alpha2 = mhz(180.0);
    double kappa_minus = khz(4.0);
    double kappa_z = khz(4.0);
    double g12 = mhz(8.0);
    double delta1 = mhz(320.0);
    // [gate]
    Axis axis = Axis::X;
    double angle = kPi / 2.0;
    GateKind kind = GateKind::Geometric;
    bool drag = true;
    double vartheta = kPi / 2.0;
    double varphi0 = kPi / 2.0;
    // [sweep]
    int theta_count = 50;          // fig1b: theta = pi/count .. pi
    double range = 0.1;            // fig3: delta, epsilon in [-range, range]
    int grid_steps = 41;           // fig3: points per axis
    SweepSpec omega{mhz(20.0), mhz(60.0), 41};     // fig4
    SweepSpec beta{1.0, 1.6, 31};                  // fig5
    SweepSpec nu{mhz(330.0), mhz(350.0), 21};      // fig5
    SweepSpec delta1_sweep{mhz(300.0), mhz(340.0), 21};  // fig5 --sweep-axes delta1,beta
    std::string fig5_axes = "beta,nu";
    int n_states = 1001;  // single-qubit averaging states
    int state_grid = 21;  // two-qubit averaging grid (per axis)
    // [integrator]
    double dt = 0.0;  // ns; 0 selects duration/4000
    bool convergence_check = false;
    // [output]
    std::string out_path;  // empty = stdout
    OutputFormat format = OutputFormat::Csv;
    unsigned workers = 0;  // 0 = available parallelism

    TransmonParams transmon() const;
    CoupledSystemParams coupled() const;
    IntegratorOptions integrator() const;
};

// INI-style file with [device], [gate], [sweep], [integrator], [output]
// sections; unknown sections or keys throw ConfigError with file:line.
RunConfig load_config(const std::string& path);

struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::map<std::string, std::string> manifest;
};

// 12 significant digits, '.' decimal point, locale independent.
std::string format_double(double value);

void write_csv(const ResultTable& table, std::ostream& out);
void write_json(const ResultTable& table, std::ostream& out);
// Writes to path (or stdout when empty). CSV keeps the manifest in a
// <path>.manifest.json sidecar so the table itself stays plain RFC-4180.
void write_table(const ResultTable& table, const std::string& path, OutputFormat format);

// Gate-time comparison: TOC X/Y durations and the conventional area-pi
// duration per rotation angle.
ResultTable run_fig1b(double omega_max, const std::vector<double>& angles);

// Robustness grid over (delta, epsilon) for one gate; two-level model.
RobustnessGrid run_fig3(Axis axis, double angle, GateKind kind, double range, int steps,
                        double omega_max, const IntegratorOptions& opts = {});
ResultTable robustness_table(const RobustnessGrid& grid);

// Averaged single-qubit fidelity/leakage versus the peak amplitude; the pulse
// is re-synthesized at every point.
ResultTable run_fig4(Axis axis, double angle, const std::vector<double>& omega_values,
                     const DragCorrection& drag, const TransmonParams& params, int n_states,
                     const IntegratorOptions& opts = {});

// Two-qubit fidelity over (beta, nu) at fixed delta1: nu is taken literally,
// the phase rate follows from the time-optimal condition, and cells whose
// rate cannot wind phi1(T) = -pi are marked invalid (NaN fidelity,
// valid = 0). The alternative axes sweep the device pair (delta1, beta) and
// re-derive nu per cell, which maps the high-fidelity ellipse around the
// operating point.
ResultTable run_fig5(const SweepSpec& beta, const SweepSpec& nu,
                     const CoupledSystemParams& params, double vartheta, double varphi0,
                     int state_grid, const IntegratorOptions& opts = {});
ResultTable run_fig5_delta1(const SweepSpec& delta1, const SweepSpec& beta,
                            const CoupledSystemParams& params, double vartheta,
                            double varphi0, int state_grid,
                            const IntegratorOptions& opts = {});

std::optional<TocTwoQubitDrive> fig5_drive(double beta, double nu,
                                           const CoupledSystemParams& params,
                                           double vartheta, double varphi0);

// Cross-module invariant suite; prints one PASS/FAIL line per invariant and
// returns the number of failures.
int run_validate(std::ostream& out);

// "0.5pi", "pi", "-pi/4", or plain radians.
double parse_angle(const std::string& text);

// Full command-line entry point. Exit codes: 0 success, 2 configuration
// error, 3 convergence error, 1 anything else.
int cli_main(int argc, const char* const* argv);

}  // namespace tocgeo
