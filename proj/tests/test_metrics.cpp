#include <doctest.h>

#include <cmath>

#include "tocgeo/experiments.hpp"
#include "tocgeo/metrics.hpp"

using namespace tocgeo;

namespace {

TransmonParams stock_transmon_params(double kappa = khz(4.0)) {
    return TransmonParams{mhz(220.0), kappa, kappa, 3};
}

CoupledSystemParams stock_coupled_params(double kappa = khz(4.0)) {
    CoupledSystemParams p;
    p.g12 = mhz(8.0);
    p.delta1 = mhz(320.0);
    p.q1 = TransmonParams{mhz(220.0), kappa, kappa, 3};
    p.q2 = TransmonParams{mhz(180.0), kappa, kappa, 3};
    return p;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("trace fidelity basics") {
    const Matrix r = rx(kPi / 2.0);
    CHECK(trace_fidelity(r, r) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(trace_fidelity(r, std::exp(kI * 0.83) * r) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(trace_fidelity(rx(kPi / 2.0), rx(kPi / 2.0 + 0.01)) ==
          doctest::Approx(0.9999875000260416).epsilon(1e-12));
    CHECK_THROWS_AS(trace_fidelity(identity(2), identity(3)), std::invalid_argument);
}

TEST_CASE("unperturbed gate scores fidelity 1") {
    const auto pulse = synth_single_qubit_toc(Axis::X, kPi / 2.0, mhz(45.0));
    const Matrix u = perturbed_gate(pulse, 0.0, 0.0);
    CHECK(std::abs(trace_fidelity(rx(kPi / 2.0), u) - 1.0) < 1e-9);
}

TEST_CASE("perturbation bounds are enforced") {
    const auto pulse = synth_single_qubit_toc(Axis::X, kPi / 2.0, mhz(45.0));
    CHECK_THROWS_AS(perturbed_gate(pulse, 0.3, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(perturbed_gate(pulse, 0.0, -0.25), std::invalid_argument);
}

TEST_CASE("two independent integrators agree on the perturbed gate") {
    const auto pulse = synth_single_qubit_toc(Axis::X, kPi / 2.0, mhz(45.0));
    IntegratorOptions pw;
    pw.dt = pulse.tau / 80000.0;
    IntegratorOptions rk;
    rk.method = Method::Rk4;
    rk.dt = pulse.tau / 4000.0;
    const Matrix a = perturbed_gate(pulse, 0.1, 0.0, pw);
    const Matrix b = perturbed_gate(pulse, 0.1, 0.0, rk);
    CHECK(max_abs(a - b) < 1e-8);
}

TEST_CASE("geometric gate beats the dynamical one at (0.1, 0.1)") {
    const auto geo = synth_single_qubit_toc(Axis::X, kPi / 2.0, mhz(45.0));
    const auto dyn = synth_dynamical(Axis::X, kPi / 2.0, mhz(45.0));
    const Matrix ideal = rx(kPi / 2.0);
    const double fg = trace_fidelity(ideal, perturbed_gate(geo, 0.1, 0.1));
    const double fd = trace_fidelity(ideal, perturbed_gate(dyn, 0.1, 0.1));
    CHECK(fg > fd);
}

TEST_CASE("leakage of simple states") {
    Matrix rho = Matrix::Zero(3, 3);
    rho(0, 0) = 0.4;
    rho(1, 1) = 0.6;
    CHECK(leakage(rho, {0, 1}) == doctest::Approx(0.0).epsilon(1e-15));
    Matrix two = Matrix::Zero(3, 3);
    two(2, 2) = 1.0;
    CHECK(leakage(two, {0, 1}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(leakage(rho, {5}), std::invalid_argument);
}

TEST_CASE("ideal two-level model averages to fidelity 1") {
    const auto pulse = synth_single_qubit_toc(Axis::X, kPi / 2.0, mhz(45.0));
    TransmonParams params{mhz(220.0), 0.0, 0.0, 2};
    const auto report =
        avg_gate_fidelity_1q(pulse, DragCorrection{false, mhz(220.0)}, params, 51);
    CHECK(report.value == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(report.n_states == 51);
    CHECK(report.mean_leakage == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("zero-decoherence three-level gate with DRAG stays above 0.9999") {
    const auto pulse = synth_single_qubit_toc(Axis::X, kPi / 2.0, mhz(45.0));
    const auto report = avg_gate_fidelity_1q(pulse, DragCorrection{true, mhz(220.0)},
                                             stock_transmon_params(0.0), 101);
    CHECK(report.value >= 0.9999);
    CHECK(report.value <= 1.0 + 1e-9);
    CHECK(report.mean_leakage < 1e-4);  // leakage bound for a DRAG-corrected drive
}

TEST_CASE("Rx(pi/2) fidelity lands near the reported 99.98%") {
    const auto pulse = synth_single_qubit_toc(Axis::X, kPi / 2.0, mhz(45.0));
    const auto report = avg_gate_fidelity_1q(pulse, DragCorrection{true, mhz(220.0)},
                                             stock_transmon_params(), 101);
    CHECK(report.value > 0.9995);
    CHECK(report.value < 1.0);
}

TEST_CASE("doubling the decoherence rates strictly lowers the fidelity") {
    const auto pulse = synth_single_qubit_toc(Axis::Y, -kPi / 2.0, mhz(40.0));
    const DragCorrection drag{true, mhz(220.0)};
    const double f1 =
        avg_gate_fidelity_1q(pulse, drag, stock_transmon_params(khz(4.0)), 51).value;
    const double f2 =
        avg_gate_fidelity_1q(pulse, drag, stock_transmon_params(khz(8.0)), 51).value;
    CHECK(f2 < f1);
}

TEST_CASE("two-qubit fidelity at the stock operating point on a coarse grid") {
    const auto drive = synth_two_qubit_toc(kPi / 2.0, kPi / 2.0, mhz(8.0), 1.3, mhz(320.0));
    const auto report = avg_gate_fidelity_2q(drive, stock_coupled_params(), 25);
    CHECK(report.n_states == 25);
    CHECK(report.value > 0.995);
    CHECK(report.value < 1.0);
    CHECK(report.max_leakage < 0.02);
}

TEST_CASE("process-matrix route agrees with per-state averaging") {
    const auto drive = synth_two_qubit_toc(kPi / 2.0, kPi / 2.0, mhz(8.0), 1.3, mhz(320.0));
    const auto params = stock_coupled_params();
    const auto direct = avg_gate_fidelity_2q(drive, params, 49);
    const auto process = avg_gate_fidelity_2q_process(drive, params, 49);
    CHECK(process.n_states == direct.n_states);
    CHECK(std::abs(process.value - direct.value) < 2e-10);
    CHECK(std::abs(process.mean_leakage - direct.mean_leakage) < 2e-10);
}

TEST_CASE("decoupled system cannot realize the two-qubit gate") {
    auto params = stock_coupled_params(0.0);
    auto drive = synth_two_qubit_toc(kPi / 2.0, kPi / 2.0, mhz(8.0), 1.3, mhz(320.0));
    params.g12 = 1e-12;  // keep T fixed, remove the interaction
    const auto report = avg_gate_fidelity_2q(drive, params, 25);
    CHECK(report.value < 0.9);
}

TEST_CASE("robustness grid peaks at the unperturbed point") {
    const auto axis = linspace(-0.1, 0.1, 11);
    const auto grid =
        fill_robustness_grid(GateKind::Geometric, Axis::X, kPi / 2.0, mhz(45.0), axis, axis);
    const double center = grid.values[5][5];
    CHECK(center == doctest::Approx(1.0).epsilon(1e-9));
    for (const auto& row : grid.values)
        for (double v : row) CHECK(v <= center + 1e-9);
}

TEST_CASE("mean robustness: geometric above dynamical on a small grid") {
    const auto axis = linspace(-0.1, 0.1, 11);
    for (Axis gate_axis : {Axis::X, Axis::Y}) {
        const auto geo = fill_robustness_grid(GateKind::Geometric, gate_axis, kPi / 2.0,
                                              mhz(45.0), axis, axis);
        const auto dyn = fill_robustness_grid(GateKind::Dynamical, gate_axis, kPi / 2.0,
                                              mhz(45.0), axis, axis);
        CHECK(grid_mean(geo) > grid_mean(dyn));
    }
}

TEST_CASE("fidelity reports echo their parameters") {
    const auto pulse = synth_single_qubit_toc(Axis::X, kPi / 2.0, mhz(45.0));
    const auto report = avg_gate_fidelity_1q(pulse, DragCorrection{true, mhz(220.0)},
                                             stock_transmon_params(), 21);
    CHECK(report.metadata.at("omega_max") == doctest::Approx(mhz(45.0)));
    CHECK(report.metadata.at("tau") == doctest::Approx(pulse.tau));
    CHECK(report.metadata.count("kappa_minus") == 1);
    CHECK(report.kind == FidelityKind::Averaged1q);
}

}  // TEST_SUITE
