#include "tocgeo/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "tocgeo/geometry.hpp"
#include "tocgeo/parallel.hpp"

namespace tocgeo {

namespace {

void check_perturbation(double delta, double epsilon) {
    if (std::abs(delta) > 0.2 || std::abs(epsilon) > 0.2)
        throw std::invalid_argument("perturbed_gate: |delta|, |epsilon| must be <= 0.2");
}

}  // namespace

double trace_fidelity(const Matrix& ideal, const Matrix& actual) {
    if (ideal.rows() != actual.rows() || ideal.cols() != actual.cols())
        throw std::invalid_argument("trace_fidelity: dimension mismatch");
    const double denom = (ideal.adjoint() * ideal).trace().real();
    return std::abs((ideal.adjoint() * actual).trace()) / denom;
}

Matrix perturbed_gate(const TocSingleQubitPulse& pulse, double delta, double epsilon,
                      const IntegratorOptions& opts) {
    check_perturbation(delta, epsilon);
    const double scale = pulse.envelope.omega_max;
    return propagate_unitary(two_level_spec(pulse, delta * scale, epsilon * scale),
                             pulse.tau, opts);
}

Matrix perturbed_gate(const DynamicalPulseSequence& seq, double delta, double epsilon,
                      const IntegratorOptions& opts) {
    check_perturbation(delta, epsilon);
    const double scale = seq.omega_ref;
    Matrix u = identity(2);
    for (const auto& segment : seq.segments) {
        u = propagate_unitary(two_level_spec(segment, delta * scale, epsilon * scale),
                              segment.tau(), opts) *
            u;
    }
    return u;
}

double leakage(const Matrix& rho, const std::vector<int>& computational_indices) {
    double population = 0.0;
    for (int i : computational_indices) {
        if (i < 0 || i >= rho.rows())
            throw std::invalid_argument("leakage: index out of range");
        population += rho(i, i).real();
    }
    return 1.0 - population;
}

FidelityReport avg_gate_fidelity_1q(const TocSingleQubitPulse& pulse,
                                    const DragCorrection& drag, const TransmonParams& params,
                                    int n_states, const IntegratorOptions& opts) {
    if (n_states < 2)
        throw std::invalid_argument("avg_gate_fidelity_1q: need at least 2 states");

    const Matrix u_ideal = geometric_unitary(gate_angles(pulse));
    const HamiltonianSpec spec =
        params.levels == 3 ? transmon3_spec(pulse, drag) : two_level_spec(pulse);
    const int steps = resolve_steps(spec, pulse.tau, opts);
    const HamiltonianTable table = tabulate_hamiltonian(spec, pulse.tau, steps);
    const HamiltonianTable halved = opts.convergence_check
                                        ? tabulate_hamiltonian(spec, pulse.tau, 2 * steps)
                                        : HamiltonianTable{};
    const auto collapses = collapse_operators(params);

    std::vector<double> fid(n_states), leak(n_states);
    parallel_for(n_states, [&](std::size_t k) {
        const double theta1 = kTwoPi * static_cast<double>(k) / (n_states - 1);
        Vector q(2);
        q << std::cos(theta1), std::sin(theta1);
        const Vector psi0 = params.levels == 3 ? embed_in_3(q) : q;
        Matrix rho = evolve_lindblad_table(table, collapses, psi0 * psi0.adjoint());
        if (opts.convergence_check) {
            const Matrix fine =
                evolve_lindblad_table(halved, collapses, psi0 * psi0.adjoint());
            const double dpop =
                (rho.diagonal().real() - fine.diagonal().real()).cwiseAbs().maxCoeff();
            if (dpop > 1e-8)
                throw ConvergenceError(
                    "avg_gate_fidelity_1q: step-halving changed populations by " +
                    std::to_string(dpop) + "; reduce dt");
            rho = fine;
        }
        const Vector qf = u_ideal * q;
        const Vector psif = params.levels == 3 ? embed_in_3(qf) : qf;
        fid[k] = psif.dot(rho * psif).real();
        leak[k] = 1.0 - rho(0, 0).real() - rho(1, 1).real();
    });

    FidelityReport report;
    report.kind = FidelityKind::Averaged1q;
    report.n_states = n_states;
    report.value = pairwise_sum(fid) / n_states;
    report.mean_leakage = pairwise_sum(leak) / n_states;
    report.max_leakage = *std::max_element(leak.begin(), leak.end());
    report.metadata = {{"omega_max", pulse.envelope.omega_max},
                       {"tau", pulse.tau},
                       {"delta", pulse.delta},
                       {"theta", pulse.theta},
                       {"alpha1", drag.alpha1},
                       {"drag", drag.enabled ? 1.0 : 0.0},
                       {"kappa_minus", params.kappa_minus},
                       {"kappa_z", params.kappa_z},
                       {"levels", static_cast<double>(params.levels)},
                       {"steps", static_cast<double>(steps)}};
    return report;
}

FidelityReport avg_gate_fidelity_2q(const TocTwoQubitDrive& drive,
                                    const CoupledSystemParams& params, int n_states,
                                    const IntegratorOptions& opts) {
    if (n_states < 4)
        throw std::invalid_argument("avg_gate_fidelity_2q: need at least 4 states");
    int grid = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n_states))));
    if (grid * grid < n_states) ++grid;
    if (grid < 2) grid = 2;

    const HamiltonianSpec spec = coupled_spec(drive, params);
    const int steps = resolve_steps(spec, drive.duration, opts);
    const HamiltonianTable table = tabulate_hamiltonian(spec, drive.duration, steps);
    const HamiltonianTable halved =
        opts.convergence_check ? tabulate_hamiltonian(spec, drive.duration, 2 * steps)
                               : HamiltonianTable{};
    const auto collapses = collapse_operators(params);
    const Matrix u2 = two_qubit_target(drive.vartheta, drive.varphi0);

    // The interaction-picture propagator differs from the effective-frame
    // gate by exp(-i*delta_t*T*(n2-n1)/2); fold those phases into the target.
    const double half_angle = 0.5 * drive.delta_t * drive.duration;
    Vector frame(9);
    for (int m = 0; m < 3; ++m)
        for (int n = 0; n < 3; ++n)
            frame(pair_index(m, n)) = std::exp(-kI * half_angle * static_cast<double>(n - m));

    const std::vector<int> comp = {pair_index(0, 0), pair_index(0, 1), pair_index(1, 0),
                                   pair_index(1, 1)};
    const int total = grid * grid;
    std::vector<double> fid(total), leak(total);
    parallel_for(total, [&](std::size_t s) {
        const int i = static_cast<int>(s) / grid;
        const int j = static_cast<int>(s) % grid;
        const double th1 = kTwoPi * i / (grid - 1);
        const double th2 = kTwoPi * j / (grid - 1);
        Vector q(4);
        q << std::cos(th1) * std::cos(th2), std::cos(th1) * std::sin(th2),
            std::sin(th1) * std::cos(th2), std::sin(th1) * std::sin(th2);
        const Vector psi0 = embed_in_9(q);
        Matrix rho = evolve_lindblad_table(table, collapses, psi0 * psi0.adjoint());
        if (opts.convergence_check) {
            const Matrix fine =
                evolve_lindblad_table(halved, collapses, psi0 * psi0.adjoint());
            const double dpop =
                (rho.diagonal().real() - fine.diagonal().real()).cwiseAbs().maxCoeff();
            if (dpop > 1e-8)
                throw ConvergenceError(
                    "avg_gate_fidelity_2q: step-halving changed populations by " +
                    std::to_string(dpop) + "; reduce dt");
            rho = fine;
        }
        Vector psif = embed_in_9(u2 * q);
        psif = psif.cwiseProduct(frame);
        fid[s] = psif.dot(rho * psif).real();
        leak[s] = leakage(rho, comp);
    });

    FidelityReport report;
    report.kind = FidelityKind::Averaged2q;
    report.n_states = total;
    report.value = pairwise_sum(fid) / total;
    report.mean_leakage = pairwise_sum(leak) / total;
    report.max_leakage = *std::max_element(leak.begin(), leak.end());
    report.metadata = {{"g12", params.g12},
                       {"delta1", params.delta1},
                       {"alpha1", params.q1.alpha},
                       {"alpha2", params.q2.alpha},
                       {"kappa_minus", params.q1.kappa_minus},
                       {"kappa_z", params.q1.kappa_z},
                       {"beta", drive.beta},
                       {"nu", drive.nu},
                       {"g_eff", drive.g_eff},
                       {"delta_t", drive.delta_t},
                       {"eta", drive.eta},
                       {"duration", drive.duration},
                       {"vartheta", drive.vartheta},
                       {"varphi0", drive.varphi0},
                       {"state_grid", static_cast<double>(grid)},
                       {"steps", static_cast<double>(steps)}};
    return report;
}

FidelityReport avg_gate_fidelity_2q_process(const TocTwoQubitDrive& drive,
                                            const CoupledSystemParams& params, int n_states,
                                            const IntegratorOptions& opts) {
    if (n_states < 4)
        throw std::invalid_argument("avg_gate_fidelity_2q_process: need at least 4 states");
    int grid = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n_states))));
    if (grid * grid < n_states) ++grid;
    if (grid < 2) grid = 2;

    const HamiltonianSpec spec = coupled_spec(drive, params);
    const int steps = resolve_steps(spec, drive.duration, opts);
    const HamiltonianTable table = tabulate_hamiltonian(spec, drive.duration, steps);
    const HamiltonianTable halved =
        opts.convergence_check ? tabulate_hamiltonian(spec, drive.duration, 2 * steps)
                               : HamiltonianTable{};
    const auto collapses = collapse_operators(params);
    const Matrix u2 = two_qubit_target(drive.vartheta, drive.varphi0);
    const std::array<int, 4> comp = {pair_index(0, 0), pair_index(0, 1), pair_index(1, 0),
                                     pair_index(1, 1)};

    // 16 initial density matrices spanning the computational block: the four
    // basis projectors plus |+> and |+i> superpositions for each pair.
    std::vector<Matrix> rho0(16);
    auto pure = [&](const Vector& v) { return Matrix(v * v.adjoint()); };
    for (int m = 0; m < 4; ++m) rho0[m] = pure(Vector::Unit(9, comp[m]));
    int slot = 4;
    std::vector<std::array<int, 2>> pairs;
    for (int m = 0; m < 4; ++m)
        for (int n = m + 1; n < 4; ++n) {
            Vector plus = Vector::Zero(9), plus_i = Vector::Zero(9);
            plus(comp[m]) = plus(comp[n]) = 1.0 / std::sqrt(2.0);
            plus_i(comp[m]) = 1.0 / std::sqrt(2.0);
            plus_i(comp[n]) = kI / std::sqrt(2.0);
            rho0[slot] = pure(plus);
            rho0[slot + 1] = pure(plus_i);
            pairs.push_back({m, n});
            slot += 2;
        }

    std::vector<Matrix> evolved(16);
    parallel_for(16, [&](std::size_t s) {
        evolved[s] = evolve_lindblad_table(table, collapses, rho0[s]);
        if (opts.convergence_check) {
            const Matrix fine = evolve_lindblad_table(halved, collapses, rho0[s]);
            const double dpop = (evolved[s].diagonal().real() - fine.diagonal().real())
                                    .cwiseAbs()
                                    .maxCoeff();
            if (dpop > 1e-8)
                throw ConvergenceError(
                    "avg_gate_fidelity_2q_process: step-halving changed populations by " +
                    std::to_string(dpop) + "; reduce dt");
            evolved[s] = fine;
        }
    });

    // Reconstruct G[m][n] = Phi[|m><n|] from the Hermitian preparations.
    std::array<std::array<Matrix, 4>, 4> g;
    for (int m = 0; m < 4; ++m) g[m][m] = evolved[m];
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const int m = pairs[p][0], n = pairs[p][1];
        const Matrix s = evolved[m] + evolved[n];
        const Matrix a = 2.0 * evolved[4 + 2 * p] - s;      // Phi[|m><n| + |n><m|]
        const Matrix b = 2.0 * evolved[4 + 2 * p + 1] - s;  // Phi[i|n><m| - i|m><n|]
        g[m][n] = 0.5 * (a + kI * b);
        g[n][m] = g[m][n].adjoint();
    }

    const double half_angle = 0.5 * drive.delta_t * drive.duration;
    Vector frame(9);
    for (int m = 0; m < 3; ++m)
        for (int n = 0; n < 3; ++n)
            frame(pair_index(m, n)) = std::exp(-kI * half_angle * static_cast<double>(n - m));

    const int total = grid * grid;
    std::vector<double> fid(total), leak(total);
    for (int s = 0; s < total; ++s) {
        const int i = s / grid, j = s % grid;
        const double th1 = kTwoPi * i / (grid - 1);
        const double th2 = kTwoPi * j / (grid - 1);
        const std::array<double, 4> c = {
            std::cos(th1) * std::cos(th2), std::cos(th1) * std::sin(th2),
            std::sin(th1) * std::cos(th2), std::sin(th1) * std::sin(th2)};
        Vector q(4);
        q << c[0], c[1], c[2], c[3];
        Vector psif = embed_in_9(u2 * q);
        psif = psif.cwiseProduct(frame);
        Complex f = 0.0, l = 0.0;
        for (int m = 0; m < 4; ++m)
            for (int n = 0; n < 4; ++n) {
                const Complex weight = c[m] * c[n];
                if (weight == Complex(0.0, 0.0)) continue;
                f += weight * psif.dot(g[m][n] * psif);
                Complex comp_pop = 0.0;
                for (int idx : comp) comp_pop += g[m][n](idx, idx);
                l += weight * comp_pop;
            }
        fid[s] = f.real();
        leak[s] = 1.0 - l.real();
    }

    FidelityReport report;
    report.kind = FidelityKind::Averaged2q;
    report.n_states = total;
    report.value = pairwise_sum(fid) / total;
    report.mean_leakage = pairwise_sum(leak) / total;
    report.max_leakage = *std::max_element(leak.begin(), leak.end());
    report.metadata = {{"g12", params.g12},
                       {"delta1", params.delta1},
                       {"alpha1", params.q1.alpha},
                       {"alpha2", params.q2.alpha},
                       {"kappa_minus", params.q1.kappa_minus},
                       {"kappa_z", params.q1.kappa_z},
                       {"beta", drive.beta},
                       {"nu", drive.nu},
                       {"g_eff", drive.g_eff},
                       {"delta_t", drive.delta_t},
                       {"eta", drive.eta},
                       {"duration", drive.duration},
                       {"vartheta", drive.vartheta},
                       {"varphi0", drive.varphi0},
                       {"state_grid", static_cast<double>(grid)},
                       {"steps", static_cast<double>(steps)}};
    return report;
}

RobustnessGrid fill_robustness_grid(GateKind kind, Axis axis, double angle, double omega_max,
                                    const std::vector<double>& delta_axis,
                                    const std::vector<double>& epsilon_axis,
                                    const IntegratorOptions& opts) {
    RobustnessGrid grid;
    grid.gate_kind = kind;
    grid.axis = axis;
    grid.angle = angle;
    grid.delta_axis = delta_axis;
    grid.epsilon_axis = epsilon_axis;
    grid.values.assign(delta_axis.size(), std::vector<double>(epsilon_axis.size(), 0.0));

    const Matrix ideal = (axis == Axis::X) ? rx(angle) : ry(angle);
    const std::size_t cells = delta_axis.size() * epsilon_axis.size();

    if (kind == GateKind::Geometric) {
        const TocSingleQubitPulse pulse = synth_single_qubit_toc(axis, angle, omega_max);
        parallel_for(cells, [&](std::size_t s) {
            const std::size_t i = s / epsilon_axis.size(), j = s % epsilon_axis.size();
            grid.values[i][j] = trace_fidelity(
                ideal, perturbed_gate(pulse, delta_axis[i], epsilon_axis[j], opts));
        });
    } else {
        const DynamicalPulseSequence seq = synth_dynamical(axis, angle, omega_max);
        parallel_for(cells, [&](std::size_t s) {
            const std::size_t i = s / epsilon_axis.size(), j = s % epsilon_axis.size();
            grid.values[i][j] = trace_fidelity(
                ideal, perturbed_gate(seq, delta_axis[i], epsilon_axis[j], opts));
        });
    }
    return grid;
}

double grid_mean(const RobustnessGrid& grid) {
    std::vector<double> flat;
    flat.reserve(grid.delta_axis.size() * grid.epsilon_axis.size());
    for (const auto& row : grid.values)
        for (double v : row) flat.push_back(v);
    return pairwise_sum(flat) / static_cast<double>(flat.size());
}

}  // namespace tocgeo
