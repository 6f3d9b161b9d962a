#include "tocgeo/model.hpp"

#include <cmath>
#include <stdexcept>

namespace tocgeo {

namespace {

void check_transmon(const TransmonParams& p) {
    if (p.alpha <= 0.0) throw std::invalid_argument("TransmonParams: alpha must be > 0");
    if (p.kappa_minus < 0.0 || p.kappa_z < 0.0)
        throw std::invalid_argument("TransmonParams: decay rates must be >= 0");
    if (p.levels != 2 && p.levels != 3)
        throw std::invalid_argument("TransmonParams: levels must be 2 or 3");
}

Matrix two_level_field(double omega, double delta, double phi) {
    Matrix h(2, 2);
    h(0, 0) = -0.5 * delta;
    h(1, 1) = 0.5 * delta;
    h(0, 1) = 0.5 * omega * std::exp(-kI * phi);
    h(1, 0) = std::conj(h(0, 1));
    return h;
}

}  // namespace

std::string coupled_params_warning(const CoupledSystemParams& params) {
    if (std::abs(params.delta1) < 10.0 * params.g12)
        return "coupling is not dispersive: |delta1| < 10*g12";
    return {};
}

double bessel_j1(double x) {
    if (x < 0.0 || x > 10.0)
        throw std::out_of_range("bessel_j1: argument outside [0, 10]");
    const double half = 0.5 * x;
    double term = half;  // k = 0: (x/2) / (0! * 1!)
    double sum = term;
    for (int k = 1; k <= 60; ++k) {
        term *= -half * half / (static_cast<double>(k) * (k + 1));
        sum += term;
        if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(sum))) break;
    }
    return sum;
}

Matrix three_level_sx() {
    Matrix s = Matrix::Zero(3, 3);
    s(0, 1) = s(1, 0) = 1.0;
    s(1, 2) = s(2, 1) = std::sqrt(2.0);
    return s;
}

Matrix three_level_sy() {
    Matrix s = Matrix::Zero(3, 3);
    s(1, 0) = kI;
    s(0, 1) = -kI;
    s(2, 1) = kI * std::sqrt(2.0);
    s(1, 2) = -kI * std::sqrt(2.0);
    return s;
}

Matrix three_level_sz() {
    Matrix s = Matrix::Zero(3, 3);
    s(0, 0) = 1.0;
    s(1, 1) = -1.0;
    s(2, 2) = -3.0;
    return s;
}

Matrix relaxation_op() {
    Matrix a = Matrix::Zero(3, 3);
    a(0, 1) = 1.0;
    a(1, 2) = std::sqrt(2.0);
    return a;
}

Matrix dephasing_op() {
    Matrix a = Matrix::Zero(3, 3);
    a(1, 1) = 1.0;
    a(2, 2) = 2.0;
    return a;
}

Matrix h_two_level(const TocSingleQubitPulse& pulse, double t) {
    return two_level_field(pulse.envelope.value(t), pulse.delta, phase_trajectory(pulse, t));
}

Matrix h_two_level(const DynamicalSegment& segment, double t) {
    return two_level_field(segment.omega(t), segment.delta(t), segment.phi0);
}

Matrix h_single_transmon_3lvl(const TocSingleQubitPulse& pulse, const DragCorrection& drag,
                              double t) {
    Eigen::Vector3d b;
    if (drag.enabled) {
        b = drag_fields(pulse, drag.alpha1, t).total;
    } else {
        if (drag.alpha1 <= 0.0)
            throw std::invalid_argument("h_single_transmon_3lvl: alpha1 must be > 0");
        const double phi = phase_trajectory(pulse, t);
        const double omega = pulse.envelope.value(t);
        b = Eigen::Vector3d(omega * std::cos(phi), omega * std::sin(phi), -pulse.delta);
    }
    Matrix h = 0.5 * (b.x() * three_level_sx() + b.y() * three_level_sy() +
                      b.z() * three_level_sz());
    h(2, 2) -= drag.alpha1;
    return h;
}

Matrix h_coupled_transmons(const TocTwoQubitDrive& drive, const CoupledSystemParams& params,
                           double t) {
    const Complex mod = std::exp(-kI * drive.beta * std::sin(drive.nu * t + drive.phase(t)));
    const double root2 = std::sqrt(2.0);
    Matrix h = Matrix::Zero(9, 9);
    // |01><10| e^{i delta1 t}
    h(pair_index(0, 1), pair_index(1, 0)) =
        params.g12 * std::exp(kI * params.delta1 * t) * mod;
    // sqrt(2) |11><20| e^{i (delta1 + alpha1) t}
    h(pair_index(1, 1), pair_index(2, 0)) =
        root2 * params.g12 * std::exp(kI * (params.delta1 + params.q1.alpha) * t) * mod;
    // sqrt(2) |02><11| e^{i (delta1 - alpha2) t}
    h(pair_index(0, 2), pair_index(1, 1)) =
        root2 * params.g12 * std::exp(kI * (params.delta1 - params.q2.alpha) * t) * mod;
    h(pair_index(1, 0), pair_index(0, 1)) = std::conj(h(pair_index(0, 1), pair_index(1, 0)));
    h(pair_index(2, 0), pair_index(1, 1)) = std::conj(h(pair_index(1, 1), pair_index(2, 0)));
    h(pair_index(1, 1), pair_index(0, 2)) = std::conj(h(pair_index(0, 2), pair_index(1, 1)));
    return h;
}

Matrix h_effective_two_qubit(const TocTwoQubitDrive& drive, double t) {
    return two_level_field(drive.g_eff, drive.delta_t, drive.phase(t));
}

std::vector<Collapse> collapse_operators(const TransmonParams& params) {
    check_transmon(params);
    if (params.levels == 2) {
        // Qubit-subspace truncations for the ideal two-level model.
        Matrix am = Matrix::Zero(2, 2), az = Matrix::Zero(2, 2);
        am(0, 1) = 1.0;
        az(1, 1) = 1.0;
        return {{am, 0.5 * params.kappa_minus}, {az, 0.5 * params.kappa_z}};
    }
    return {{relaxation_op(), 0.5 * params.kappa_minus},
            {dephasing_op(), 0.5 * params.kappa_z}};
}

std::vector<Collapse> collapse_operators(const CoupledSystemParams& params) {
    check_transmon(params.q1);
    check_transmon(params.q2);
    const Matrix id3 = identity(3);
    return {{kron(relaxation_op(), id3), 0.5 * params.q1.kappa_minus},
            {kron(dephasing_op(), id3), 0.5 * params.q1.kappa_z},
            {kron(id3, relaxation_op()), 0.5 * params.q2.kappa_minus},
            {kron(id3, dephasing_op()), 0.5 * params.q2.kappa_z}};
}

HamiltonianSpec two_level_spec(const TocSingleQubitPulse& pulse, double delta_shift,
                               double omega_shift) {
    HamiltonianSpec spec;
    spec.dim = 2;
    spec.eval = [pulse, delta_shift, omega_shift](double t) {
        return two_level_field(pulse.envelope.value(t) + omega_shift,
                               pulse.delta + delta_shift, phase_trajectory(pulse, t));
    };
    return spec;
}

HamiltonianSpec two_level_spec(const DynamicalSegment& segment, double delta_shift,
                               double omega_shift) {
    HamiltonianSpec spec;
    spec.dim = 2;
    spec.eval = [segment, delta_shift, omega_shift](double t) {
        return two_level_field(segment.omega(t) + omega_shift,
                               segment.delta(t) + delta_shift, segment.phi0);
    };
    return spec;
}

HamiltonianSpec transmon3_spec(const TocSingleQubitPulse& pulse, const DragCorrection& drag) {
    if (drag.alpha1 <= 0.0)
        throw std::invalid_argument("transmon3_spec: alpha1 must be > 0");
    HamiltonianSpec spec;
    spec.dim = 3;
    spec.eval = [pulse, drag](double t) { return h_single_transmon_3lvl(pulse, drag, t); };
    return spec;
}

HamiltonianSpec coupled_spec(const TocTwoQubitDrive& drive, const CoupledSystemParams& params) {
    HamiltonianSpec spec;
    spec.dim = 9;
    spec.eval = [drive, params](double t) { return h_coupled_transmons(drive, params, t); };
    if (drive.nu > 0.0) spec.max_dt = kTwoPi / (40.0 * drive.nu);
    return spec;
}

HamiltonianSpec effective_spec(const TocTwoQubitDrive& drive) {
    HamiltonianSpec spec;
    spec.dim = 2;
    spec.eval = [drive](double t) { return h_effective_two_qubit(drive, t); };
    return spec;
}

Vector embed_in_3(const Vector& qubit_state) {
    if (qubit_state.size() != 2)
        throw std::invalid_argument("embed_in_3: expected a 2-dimensional state");
    Vector v = Vector::Zero(3);
    v(0) = qubit_state(0);
    v(1) = qubit_state(1);
    return v;
}

Vector embed_in_9(const Vector& two_qubit_state) {
    if (two_qubit_state.size() != 4)
        throw std::invalid_argument("embed_in_9: expected a 4-dimensional state");
    Vector v = Vector::Zero(9);
    v(pair_index(0, 0)) = two_qubit_state(0);
    v(pair_index(0, 1)) = two_qubit_state(1);
    v(pair_index(1, 0)) = two_qubit_state(2);
    v(pair_index(1, 1)) = two_qubit_state(3);
    return v;
}

}  // namespace tocgeo
