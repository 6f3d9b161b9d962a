#include "tocgeo/synthesis.hpp"

#include <cmath>
#include <stdexcept>

#include "tocgeo/model.hpp"

namespace tocgeo {

namespace {

void check_time_in_support(double t, double tau, const char* who) {
    if (t < -1e-9 || t > tau + 1e-9)
        throw std::out_of_range(std::string(who) + ": t outside [0, tau]");
}

void check_rotation_angle(double theta) {
    if (theta == 0.0)
        throw std::domain_error("rotation angle 0 is degenerate (identity needs no pulse)");
    if (theta <= -kPi || theta > kPi)
        throw std::out_of_range("rotation angle must lie in (-pi, pi]");
}

}  // namespace

double PulseEnvelope::value(double t) const {
    check_time_in_support(t, tau, "PulseEnvelope::value");
    return omega_max * std::sin(kPi * t / tau);
}

double PulseEnvelope::derivative(double t) const {
    check_time_in_support(t, tau, "PulseEnvelope::derivative");
    return omega_max * (kPi / tau) * std::cos(kPi * t / tau);
}

TocSingleQubitPulse synth_single_qubit_toc(Axis axis, double theta, double omega_max) {
    check_rotation_angle(theta);
    if (omega_max <= 0.0)
        throw std::invalid_argument("synth_single_qubit_toc: omega_max must be > 0");

    TocSingleQubitPulse p;
    p.axis = axis;
    p.theta = theta;
    p.phi0 = (axis == Axis::X) ? -kPi / 2.0 : 0.0;
    p.c0 = std::cos(theta / 2.0) / std::sin(theta / 2.0);

    // Pulse area (1/2)\int Omega dt = (pi/2)/sqrt(1+c0^2); Omega >= 0 so the
    // area itself is positive for either rotation sign, the sign of the gate
    // lives in c0.
    const double sin_half = std::abs(std::sin(theta / 2.0));
    const double area = 0.5 * kPi * sin_half;
    p.tau = kPi * kPi * sin_half / (2.0 * omega_max);
    // phi1(tau) = c0 * \int Omega dt - delta*tau = -pi
    p.delta = (kPi + 2.0 * area * p.c0) / p.tau;
    p.envelope = PulseEnvelope{omega_max, p.tau};
    return p;
}

double phase_trajectory(const TocSingleQubitPulse& pulse, double t) {
    check_time_in_support(t, pulse.tau, "phase_trajectory");
    const double tau = pulse.tau;
    const double phi1 = pulse.c0 * pulse.envelope.omega_max *
                            (1.0 - std::cos(kPi * t / tau)) * (tau / kPi) -
                        pulse.delta * t;
    return pulse.phi0 + phi1;
}

double phase_rate(const TocSingleQubitPulse& pulse, double t) {
    return pulse.c0 * pulse.envelope.value(t) - pulse.delta;
}

TocTwoQubitDrive synth_two_qubit_toc(double vartheta, double varphi0, double g12,
                                     double beta, double delta1) {
    if (vartheta <= 0.0 || vartheta > kPi)
        throw std::out_of_range("synth_two_qubit_toc: vartheta must lie in (0, pi]");
    if (g12 <= 0.0) throw std::invalid_argument("synth_two_qubit_toc: g12 must be > 0");
    if (beta <= 0.0) throw std::invalid_argument("synth_two_qubit_toc: beta must be > 0");
    const double j1 = bessel_j1(beta);
    if (j1 <= 0.0)
        throw std::domain_error(
            "synth_two_qubit_toc: J1(beta) <= 0, modulation index beyond first "
            "Bessel zero");

    TocTwoQubitDrive d;
    d.vartheta = vartheta;
    d.varphi0 = varphi0;
    d.beta = beta;
    d.g_eff = 2.0 * j1 * g12;
    // T = T0 |sin(vartheta/2)| / 2 with T0 = 2*pi/g_eff.
    d.duration = kPi * std::abs(std::sin(vartheta / 2.0)) / d.g_eff;
    d.eta = -kPi / d.duration;
    const double cot_half = std::cos(vartheta / 2.0) / std::sin(vartheta / 2.0);
    d.delta_t = cot_half * d.g_eff - d.eta;
    d.nu = delta1 + d.delta_t;
    return d;
}

double DynamicalSegment::delta(double t) const {
    check_time_in_support(t, envelope.tau, "DynamicalSegment::delta");
    return delta_peak * std::sin(kPi * t / envelope.tau);
}

double DynamicalPulseSequence::total_duration() const {
    double sum = 0.0;
    for (const auto& s : segments) sum += s.envelope.tau;
    return sum;
}

DynamicalPulseSequence synth_dynamical(Axis axis, double theta, double omega_max) {
    check_rotation_angle(theta);
    if (omega_max <= 0.0)
        throw std::invalid_argument("synth_dynamical: omega_max must be > 0");

    DynamicalPulseSequence seq;
    seq.axis = axis;
    seq.theta = theta;
    seq.omega_ref = omega_max;

    // First segment: Ud(pi, theta_d, phi0) with Delta/Omega = cot(theta/2).
    // Omega >= 0 puts theta_d = 2*atan2(Omega, Delta) in (0, 2*pi); negative
    // target angles land in (pi, 2*pi) and only shift the global phase.
    DynamicalSegment drive;
    const double ratio = std::cos(theta / 2.0) / std::sin(theta / 2.0);
    drive.theta_d = 2.0 * std::atan2(1.0, ratio);
    drive.phi0 = (axis == Axis::X) ? -kPi / 2.0 : 0.0;
    drive.lambda = kPi;
    // lambda = \int sqrt(Omega^2+Delta^2) dt = (2*omega_max*tau/pi)/|sin(theta_d/2)|
    const double sin_half = std::abs(std::sin(drive.theta_d / 2.0));
    drive.envelope = PulseEnvelope{omega_max, kPi * kPi * sin_half / (2.0 * omega_max)};
    drive.delta_peak = ratio * omega_max;
    seq.segments.push_back(drive);

    // Second segment: Ud(pi, 2*pi, 0), a pure-detuning interval. The sine
    // shape is kept on the only nonzero quadrature, peak |Delta| = omega_max.
    DynamicalSegment zrot;
    zrot.theta_d = 2.0 * kPi;
    zrot.phi0 = 0.0;
    zrot.lambda = kPi;
    zrot.envelope = PulseEnvelope{0.0, kPi * kPi / (2.0 * omega_max)};
    zrot.delta_peak = -omega_max;
    seq.segments.push_back(zrot);
    return seq;
}

double conventional_gate_time(double /*theta*/, double omega_max) {
    if (omega_max <= 0.0)
        throw std::invalid_argument("conventional_gate_time: omega_max must be > 0");
    return kPi * kPi / omega_max;
}

DragFields drag_fields(const TocSingleQubitPulse& pulse, double alpha1, double t) {
    if (alpha1 <= 0.0) throw std::invalid_argument("drag_fields: alpha1 must be > 0");
    check_time_in_support(t, pulse.tau, "drag_fields");

    const double omega = pulse.envelope.value(t);
    const double omega_dot = pulse.envelope.derivative(t);
    const double phi = phase_trajectory(pulse, t);
    const double phi_dot = phase_rate(pulse, t);
    const double c = std::cos(phi), s = std::sin(phi);

    const Eigen::Vector3d b0(omega * c, omega * s, -pulse.delta);
    const double bx_dot = omega_dot * c - omega * phi_dot * s;
    const double by_dot = omega_dot * s + omega * phi_dot * c;

    DragFields f;
    // Sign convention: with the second excited level sitting at -alpha1, the
    // first-order removal of the sqrt(2)-enhanced 1<->2 transition needs
    // +derivative/(2 alpha1) quadratures (a resonant X drive acquires
    // B_d,y = +Omega'/(2 alpha1)).
    f.correction = (1.0 / (2.0 * alpha1)) *
                   Eigen::Vector3d(-by_dot + b0.z() * b0.x(), bx_dot + b0.z() * b0.y(), 0.0);
    f.total = b0 + f.correction;
    return f;
}

Matrix rx(double theta) {
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    Matrix m(2, 2);
    m << c, -kI * s, -kI * s, c;
    return m;
}

Matrix ry(double theta) {
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    Matrix m(2, 2);
    m << c, -s, s, c;
    return m;
}

Matrix dynamical_segment_unitary(double lambda, double theta_d, double phi0) {
    const double ch = std::cos(theta_d / 2.0), sh = std::sin(theta_d / 2.0);
    Matrix n(2, 2);
    n << -ch, sh * std::exp(-kI * phi0), sh * std::exp(kI * phi0), ch;
    return std::cos(lambda / 2.0) * identity(2) - kI * std::sin(lambda / 2.0) * n;
}

Matrix dynamical_ideal_unitary(const DynamicalPulseSequence& seq) {
    Matrix u = identity(2);
    for (const auto& s : seq.segments)
        u = dynamical_segment_unitary(s.lambda, s.theta_d, s.phi0) * u;
    return u;
}

Matrix two_qubit_target(double vartheta, double varphi0) {
    const double c = std::cos(vartheta / 2.0), s = std::sin(vartheta / 2.0);
    Matrix u = Matrix::Identity(4, 4);
    u(1, 1) = -c;
    u(1, 2) = s * std::exp(-kI * varphi0);
    u(2, 1) = -s * std::exp(kI * varphi0);
    u(2, 2) = -c;
    return u;
}

}  // namespace tocgeo
