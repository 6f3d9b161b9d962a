#pragma once

#include <vector>

#include <Eigen/Dense>

#include "tocgeo/linalg.hpp"

// Control-field construction: time-optimal single-qubit pulses, the
// parametric two-qubit drive, DRAG correction fields, and the dynamical
// reference sequences used for robustness comparisons.

namespace tocgeo {

enum class Axis { X, Y };

// Sine envelope Omega(t) = omega_max * sin(pi t / tau) on [0, tau].
struct PulseEnvelope {
    double omega_max = 0.0;  // peak Rabi amplitude [rad/ns]
    double tau = 0.0;        // duration [ns]

    double value(double t) const;
    double derivative(double t) const;
    // \int_0^tau Omega dt = 2 * omega_max * tau / pi
    double integral() const { return 2.0 * omega_max * tau / kPi; }
};

// Single-qubit time-optimal pulse. The drive phase is
// phi(t) = phi0 + phi1(t) with phi1' = c0*Omega(t) - delta and the
// parameters chosen so that phi1(tau) = -pi and the pulse area equals
// (pi/2)/sqrt(1 + c0^2).
struct TocSingleQubitPulse {
    PulseEnvelope envelope;
    Axis axis = Axis::X;
    double theta = 0.0;  // rotation angle [rad], in (-pi, pi], nonzero
    double phi0 = 0.0;   // [rad]
    double c0 = 0.0;     // cot(theta/2)
    double delta = 0.0;  // constant detuning [rad/ns]
    double tau = 0.0;    // duration [ns]

    double omega(double t) const { return envelope.value(t); }
    // (1/2) \int Omega dt
    double area() const { return 0.5 * envelope.integral(); }
    // Constant dressed-state polar angle, arccot(c0) in (0, pi).
    double chi() const { return std::atan2(1.0, c0); }
};

TocSingleQubitPulse synth_single_qubit_toc(Axis axis, double theta, double omega_max);

// phi(t) = phi0 + c0*omega_max*(1 - cos(pi t/tau))*(tau/pi) - delta*t
double phase_trajectory(const TocSingleQubitPulse& pulse, double t);
// phi'(t) = c0*Omega(t) - delta
double phase_rate(const TocSingleQubitPulse& pulse, double t);

// Two-qubit time-optimal parametric drive, modelled as an effective square
// pulse of height g_eff for duration T with drive phase phi0 + eta*t.
struct TocTwoQubitDrive {
    double vartheta = 0.0;  // gate angle [rad]
    double varphi0 = 0.0;   // [rad]
    double beta = 0.0;      // modulation index
    double nu = 0.0;        // modulation frequency [rad/ns]
    double eta = 0.0;       // phase rate, eta*T = -pi [rad/ns]
    double delta_t = 0.0;   // nu - delta1 [rad/ns]
    double g_eff = 0.0;     // 2*J1(beta)*g12 [rad/ns]
    double duration = 0.0;  // T [ns]

    double phase(double t) const { return varphi0 + eta * t; }
};

TocTwoQubitDrive synth_two_qubit_toc(double vartheta, double varphi0, double g12,
                                     double beta, double delta1);

// One constant-ratio segment of a dynamical gate: both quadratures share the
// sine shape, Omega(t) = omega_peak*sin(pi t/tau) and
// Delta(t) = delta_peak*sin(pi t/tau), so theta_d = 2*atan2(Omega, Delta) is
// time independent. A pure-detuning segment has omega_peak = 0.
struct DynamicalSegment {
    PulseEnvelope envelope;   // Omega
    double delta_peak = 0.0;  // [rad/ns]
    double phi0 = 0.0;
    double theta_d = 0.0;  // [rad], in (0, 2*pi]
    double lambda = 0.0;   // \int sqrt(Omega^2 + Delta^2) dt, = pi here

    double omega(double t) const { return envelope.value(t); }
    double delta(double t) const;
    double tau() const { return envelope.tau; }
};

struct DynamicalPulseSequence {
    Axis axis = Axis::X;
    double theta = 0.0;
    double omega_ref = 0.0;  // gate peak amplitude, sets perturbation scales
    std::vector<DynamicalSegment> segments;  // applied in order

    double total_duration() const;
};

DynamicalPulseSequence synth_dynamical(Axis axis, double theta, double omega_max);

struct DragCorrection {
    bool enabled = true;
    double alpha1 = 0.0;  // anharmonicity [rad/ns], > 0
};

// Duration of the conventional (area-pi) geometric gate with the same sine
// envelope: pi^2/omega_max, independent of theta.
double conventional_gate_time(double theta, double omega_max);

struct DragFields {
    Eigen::Vector3d total;       // B = B0 + Bd [rad/ns]
    Eigen::Vector3d correction;  // Bd [rad/ns]
};

DragFields drag_fields(const TocSingleQubitPulse& pulse, double alpha1, double t);

// Reference single-qubit rotations and the closed-form dynamical segment
// unitary, used as gate targets throughout.
Matrix rx(double theta);
Matrix ry(double theta);
Matrix dynamical_segment_unitary(double lambda, double theta_d, double phi0);
// Product of the segment unitaries (last segment leftmost).
Matrix dynamical_ideal_unitary(const DynamicalPulseSequence& seq);

// Target two-qubit gate on {|00>,|01>,|10>,|11>}: identity on |00>,|11>,
// inner block [[-cos(vt/2), sin(vt/2)e^{-i*phi0}], [-sin(vt/2)e^{i*phi0},
// -cos(vt/2)]].
Matrix two_qubit_target(double vartheta, double varphi0);

}  // namespace tocgeo
