#pragma once

#include <string>
#include <vector>

#include "tocgeo/dynamics.hpp"
#include "tocgeo/linalg.hpp"
#include "tocgeo/synthesis.hpp"

// Hamiltonian builders for the driven two-level system, the three-level
// transmon with DRAG, and the pair of parametrically coupled transmons, plus
// the Lindblad collapse operators. Two-transmon states live on the tensor
// basis |m>_1 |n>_2 at index 3*m + n.

namespace tocgeo {

struct TransmonParams {
    double alpha = 0.0;        // anharmonicity [rad/ns], > 0
    double kappa_minus = 0.0;  // relaxation rate [rad/ns], >= 0
    double kappa_z = 0.0;      // dephasing rate [rad/ns], >= 0
    int levels = 3;
};

struct CoupledSystemParams {
    double g12 = 0.0;    // static coupling [rad/ns], > 0
    double delta1 = 0.0; // qubit frequency difference omega2 - omega1 [rad/ns]
    TransmonParams q1;
    TransmonParams q2;
};

// Empty when the parameters look sane; otherwise a human-readable warning
// (dispersiveness wants |delta1| >> g12).
std::string coupled_params_warning(const CoupledSystemParams& params);

// J1(x) by ascending power series, 0 <= x <= 10, accurate to 1e-12.
double bessel_j1(double x);

// Ladder-weighted three-level operators: Sx, Sy with sqrt(m+1) factors,
// Sz = diag(1, -1, -3).
Matrix three_level_sx();
Matrix three_level_sy();
Matrix three_level_sz();

// Single-transmon collapse generators: |0><1| + sqrt(2)|1><2| and
// |1><1| + 2|2><2|.
Matrix relaxation_op();
Matrix dephasing_op();

// (1/2) [[-Delta, Omega e^{-i phi}], [Omega e^{i phi}, Delta]].
Matrix h_two_level(const TocSingleQubitPulse& pulse, double t);
Matrix h_two_level(const DynamicalSegment& segment, double t);

// Three-level transmon, H = (1/2) B(t).S - alpha1 |2><2|; drag.enabled
// selects B = B0 + Bd versus the bare B0. drag.alpha1 supplies alpha1 in
// both cases.
Matrix h_single_transmon_3lvl(const TocSingleQubitPulse& pulse, const DragCorrection& drag,
                              double t);

// Interaction-picture coupling of the two modulated transmons: the three
// exchange terms with phases Delta1, Delta1+alpha1, Delta1-alpha2, all
// multiplied by exp(-i beta sin(nu t + phi(t))), plus Hermitian conjugates.
Matrix h_coupled_transmons(const TocTwoQubitDrive& drive, const CoupledSystemParams& params,
                           double t);

// Effective two-level Hamiltonian on {|01>, |10>} after the rotating-frame
// reduction: (1/2) [[-delta_t, g_eff e^{-i phi}], [g_eff e^{i phi}, delta_t]].
Matrix h_effective_two_qubit(const TocTwoQubitDrive& drive, double t);

// Relaxation and dephasing channels, each paired with rate kappa/2; for two
// transmons the single-transmon operators are tensored with the identity on
// the other site.
std::vector<Collapse> collapse_operators(const TransmonParams& params);
std::vector<Collapse> collapse_operators(const CoupledSystemParams& params);

// HamiltonianSpec adapters. The shift arguments implement perturbed drives,
// Delta -> Delta + delta_shift and Omega -> Omega + omega_shift [rad/ns],
// with the phase trajectory kept at its unperturbed form.
HamiltonianSpec two_level_spec(const TocSingleQubitPulse& pulse, double delta_shift = 0.0,
                               double omega_shift = 0.0);
HamiltonianSpec two_level_spec(const DynamicalSegment& segment, double delta_shift = 0.0,
                               double omega_shift = 0.0);
HamiltonianSpec transmon3_spec(const TocSingleQubitPulse& pulse, const DragCorrection& drag);
HamiltonianSpec coupled_spec(const TocTwoQubitDrive& drive, const CoupledSystemParams& params);
HamiltonianSpec effective_spec(const TocTwoQubitDrive& drive);

// Index of |m>_1 |n>_2 in the 9-dimensional product space.
inline int pair_index(int m, int n) { return 3 * m + n; }

// Qubit states embedded at the bottom of the transmon level ladder.
Vector embed_in_3(const Vector& qubit_state);
// Two-qubit amplitudes ordered {|00>,|01>,|10>,|11>} embedded in 9 dims.
Vector embed_in_9(const Vector& two_qubit_state);

}  // namespace tocgeo
