#pragma once

#include <map>
#include <string>
#include <vector>

#include "tocgeo/dynamics.hpp"
#include "tocgeo/linalg.hpp"
#include "tocgeo/model.hpp"
#include "tocgeo/synthesis.hpp"

// Figures of merit: perturbed-gate trace fidelity, state-averaged gate
// fidelity under decoherence, and leakage out of the computational subspace.

namespace tocgeo {

enum class FidelityKind { Trace, Averaged1q, Averaged2q };
enum class GateKind { Geometric, Dynamical };

struct FidelityReport {
    double value = 0.0;
    FidelityKind kind = FidelityKind::Trace;
    int n_states = 0;          // states actually averaged
    double mean_leakage = 0.0; // population outside the computational subspace
    double max_leakage = 0.0;
    std::map<std::string, double> metadata;  // parameter echo
};

// |Tr(ideal^+ actual)| / Tr(ideal^+ ideal). The modulus makes the value real,
// in [0, 1] for unitary arguments, and insensitive to global phases.
double trace_fidelity(const Matrix& ideal, const Matrix& actual);

// Propagates the two-level model with Delta -> Delta + delta*omega_max and
// Omega(t) -> Omega(t) + epsilon*omega_max while the drive phase keeps its
// unperturbed trajectory. |delta|, |epsilon| <= 0.2.
Matrix perturbed_gate(const TocSingleQubitPulse& pulse, double delta, double epsilon,
                      const IntegratorOptions& opts = {});
// Same shifts applied per segment of a dynamical sequence (scaled by the
// sequence's omega_ref); returns the composed unitary.
Matrix perturbed_gate(const DynamicalPulseSequence& seq, double delta, double epsilon,
                      const IntegratorOptions& opts = {});

// 1 - sum of the computational-subspace populations.
double leakage(const Matrix& rho, const std::vector<int>& computational_indices);

// State-averaged gate fidelity over the closed grid theta_1 = 2*pi*k/(n-1),
// evolved with the Lindblad equation. params.levels selects the three-level
// transmon model (with the DRAG setting) or the ideal two-level model.
FidelityReport avg_gate_fidelity_1q(const TocSingleQubitPulse& pulse,
                                    const DragCorrection& drag, const TransmonParams& params,
                                    int n_states = 1001, const IntegratorOptions& opts = {});

// Two-qubit average over a g x g closed grid of product states, g^2 >=
// n_states; evolution under the full coupled-transmon model, target from the
// effective-frame gate (the interaction-picture result carries the extra
// single-excitation frame phases exp(-i*delta_t*T*(n2-n1)/2), which are
// absorbed before comparing).
FidelityReport avg_gate_fidelity_2q(const TocTwoQubitDrive& drive,
                                    const CoupledSystemParams& params, int n_states,
                                    const IntegratorOptions& opts = {});

// Same average computed through the propagated computational-basis matrices:
// the master equation is linear, so 16 evolutions determine every product
// state's final density matrix exactly. Agrees with avg_gate_fidelity_2q to
// float reassociation (~1e-12); the parameter sweeps use this route so a
// cell costs 16 trajectories instead of one per grid state.
FidelityReport avg_gate_fidelity_2q_process(const TocTwoQubitDrive& drive,
                                            const CoupledSystemParams& params, int n_states,
                                            const IntegratorOptions& opts = {});

struct RobustnessGrid {
    std::vector<double> delta_axis;    // units of omega_max
    std::vector<double> epsilon_axis;  // units of omega_max
    std::vector<std::vector<double>> values;  // values[i][j] at (delta_i, epsilon_j)
    GateKind gate_kind = GateKind::Geometric;
    Axis axis = Axis::X;
    double angle = 0.0;
};

// Trace fidelity of the perturbed two-level gate against R_{x,y}(angle) on
// every grid point (no decoherence).
RobustnessGrid fill_robustness_grid(GateKind kind, Axis axis, double angle, double omega_max,
                                    const std::vector<double>& delta_axis,
                                    const std::vector<double>& epsilon_axis,
                                    const IntegratorOptions& opts = {});

double grid_mean(const RobustnessGrid& grid);

}  // namespace tocgeo
