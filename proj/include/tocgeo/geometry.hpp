#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "tocgeo/linalg.hpp"
#include "tocgeo/synthesis.hpp"

// The invariant-based geometric framework: dressed states parameterized by
// the Bloch-sphere angles (chi, xi), the split of the Lewis-Riesenfeld phase
// into geometric and dynamical parts, the resulting gate matrix, and the
// Pancharatnam / solid-angle consistency checks.

namespace tocgeo {

// Sampled evolution path of the dressed states. t strictly increasing from 0
// to tau, chi in (0, pi) everywhere.
struct DressedPath {
    std::vector<double> t;    // [ns]
    std::vector<double> chi;  // polar angle [rad]
    std::vector<double> xi;   // azimuthal angle [rad]

    std::size_t size() const { return t.size(); }
    void validate() const;  // throws std::invalid_argument
};

// Constant-chi latitude path traced by a time-optimal pulse:
// chi = arccot(c0), xi(t) = phi(t) + pi.
DressedPath toc_dressed_path(const TocSingleQubitPulse& pulse, std::size_t samples = 100001);

// |psi+> = (cos(chi/2), sin(chi/2) e^{i xi}),
// |psi-> = (sin(chi/2) e^{-i xi}, -cos(chi/2)).
std::pair<Vector, Vector> dressed_states(double chi, double xi);

// (mu/2) [[cos chi, sin chi e^{-i xi}], [sin chi e^{i xi}, -cos chi]].
Matrix invariant_matrix(double chi, double xi, double mu = 1.0);

// gamma_g = -(1/2) \int xi'(t) (1 - cos chi) dt, trapezoidal on the path's
// grid with central-difference xi' (one-sided at the endpoints).
double geometric_phase(const DressedPath& path);

// gamma_d = (1/2) \int [xi' sin^2 chi + Delta(t)] / cos chi dt. Paths with
// |cos chi| <= 1e-6 anywhere throw std::domain_error (the integrand diverges
// on the equator).
double dynamical_phase(const DressedPath& path, const std::function<double(double)>& delta);
double dynamical_phase(const DressedPath& path, double constant_delta);

struct GateAngles {
    double xi_plus = 0.0;      // [xi(tau) + xi(0)] / 2
    double xi_minus = 0.0;     // [xi(tau) - xi(0)] / 2
    double chi = 0.0;          // constant polar angle
    double gamma_prime = 0.0;  // gamma + xi_minus, constrained to -xi_minus
};

GateAngles gate_angles(const TocSingleQubitPulse& pulse);

// The geometric evolution operator for a constant-chi latitude path. Requires
// gamma_prime == -xi_minus within 1e-9.
Matrix geometric_unitary(const GateAngles& angles);

// gamma_p(C1) = arg<psi+(0)|U(tau)|psi+(0)> + \int <psi+(t)|H(t)|psi+(t)> dt,
// with propagated = U(tau)|psi+(0)>. Throws std::domain_error when the
// overlap vanishes (phase of zero is undefined).
double pancharatnam_phase(const DressedPath& path,
                          const std::function<Matrix(double)>& hamiltonian,
                          const Vector& propagated);

// Same quantity from explicitly supplied states psi(t_k); exposes the gauge
// freedom of the dressed-state phases.
double pancharatnam_phase_states(const std::vector<double>& t,
                                 const std::vector<Vector>& states,
                                 const std::function<Matrix(double)>& hamiltonian,
                                 const Vector& propagated);

// Half the signed solid angle enclosed by the path after geodesic closure
// (the closing meridians carry d(xi) = 0): -(1/2) \oint (1 - cos chi) d(xi).
double solid_angle(const DressedPath& path);

struct PhaseDecomposition {
    double gamma = 0.0;    // total Lewis-Riesenfeld phase
    double gamma_g = 0.0;  // geometric part
    double gamma_d = 0.0;  // dynamical part
    double alpha_g = 0.0;  // xi(0) - xi(tau)
    double ell = 0.0;      // (gamma_d - alpha_g) / gamma_g
};

// gamma comes from the Lewis-Riesenfeld integrand
// <psi+| (i d/dt - H) |psi+>, gamma_g and gamma_d from their own quadratures;
// the three agree to 1e-9 on the sampled grids used here.
PhaseDecomposition phase_decomposition(const DressedPath& path,
                                       const std::function<Matrix(double)>& hamiltonian,
                                       const std::function<double(double)>& delta);

}  // namespace tocgeo
