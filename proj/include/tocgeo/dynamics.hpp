#pragma once

#include <functional>
#include <vector>

#include "tocgeo/linalg.hpp"

// Time-ordered unitary propagation and Lindblad master-equation integration.
// A time-dependent Hamiltonian is an immutable closure evaluable at any t;
// evaluation is pure, so trajectories can run in parallel.

namespace tocgeo {

struct HamiltonianSpec {
    Eigen::Index dim = 0;
    std::function<Matrix(double)> eval;  // H(t) [rad/ns], must be Hermitian
    // Largest admissible step [ns]; 0 means unconstrained. Builders with fast
    // internal phases (parametric modulation at nu) set 2*pi/(40*nu).
    double max_dt = 0.0;
};

// Contributes rate * (2 A rho A^+ - A^+A rho - rho A^+A) to rho'.
struct Collapse {
    Matrix op;
    double rate = 0.0;  // [rad/ns]
};

enum class Method { PiecewiseExponential, Rk4 };

struct IntegratorOptions {
    double dt = 0.0;  // 0 selects duration/4000, always capped by max_dt
    Method method = Method::PiecewiseExponential;
    bool convergence_check = false;  // rerun at dt/2 and compare
};

// Number of steps the options resolve to for a given duration.
int resolve_steps(const HamiltonianSpec& h, double duration, const IntegratorOptions& opts);

// U(duration) = prod_k exp(-i H(t_k + dt/2) dt), or RK4 on the matrix
// Schroedinger equation when opts.method == Rk4. Non-Hermitian samples throw
// std::invalid_argument; a failed convergence check throws ConvergenceError.
Matrix propagate_unitary(const HamiltonianSpec& h, double duration,
                         const IntegratorOptions& opts = {});

// RK4 integration of rho' = -i[H,rho] + sum_c rate_c L(A_c). The returned
// state stays Hermitian within 1e-9 and unit-trace within 1e-8; trace drift
// beyond 1e-6 during integration throws ConvergenceError.
Matrix evolve_lindblad(const HamiltonianSpec& h, const std::vector<Collapse>& collapses,
                       const Matrix& rho0, double duration,
                       const IntegratorOptions& opts = {});

// Fixed sparsity pattern shared by all samples of a tabulated Hamiltonian,
// with per-sample values stored sample-major. Filled by tabulate_hamiltonian
// when the pattern is sparse enough to pay off; purely an acceleration, the
// dense samples stay authoritative.
struct SparseSamples {
    std::vector<int> rows, cols;  // nnz positions
    std::vector<Complex> values;  // values[sample * nnz + k]
    bool available() const { return !rows.empty(); }
    int nnz() const { return static_cast<int>(rows.size()); }
};

// Pre-sampled H(t) on a half-step grid: samples[j] = H(j*dt/2), j=0..2*steps.
// Lets many trajectories share one set of Hamiltonian evaluations.
struct HamiltonianTable {
    Eigen::Index dim = 0;
    double dt = 0.0;
    int steps = 0;
    std::vector<Matrix> samples;
    SparseSamples structure;
};

HamiltonianTable tabulate_hamiltonian(const HamiltonianSpec& h, double duration, int steps);

// One RK4 pass over a pre-sampled Hamiltonian (no convergence re-run).
Matrix evolve_lindblad_table(const HamiltonianTable& table,
                             const std::vector<Collapse>& collapses, const Matrix& rho0);

}  // namespace tocgeo
