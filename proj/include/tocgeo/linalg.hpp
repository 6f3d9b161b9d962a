#pragma once

#include <complex>

#include <Eigen/Dense>

#include "tocgeo/errors.hpp"
#include "tocgeo/units.hpp"

// Small dense complex linear algebra shared by every other module. The
// Hilbert spaces in this toolkit are 2-, 3-, 4- and 9-dimensional, so
// everything is dense, double precision and value-semantic.

namespace tocgeo {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

inline Matrix identity(Eigen::Index dim) { return Matrix::Identity(dim, dim); }

inline Matrix dagger(const Matrix& a) { return a.adjoint(); }

inline double max_abs(const Matrix& a) { return a.cwiseAbs().maxCoeff(); }

// Pauli operators on the computational subspace {|0>, |1>}.
Matrix sigma_x();
Matrix sigma_y();
Matrix sigma_z();

bool is_finite(const Matrix& a);
bool is_hermitian(const Matrix& a, double tol = 1e-12);
bool is_unitary(const Matrix& a, double tol = 1e-10);
bool is_normalized(const Vector& v, double tol = 1e-10);

// Throws std::invalid_argument unless rho is Hermitian (1e-10), has unit
// trace (1e-8) and eigenvalues >= -1e-8.
void check_density_matrix(const Matrix& rho, double herm_tol = 1e-10,
                          double trace_tol = 1e-8, double eig_floor = -1e-8);

// exp(A). Skew-Hermitian arguments (the -i*dt*H case) go through a Hermitian
// eigendecomposition; anything else uses scaling-and-squaring with a Pade
// order-6 approximant. Non-finite input throws std::invalid_argument.
Matrix mat_exp(const Matrix& a);

// Kronecker product, (A kron B)[i*dB+k][j*dB+l] = A[i][j]*B[k][l].
Matrix kron(const Matrix& a, const Matrix& b);

// AB - BA. Dimension mismatch throws std::invalid_argument.
Matrix commutator(const Matrix& a, const Matrix& b);

// max |a - e^{i phi} b| with phi chosen to align the phases of the entry
// where |b| is largest; compares unitaries up to a global phase.
double phase_aligned_distance(const Matrix& a, const Matrix& b);

}  // namespace tocgeo
