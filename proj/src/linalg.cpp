#include "tocgeo/linalg.hpp"

#include <cmath>

namespace tocgeo {

Matrix sigma_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Matrix sigma_y() {
    Matrix m(2, 2);
    m << 0, -kI, kI, 0;
    return m;
}

Matrix sigma_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

bool is_finite(const Matrix& a) {
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag()))
                return false;
    return true;
}

bool is_hermitian(const Matrix& a, double tol) {
    if (a.rows() != a.cols()) return false;
    return max_abs(a - a.adjoint()) < tol;
}

bool is_unitary(const Matrix& a, double tol) {
    if (a.rows() != a.cols()) return false;
    return max_abs(a.adjoint() * a - identity(a.rows())) < tol;
}

bool is_normalized(const Vector& v, double tol) {
    return std::abs(v.norm() - 1.0) < tol;
}

void check_density_matrix(const Matrix& rho, double herm_tol, double trace_tol,
                          double eig_floor) {
    if (rho.rows() != rho.cols())
        throw std::invalid_argument("density matrix must be square");
    if (!is_hermitian(rho, herm_tol))
        throw std::invalid_argument("density matrix is not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > trace_tol ||
        std::abs(rho.trace().imag()) > trace_tol)
        throw std::invalid_argument("density matrix trace is not 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < eig_floor)
        throw std::invalid_argument("density matrix has a negative eigenvalue");
}

namespace {

// Pade order-6 approximant with scaling and squaring. Adequate well past
// the 1e-12 contract for the operator norms used here (<= 10).
Matrix exp_pade6(const Matrix& a) {
    const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    Matrix scaled = a;
    if (norm > 0.25) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / 0.25)));
        scaled /= std::pow(2.0, squarings);
    }

    // [6/6] Pade coefficients, c_k = 6!(12-k)! / (12! k! (6-k)!).
    static const double c[] = {1.0,         0.5,           5.0 / 44.0,    1.0 / 66.0,
                               1.0 / 792.0, 1.0 / 15840.0, 1.0 / 665280.0};
    const Eigen::Index n = a.rows();
    const Matrix a2 = scaled * scaled;
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a4 * a2;
    const Matrix even = c[0] * identity(n) + c[2] * a2 + c[4] * a4 + c[6] * a6;
    const Matrix odd = scaled * (c[1] * identity(n) + c[3] * a2 + c[5] * a4);
    Matrix result = (even - odd).partialPivLu().solve(even + odd);
    for (int s = 0; s < squarings; ++s) result = result * result;
    return result;
}

}  // namespace

Matrix mat_exp(const Matrix& a) {
    if (a.rows() != a.cols())
        throw std::invalid_argument("mat_exp: matrix must be square");
    if (!is_finite(a))
        throw std::invalid_argument("mat_exp: non-finite entries");

    // A = -iH with H Hermitian <=> A skew-Hermitian.
    const double scale = std::max(1.0, max_abs(a));
    if (max_abs(a + a.adjoint()) < 1e-12 * scale) {
        const Matrix h = kI * a;  // Hermitian
        Eigen::SelfAdjointEigenSolver<Matrix> es(h);
        const Vector phases =
            (-kI * es.eigenvalues().cast<Complex>().array()).exp().matrix();
        return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    }
    return exp_pade6(a);
}

Matrix kron(const Matrix& a, const Matrix& b) {
    if (a.size() == 0 || b.size() == 0)
        throw std::invalid_argument("kron: empty operand");
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Matrix commutator(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
        throw std::invalid_argument("commutator: dimension mismatch");
    return a * b - b * a;
}

double phase_aligned_distance(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("phase_aligned_distance: dimension mismatch");
    Eigen::Index pr = 0, pc = 0;
    b.cwiseAbs().maxCoeff(&pr, &pc);
    const Complex phase = a(pr, pc) * std::conj(b(pr, pc));
    if (std::abs(phase) == 0.0) return max_abs(a - b);
    return max_abs(a - (phase / std::abs(phase)) * b);
}

}  // namespace tocgeo
