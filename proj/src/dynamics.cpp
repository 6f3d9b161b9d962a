#include "tocgeo/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace tocgeo {

namespace {

constexpr int kDefaultSteps = 4000;
constexpr double kTraceDriftLimit = 1e-6;
constexpr double kHalvingTol = 1e-8;

void check_hermitian_sample(const Matrix& h, double t) {
    const double scale = std::max(1.0, max_abs(h));
    if (max_abs(h - h.adjoint()) > 1e-9 * scale)
        throw std::invalid_argument("non-Hermitian Hamiltonian sample at t=" +
                                    std::to_string(t));
}

// exp(-i dt H) for Hermitian 2x2 via the Pauli decomposition.
Matrix su2_step(const Matrix& h, double dt) {
    const double c0 = 0.5 * (h(0, 0).real() + h(1, 1).real());
    const double vz = 0.5 * (h(0, 0).real() - h(1, 1).real());
    const double vx = h(0, 1).real();
    const double vy = -h(0, 1).imag();
    const double v = std::sqrt(vx * vx + vy * vy + vz * vz);
    const Complex phase = std::exp(-kI * c0 * dt);
    Matrix u(2, 2);
    if (v < 1e-300) {
        u = phase * identity(2);
        return u;
    }
    const double c = std::cos(v * dt), s = std::sin(v * dt);
    const Complex f = -kI * (s / v);
    u(0, 0) = phase * (c + f * vz);
    u(0, 1) = phase * f * (vx - kI * vy);
    u(1, 0) = phase * f * (vx + kI * vy);
    u(1, 1) = phase * (c - f * vz);
    return u;
}

// exp(-i dt H) for Hermitian H via eigendecomposition.
Matrix hermitian_step(const Matrix& h, double dt) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const Vector phases =
        (-kI * dt * es.eigenvalues().cast<Complex>().array()).exp().matrix();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix propagate_once(const HamiltonianSpec& h, double duration, int steps, Method method) {
    const double dt = duration / steps;
    Matrix u = identity(h.dim);
    if (method == Method::PiecewiseExponential) {
        for (int k = 0; k < steps; ++k) {
            const double t = (k + 0.5) * dt;
            const Matrix hk = h.eval(t);
            check_hermitian_sample(hk, t);
            if (h.dim == 2)
                u = su2_step(hk, dt) * u;
            else
                u = hermitian_step(hk, dt) * u;
        }
        return u;
    }
    // RK4 on U' = -i H U.
    Matrix k1, k2, k3, k4, tmp;
    for (int k = 0; k < steps; ++k) {
        const double t = k * dt;
        const Matrix h0 = h.eval(t);
        const Matrix h1 = h.eval(t + 0.5 * dt);
        const Matrix h2 = h.eval(t + dt);
        check_hermitian_sample(h0, t);
        k1.noalias() = -kI * (h0 * u);
        tmp = u + (0.5 * dt) * k1;
        k2.noalias() = -kI * (h1 * tmp);
        tmp = u + (0.5 * dt) * k2;
        k3.noalias() = -kI * (h1 * tmp);
        tmp = u + dt * k3;
        k4.noalias() = -kI * (h2 * tmp);
        u += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return u;
}

}  // namespace

int resolve_steps(const HamiltonianSpec& h, double duration, const IntegratorOptions& opts) {
    if (duration <= 0.0) throw std::invalid_argument("duration must be > 0");
    double dt = opts.dt > 0.0 ? opts.dt : duration / kDefaultSteps;
    if (h.max_dt > 0.0 && dt > h.max_dt) dt = h.max_dt;
    return std::max(1, static_cast<int>(std::ceil(duration / dt - 1e-9)));
}

Matrix propagate_unitary(const HamiltonianSpec& h, double duration,
                         const IntegratorOptions& opts) {
    const int steps = resolve_steps(h, duration, opts);
    Matrix u = propagate_once(h, duration, steps, opts.method);
    if (opts.convergence_check) {
        const Matrix u2 = propagate_once(h, duration, 2 * steps, opts.method);
        if (max_abs(u - u2) > kHalvingTol)
            throw ConvergenceError("propagate_unitary: step-halving changed the result by " +
                                   std::to_string(max_abs(u - u2)) + "; reduce dt");
        u = u2;
    }
    return u;
}

HamiltonianTable tabulate_hamiltonian(const HamiltonianSpec& h, double duration, int steps) {
    HamiltonianTable table;
    table.dim = h.dim;
    table.steps = steps;
    table.dt = duration / steps;
    table.samples.resize(2 * steps + 1);
    for (int j = 0; j <= 2 * steps; ++j) {
        const double t = 0.5 * j * table.dt;
        table.samples[j] = h.eval(t);
        check_hermitian_sample(table.samples[j], t);
    }

    // Shared sparsity pattern across all samples; worth storing when the
    // Hamiltonian touches at most a third of its entries (the coupled
    // two-transmon model has 6 of 81).
    if (h.dim >= 4) {
        std::vector<int> rows, cols;
        for (Eigen::Index i = 0; i < h.dim; ++i)
            for (Eigen::Index j = 0; j < h.dim; ++j) {
                bool hit = false;
                for (const Matrix& s : table.samples)
                    if (s(i, j) != Complex(0.0, 0.0)) {
                        hit = true;
                        break;
                    }
                if (hit) {
                    rows.push_back(static_cast<int>(i));
                    cols.push_back(static_cast<int>(j));
                }
            }
        if (!rows.empty() && 3 * static_cast<Eigen::Index>(rows.size()) <= h.dim * h.dim) {
            table.structure.rows = std::move(rows);
            table.structure.cols = std::move(cols);
            const int nnz = table.structure.nnz();
            table.structure.values.resize(static_cast<std::size_t>(nnz) *
                                          table.samples.size());
            for (std::size_t s = 0; s < table.samples.size(); ++s)
                for (int k = 0; k < nnz; ++k)
                    table.structure.values[s * nnz + k] =
                        table.samples[s](table.structure.rows[k], table.structure.cols[k]);
        }
    }
    return table;
}

namespace {

// RK4 over a sampled Hamiltonian; MatType is a fixed-size Eigen matrix for
// the hot dimensions and MatrixXcd otherwise.
template <typename MatType>
Matrix lindblad_rk4(const HamiltonianTable& table, const std::vector<Collapse>& collapses,
                    const Matrix& rho0) {
    const Eigen::Index n = table.dim;
    const double dt = table.dt;

    std::vector<MatType> a_ops, a_dags, k_ops;
    std::vector<double> rates;
    for (const auto& c : collapses) {
        if (c.op.rows() != n || c.op.cols() != n)
            throw std::invalid_argument("collapse operator dimension mismatch");
        if (c.rate < 0.0) throw std::invalid_argument("negative collapse rate");
        if (c.rate == 0.0) continue;
        a_ops.push_back(c.op);
        a_dags.push_back(c.op.adjoint());
        k_ops.push_back(c.op.adjoint() * c.op);
        rates.push_back(c.rate);
    }

    MatType rho = rho0;
    MatType k1 = rho, k2 = rho, k3 = rho, k4 = rho, stage = rho, work = rho;

    auto rhs = [&](const MatType& r, const MatType& h, MatType& out) {
        out.noalias() = h * r;
        out.noalias() -= r * h;
        out *= -kI;
        for (std::size_t c = 0; c < rates.size(); ++c) {
            work.noalias() = a_ops[c] * r;
            out.noalias() += (2.0 * rates[c]) * (work * a_dags[c]);
            out.noalias() -= rates[c] * (k_ops[c] * r);
            out.noalias() -= rates[c] * (r * k_ops[c]);
        }
    };

    for (int k = 0; k < table.steps; ++k) {
        const MatType h0 = table.samples[2 * k];
        const MatType h1 = table.samples[2 * k + 1];
        const MatType h2 = table.samples[2 * k + 2];
        rhs(rho, h0, k1);
        stage = rho + (0.5 * dt) * k1;
        rhs(stage, h1, k2);
        stage = rho + (0.5 * dt) * k2;
        rhs(stage, h1, k3);
        stage = rho + dt * k3;
        rhs(stage, h2, k4);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        // RK4 conserves the trace algebraically, so genuine drift means the
        // step is too large for the stiffest rate; a runaway norm means the
        // same thing long before rounding shows up in the trace.
        const double tr = rho.trace().real();
        if (std::abs(tr - 1.0) > kTraceDriftLimit || !std::isfinite(tr) ||
            rho.cwiseAbs().maxCoeff() > 1e3)
            throw ConvergenceError("evolve_lindblad: state diverged at step " +
                                   std::to_string(k) + " (trace drift " +
                                   std::to_string(std::abs(tr - 1.0)) + "); reduce dt");
    }
    return Matrix(rho);
}

bool is_diagonal(const Matrix& a) {
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (i != j && a(i, j) != Complex(0.0, 0.0)) return false;
    return true;
}

// True when every channel has a diagonal A^+A, which lets the anticommutator
// halves (and diagonal channels entirely) collapse into one elementwise
// weight matrix.
bool structurable(const std::vector<Collapse>& collapses) {
    for (const auto& c : collapses) {
        if (c.rate == 0.0) continue;
        if (!is_diagonal(Matrix(c.op.adjoint() * c.op))) return false;
    }
    return true;
}

// RK4 over the shared sparsity pattern: the commutator walks the
// Hamiltonian's nonzeros, diagonal channels act elementwise, and the
// remaining channels apply their 2 A rho A^+ term through triplets.
template <typename MatType>
Matrix lindblad_rk4_structured(const HamiltonianTable& table,
                               const std::vector<Collapse>& collapses, const Matrix& rho0) {
    const Eigen::Index n = table.dim;
    const double dt = table.dt;
    const int nnz = table.structure.nnz();

    MatType weight = MatType::Zero(n, n);
    struct SparseChannel {
        double rate;
        std::vector<int> rows, cols;
        std::vector<Complex> vals;
    };
    std::vector<SparseChannel> channels;
    for (const auto& c : collapses) {
        if (c.op.rows() != n || c.op.cols() != n)
            throw std::invalid_argument("collapse operator dimension mismatch");
        if (c.rate < 0.0) throw std::invalid_argument("negative collapse rate");
        if (c.rate == 0.0) continue;
        if (is_diagonal(c.op)) {
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n; ++j) {
                    const Complex ai = c.op(i, i), aj = c.op(j, j);
                    weight(i, j) += c.rate * (2.0 * ai * std::conj(aj) -
                                              std::norm(ai) - std::norm(aj));
                }
            continue;
        }
        const Matrix k = c.op.adjoint() * c.op;  // diagonal by selection
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                weight(i, j) -= c.rate * (k(i, i).real() + k(j, j).real());
        SparseChannel ch;
        ch.rate = c.rate;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = 0; q < n; ++q)
                if (c.op(p, q) != Complex(0.0, 0.0)) {
                    ch.rows.push_back(static_cast<int>(p));
                    ch.cols.push_back(static_cast<int>(q));
                    ch.vals.push_back(c.op(p, q));
                }
        channels.push_back(std::move(ch));
    }

    MatType rho = rho0;
    MatType k1 = rho, k2 = rho, k3 = rho, k4 = rho, stage = rho, work = rho;

    auto rhs = [&](const MatType& r, int sample, MatType& out) {
        out = weight.cwiseProduct(r);
        const Complex* hv = &table.structure.values[static_cast<std::size_t>(sample) * nnz];
        for (int t = 0; t < nnz; ++t) {
            const int a = table.structure.rows[t], b = table.structure.cols[t];
            out.row(a) += (-kI * hv[t]) * r.row(b);
            out.col(b) += (kI * hv[t]) * r.col(a);
        }
        for (const auto& ch : channels) {
            work.setZero();
            for (std::size_t t = 0; t < ch.vals.size(); ++t)
                work.row(ch.rows[t]) += ch.vals[t] * r.row(ch.cols[t]);
            for (std::size_t t = 0; t < ch.vals.size(); ++t)
                out.col(ch.rows[t]) +=
                    (2.0 * ch.rate * std::conj(ch.vals[t])) * work.col(ch.cols[t]);
        }
    };

    for (int k = 0; k < table.steps; ++k) {
        rhs(rho, 2 * k, k1);
        stage = rho + (0.5 * dt) * k1;
        rhs(stage, 2 * k + 1, k2);
        stage = rho + (0.5 * dt) * k2;
        rhs(stage, 2 * k + 1, k3);
        stage = rho + dt * k3;
        rhs(stage, 2 * k + 2, k4);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        const double tr = rho.trace().real();
        if (std::abs(tr - 1.0) > kTraceDriftLimit || !std::isfinite(tr) ||
            rho.cwiseAbs().maxCoeff() > 1e3)
            throw ConvergenceError("evolve_lindblad: state diverged at step " +
                                   std::to_string(k) + " (trace drift " +
                                   std::to_string(std::abs(tr - 1.0)) + "); reduce dt");
    }
    return Matrix(rho);
}

}  // namespace

Matrix evolve_lindblad_table(const HamiltonianTable& table,
                             const std::vector<Collapse>& collapses, const Matrix& rho0) {
    if (rho0.rows() != table.dim || rho0.cols() != table.dim)
        throw std::invalid_argument("evolve_lindblad: state dimension mismatch");
    const bool fast = table.structure.available() && structurable(collapses);
    switch (table.dim) {
        case 2:
            return lindblad_rk4<Eigen::Matrix2cd>(table, collapses, rho0);
        case 3:
            return lindblad_rk4<Eigen::Matrix3cd>(table, collapses, rho0);
        case 9:
            return fast ? lindblad_rk4_structured<Eigen::Matrix<Complex, 9, 9>>(
                              table, collapses, rho0)
                        : lindblad_rk4<Eigen::Matrix<Complex, 9, 9>>(table, collapses, rho0);
        default:
            return fast ? lindblad_rk4_structured<Matrix>(table, collapses, rho0)
                        : lindblad_rk4<Matrix>(table, collapses, rho0);
    }
}

Matrix evolve_lindblad(const HamiltonianSpec& h, const std::vector<Collapse>& collapses,
                       const Matrix& rho0, double duration, const IntegratorOptions& opts) {
    check_density_matrix(rho0);
    const int steps = resolve_steps(h, duration, opts);
    const HamiltonianTable table = tabulate_hamiltonian(h, duration, steps);
    Matrix rho = evolve_lindblad_table(table, collapses, rho0);
    if (opts.convergence_check) {
        const HamiltonianTable fine = tabulate_hamiltonian(h, duration, 2 * steps);
        const Matrix rho2 = evolve_lindblad_table(fine, collapses, rho0);
        const double dpop = (rho.diagonal().real() - rho2.diagonal().real())
                                .cwiseAbs()
                                .maxCoeff();
        if (dpop > kHalvingTol)
            throw ConvergenceError("evolve_lindblad: step-halving changed populations by " +
                                   std::to_string(dpop) + "; reduce dt");
        rho = rho2;
    }
    return rho;
}

}  // namespace tocgeo
