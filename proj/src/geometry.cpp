#include "tocgeo/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace tocgeo {

namespace {

std::vector<double> central_difference(const std::vector<double>& y,
                                       const std::vector<double>& t) {
    const std::size_t n = y.size();
    std::vector<double> dy(n);
    dy.front() = (y[1] - y[0]) / (t[1] - t[0]);
    for (std::size_t k = 1; k + 1 < n; ++k) dy[k] = (y[k + 1] - y[k - 1]) / (t[k + 1] - t[k - 1]);
    dy.back() = (y[n - 1] - y[n - 2]) / (t[n - 1] - t[n - 2]);
    return dy;
}

double trapezoid(const std::vector<double>& f, const std::vector<double>& t) {
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < f.size(); ++k)
        sum += 0.5 * (f[k] + f[k + 1]) * (t[k + 1] - t[k]);
    return sum;
}

}  // namespace

void DressedPath::validate() const {
    if (t.size() < 2) throw std::invalid_argument("DressedPath: fewer than 2 samples");
    if (chi.size() != t.size() || xi.size() != t.size())
        throw std::invalid_argument("DressedPath: inconsistent sample counts");
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (k > 0 && t[k] <= t[k - 1])
            throw std::invalid_argument("DressedPath: time grid not strictly increasing");
        if (chi[k] <= 0.0 || chi[k] >= kPi)
            throw std::invalid_argument("DressedPath: chi outside (0, pi)");
    }
}

DressedPath toc_dressed_path(const TocSingleQubitPulse& pulse, std::size_t samples) {
    if (samples < 2) throw std::invalid_argument("toc_dressed_path: need >= 2 samples");
    DressedPath path;
    path.t.resize(samples);
    path.chi.assign(samples, pulse.chi());
    path.xi.resize(samples);
    for (std::size_t k = 0; k < samples; ++k) {
        const double t = pulse.tau * static_cast<double>(k) / (samples - 1);
        path.t[k] = t;
        path.xi[k] = phase_trajectory(pulse, t) + kPi;
    }
    return path;
}

std::pair<Vector, Vector> dressed_states(double chi, double xi) {
    const double c = std::cos(chi / 2.0), s = std::sin(chi / 2.0);
    Vector plus(2), minus(2);
    plus << c, s * std::exp(kI * xi);
    minus << s * std::exp(-kI * xi), -c;
    return {plus, minus};
}

Matrix invariant_matrix(double chi, double xi, double mu) {
    Matrix m(2, 2);
    m(0, 0) = std::cos(chi);
    m(1, 1) = -std::cos(chi);
    m(0, 1) = std::sin(chi) * std::exp(-kI * xi);
    m(1, 0) = std::conj(m(0, 1));
    return 0.5 * mu * m;
}

double geometric_phase(const DressedPath& path) {
    path.validate();
    const auto xi_dot = central_difference(path.xi, path.t);
    std::vector<double> f(path.size());
    for (std::size_t k = 0; k < path.size(); ++k)
        f[k] = -0.5 * xi_dot[k] * (1.0 - std::cos(path.chi[k]));
    return trapezoid(f, path.t);
}

double dynamical_phase(const DressedPath& path, const std::function<double(double)>& delta) {
    path.validate();
    for (double c : path.chi)
        if (std::abs(std::cos(c)) <= 1e-6)
            throw std::domain_error(
                "dynamical_phase: path touches the equator, integrand is singular");
    const auto xi_dot = central_difference(path.xi, path.t);
    std::vector<double> f(path.size());
    for (std::size_t k = 0; k < path.size(); ++k) {
        const double s = std::sin(path.chi[k]), c = std::cos(path.chi[k]);
        f[k] = 0.5 * (xi_dot[k] * s * s + delta(path.t[k])) / c;
    }
    return trapezoid(f, path.t);
}

double dynamical_phase(const DressedPath& path, double constant_delta) {
    return dynamical_phase(path, [constant_delta](double) { return constant_delta; });
}

GateAngles gate_angles(const TocSingleQubitPulse& pulse) {
    const double xi0 = phase_trajectory(pulse, 0.0) + kPi;
    const double xi1 = phase_trajectory(pulse, pulse.tau) + kPi;
    GateAngles a;
    a.xi_plus = 0.5 * (xi1 + xi0);
    a.xi_minus = 0.5 * (xi1 - xi0);
    a.chi = pulse.chi();
    a.gamma_prime = -a.xi_minus;
    return a;
}

Matrix geometric_unitary(const GateAngles& angles) {
    if (std::abs(angles.gamma_prime + angles.xi_minus) > 1e-9)
        throw std::invalid_argument("geometric_unitary: gamma_prime != -xi_minus");
    const double cg = std::cos(angles.gamma_prime), sg = std::sin(angles.gamma_prime);
    const double cc = std::cos(angles.chi), sc = std::sin(angles.chi);
    Matrix u(2, 2);
    u(0, 0) = (cg + kI * sg * cc) * std::exp(-kI * angles.xi_minus);
    u(0, 1) = kI * sg * sc * std::exp(-kI * angles.xi_plus);
    u(1, 0) = kI * sg * sc * std::exp(kI * angles.xi_plus);
    u(1, 1) = (cg - kI * sg * cc) * std::exp(kI * angles.xi_minus);
    return u;
}

double pancharatnam_phase_states(const std::vector<double>& t,
                                 const std::vector<Vector>& states,
                                 const std::function<Matrix(double)>& hamiltonian,
                                 const Vector& propagated) {
    if (t.size() != states.size() || t.size() < 2)
        throw std::invalid_argument("pancharatnam_phase: bad sampling");
    const Complex overlap = states.front().dot(propagated);  // <psi(0)|U|psi(0)>
    if (std::abs(overlap) < 1e-12)
        throw std::domain_error("pancharatnam_phase: vanishing overlap, phase undefined");
    std::vector<double> energy(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) {
        const Matrix h = hamiltonian(t[k]);
        energy[k] = states[k].dot(h * states[k]).real();
    }
    return std::arg(overlap) + trapezoid(energy, t);
}

double pancharatnam_phase(const DressedPath& path,
                          const std::function<Matrix(double)>& hamiltonian,
                          const Vector& propagated) {
    path.validate();
    std::vector<Vector> states(path.size());
    for (std::size_t k = 0; k < path.size(); ++k)
        states[k] = dressed_states(path.chi[k], path.xi[k]).first;
    return pancharatnam_phase_states(path.t, states, hamiltonian, propagated);
}

double solid_angle(const DressedPath& path) {
    path.validate();
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        const double f0 = 1.0 - std::cos(path.chi[k]);
        const double f1 = 1.0 - std::cos(path.chi[k + 1]);
        sum += -0.25 * (f0 + f1) * (path.xi[k + 1] - path.xi[k]);
    }
    return sum;
}

PhaseDecomposition phase_decomposition(const DressedPath& path,
                                       const std::function<Matrix(double)>& hamiltonian,
                                       const std::function<double(double)>& delta) {
    path.validate();
    const auto xi_dot = central_difference(path.xi, path.t);
    std::vector<double> lr(path.size());
    for (std::size_t k = 0; k < path.size(); ++k) {
        const auto psi = dressed_states(path.chi[k], path.xi[k]).first;
        const double shalf = std::sin(path.chi[k] / 2.0);
        const double connection = -xi_dot[k] * shalf * shalf;  // <psi+| i d/dt |psi+>
        const double energy = psi.dot(hamiltonian(path.t[k]) * psi).real();
        lr[k] = connection - energy;
    }
    PhaseDecomposition out;
    out.gamma = trapezoid(lr, path.t);
    out.gamma_g = geometric_phase(path);
    out.gamma_d = dynamical_phase(path, delta);
    out.alpha_g = path.xi.front() - path.xi.back();
    out.ell = std::abs(out.gamma_g) > 1e-12 ? (out.gamma_d - out.alpha_g) / out.gamma_g : 0.0;
    return out;
}

}  // namespace tocgeo
