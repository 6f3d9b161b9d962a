#include <cmath>
#include <iostream>
#include <random>

#include "tocgeo/dynamics.hpp"
#include "tocgeo/experiments.hpp"
#include "tocgeo/geometry.hpp"
#include "tocgeo/metrics.hpp"
#include "tocgeo/model.hpp"

// Cross-module invariant suite behind the `validate` CLI command. Everything
// here is fast (a few seconds) and deterministic: randomized checks use a
// fixed seed.

namespace tocgeo {

namespace {

Matrix random_hermitian(Eigen::Index dim, std::mt19937& rng, double norm_cap) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix a(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = Complex(u(rng), u(rng));
    Matrix h = 0.5 * (a + a.adjoint());
    const double norm = h.operatorNorm();
    if (norm > norm_cap) h *= norm_cap / norm;
    return h;
}

Matrix random_matrix(Eigen::Index dim, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix a(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = Complex(u(rng), u(rng));
    return a;
}

HamiltonianSpec shifted(const HamiltonianSpec& h, double t0) {
    HamiltonianSpec s = h;
    s.eval = [h, t0](double t) { return h.eval(t0 + t); };
    return s;
}

}  // namespace

int run_validate(std::ostream& out) {
    int failures = 0;
    auto check = [&](const char* name, bool ok, double detail = 0.0) {
        out << (ok ? "PASS " : "FAIL ") << name;
        if (!ok) out << "  (measured " << detail << ")";
        out << '\n';
        if (!ok) ++failures;
    };

    std::mt19937 rng(20260808u);

    // mat_exp(-iHt) unitary for random Hermitian H, dims 2/3/9.
    {
        double worst = 0.0;
        for (Eigen::Index dim : {2, 3, 9})
            for (int rep = 0; rep < 20; ++rep) {
                const Matrix h = random_hermitian(dim, rng, 5.0);
                const Matrix u = mat_exp(Complex(0, -1) * h);
                worst = std::max(worst, max_abs(u.adjoint() * u - identity(dim)));
            }
        check("mat_exp unitarity (random Hermitian, dims 2/3/9)", worst < 1e-10, worst);
    }

    // kron associativity and commutator trace.
    {
        double worst = 0.0;
        for (int rep = 0; rep < 10; ++rep) {
            const Matrix a = random_matrix(2, rng), b = random_matrix(3, rng),
                         c = random_matrix(2, rng);
            worst = std::max(worst, max_abs(kron(kron(a, b), c) - kron(a, kron(b, c))));
        }
        check("kron associativity", worst < 1e-12, worst);

        double tr = 0.0;
        for (int rep = 0; rep < 10; ++rep) {
            const Matrix a = random_matrix(3, rng), b = random_matrix(3, rng);
            tr = std::max(tr, std::abs(commutator(a, b).trace()));
        }
        check("commutator is traceless", tr < 1e-12, tr);
    }

    const auto pulse_x = synth_single_qubit_toc(Axis::X, kPi / 2.0, mhz(45.0));
    const auto pulse_y = synth_single_qubit_toc(Axis::Y, -kPi / 2.0, mhz(40.0));

    // Invariant equation dI/dt + i[H, I] = 0 on the TOC path.
    {
        const auto path = toc_dressed_path(pulse_x, 2001);
        double worst = 0.0;
        for (std::size_t k = 1; k + 1 < path.size(); ++k) {
            const Matrix di = (invariant_matrix(path.chi[k + 1], path.xi[k + 1]) -
                               invariant_matrix(path.chi[k - 1], path.xi[k - 1])) /
                              (path.t[k + 1] - path.t[k - 1]);
            const Matrix h = h_two_level(pulse_x, path.t[k]);
            const Matrix res = di + kI * commutator(h, invariant_matrix(path.chi[k], path.xi[k]));
            worst = std::max(worst, max_abs(res));
        }
        check("invariant equation residual < 1e-5", worst < 1e-5, worst);
    }

    // Phase split, unconventional condition, ell = -1.
    {
        double worst_split = 0.0, worst_uncon = 0.0, worst_ell = 0.0;
        for (const auto& pulse : {pulse_x, pulse_y,
                                  synth_single_qubit_toc(Axis::X, kPi / 8.0, mhz(45.0))}) {
            const auto path = toc_dressed_path(pulse);
            const auto h = [pulse](double t) { return h_two_level(pulse, t); };
            const auto dec = phase_decomposition(path, h, [&](double) { return pulse.delta; });
            worst_split = std::max(worst_split,
                                   std::abs(dec.gamma - (dec.gamma_g + dec.gamma_d)));
            worst_uncon = std::max(worst_uncon,
                                   std::abs(dec.gamma_d - (dec.alpha_g - dec.gamma_g)));
            worst_ell = std::max(worst_ell, std::abs(dec.ell + 1.0));
        }
        check("gamma = gamma_g + gamma_d within 1e-9", worst_split < 1e-9, worst_split);
        check("unconventional condition within 1e-6", worst_uncon < 1e-6, worst_uncon);
        check("ell = -1 within 1e-9", worst_ell < 1e-9, worst_ell);
    }

    // Dressed propagation and the closed-form gate matrix.
    {
        IntegratorOptions fine;
        fine.dt = pulse_x.tau / 20000.0;
        double worst_dressed = 0.0, worst_gate = 0.0;
        for (const auto& pulse : {pulse_x, pulse_y}) {
            fine.dt = pulse.tau / 20000.0;
            const Matrix u = propagate_unitary(two_level_spec(pulse), pulse.tau, fine);
            const auto path = toc_dressed_path(pulse);
            const auto h = [pulse](double t) { return h_two_level(pulse, t); };
            const auto dec = phase_decomposition(path, h, [&](double) { return pulse.delta; });
            const auto [plus0, minus0] = dressed_states(path.chi.front(), path.xi.front());
            const auto [plus1, minus1] = dressed_states(path.chi.back(), path.xi.back());
            const double dplus =
                (u * plus0 - std::exp(kI * dec.gamma) * plus1).norm();
            const double dminus =
                (u * minus0 - std::exp(-kI * dec.gamma) * minus1).norm();
            worst_dressed = std::max({worst_dressed, dplus, dminus});
            worst_gate = std::max(worst_gate,
                                  phase_aligned_distance(u, geometric_unitary(gate_angles(pulse))));
        }
        check("dressed states pick up e^{+-i gamma} within 1e-6", worst_dressed < 1e-6,
              worst_dressed);
        check("propagated gate matches closed form within 1e-6", worst_gate < 1e-6,
              worst_gate);
    }

    // Minimal pulse area and the gate-time advantage.
    {
        double worst_area = 0.0;
        bool below_pi = true, faster = true;
        for (double theta : {kPi / 8.0, kPi / 4.0, kPi / 2.0, 3.0 * kPi / 4.0, kPi}) {
            const auto p = synth_single_qubit_toc(Axis::X, theta, mhz(45.0));
            const double target = 0.5 * kPi / std::sqrt(1.0 + p.c0 * p.c0);
            worst_area = std::max(worst_area, std::abs(p.area() - target));
            below_pi = below_pi && p.area() < kPi;
            faster = faster && p.tau < conventional_gate_time(theta, mhz(45.0));
        }
        check("minimal pulse area law within 1e-9, always < pi", worst_area < 1e-9 && below_pi,
              worst_area);
        check("TOC gate faster than conventional for all angles", faster);
    }

    // Dynamical composition reproduces the target rotation.
    {
        double worst = 0.0;
        for (Axis axis : {Axis::X, Axis::Y}) {
            const auto seq = synth_dynamical(axis, kPi / 2.0, mhz(45.0));
            IntegratorOptions fine;
            Matrix u = identity(2);
            for (const auto& seg : seq.segments) {
                fine.dt = seg.tau() / 20000.0;
                u = propagate_unitary(two_level_spec(seg), seg.tau(), fine) * u;
            }
            const Matrix target = (axis == Axis::X) ? rx(kPi / 2.0) : ry(kPi / 2.0);
            worst = std::max(worst, phase_aligned_distance(u, target));
        }
        check("dynamical two-segment composition = R(theta) within 1e-6", worst < 1e-6, worst);
    }

    // Hamiltonian builders are Hermitian at random times.
    {
        const auto drive = synth_two_qubit_toc(kPi / 2.0, kPi / 2.0, mhz(8.0), 1.3, mhz(320.0));
        RunConfig cfg;
        const auto cpar = cfg.coupled();
        const DragCorrection drag{true, mhz(220.0)};
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        double worst = 0.0;
        for (int rep = 0; rep < 100; ++rep) {
            const double t1 = u01(rng) * pulse_x.tau;
            const double t2 = u01(rng) * drive.duration;
            for (const Matrix& h :
                 {h_two_level(pulse_x, t1), h_single_transmon_3lvl(pulse_x, drag, t1),
                  h_coupled_transmons(drive, cpar, t2), h_effective_two_qubit(drive, t2)})
                worst = std::max(worst, max_abs(h - h.adjoint()));
        }
        check("Hamiltonian builders Hermitian within 1e-12", worst < 1e-12, worst);

        // Unimodular modulation factor: Frobenius norm is t-independent.
        const double ref = h_coupled_transmons(drive, cpar, 0.0).norm();
        double drift = 0.0;
        for (int rep = 0; rep < 50; ++rep)
            drift = std::max(drift, std::abs(h_coupled_transmons(drive, cpar,
                                                                 u01(rng) * drive.duration)
                                                 .norm() -
                                             ref));
        check("coupling norm independent of t (|e^{-i b sin}| = 1)", drift < 1e-12, drift);

        // Full interaction-picture propagation vs effective model, compared
        // in the effective frame, checked at ten intermediate times.
        const auto full = coupled_spec(drive, cpar);
        const auto eff = effective_spec(drive);
        Matrix u_full = identity(9), u_eff = identity(2);
        const int checkpoints = 10;
        const double seg = drive.duration / checkpoints;
        double dev = 0.0;
        for (int k = 0; k < checkpoints; ++k) {
            u_full = propagate_unitary(shifted(full, k * seg), seg) * u_full;
            u_eff = propagate_unitary(shifted(eff, k * seg), seg) * u_eff;
            const double t = (k + 1) * seg;
            Matrix block(2, 2);
            const int i01 = pair_index(0, 1), i10 = pair_index(1, 0);
            block << u_full(i01, i01), u_full(i01, i10), u_full(i10, i01), u_full(i10, i10);
            Matrix frame = Matrix::Zero(2, 2);
            frame(0, 0) = std::exp(-kI * 0.5 * drive.delta_t * t);
            frame(1, 1) = std::exp(kI * 0.5 * drive.delta_t * t);
            dev = std::max(dev, max_abs(block - frame * u_eff));
        }
        check("rotating-wave consistency (full vs effective) < 0.05", dev < 0.05, dev);
    }

    // Lindblad with no collapses matches unitary propagation.
    {
        IntegratorOptions opts;
        const Matrix u = propagate_unitary(two_level_spec(pulse_x), pulse_x.tau, opts);
        Vector plus(2);
        plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
        const Matrix rho =
            evolve_lindblad(two_level_spec(pulse_x), {}, plus * plus.adjoint(), pulse_x.tau, opts);
        const Matrix ref = u * (plus * plus.adjoint()) * u.adjoint();
        check("closed-system Lindblad = unitary within 1e-8", max_abs(rho - ref) < 1e-8,
              max_abs(rho - ref));
    }

    // Pancharatnam phase: equals gamma_g after geodesic closure and is gauge
    // invariant.
    {
        const auto path = toc_dressed_path(pulse_x);
        const auto h = [&](double t) { return h_two_level(pulse_x, t); };
        IntegratorOptions fine;
        fine.dt = pulse_x.tau / 20000.0;
        const Matrix u = propagate_unitary(two_level_spec(pulse_x), pulse_x.tau, fine);
        const Vector propagated = u * dressed_states(path.chi.front(), path.xi.front()).first;
        const double gp = pancharatnam_phase(path, h, propagated);
        const double gg = geometric_phase(path);
        const double dphase = std::remainder(gp - gg, kTwoPi);
        check("Pancharatnam phase = gamma_g within 1e-6", std::abs(dphase) < 1e-6, dphase);

        std::vector<Vector> states(path.size());
        for (std::size_t k = 0; k < path.size(); ++k) {
            const double gauge = 0.3 * std::sin(kTwoPi * path.t[k] / pulse_x.tau);
            states[k] =
                std::exp(kI * gauge) * dressed_states(path.chi[k], path.xi[k]).first;
        }
        const double gp2 = pancharatnam_phase_states(path.t, states, h, propagated);
        check("Pancharatnam gauge invariance within 1e-8", std::abs(gp2 - gp) < 1e-8,
              gp2 - gp);
    }

    // Bessel J1 against the series at the tabulated first zero.
    {
        const double j0 = bessel_j1(3.8317);
        check("J1 first zero near 3.8317", std::abs(j0) < 1e-4, j0);
    }

    // Trace fidelity is global-phase invariant; unperturbed point tops a
    // small robustness grid.
    {
        const Matrix r = rx(kPi / 2.0);
        const double f = trace_fidelity(r, std::exp(kI * 0.7) * r);
        check("trace fidelity global-phase invariant", std::abs(f - 1.0) < 1e-12, f - 1.0);

        const auto grid = run_fig3(Axis::X, kPi / 2.0, GateKind::Geometric, 0.1, 11, mhz(45.0));
        double top = 0.0;
        for (const auto& row : grid.values)
            for (double v : row) top = std::max(top, v);
        const double center = grid.values[5][5];
        check("robustness grid peaks at (0, 0)", top - center < 1e-9, top - center);
    }

    return failures;
}

}  // namespace tocgeo
