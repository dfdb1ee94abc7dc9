// self-energies, dipole-dipole couplings and resolvent poles
#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <utility>

#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>

#include "giantpcw/atom.hpp"
#include "giantpcw/bloch.hpp"
#include "giantpcw/boundstate.hpp"
#include "giantpcw/errors.hpp"

namespace giantpcw {

// A_i and B_i share omega_q; A_{i+1} is A_i translated by `period`.
struct Dimer {
    GiantAtom A, B;
    double Dq{};      // m, x_B - x_A of the reference legs
    double period{};  // m, A_i -> A_{i+1}
};

// Reference legs at 0 and Dq; second legs at the given offsets, scaled by ratio.
inline Dimer make_dimer(double Dq, double offset_A, double offset_B, double g, double ratio,
                        double delta0) {
    Dimer d;
    d.A = make_atom({{0.0, g}, {offset_A, ratio * g}}, delta0);
    d.B = make_atom({{Dq, g}, {Dq + offset_B, ratio * g}}, delta0);
    d.Dq = Dq;
    d.period = 2 * Dq;
    return d;
}

inline GiantAtom translated(const GiantAtom& a, double dx) {
    GiantAtom t = a;
    for (auto& l : t.legs) l.x += dx;
    return t;
}

struct SelfEnergyResult {
    cplx sigma_e;   // rad/s
    cplx sigma_ab;  // rad/s
    double J{};     // Re sigma_ab
    double stark{}; // Re sigma_e
};

namespace detail {

inline void check_pole_distance(const Eigen::VectorXd& Delta, cplx z) {
    if (z.imag() != 0.0) return;
    double spacing = 0.0;
    for (Eigen::Index j = 0; j + 1 < Delta.size(); ++j)
        spacing = std::max(spacing, std::abs(Delta(j + 1) - Delta(j)));
    if (z.real() >= Delta.minCoeff() - spacing && z.real() <= Delta.maxCoeff() &&
        (Delta.array() - z.real()).abs().minCoeff() < spacing)
        throw DomainError("z sits on the band; add an imaginary offset");
}

}  // namespace detail

// Full-zone sums; the +/-k pairs make sigma_ab real for real z.
inline SelfEnergyResult self_energy(const Eigen::VectorXcd& gA, const Eigen::VectorXcd& gB,
                                    const Eigen::VectorXd& Delta, cplx z) {
    detail::check_pole_distance(Delta, z);
    SelfEnergyResult r{};
    for (Eigen::Index j = 0; j < Delta.size(); ++j) {
        const cplx den = z - Delta(j);
        r.sigma_e += (std::norm(gA(j)) + std::norm(gB(j))) / den;
        r.sigma_ab += gA(j) * std::conj(gB(j)) / den;
    }
    r.J = r.sigma_ab.real();
    r.stark = r.sigma_e.real();
    return r;
}

inline SelfEnergyResult self_energy(const Dimer& d, const BandStructure& bs, cplx z) {
    const double wq = resolve_omega_q(d.A, bs.band_top());
    return self_energy(coupling_gk(d.A, bs), coupling_gk(d.B, bs), band_detuning(bs, wq), z);
}

struct CouplingPair {
    double J_AB{}, J_BA{};  // rad/s
    Warnings warnings;
};

inline CouplingPair coupling_pair(const Dimer& d, const BandStructure& bs) {
    const double wq = resolve_omega_q(d.A, bs.band_top());
    const Eigen::VectorXd Delta = band_detuning(bs, wq);
    const Eigen::VectorXcd gA = coupling_gk(d.A, bs), gB = coupling_gk(d.B, bs);
    const Eigen::VectorXcd gA2 = coupling_gk(translated(d.A, d.period), bs);
    const auto sAB = self_energy(gA, gB, Delta, 0.0);
    const auto sBA = self_energy(gB, gA2, Delta, 0.0);
    CouplingPair c{sAB.J, sBA.J, {}};

    const auto j0 = bs.nearest_index(bs.k0());
    const double a = std::abs(gA(j0)), b = std::abs(gB(j0));
    if (std::abs(a - b) > 0.1 * std::max(a, b))
        c.warnings.push_back("|g_kA| and |g_kB| differ by more than 10% at the edge; "
                             "the separable resolvent is unreliable");
    const double delta0 = wq - bs.band_top();
    if (std::abs(sAB.stark) > 0.1 * delta0)
        c.warnings.push_back("Stark shift is not small against delta0; first order is unreliable");
    return c;
}

// c exp(-beta s)/s with s = sqrt(z + delta0'), c = g0^2 L/(2 sqrt(alpha)), beta = Dq/sqrt(alpha).
struct SimplifiedKernel {
    double c{}, beta{}, delta0p{};

    cplx sigma_s(cplx s) const { return c * std::exp(-beta * s) / s; }
    cplx dsigma_ds(cplx s) const { return c * std::exp(-beta * s) * (-beta / s - 1.0 / (s * s)); }
    cplx dsigma_dz(cplx s) const { return dsigma_ds(s) / (2.0 * s); }
};

inline SimplifiedKernel simplified_kernel(double g0, double alpha_m, double delta0p, double Dq,
                                          double L) {
    if (Dq < 0) throw DomainError("Dq must be non-negative");
    if (!(alpha_m > 0) || !(L > 0)) throw DomainError("alpha_m and L must be positive");
    return {g0 * g0 * L / (2.0 * std::sqrt(alpha_m)), Dq / std::sqrt(alpha_m), delta0p};
}

inline cplx simplified_sigma(double g0, double alpha_m, double delta0p, double Dq, double L,
                             cplx z) {
    const cplx w = z + delta0p;
    if (std::abs(w) == 0.0) throw DomainError("z is the branch point -delta0'");
    return simplified_kernel(g0, alpha_m, delta0p, Dq, L).sigma_s(std::sqrt(w));
}

struct PoleAnalysis {
    double z0{};              // rad/s
    std::optional<cplx> z1;   // rad/s, decaying pole
    double gamma_c{};         // rad/s
    cplx res0{1.0, 0.0};
    std::optional<cplx> res1;
};

inline PoleAnalysis find_poles(double g0, double alpha_m, double delta0p, double L, double Dq = 0.0) {
    if (!(delta0p > 0)) throw DomainError("delta0' must be positive");
    const auto K = simplified_kernel(g0, alpha_m, delta0p, Dq, L);
    PoleAnalysis pa;
    if (K.c == 0.0) return pa;

    // Real pole: s^2 - delta0' - sigma(s) = 0 for s > 0.
    auto F = [&](double s) { return s * s - delta0p - K.sigma_s(s).real(); };
    double lo = 1e-9 * std::sqrt(delta0p), hi = std::sqrt(delta0p);
    while (F(hi) < 0) hi *= 2;
    while (F(lo) > 0) lo *= 0.5;
    boost::uintmax_t it = 200;
    auto r = boost::math::tools::toms748_solve(F, lo, hi, boost::math::tools::eps_tolerance<double>(52), it);
    const double s0 = 0.5 * (r.first + r.second);
    pa.z0 = s0 * s0 - delta0p;
    pa.res0 = 1.0 / (1.0 - K.dsigma_dz(s0));

    // Complex pole on the second sheet (Re s < 0, Im z < 0).
    auto G = [&](cplx s) { return s * s - delta0p - K.sigma_s(s); };
    auto dG = [&](cplx s) { return 2.0 * s - K.dsigma_ds(s); };
    cplx s{-0.5 * s0, 0.5 * s0};
    bool ok = false;
    for (int iter = 0; iter < 200; ++iter) {
        const cplx step = G(s) / dG(s);
        double lam = 1.0;
        cplx trial = s - step;
        while (std::abs(G(trial)) > std::abs(G(s)) && lam > 1e-6) {
            lam *= 0.5;
            trial = s - lam * step;
        }
        s = trial;
        if (std::abs(G(s)) <= 1e-13 * delta0p) {
            ok = true;
            break;
        }
    }
    const cplx z1 = s * s - delta0p;
    if (ok && s.real() < 0 && std::abs(s.imag()) > 1e-9 * std::abs(s) && z1.imag() != 0.0) {
        const cplx zz = z1.imag() < 0 ? z1 : std::conj(z1);
        const cplx ss = z1.imag() < 0 ? s : std::conj(s);
        pa.z1 = zz;
        pa.gamma_c = std::abs(zz.imag());
        pa.res1 = 1.0 / (1.0 - K.dsigma_dz(ss));
    }
    return pa;
}

}  // namespace giantpcw
