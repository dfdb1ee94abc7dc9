// in-gap bound state of a giant atom: energy, field, chirality
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>

#include "giantpcw/atom.hpp"
#include "giantpcw/bloch.hpp"
#include "giantpcw/errors.hpp"

namespace giantpcw {

struct BoundEnergy {
    double eps_b{0.0};  // rad/s relative to omega_q
    double cos_theta{1.0};
};

// Delta_k = omega_k - omega_q over the band-1 grid.
inline Eigen::VectorXd band_detuning(const BandStructure& bs, double omega_q) {
    Eigen::VectorXd d(bs.size());
    for (std::size_t j = 0; j < bs.size(); ++j) d(j) = bs.omega[0][j] - omega_q;
    return d;
}

// eps = sum |g_k|^2/(eps - Delta_k) on (-delta0, eps_max).
inline BoundEnergy solve_bound_energy(const Eigen::VectorXcd& gk, const Eigen::VectorXd& Delta,
                                      double eps_max) {
    const Eigen::VectorXd w = gk.cwiseAbs2();
    const double S0 = w.sum();
    if (S0 == 0.0) return {};
    const double top = Delta.maxCoeff();
    auto F = [&](double e) { return (w.array() / (e - Delta.array())).sum() - e; };

    double lo = top + 1e-12 * std::abs(top);
    if (!(F(lo) > 0))
        throw NumericalError("no in-gap root: the edge modes do not couple to the atom");
    double hi = std::min(eps_max, std::max(std::sqrt(S0), 1e-12 * std::abs(top)));
    if (F(hi) > 0) throw NumericalError("no in-gap root: coupling pushes the state out of the gap");

    boost::uintmax_t iters = 200;
    auto r = boost::math::tools::toms748_solve(F, lo, hi, boost::math::tools::eps_tolerance<double>(52),
                                               iters);
    const double eps = 0.5 * (r.first + r.second);
    const double S2 = (w.array() / (eps - Delta.array()).square()).sum();
    return {eps, 1.0 / std::sqrt(1.0 + S2)};
}

inline BoundEnergy solve_bound_energy(const GiantAtom& a, const BandStructure& bs) {
    const double wq = resolve_omega_q(a, bs.band_top());
    return solve_bound_energy(coupling_gk(a, bs), band_detuning(bs, wq), bs.band2_bottom() - wq);
}

struct BoundStateSolution {
    double eps_b{};
    double cos_theta{};
    double delta0{};
    std::vector<double> xgrid;                 // m
    Eigen::VectorXcd phi_total;                // unit norm on xgrid
    std::vector<Eigen::VectorXcd> phi_legs;    // same scale as phi_total
    std::vector<double> leg_x;                 // m
    Warnings warnings;

    Eigen::VectorXd amplitude(std::size_t leg) const { return phi_legs[leg].cwiseAbs(); }
    Eigen::VectorXd phase(std::size_t leg) const { return phi_legs[leg].cwiseArg(); }
    // theta_+ - theta_- wrapped to (-pi, pi]
    Eigen::VectorXd delta_theta() const {
        Eigen::VectorXd d(xgrid.size());
        for (Eigen::Index i = 0; i < d.size(); ++i)
            d(i) = std::arg(phi_legs.back()(i) * std::conj(phi_legs.front()(i)));
        return d;
    }
};

// Grid anchored at x = 0 with spacing lambda_m / samples covering [xmin, xmax].
inline std::vector<double> make_xgrid(double lambda_m, int samples, double xmin, double xmax) {
    if (samples < 1 || !(xmax > xmin)) throw DomainError("bad x grid request");
    const double h = lambda_m / samples;
    const auto i0 = static_cast<long>(std::floor(xmin / h)), i1 = static_cast<long>(std::ceil(xmax / h));
    std::vector<double> x;
    x.reserve(static_cast<std::size_t>(i1 - i0 + 1));
    for (long i = i0; i <= i1; ++i) x.push_back(static_cast<double>(i) * h);
    return x;
}

inline double decay_length(double alpha_m, double delta0) { return std::sqrt(alpha_m / delta0); }

// Grid spanning `span` decay lengths beyond the outer legs.
inline std::vector<double> default_xgrid(const GiantAtom& a, const BandStructure& bs, double L_eff,
                                         int samples = 16, double span = 6.0) {
    const double lm = bs.profile.base.lambda_m();
    return make_xgrid(lm, samples, a.x_minus() - span * L_eff, a.x_plus() + span * L_eff);
}

namespace detail {

// f(x) = sum_k conj(psi_k(x)) w_k, grouping x by its position inside the period.
inline Eigen::VectorXcd field_from_weights(const BandStructure& bs, const Eigen::VectorXcd& w,
                                           const std::vector<double>& x) {
    const double lm = bs.profile.base.lambda_m();
    const auto K = static_cast<Eigen::Index>(bs.size());
    const int nh = 2 * bs.Nh + 1;
    std::map<long long, std::vector<std::pair<long, std::size_t>>> classes;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = x[i] / lm;
        const long m = static_cast<long>(std::floor(r + 1e-9));
        classes[std::llround((r - m) * 1e9)].push_back({m, i});
    }
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(x.size()));
    for (auto& [key, members] : classes) {
        std::sort(members.begin(), members.end());
        const double f = static_cast<double>(key) * 1e-9 * lm;
        Eigen::VectorXcd e(nh);
        for (int n = 0; n < nh; ++n) e(n) = std::polar(1.0, (n - bs.Nh) * bs.km() * f);
        const Eigen::VectorXcd u = bs.coeffs[0].transpose() * e;
        const long m0 = members.front().first, m1 = members.back().first;
        std::vector<cplx> acc(static_cast<std::size_t>(m1 - m0 + 1), cplx{0.0, 0.0});
        for (Eigen::Index j = 0; j < K; ++j) {
            const double k = bs.k[j];
            const cplx base = std::conj(u(j)) * w(j) * std::polar(1.0, -k * (f + m0 * lm));
            const cplx step = std::polar(1.0, -k * lm);
            cplx ph = base;
            for (auto& a : acc) a += ph, ph *= step;
        }
        for (const auto& [m, i] : members) out(static_cast<Eigen::Index>(i)) = acc[m - m0];
    }
    return out;
}

inline double trapz(const std::vector<double>& x, const Eigen::VectorXd& y, double a, double b) {
    if (b <= a) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double x0 = std::max(x[i], a), x1 = std::min(x[i + 1], b);
        if (x1 <= x0) continue;
        const double h = x[i + 1] - x[i];
        auto at = [&](double t) { return y(i) + (y(i + 1) - y(i)) * (t - x[i]) / h; };
        s += 0.5 * (at(x0) + at(x1)) * (x1 - x0);
    }
    return s;
}

inline double norm2(const std::vector<double>& x, const Eigen::VectorXcd& f) {
    return trapz(x, f.cwiseAbs2(), x.front(), x.back());
}

}  // namespace detail

inline BoundStateSolution bound_state(const GiantAtom& a, const BandStructure& bs,
                                      const std::vector<double>& xgrid,
                                      std::optional<BoundEnergy> energy = std::nullopt,
                                      std::optional<double> L_eff = std::nullopt) {
    if (xgrid.size() < 2) throw DomainError("x grid needs at least two points");
    const double wq = resolve_omega_q(a, bs.band_top());
    const Eigen::VectorXd Delta = band_detuning(bs, wq);
    BoundStateSolution sol;
    const auto be = energy ? *energy
                           : solve_bound_energy(coupling_gk(a, bs), Delta, bs.band2_bottom() - wq);
    sol.eps_b = be.eps_b;
    sol.cos_theta = be.cos_theta;
    sol.delta0 = wq - bs.band_top();
    sol.xgrid = xgrid;

    sol.phi_total = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(xgrid.size()));
    for (const auto& leg : a.legs) {
        GiantAtom single;
        single.legs = {leg};
        const Eigen::VectorXcd gi = coupling_gk(single, bs);
        const Eigen::VectorXcd w = (gi.array() / (sol.eps_b - Delta.array())).matrix();
        sol.phi_legs.push_back(detail::field_from_weights(bs, w, xgrid));
        sol.phi_total += sol.phi_legs.back();
        sol.leg_x.push_back(leg.x);
    }
    const double n2 = detail::norm2(xgrid, sol.phi_total);
    if (n2 > 0) {
        const double s = 1.0 / std::sqrt(n2);
        sol.phi_total *= s;
        for (auto& f : sol.phi_legs) f *= s;
    }
    if (L_eff) {
        if (a.x_minus() - xgrid.front() < 6 * *L_eff || xgrid.back() - a.x_plus() < 6 * *L_eff)
            sol.warnings.push_back("x grid covers less than 6 decay lengths beyond the legs");
    }
    return sol;
}

struct AnalyticBoundState {
    double Cminus{}, Cplus{};  // rad/s
    double L_eff{};            // m
    double Am{1.0};

    double envelope(double x) const {
        return Am * std::abs(x < 0 ? Cminus : Cplus) * std::exp(-std::abs(x) / L_eff);
    }
    double chirality() const {
        const double m = Cminus * Cminus, p = Cplus * Cplus;
        return m + p > 0 ? (m - p) / (m + p) : 0.0;
    }
};

inline AnalyticBoundState analytic_bound_state(const CouplingLinearization& lin,
                                               const EffectiveMass& em, double delta0) {
    if (!(delta0 > 0)) throw DomainError("delta0 must be positive");
    const double kappa = std::sqrt(delta0 / em.alpha_m);
    return {lin.A - lin.B * kappa, lin.A + lin.B * kappa, 1.0 / kappa, 1.0};
}

struct ChiralityReport {
    double PhiL{}, PhiR{};
    double Cb{};
    std::optional<double> Cb_analytic;
};

inline ChiralityReport chirality(const BoundStateSolution& sol, double x_minus, double x_plus,
                                 std::optional<double> Cb_analytic = std::nullopt) {
    const Eigen::VectorXd p = sol.phi_total.cwiseAbs2();
    ChiralityReport r;
    r.PhiL = detail::trapz(sol.xgrid, p, sol.xgrid.front(), x_minus);
    r.PhiR = detail::trapz(sol.xgrid, p, x_plus, sol.xgrid.back());
    if (!(r.PhiL + r.PhiR > 0)) throw NumericalError("chirality undefined: the field vanishes");
    r.Cb = (r.PhiL - r.PhiR) / (r.PhiL + r.PhiR);
    r.Cb_analytic = Cb_analytic;
    return r;
}

inline ChiralityReport chirality(const BoundStateSolution& sol,
                                 std::optional<double> Cb_analytic = std::nullopt) {
    const auto [lo, hi] = std::minmax_element(sol.leg_x.begin(), sol.leg_x.end());
    return chirality(sol, *lo, *hi, Cb_analytic);
}

inline double visibility(const BoundStateSolution& sol) {
    if (sol.phi_legs.size() != 2) throw DomainError("visibility needs a two-leg atom");
    const double t = detail::norm2(sol.xgrid, sol.phi_total);
    const double s = detail::norm2(sol.xgrid, sol.phi_legs[0]) + detail::norm2(sol.xgrid, sol.phi_legs[1]);
    if (!(s > 0)) throw NumericalError("visibility undefined: both legs are decoupled");
    return t / s;
}

struct DecayFit {
    double left{};   // m
    double right{};  // m
};

// Log-linear fit of the per-period maxima of |phi| beyond `start` from the outer legs.
inline DecayFit fit_decay_length(const BoundStateSolution& sol, double lambda_m, double start) {
    const auto [lo, hi] = std::minmax_element(sol.leg_x.begin(), sol.leg_x.end());
    auto side = [&](bool right) {
        std::map<long, std::pair<double, double>> peaks;
        for (std::size_t i = 0; i < sol.xgrid.size(); ++i) {
            const double d = right ? sol.xgrid[i] - *hi : *lo - sol.xgrid[i];
            if (d < start) continue;
            const long cell = static_cast<long>(std::floor(d / lambda_m));
            const double a = std::abs(sol.phi_total(static_cast<Eigen::Index>(i)));
            auto it = peaks.find(cell);
            if (it == peaks.end() || a > it->second.second) peaks[cell] = {d, a};
        }
        if (peaks.size() > 2) peaks.erase(std::prev(peaks.end()));
        if (peaks.size() < 3) throw DomainError("too few periods beyond the fit start");
        double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
        for (const auto& [c, pa] : peaks) {
            const double y = std::log(pa.second);
            sx += pa.first, sy += y, sxx += pa.first * pa.first, sxy += pa.first * y, n += 1;
        }
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        return -1.0 / slope;
    };
    return {side(false), side(true)};
}

}  // namespace giantpcw
