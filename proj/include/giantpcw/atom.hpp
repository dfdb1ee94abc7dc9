// giant atoms and their k-dependent coupling to band 1
#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "giantpcw/bloch.hpp"
#include "giantpcw/errors.hpp"

namespace giantpcw {

struct Leg {
    double x{0.0};  // m
    double g{0.0};  // rad/s
};

struct GiantAtom {
    std::vector<Leg> legs;
    std::optional<double> omega_q;  // rad/s
    std::optional<double> delta0;   // rad/s above the band-1 top

    double x_minus() const {
        double v = legs.front().x;
        for (const auto& l : legs) v = std::min(v, l.x);
        return v;
    }
    double x_plus() const {
        double v = legs.front().x;
        for (const auto& l : legs) v = std::max(v, l.x);
        return v;
    }
};

inline GiantAtom make_atom(std::vector<Leg> legs, double delta0) {
    GiantAtom a;
    a.legs = std::move(legs);
    a.delta0 = delta0;
    return a;
}

inline Warnings validate(const GiantAtom& a, double lambda_m) {
    if (a.legs.empty() || a.legs.size() > 2) throw DomainError("an atom has one or two legs");
    if (a.omega_q.has_value() == a.delta0.has_value())
        throw DomainError("give exactly one of omega_q and delta0");
    Warnings w;
    if (a.legs.size() == 2 && std::abs(a.legs[1].x - a.legs[0].x) >= lambda_m)
        w.push_back("legs are a full modulation period or more apart");
    return w;
}

// Detuning of omega_q above the band top; must be positive.
inline double resolve_delta0(const GiantAtom& a, double band_top) {
    const double d = a.delta0 ? *a.delta0 : *a.omega_q - band_top;
    if (!(d > 0)) throw DomainError("atom frequency must lie above the band-1 top");
    return d;
}

inline double resolve_omega_q(const GiantAtom& a, double band_top) {
    return band_top + resolve_delta0(a, band_top);
}

inline constexpr double e_charge = 1.602176634e-19;  // C
inline constexpr double hbar = 1.054571817e-34;      // J s

inline double coupling_amplitude(double CJg, double Csigma, double Ct, double omega_q) {
    if (CJg < 0 || !(Csigma > 0) || !(Ct > 0) || !(omega_q > 0))
        throw DomainError("capacitances and frequency must be positive");
    if (Csigma < CJg) throw DomainError("Csigma must be at least CJg");
    return e_charge / hbar * (CJg / Csigma) * std::sqrt(hbar * omega_q / Ct);
}

// Chain impedance against the coupling-capacitor impedance.
inline std::optional<std::string> impedance_warning(const CircuitParams& p, double CJg,
                                                    double omega_q) {
    const double ZJ = std::sqrt(p.LJ() / p.Cg);
    const double Zc = 1.0 / (omega_q * CJg);
    if (ZJ < Zc) return std::nullopt;
    return "chain impedance " + std::to_string(ZJ) + " Ohm is not small against 1/(wq CJg) = " +
           std::to_string(Zc) + " Ohm";
}

// g_k = sum_i g_i exp(i k x_i) u_k(x_i) on every grid point of band 1.
inline Eigen::VectorXcd coupling_gk(const GiantAtom& a, const BandStructure& bs) {
    const auto N = static_cast<Eigen::Index>(bs.size());
    const int nh = 2 * bs.Nh + 1;
    Eigen::VectorXcd g = Eigen::VectorXcd::Zero(N);
    for (const auto& leg : a.legs) {
        Eigen::VectorXcd e(nh);
        for (int i = 0; i < nh; ++i) e(i) = std::polar(1.0, (i - bs.Nh) * bs.km() * leg.x);
        const Eigen::VectorXcd u = bs.coeffs[0].transpose() * e;
        for (Eigen::Index j = 0; j < N; ++j) g(j) += leg.g * std::polar(1.0, bs.k[j] * leg.x) * u(j);
    }
    return g;
}

inline cplx coupling_gk(const GiantAtom& a, const BandStructure& bs, double k) {
    const auto j = bs.index_of(k);
    cplx s{0.0, 0.0};
    for (const auto& leg : a.legs) s += leg.g * bs.psi(0, j, leg.x);
    return s;
}

struct CouplingLinearization {
    double A{};       // rad/s
    double B{};       // rad m/s
    double window{};  // rad/m
    double error{};   // max |g - (A + iB dk)| / |g(k0)|
    Warnings warnings;
};

struct GkSample {
    double k;
    cplx g;
};

inline CouplingLinearization linearize_gk(const std::vector<GkSample>& samples, double k0,
                                          double window, double km) {
    std::vector<double> d;
    std::vector<cplx> g;
    for (const auto& s : samples) {
        double dk = std::remainder(s.k - k0, km);
        if (std::abs(dk) <= window) d.push_back(dk), g.push_back(s.g);
    }
    if (d.size() < 5) throw DomainError("linearization needs at least 5 samples in the window");
    const auto n = static_cast<double>(d.size());
    double mre = 0, md = 0, mim = 0;
    for (std::size_t i = 0; i < d.size(); ++i) mre += g[i].real(), md += d[i], mim += g[i].imag();
    mre /= n, md /= n, mim /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        sxy += (d[i] - md) * (g[i].imag() - mim);
        sxx += (d[i] - md) * (d[i] - md);
    }
    CouplingLinearization lin;
    lin.A = mre;
    lin.B = sxx > 0 ? sxy / sxx : 0.0;
    lin.window = window;
    std::size_t i0 = 0;
    for (std::size_t i = 1; i < d.size(); ++i)
        if (std::abs(d[i]) < std::abs(d[i0])) i0 = i;
    double err = 0;
    for (std::size_t i = 0; i < d.size(); ++i)
        err = std::max(err, std::abs(g[i] - cplx(lin.A, lin.B * d[i])));
    const double ref = std::abs(g[i0]);
    lin.error = ref > 0 ? err / ref : (err > 0 ? INFINITY : 0.0);
    if (lin.error > 0.05) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3g", lin.error);
        lin.warnings.push_back(std::string("linearization error ") + buf +
                               " exceeds 5%; analytic amplitudes are unreliable");
    }
    return lin;
}

inline CouplingLinearization linearize_gk(const GiantAtom& a, const BandStructure& bs,
                                          double window) {
    const Eigen::VectorXcd g = coupling_gk(a, bs);
    std::vector<GkSample> s;
    for (std::size_t j = 0; j < bs.size(); ++j)
        if (std::abs(bs.dk_from_edge(j)) <= window) s.push_back({bs.k[j], g(j)});
    return linearize_gk(s, bs.k0(), window, bs.km());
}

}  // namespace giantpcw
