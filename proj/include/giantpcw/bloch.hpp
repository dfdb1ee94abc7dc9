// plane-wave band structure of the flux-modulated chain
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "giantpcw/circuit.hpp"
#include "giantpcw/errors.hpp"

namespace giantpcw {

using cplx = std::complex<double>;

enum class Waveform { cosine, square };

struct ModulationProfile {
    Waveform kind{Waveform::cosine};
    double shift{0.0};  // m, signal displacement ds
    CircuitParams base{};
};

inline double waveform(Waveform kind, double phase) {
    const double c = std::cos(phase);
    if (kind == Waveform::cosine) return c;
    return c >= 0.0 ? 1.0 : -1.0;
}

// 1/l(x) in m/H.
inline double inverse_inductance(const ModulationProfile& m, double x) {
    const auto& p = m.base;
    return p.d0 / p.L0 * (p.alpha0 + p.delta_alpha * waveform(m.kind, p.km * (x - m.shift)));
}

// Fourier coefficient F_n of f(x - ds) = sum_n F_n exp(i n km x).
inline cplx waveform_harmonic(const ModulationProfile& m, int n) {
    double f = 0.0;
    if (m.kind == Waveform::cosine) {
        f = std::abs(n) == 1 ? 0.5 : 0.0;
    } else if (n % 2 != 0) {
        f = 2.0 / (std::numbers::pi * n) * std::sin(std::numbers::pi * n / 2.0);
    }
    if (f == 0.0) return {0.0, 0.0};
    return f * std::polar(1.0, -n * m.base.km * m.shift);
}

struct BlochPoint {
    std::array<double, 2> omega{};  // rad/s, two lowest bands
    Eigen::MatrixXcd coeffs;        // (2Nh+1) x 2, unit columns
};

inline BlochPoint solve_bloch_point(const ModulationProfile& m, double k, int Nh) {
    const auto& p = m.base;
    const int n = 2 * Nh + 1;
    const double cg = p.Cg / p.d0, cJ = p.CJ / p.d0, s0 = p.d0 / p.L0;
    std::vector<cplx> P(2 * n - 1);
    for (int d = -(n - 1); d <= n - 1; ++d)
        P[d + n - 1] = s0 * ((d == 0 ? p.alpha0 : 0.0) + p.delta_alpha * waveform_harmonic(m, d));

    Eigen::VectorXd q(n), dinv(n);
    for (int i = 0; i < n; ++i) {
        q(i) = k + (i - Nh) * p.km;
        dinv(i) = 1.0 / std::sqrt(cJ * p.d0 * p.d0 * q(i) * q(i) + cg);
    }
    Eigen::MatrixXcd H(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) H(i, j) = P[i - j + n - 1] * q(i) * q(j) * dinv(i) * dinv(j);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    if (es.info() != Eigen::Success) throw NumericalError("band eigensolver failed");
    BlochPoint out;
    out.coeffs.resize(n, 2);
    for (int b = 0; b < 2; ++b) {
        out.omega[b] = std::sqrt(std::max(es.eigenvalues()(b), 0.0));
        Eigen::VectorXcd c = dinv.asDiagonal() * es.eigenvectors().col(b);
        out.coeffs.col(b) = c / c.norm();
    }
    return out;
}

struct GaugeRecord {
    double seed_k{0.0};  // rad/m
    double x_ref{0.0};   // m, u_seed(x_ref) made real positive
};

struct BandStructure {
    ModulationProfile profile;
    int Nh{10};
    std::vector<double> k;                   // rad/m, ascending in (-km/2, km/2]
    std::array<std::vector<double>, 2> omega;
    std::array<Eigen::MatrixXcd, 2> coeffs;  // (2Nh+1) x Nk per band
    GaugeRecord gauge;
    Warnings warnings;

    std::size_t size() const { return k.size(); }
    double km() const { return profile.base.km; }
    double k0() const { return 0.5 * km(); }
    double band_top() const { return *std::max_element(omega[0].begin(), omega[0].end()); }
    double band2_bottom() const { return *std::min_element(omega[1].begin(), omega[1].end()); }
    double gap() const { return band2_bottom() - band_top(); }

    // k - k0 folded into (-km/2, km/2].
    double dk_from_edge(std::size_t j) const {
        double d = k[j] - k0();
        if (d <= -0.5 * km()) d += km();
        return d;
    }

    std::size_t index_of(double kq, double tol = 1e-9) const {
        auto it = std::lower_bound(k.begin(), k.end(), kq - tol * km());
        if (it == k.end() || std::abs(*it - kq) > tol * km())
            throw DomainError("k is not on the band-structure grid");
        return static_cast<std::size_t>(it - k.begin());
    }

    std::size_t nearest_index(double kq) const {
        std::size_t best = 0;
        double bd = 1e300;
        for (std::size_t j = 0; j < k.size(); ++j) {
            double d = std::remainder(k[j] - kq, km());
            if (std::abs(d) < bd) bd = std::abs(d), best = j;
        }
        return best;
    }

    cplx u(int band, std::size_t j, double x) const {
        const auto c = coeffs[band].col(j);
        cplx s{0.0, 0.0};
        for (int i = 0; i < c.size(); ++i) s += c(i) * std::polar(1.0, (i - Nh) * km() * x);
        return s;
    }

    cplx psi(int band, std::size_t j, double x) const {
        return std::polar(1.0, k[j] * x) * u(band, j, x);
    }
};

// Uniform grid k_j = -km/2 + (j+1) km/N with N = round(km/dk).
inline std::vector<double> make_kgrid(double km, double dk) {
    if (!(dk > 0 && dk <= km)) throw DomainError("dk must lie in (0, km]");
    const auto N = static_cast<std::size_t>(std::llround(km / dk));
    std::vector<double> k(N);
    for (std::size_t j = 0; j < N; ++j) k[j] = -0.5 * km + (j + 1.0) * km / N;
    return k;
}

namespace detail {

// Coefficients of the same Bloch state relabelled at k + shift*km.
inline Eigen::VectorXcd relabel(const Eigen::VectorXcd& c, int shift) {
    const auto n = c.size();
    Eigen::VectorXcd r = Eigen::VectorXcd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index src = i + shift;
        if (src >= 0 && src < n) r(i) = c(src);
    }
    return r;
}

inline void align_phase(Eigen::Ref<Eigen::VectorXcd> c, const Eigen::VectorXcd& ref) {
    const cplx ov = ref.dot(c);
    if (std::abs(ov) > 0) c *= std::conj(ov) / std::abs(ov);
}

}  // namespace detail

// Parallel transport around the zone ring from the grid point nearest seed_k.
inline void apply_gauge(BandStructure& bs, double seed_k, double x_ref) {
    const std::size_t N = bs.size();
    const std::size_t js = bs.nearest_index(seed_k);
    bs.gauge = {bs.k[js], x_ref};
    for (int b = 0; b < 2; ++b) {
        auto& C = bs.coeffs[b];
        const cplx us = bs.u(b, js, x_ref);
        if (std::abs(us) > 1e-12) {
            C.col(js) *= std::conj(us) / std::abs(us);
        } else {
            Eigen::Index imax;
            C.col(js).cwiseAbs().maxCoeff(&imax);
            C.col(js) *= std::conj(C(imax, js)) / std::abs(C(imax, js));
        }
        for (std::size_t s = 1; s <= N / 2; ++s) {
            const std::size_t j = (js + s) % N, prev = (js + s - 1) % N;
            const Eigen::VectorXcd ref =
                j == 0 ? detail::relabel(C.col(prev), -1) : Eigen::VectorXcd(C.col(prev));
            detail::align_phase(C.col(j), ref);
        }
        for (std::size_t s = 1; s + N / 2 < N; ++s) {
            const std::size_t j = (js + N - s) % N, next = (j + 1) % N;
            const Eigen::VectorXcd ref =
                j == N - 1 ? detail::relabel(C.col(next), 1) : Eigen::VectorXcd(C.col(next));
            detail::align_phase(C.col(j), ref);
        }
    }
}

inline double edge_gap(const ModulationProfile& m, int Nh) {
    const auto bp = solve_bloch_point(m, 0.5 * m.base.km, Nh);
    return bp.omega[1] - bp.omega[0];
}

inline BandStructure band_structure(const ModulationProfile& m, const std::vector<double>& kgrid,
                                    int Nh = 10, double x_ref = 0.0) {
    validate(m.base);
    if (Nh < 1) throw DomainError("Nh must be at least 1");
    if (kgrid.empty()) throw DomainError("empty k grid");
    const double km = m.base.km;
    for (std::size_t j = 0; j < kgrid.size(); ++j) {
        if (kgrid[j] <= -0.5 * km * (1 + 1e-12) || kgrid[j] > 0.5 * km * (1 + 1e-12))
            throw DomainError("k grid must lie in (-km/2, km/2]");
        if (j > 0 && kgrid[j] <= kgrid[j - 1]) throw DomainError("k grid must be ascending");
    }
    BandStructure bs;
    bs.profile = m;
    bs.Nh = Nh;
    bs.k = kgrid;
    const auto N = static_cast<Eigen::Index>(kgrid.size());
    for (int b = 0; b < 2; ++b) {
        bs.omega[b].resize(N);
        bs.coeffs[b].resize(2 * Nh + 1, N);
    }
#pragma omp parallel for schedule(static)
    for (Eigen::Index j = 0; j < N; ++j) {
        const auto bp = solve_bloch_point(m, kgrid[j], Nh);
        for (int b = 0; b < 2; ++b) {
            bs.omega[b][j] = bp.omega[b];
            bs.coeffs[b].col(j) = bp.coeffs.col(b);
        }
    }
    apply_gauge(bs, bs.k0(), x_ref);

    if (m.base.delta_alpha > 0) {
        const double g0 = edge_gap(m, Nh), g2 = edge_gap(m, Nh + 2);
        if (std::abs(g2 - g0) > 1e-3 * std::abs(g2))
            bs.warnings.push_back("gap changes by " + std::to_string(std::abs(g2 / g0 - 1)) +
                                  " relative when Nh -> Nh+2; increase harmonics");
    }
    return bs;
}

inline BandStructure band_structure(const ModulationProfile& m, double dk, int Nh = 10,
                                    double x_ref = 0.0) {
    return band_structure(m, make_kgrid(m.base.km, dk), Nh, x_ref);
}

inline cplx bloch_u(const BandStructure& bs, int band, double k, double x) {
    if (band != 1 && band != 2) throw DomainError("band must be 1 or 2");
    return bs.u(band - 1, bs.index_of(k), x);
}

struct ParabolaFit {
    double c0{}, c1{}, c2{};  // w ~ c0 + c1 t + c2 t^2
    double residual{};        // rms / sample range
};

inline ParabolaFit fit_parabola(const std::vector<double>& t, const std::vector<double>& w) {
    if (t.size() < 3 || t.size() != w.size()) throw DomainError("need at least 3 samples");
    double scale = 0.0;
    for (double v : t) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) throw DomainError("degenerate abscissae");
    const auto n = static_cast<Eigen::Index>(t.size());
    Eigen::MatrixXd A(n, 3);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double s = t[i] / scale;
        A.row(i) << 1.0, s, s * s;
        y(i) = w[i];
    }
    const double shift = y.mean();
    const Eigen::VectorXd yc = (y.array() - shift).matrix();
    const Eigen::VectorXd sol = A.colPivHouseholderQr().solve(yc);
    ParabolaFit f{sol(0) + shift, sol(1) / scale, sol(2) / (scale * scale), 0.0};
    const double range = y.maxCoeff() - y.minCoeff();
    const double rms = std::sqrt((A * sol - yc).squaredNorm() / n);
    f.residual = range > 0 ? rms / range : rms;
    return f;
}

struct EffectiveMass {
    double k0{};          // rad/m
    double omega_edge{};  // rad/s
    double alpha_m{};     // rad m^2/s
    double fit_window{};  // rad/m
    double residual{};    // rms / range
    Warnings warnings;
};

inline EffectiveMass effective_mass_fit(const BandStructure& bs, int band, double window) {
    if (band != 1) throw DomainError("effective-mass fit is defined for band 1");
    std::vector<double> t, w;
    for (std::size_t j = 0; j < bs.size(); ++j) {
        const double d = bs.dk_from_edge(j);
        if (std::abs(d) <= window) t.push_back(d), w.push_back(bs.omega[0][j]);
    }
    if (t.size() < 5) throw DomainError("fit window holds fewer than 5 grid points");
    const auto f = fit_parabola(t, w);
    EffectiveMass em;
    em.alpha_m = -f.c2;
    em.k0 = bs.k0() - f.c1 / (2 * f.c2);
    em.omega_edge = f.c0 - f.c1 * f.c1 / (4 * f.c2);
    em.fit_window = window;
    em.residual = f.residual;
    if (em.alpha_m <= 0) throw NumericalError("band 1 does not curve downward at the edge");
    if (em.residual > 1e-3)
        em.warnings.push_back("effective-mass fit residual " + std::to_string(em.residual) +
                              " exceeds 1e-3; shrink the window");
    return em;
}

}  // namespace giantpcw
