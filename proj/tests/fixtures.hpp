// shared systems and helpers for the test binaries
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <tuple>
#include <utility>

#include "giantpcw/atom.hpp"
#include "giantpcw/bloch.hpp"
#include "giantpcw/boundstate.hpp"
#include "giantpcw/circuit.hpp"
#include "giantpcw/interactions.hpp"

namespace fixtures {

using namespace giantpcw;

inline constexpr double tau = 2 * std::numbers::pi;
inline constexpr double MHz = tau * 1e6;  // rad/s per cyclic MHz
inline constexpr double fit_window = 0.003;
inline constexpr double lin_window = 0.003;

// Cached band structures keyed by (waveform, shift, dk/km, Nh).
inline const BandStructure& bands(double dk_over_km = 1e-4, Waveform kind = Waveform::cosine,
                                  double shift_over_lm = 0.0, int Nh = 10) {
    static std::map<std::tuple<int, double, double, int>, BandStructure> cache;
    const auto key = std::make_tuple(static_cast<int>(kind), shift_over_lm, dk_over_km, Nh);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    ModulationProfile m;
    m.kind = kind;
    m.shift = shift_over_lm * m.base.lambda_m();
    return cache.emplace(key, band_structure(m, dk_over_km * m.base.km, Nh)).first->second;
}

struct Scales {
    double lm, km, gap, delta0, alpha, L_eff;
};

inline Scales scales(const BandStructure& bs, double delta0_over_gap = 0.1) {
    const auto em = effective_mass_fit(bs, 1, fit_window * bs.km());
    const double d0 = delta0_over_gap * bs.gap();
    return {bs.profile.base.lambda_m(), bs.km(), bs.gap(), d0, em.alpha_m, decay_length(em.alpha_m, d0)};
}

inline constexpr double g_weak = 0.02 * MHz;

struct AtomResult {
    BoundStateSolution sol;
    ChiralityReport chi;
};

inline AtomResult solve(const GiantAtom& a, const BandStructure& bs, double L_eff, int samples = 16) {
    AtomResult r{bound_state(a, bs, default_xgrid(a, bs, L_eff, samples), std::nullopt, L_eff), {}};
    r.chi = chirality(r.sol);
    return r;
}

// Fixed-seed generator for the property suites.
struct Gen {
    std::mt19937_64 rng;
    explicit Gen(std::uint64_t seed) : rng(seed) {}
    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
    int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); }
    bool coin() { return integer(0, 1) == 1; }
};

}  // namespace fixtures
