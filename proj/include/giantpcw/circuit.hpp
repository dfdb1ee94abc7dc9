// lumped SQUID chain: dispersion and finite-chain eigenmodes
#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "giantpcw/errors.hpp"

namespace giantpcw {

struct CircuitParams {
    double d0{1e-6};                              // m, unit-cell spacing
    double Cg{0.4e-15};                           // F, ground capacitance per node
    double CJ{90e-15};                            // F, junction capacitance
    double L0{0.2e-9};                            // H, bare junction inductance
    double alpha0{0.3};                           // static flux factor
    double delta_alpha{0.045};                    // modulation depth
    double km{2.0 * std::numbers::pi * 0.3e4};    // rad/m, modulation wavevector

    double lambda_m() const { return 2.0 * std::numbers::pi / km; }
    double LJ() const { return L0 / alpha0; }
    double vJ() const { return d0 / std::sqrt(LJ() * Cg); }  // m/s
};

inline void validate(const CircuitParams& p) {
    if (!(p.d0 > 0 && p.Cg > 0 && p.L0 > 0 && p.km > 0))
        throw DomainError("d0, Cg, L0, km must be positive");
    if (!(p.CJ >= 0)) throw DomainError("CJ must be non-negative");
    if (!(p.alpha0 > 0 && p.alpha0 <= 1)) throw DomainError("alpha0 must lie in (0, 1]");
    if (!(p.delta_alpha >= 0 && p.delta_alpha < p.alpha0))
        throw DomainError("delta_alpha must lie in [0, alpha0)");
}

// lambda_m / d0 integral; the plane-wave model does not need it.
inline bool commensurate(const CircuitParams& p, double tol = 1e-9) {
    const double r = p.lambda_m() / p.d0;
    return std::abs(r - std::round(r)) <= tol * r;
}

inline Warnings check(const CircuitParams& p) {
    validate(p);
    Warnings w;
    if (!commensurate(p))
        w.push_back("lambda_m/d0 = " + std::to_string(p.lambda_m() / p.d0) +
                    " is not an integer; real-space chains cannot hold whole periods");
    return w;
}

inline double squid_dispersion(const CircuitParams& p, double k) {
    const double kmax = std::numbers::pi / p.d0;
    if (std::abs(k) > kmax * (1 + 1e-12)) throw DomainError("k outside the first zone");
    const double h = std::sin(0.5 * k * p.d0);
    const double c = 2.0 * h * h;  // 1 - cos(k d0)
    return std::sqrt(c / (p.CJ / p.Cg * c + 0.5)) / std::sqrt(p.LJ() * p.Cg);
}

inline double linear_dispersion(const CircuitParams& p, double k) {
    return std::abs(k) * p.vJ();
}

struct ChainModes {
    Eigen::VectorXd omega;    // rad/s, ascending
    Eigen::MatrixXd vectors;  // columns, in the Cholesky-scaled basis R^T phi
};

// Open chain of N nodes and N-1 junctions; inverse_inductance[j] couples nodes j, j+1.
inline ChainModes chain_eigenmodes(const CircuitParams& p, int N,
                                   const std::vector<double>& inverse_inductance) {
    if (N < 2) throw DomainError("chain needs at least two nodes");
    if (static_cast<int>(inverse_inductance.size()) != N - 1)
        throw DomainError("inverse_inductance needs one entry per junction (N-1)");
    for (double v : inverse_inductance)
        if (!(v > 0)) throw DomainError("inverse inductances must be positive");

    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(N, N);
    Eigen::MatrixXd Linv = Eigen::MatrixXd::Zero(N, N);
    for (int j = 0; j < N; ++j) C(j, j) = p.Cg;
    for (int j = 0; j + 1 < N; ++j) {
        C(j, j) += p.CJ;
        C(j + 1, j + 1) += p.CJ;
        C(j, j + 1) = C(j + 1, j) = -p.CJ;
        const double y = inverse_inductance[j];
        Linv(j, j) += y;
        Linv(j + 1, j + 1) += y;
        Linv(j, j + 1) -= y;
        Linv(j + 1, j) -= y;
    }

    // C = R R^T; modes of R^-1 Linv R^-T
    const Eigen::LLT<Eigen::MatrixXd> llt(C);
    if (llt.info() != Eigen::Success) throw NumericalError("capacitance matrix is not positive definite");
    const auto R = llt.matrixL();
    Eigen::MatrixXd M = R.solve(Linv);
    M = R.solve(M.transpose()).eval();
    M = 0.5 * (M + M.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    if (es.info() != Eigen::Success) throw NumericalError("chain eigensolver failed");
    ChainModes out;
    out.omega = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    out.vectors = es.eigenvectors();
    return out;
}

inline ChainModes chain_eigenmodes(const CircuitParams& p, int N) {
    return chain_eigenmodes(p, N, std::vector<double>(N - 1, p.alpha0 / p.L0));
}

}  // namespace giantpcw
