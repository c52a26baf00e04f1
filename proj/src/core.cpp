#include "ouq/core.hpp"

#include <cmath>

namespace ouq {

void ModelParams::validate() const {
    if (!(Gamma > 0.0) || !std::isfinite(Gamma))
        throw ValidationError("Gamma", "must be positive");
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw ValidationError("gamma", "must be positive");
    if (!(J >= 0.0) || !std::isfinite(J))
        throw ValidationError("J", "must be nonnegative");
}

Complex ModelParams::epsilon() const {
    return std::sqrt(Complex(Gamma * Gamma - 64.0 * J * J, 0.0));
}

void DensityMatrix::validate(double herm_tol, double trace_tol, double psd_tol) const {
    const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (herm > herm_tol)
        throw ValidationError("elements", "not Hermitian, max |rho - rho^dag| = " + std::to_string(herm));
    const Complex tr = m.trace();
    if (std::abs(tr - 1.0) > trace_tol)
        throw ValidationError("elements", "trace differs from 1 by " + std::to_string(std::abs(tr - 1.0)));
    const double lam_min = min_eigenvalue();
    if (lam_min < -psd_tol)
        throw ValidationError("elements", "smallest eigenvalue " + std::to_string(lam_min));
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix4c> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

DensityMatrix DensityMatrix::maximally_mixed() {
    DensityMatrix rho;
    rho.m = 0.25 * Matrix4c::Identity();
    return rho;
}

void XState::validate() const {
    const double pops[4] = {rho11, rho22, rho33, rho44};
    const char* names[4] = {"rho11", "rho22", "rho33", "rho44"};
    double sum = 0.0;
    for (int i = 0; i < 4; ++i) {
        if (pops[i] < -1e-12 || !std::isfinite(pops[i]))
            throw ValidationError(names[i], "population must be >= 0, got " + std::to_string(pops[i]));
        sum += pops[i];
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw ValidationError("populations", "sum differs from 1 by " + std::to_string(std::abs(sum - 1.0)));
    // positivity of the two 2x2 blocks
    if (std::abs(rho14) > std::sqrt(std::max(0.0, rho11 * rho44)) + 1e-10)
        throw ValidationError("rho14", "|rho14| exceeds sqrt(rho11*rho44)");
    if (std::abs(rho23) > std::sqrt(std::max(0.0, rho22 * rho33)) + 1e-10)
        throw ValidationError("rho23", "|rho23| exceeds sqrt(rho22*rho33)");
}

DensityMatrix embed(const XState& x) {
    DensityMatrix rho;
    rho.m.setZero();
    rho.m(0, 0) = x.rho11;
    rho.m(1, 1) = x.rho22;
    rho.m(2, 2) = x.rho33;
    rho.m(3, 3) = x.rho44;
    rho.m(0, 3) = x.rho14;
    rho.m(3, 0) = std::conj(x.rho14);
    rho.m(1, 2) = x.rho23;
    rho.m(2, 1) = std::conj(x.rho23);
    return rho;
}

XState project_x(const DensityMatrix& rho, double tol) {
    static constexpr bool x_pattern[4][4] = {
        {true, false, false, true},
        {false, true, true, false},
        {false, true, true, false},
        {true, false, false, true},
    };
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (!x_pattern[i][j] && std::abs(rho.m(i, j)) >= tol)
                throw NonXStateError(i, j, std::abs(rho.m(i, j)));
    XState x;
    x.rho11 = rho.m(0, 0).real();
    x.rho22 = rho.m(1, 1).real();
    x.rho33 = rho.m(2, 2).real();
    x.rho44 = rho.m(3, 3).real();
    x.rho14 = rho.m(0, 3);
    x.rho23 = rho.m(1, 2);
    return x;
}

void EwlSpec::validate() const {
    if (!(r >= 0.0 && r <= 1.0))
        throw ValidationError("r", "purity must lie in [0,1], got " + std::to_string(r));
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw ValidationError("alpha", "amplitude must lie in [0,1], got " + std::to_string(alpha));
}

XState build_ewl(const EwlSpec& spec) {
    spec.validate();
    const double mix = (1.0 - spec.r) / 4.0;
    const double a2 = spec.alpha * spec.alpha;
    const double b2 = 1.0 - a2;
    const double ab = spec.alpha * spec.beta();
    XState x;
    if (spec.family == EwlFamily::Phi) {
        x.rho11 = mix;
        x.rho22 = mix + a2 * spec.r;
        x.rho33 = mix + b2 * spec.r;
        x.rho44 = mix;
        x.rho23 = ab * spec.r;
    } else {
        x.rho11 = mix + a2 * spec.r;
        x.rho22 = mix;
        x.rho33 = mix;
        x.rho44 = mix + b2 * spec.r;
        x.rho14 = ab * spec.r;
    }
    return x;
}

} // namespace ouq
