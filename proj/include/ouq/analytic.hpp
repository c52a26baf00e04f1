#pragma once

#include <utility>

#include "ouq/core.hpp"

namespace ouq {

/// Intermediates of the closed-form solution at one evaluation point.
/// Y = rho22(0)+rho33(0) and Z = rho22-rho33 drive the populations,
/// A = (rho23(0)+rho32(0)) e^{-2f} and B = rho23-rho32 the inner coherence.
/// K, L, M enter Z = (K e^{-g t eta+} F+ + L e^{-g t eta-} F-) / M and
/// C, D, E enter B = (e^{-g t eta-} C + e^{-g t eta+} D) / E, where the
/// positive-real-base power prefactors of the raw expressions have been
/// combined exactly into the decaying exponentials.
struct AnalyticCoefficients {
    Complex epsilon, kappa_plus, kappa_minus, delta_plus, delta_minus, eta_plus, eta_minus;
    Complex K, L, M, C, D, E;
    Complex Y, Z, A, B;
};

/// Closed-form evolution of the inner 2x2 block for one (params) set.
/// The construction evaluates every parameter-only quantity (spectral
/// exponents, the eight t-independent 1F1 values, M and E) once; x_at then
/// costs four 1F1 evaluations per time point.
///
/// Throws DegenerateParametersError when epsilon ~ 0 (8J ~ Gamma), when a
/// 1F1 b-parameter sits within 1e-9 of a nonpositive integer, or when M or E
/// collapses by cancellation; callers fall back to the ODE engine.
class AnalyticPropagator {
public:
    AnalyticPropagator(const ModelParams& params);

    XState x_at(const XState& x0, double t) const;
    AnalyticCoefficients coefficients_at(const XState& x0, double t) const;

    const ModelParams& params() const { return params_; }

private:
    struct Slice; // per-time 1F1 values and exponentials
    Slice slice(double t) const;

    ModelParams params_;
    double g_;             // gamma/Gamma
    Complex eps_;          // epsilon/Gamma
    Complex eta_p_, eta_m_, kap_p_, kap_m_, del_p_, del_m_;
    Complex b1p_, b1m_, b2p_, b2m_; // 1 +- eps/gamma, 2 +- eps/gamma
    // state-independent coefficient pieces: X = d0*X_d + c0*X_c
    Complex K_d_, K_c_, L_d_, L_c_, C_d_, C_c_, D_d_, D_c_;
    Complex M_, E_;
};

/// Full Appendix-style closed-form evolution. Populations rho11, rho44 are
/// constant, the inner block follows the 1F1 solution, rho14 decays as
/// e^{-2f}, and the single-excitation coherences rotate at 2J under e^{-f}.
/// Dispatches |J| < 1e-10 Gamma to the J=0 fast path.
DensityMatrix evolve_analytic(const DensityMatrix& rho0, const ModelParams& params, double t);
XState evolve_analytic(const XState& x0, const ModelParams& params, double t);

/// J = 0 limit: populations frozen, rho14 and rho23 decay as e^{-2f},
/// single-index coherences as e^{-f}. Throws ContractError when called with
/// |J| > 1e-10 Gamma.
DensityMatrix evolve_analytic_j0(const DensityMatrix& rho0, const ModelParams& params, double t);

/// Closed-form measures for the Psi family (independent of J):
/// C = 2 max{0, r a b e^{-2f} - (1-r)/4},  Bmax = 2 r sqrt(1 + 4 (a b e^{-2f})^2).
std::pair<double, double> cb_psi_closed(const EwlSpec& spec, const ModelParams& params, double t);

/// Closed-form measures for the Phi Bell state (alpha = 1/sqrt2, any J):
/// C = max{0, r e^{-2f} - (1-r)/2},  Bmax = 2 r sqrt(1 + e^{-4f}).
std::pair<double, double> cb_phi_bell_closed(double r, const ModelParams& params, double t);

} // namespace ouq
