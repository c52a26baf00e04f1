#include "ouq/analytic.hpp"

#include <cmath>

#include "ouq/specfun.hpp"

namespace ouq {

namespace {

constexpr double kJZeroThreshold = 1e-10; // in units of Gamma
constexpr double kEpsilonTol = 1e-8;      // |epsilon|/Gamma below this is confluent
constexpr double kCancelTol = 1e-12;
constexpr double kImagResidueTol = 1e-9;

bool near_nonpositive_integer(Complex b, double tol = 1e-9) {
    if (std::abs(b.imag()) > tol) return false;
    const double n = std::round(b.real());
    return n <= 0.5 && std::abs(b.real() - n) < tol;
}

/// |sum of terms| measured against the sum of |terms|; flags catastrophic
/// cancellation at any magnitude scale.
bool collapsed(Complex value, double term_scale) {
    return !(std::abs(value) > kCancelTol * term_scale);
}

double f_hat(double g, double t) {
    // decay_f in Gamma = 1 units
    return 0.5 * (t + std::expm1(-g * t) / g);
}

} // namespace

struct AnalyticPropagator::Slice {
    double t = 0.0;
    double ef = 1.0;   // e^{-f}
    double ef2 = 1.0;  // e^{-2f}
    Complex Fp, Fm;    // 1F1(eta+-; 1+-eps/g; -e^{-gt}/g)
    Complex Hp, Hm;    // 1F1(kappa+-; 1+-eps/g; -e^{-gt}/g)
    Complex ep, em;    // e^{-g t eta+-}
};

AnalyticPropagator::AnalyticPropagator(const ModelParams& params) : params_(params) {
    params.validate();
    // All coefficient algebra runs in Gamma = 1 units; the physical scale
    // enters only through t -> Gamma t in slice().
    const double J = params.J / params.Gamma;
    const double g = params.gamma / params.Gamma;
    g_ = g;
    eps_ = std::sqrt(Complex(1.0 - 64.0 * J * J, 0.0));

    if (std::abs(eps_) < kEpsilonTol)
        throw DegenerateParametersError(
            "epsilon ~ 0 (8J = Gamma): confluent closed form; use the ODE engine");

    const Complex eg = eps_ / g;
    eta_p_ = (1.0 + eps_) / (2.0 * g);
    eta_m_ = (1.0 - eps_) / (2.0 * g);
    kap_p_ = (2.0 * g + 1.0 + eps_) / (2.0 * g);
    kap_m_ = (2.0 * g + 1.0 - eps_) / (2.0 * g);
    del_p_ = (4.0 * g + 1.0 + eps_) / (2.0 * g);
    del_m_ = (4.0 * g + 1.0 - eps_) / (2.0 * g);
    b1p_ = 1.0 + eg;
    b1m_ = 1.0 - eg;
    b2p_ = 2.0 + eg;
    b2m_ = 2.0 - eg;
    for (Complex b : {b1p_, b1m_, b2p_, b2m_})
        if (near_nonpositive_integer(b))
            throw DegenerateParametersError(
                "1F1 parameter 1 or 2 +- eps/gamma near a nonpositive integer (eps/gamma = " +
                std::to_string((eps_ / g).real()) + (eg.imag() != 0.0 ? "+i*..." : "") +
                "); use the ODE engine");

    const Complex z0(-1.0 / g, 0.0);
    const Complex Fp0 = hyp1f1(eta_p_, b1p_, z0);
    const Complex Fm0 = hyp1f1(eta_m_, b1m_, z0);
    const Complex Gp0 = hyp1f1(kap_p_, b2p_, z0);
    const Complex Gm0 = hyp1f1(kap_m_, b2m_, z0);
    const Complex Pp0 = hyp1f1(kap_p_, b1p_, z0);
    const Complex Pm0 = hyp1f1(kap_m_, b1m_, z0);
    const Complex Qp0 = hyp1f1(del_p_, b2p_, z0);
    const Complex Qm0 = hyp1f1(del_m_, b2m_, z0);

    const double JJ = 64.0 * J * J;
    const Complex g2e2 = g * g - eps_ * eps_; // = g^2 - 1 + 64 J^2
    const Complex i8J(0.0, 8.0 * J);

    // K = d0*K_d + c0*K_c, etc.; d0 = rho22(0)-rho33(0), c0 = rho23(0)-rho32(0).
    K_d_ = -(g * (g - 1.0) * (eps_ - 1.0) - JJ * g) * Gm0 + g * g2e2 * Fm0 * (eps_ - 1.0);
    K_c_ = g * g2e2 * Fm0 * (-i8J);
    L_d_ = (g * (1.0 - g) * (eps_ + 1.0) - JJ * g) * Gp0 + g * g2e2 * Fp0 * (eps_ + 1.0);
    L_c_ = g * g2e2 * Fp0 * i8J;

    {
        const Complex m1 = Fm0 * 2.0 * g * eps_ * g2e2 * Fp0;
        const Complex m2 = Fm0 * (g * (1.0 - g) * (1.0 + eps_) - JJ * g) * Gp0;
        const Complex m3 = -(g * (g - 1.0) * (eps_ - 1.0) - JJ * g) * Fp0 * Gm0;
        M_ = m1 + m2 + m3;
        if (collapsed(M_, std::abs(m1) + std::abs(m2) + std::abs(m3)))
            throw DegenerateParametersError("population denominator M collapsed; use the ODE engine");
    }

    C_c_ = -g * ((g + 1.0) * (1.0 - 2.0 * g + eps_) - JJ) * Qp0 - g * g2e2 * Pp0 * (1.0 + eps_);
    C_d_ = g * g2e2 * Pp0 * (-i8J);
    D_c_ = -g * ((g + 1.0) * (2.0 * g - 1.0 + eps_) + JJ) * Qm0 + g * g2e2 * Pm0 * (1.0 - eps_);
    D_d_ = g * g2e2 * Pm0 * i8J;

    {
        const Complex e1 = Pm0 * (-2.0 * g * eps_ * g2e2) * Pp0;
        const Complex e2 = Pm0 * (-g * ((g + 1.0) * (1.0 - 2.0 * g + eps_) - JJ)) * Qp0;
        const Complex e3 = -g * ((g + 1.0) * (2.0 * g - 1.0 + eps_) + JJ) * Qm0 * Pp0;
        E_ = e1 + e2 + e3;
        if (collapsed(E_, std::abs(e1) + std::abs(e2) + std::abs(e3)))
            throw DegenerateParametersError("coherence denominator E collapsed; use the ODE engine");
    }
}

AnalyticPropagator::Slice AnalyticPropagator::slice(double t) const {
    const double th = params_.Gamma * t;
    Slice s;
    s.t = t;
    const double f = f_hat(g_, th);
    s.ef = std::exp(-f);
    s.ef2 = std::exp(-2.0 * f);
    const Complex zt(-std::exp(-g_ * th) / g_, 0.0);
    s.Fp = hyp1f1(eta_p_, b1p_, zt);
    s.Fm = hyp1f1(eta_m_, b1m_, zt);
    s.Hp = hyp1f1(kap_p_, b1p_, zt);
    s.Hm = hyp1f1(kap_m_, b1m_, zt);
    s.ep = std::exp(-g_ * th * eta_p_);
    s.em = std::exp(-g_ * th * eta_m_);
    return s;
}

XState AnalyticPropagator::x_at(const XState& x0, double t) const {
    if (t < 0.0) throw std::domain_error("evolve_analytic: t must be >= 0");
    const auto c = coefficients_at(x0, t);
    XState x;
    x.rho11 = x0.rho11;
    x.rho44 = x0.rho44;
    x.rho22 = 0.5 * (c.Y + c.Z).real();
    x.rho33 = 0.5 * (c.Y - c.Z).real();
    x.rho23 = 0.5 * (c.A + c.B);
    x.rho14 = x0.rho14 * std::exp(-2.0 * f_hat(g_, params_.Gamma * t));
    return x;
}

AnalyticCoefficients AnalyticPropagator::coefficients_at(const XState& x0, double t) const {
    const Slice s = slice(t);
    const Complex d0(x0.rho22 - x0.rho33, 0.0);
    const Complex c0 = x0.rho23 - std::conj(x0.rho23);

    AnalyticCoefficients out;
    out.epsilon = eps_ * params_.Gamma;
    out.kappa_plus = kap_p_;
    out.kappa_minus = kap_m_;
    out.delta_plus = del_p_;
    out.delta_minus = del_m_;
    out.eta_plus = eta_p_;
    out.eta_minus = eta_m_;
    out.K = d0 * K_d_ + c0 * K_c_;
    out.L = d0 * L_d_ + c0 * L_c_;
    out.M = M_;
    out.C = (d0 * C_d_ + c0 * C_c_) * s.Hm;
    out.D = (d0 * D_d_ + c0 * D_c_) * s.Hp;
    out.E = E_;

    out.Y = Complex(x0.rho22 + x0.rho33, 0.0);
    out.Z = (out.K * s.ep * s.Fp + out.L * s.em * s.Fm) / M_;
    out.A = (x0.rho23 + std::conj(x0.rho23)) * s.ef2;
    out.B = (s.em * out.C + s.ep * out.D) / E_;

    if (!std::isfinite(out.Z.real()) || !std::isfinite(out.Z.imag()) ||
        !std::isfinite(out.B.real()) || !std::isfinite(out.B.imag()))
        throw DegenerateParametersError("closed form overflowed at these parameters; use the ODE engine");
    if (std::abs(out.Z.imag()) > kImagResidueTol)
        throw DegenerateParametersError("spurious imaginary residue on rho22-rho33 exceeds 1e-9");
    return out;
}

namespace {

/// Single-excitation coherence pairs rotate into each other at frequency 2J
/// under the common e^{-f} envelope; exact for any J including 0.
void evolve_off_x(const DensityMatrix& rho0, double J, double f, double t, DensityMatrix& out) {
    const double c = std::cos(2.0 * J * t);
    const double si = std::sin(2.0 * J * t);
    const Complex is(0.0, si);
    const double ef = std::exp(-f);
    out.m(0, 1) = (rho0.m(0, 1) * c + is * rho0.m(0, 2)) * ef;
    out.m(0, 2) = (rho0.m(0, 2) * c + is * rho0.m(0, 1)) * ef;
    out.m(1, 3) = (rho0.m(1, 3) * c - is * rho0.m(2, 3)) * ef;
    out.m(2, 3) = (rho0.m(2, 3) * c - is * rho0.m(1, 3)) * ef;
    out.m(1, 0) = std::conj(out.m(0, 1));
    out.m(2, 0) = std::conj(out.m(0, 2));
    out.m(3, 1) = std::conj(out.m(1, 3));
    out.m(3, 2) = std::conj(out.m(2, 3));
}

XState x_part(const DensityMatrix& rho) {
    XState x;
    x.rho11 = rho.m(0, 0).real();
    x.rho22 = rho.m(1, 1).real();
    x.rho33 = rho.m(2, 2).real();
    x.rho44 = rho.m(3, 3).real();
    x.rho14 = rho.m(0, 3);
    x.rho23 = rho.m(1, 2);
    return x;
}

void put_x_part(const XState& x, DensityMatrix& rho) {
    rho.m(0, 0) = x.rho11;
    rho.m(1, 1) = x.rho22;
    rho.m(2, 2) = x.rho33;
    rho.m(3, 3) = x.rho44;
    rho.m(0, 3) = x.rho14;
    rho.m(3, 0) = std::conj(x.rho14);
    rho.m(1, 2) = x.rho23;
    rho.m(2, 1) = std::conj(x.rho23);
}

} // namespace

XState evolve_analytic(const XState& x0, const ModelParams& params, double t) {
    params.validate();
    if (t < 0.0) throw std::domain_error("evolve_analytic: t must be >= 0");
    if (params.J < kJZeroThreshold * params.Gamma) {
        const KernelParams kp{params.Gamma, params.gamma};
        const double f2 = std::exp(-2.0 * decay_f(kp, t));
        XState x = x0;
        x.rho14 = x0.rho14 * f2;
        x.rho23 = x0.rho23 * f2;
        return x;
    }
    return AnalyticPropagator(params).x_at(x0, t);
}

DensityMatrix evolve_analytic(const DensityMatrix& rho0, const ModelParams& params, double t) {
    params.validate();
    if (t < 0.0) throw std::domain_error("evolve_analytic: t must be >= 0");
    if (params.J < kJZeroThreshold * params.Gamma) return evolve_analytic_j0(rho0, params, t);
    DensityMatrix out;
    put_x_part(AnalyticPropagator(params).x_at(x_part(rho0), t), out);
    const double f = decay_f(KernelParams{params.Gamma, params.gamma}, t);
    evolve_off_x(rho0, params.J, f, t, out);
    return out;
}

DensityMatrix evolve_analytic_j0(const DensityMatrix& rho0, const ModelParams& params, double t) {
    params.validate();
    if (params.J > kJZeroThreshold * params.Gamma)
        throw ContractError("evolve_analytic_j0 requires J = 0");
    if (t < 0.0) throw std::domain_error("evolve_analytic_j0: t must be >= 0");
    const double f = decay_f(KernelParams{params.Gamma, params.gamma}, t);
    const double ef2 = std::exp(-2.0 * f);
    DensityMatrix out = rho0;
    out.m(0, 3) = rho0.m(0, 3) * ef2;
    out.m(3, 0) = std::conj(out.m(0, 3));
    out.m(1, 2) = rho0.m(1, 2) * ef2;
    out.m(2, 1) = std::conj(out.m(1, 2));
    evolve_off_x(rho0, 0.0, f, t, out);
    return out;
}

std::pair<double, double> cb_psi_closed(const EwlSpec& spec, const ModelParams& params, double t) {
    if (spec.family != EwlFamily::Psi)
        throw ContractError("cb_psi_closed requires the Psi family");
    spec.validate();
    params.validate();
    const double ab = spec.alpha * spec.beta();
    const double env = ab * std::exp(-2.0 * decay_f(KernelParams{params.Gamma, params.gamma}, t));
    const double c = 2.0 * std::max(0.0, spec.r * env - (1.0 - spec.r) / 4.0);
    const double b = 2.0 * spec.r * std::sqrt(1.0 + 4.0 * env * env);
    return {std::min(c, 1.0), b};
}

std::pair<double, double> cb_phi_bell_closed(double r, const ModelParams& params, double t) {
    if (!(r >= 0.0 && r <= 1.0))
        throw ValidationError("r", "purity must lie in [0,1], got " + std::to_string(r));
    params.validate();
    const double env = std::exp(-2.0 * decay_f(KernelParams{params.Gamma, params.gamma}, t));
    const double c = std::max(0.0, r * env - (1.0 - r) / 2.0);
    const double b = 2.0 * r * std::sqrt(1.0 + env * env);
    return {std::min(c, 1.0), b};
}

} // namespace ouq
