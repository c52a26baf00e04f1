#include "ouq/specfun.hpp"

#include <cmath>

namespace ouq {

namespace {

constexpr double kPoleTol = 1e-9;
constexpr double kSeriesRelTol = 1e-13;
constexpr int kTermCap = 10000;

bool near_nonpositive_integer(std::complex<double> b, double tol) {
    if (std::abs(b.imag()) > tol) return false;
    const double n = std::round(b.real());
    return n <= 0.5 && std::abs(b.real() - n) < tol;
}

/// Direct Maclaurin series with Kahan-compensated summation.
std::complex<double> series_1f1(std::complex<double> a, std::complex<double> b,
                                std::complex<double> z) {
    std::complex<double> sum(1.0, 0.0);
    std::complex<double> comp(0.0, 0.0); // running compensation
    std::complex<double> term(1.0, 0.0);
    int small_streak = 0;
    for (int k = 0; k < kTermCap; ++k) {
        term *= (a + static_cast<double>(k)) / (b + static_cast<double>(k)) * z /
                static_cast<double>(k + 1);
        const std::complex<double> y = term - comp;
        const std::complex<double> t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if (std::abs(term) <= kSeriesRelTol * std::abs(sum)) {
            if (++small_streak >= 2) return sum;
        } else {
            small_streak = 0;
        }
        if (term == std::complex<double>(0.0, 0.0)) return sum; // terminating (polynomial) case
    }
    throw NoConvergenceError("1F1 series did not converge within 10000 terms");
}

} // namespace

void KernelParams::validate() const {
    if (!(Gamma > 0.0) || !std::isfinite(Gamma))
        throw ValidationError("Gamma", "must be positive");
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw ValidationError("gamma", "must be positive");
}

double correlation_alpha(const KernelParams& kp, double dt) {
    return 0.5 * kp.Gamma * kp.gamma * std::exp(-kp.gamma * std::abs(dt));
}

double kernel_G(const KernelParams& kp, double t) {
    if (t < 0.0) throw std::domain_error("kernel_G: t must be >= 0");
    return 0.5 * kp.Gamma * (-std::expm1(-kp.gamma * t));
}

double decay_f(const KernelParams& kp, double t) {
    if (t < 0.0) throw std::domain_error("decay_f: t must be >= 0");
    return 0.5 * kp.Gamma * (t + std::expm1(-kp.gamma * t) / kp.gamma);
}

std::complex<double> hyp1f1(std::complex<double> a, std::complex<double> b,
                            std::complex<double> z) {
    if (near_nonpositive_integer(b, kPoleTol))
        throw PoleParameterError("1F1 parameter b near nonpositive integer");
    if (z == std::complex<double>(0.0, 0.0)) return {1.0, 0.0};
    if (a == b) return std::exp(z);
    if (z.real() < 0.0 && std::abs(z) > 12.0)
        return std::exp(z) * series_1f1(b - a, b, -z);
    return series_1f1(a, b, z);
}

} // namespace ouq
