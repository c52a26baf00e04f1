#pragma once

#include <complex>

#include "ouq/errors.hpp"

namespace ouq {

/// Parameters of the noise correlation kernel.
struct KernelParams {
    double Gamma = 1.0;
    double gamma = 1.0;

    void validate() const;
};

/// Noise autocorrelation alpha(dt) = (Gamma*gamma/2) exp(-gamma |dt|).
double correlation_alpha(const KernelParams& kp, double dt);

/// Memory kernel G(t) = integral_0^t alpha(s) ds = (Gamma/2)(1 - exp(-gamma t)).
/// Requires t >= 0.
double kernel_G(const KernelParams& kp, double t);

/// f(t) = integral_0^t G(s) ds = (Gamma/2)(t + (exp(-gamma t) - 1)/gamma).
/// Governs the coherence envelopes exp(-f) and exp(-2f). Requires t >= 0.
double decay_f(const KernelParams& kp, double t);

/// Kummer confluent hypergeometric function 1F1(a; b; z) for complex
/// arguments, by direct Maclaurin series with term-ratio recurrence and
/// compensated summation. For large negative Re(z) the series loses digits
/// to cancellation, so |z| > 12 with Re(z) < 0 is routed through the Kummer
/// transformation 1F1(a;b;z) = e^z 1F1(b-a;b;-z).
///
/// Throws PoleParameterError when b is within 1e-9 of a nonpositive integer
/// and NoConvergenceError if 10000 terms do not reach relative tolerance 1e-13.
std::complex<double> hyp1f1(std::complex<double> a, std::complex<double> b,
                            std::complex<double> z);

} // namespace ouq
