#pragma once

#include <utility>

#include "ouq/core.hpp"

namespace ouq {

/// One row of a sweep: time, concurrence, CHSH maximum, and the two
/// auxiliary reals P = rho11+rho44-rho22-rho33, Q = 2(|rho14|+|rho23|)
/// whose combination gives Bmax = 2 sqrt(P^2+Q^2) for X states.
struct MeasureSample {
    double t = 0.0;
    double C = 0.0;
    double Bmax = 0.0;
    double P = 0.0;
    double Q = 0.0;
};

/// CHSH measurement settings. Each observable is n.sigma with
/// n = (sin th cos ph, sin th sin ph, cos th); the primed observable on each
/// side shares the azimuth: O'_S = O_S(theta'_S, phi_S).
struct BellAngles {
    double theta_a = 0.0;
    double theta_a_prime = 0.0;
    double theta_b = 0.0;
    double theta_b_prime = 0.0;
    double phi_a = 0.0;
    double phi_b = 0.0;
};

/// Wootters concurrence from the general spin-flip construction:
/// C = max{0, sqrt(l1)-sqrt(l2)-sqrt(l3)-sqrt(l4)} with l_i the decreasing
/// eigenvalues of rho (sy x sy) rho* (sy x sy).
double concurrence_general(const DensityMatrix& rho);

/// Concurrence for X states: 2 max{0, |rho23|-sqrt(rho11 rho44), |rho14|-sqrt(rho22 rho33)}.
double concurrence_x(const XState& x);

struct BellX {
    double bmax = 0.0;
    double P = 0.0;
    double Q = 0.0;
};

/// Closed-form CHSH maximum for X states: Bmax = 2 sqrt(P^2 + Q^2).
BellX bell_max_x(const XState& x);

/// Horodecki criterion: 2 sqrt(u1+u2), u1 >= u2 the two largest eigenvalues
/// of T^t T with T_ij = Tr(rho sigma_i x sigma_j).
double bell_max_horodecki(const DensityMatrix& rho);

/// CHSH combination |<O_A O_B> - <O_A O'_B>| + <O'_A O_B> + <O'_A O'_B>
/// for explicit measurement settings.
double bell_value(const DensityMatrix& rho, const BellAngles& angles);

/// Maximizes bell_value over all six angles by multi-start Nelder-Mead
/// simplex, seeded on a coarse angle grid. Returns the best value found and
/// the angles attaining it.
std::pair<double, BellAngles> bell_numeric_max(const DensityMatrix& rho);

/// Both measures for an X state at a given time, packaged for sweep output.
MeasureSample measure_x(const XState& x, double t);

} // namespace ouq
