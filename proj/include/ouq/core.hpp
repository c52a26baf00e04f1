#pragma once

#include <complex>

#include <Eigen/Dense>

#include "ouq/errors.hpp"

namespace ouq {

using Complex = std::complex<double>;
using Matrix4c = Eigen::Matrix4cd;

// Basis order is fixed repo-wide:
//   index 0 = |11>, 1 = |10>, 2 = |01>, 3 = |00>
// (the 1-based labels |1>..|4> used in comments follow the same order).

/// Physical parameters of the two-qubit model. J is the dipole coupling,
/// Gamma the common damping rate (sets the inverse time unit), gamma the
/// noise bandwidth. J and gamma are usually quoted in units of Gamma.
struct ModelParams {
    double J = 0.0;
    double Gamma = 1.0;
    double gamma = 1.0;

    void validate() const;

    /// epsilon = sqrt(Gamma^2 - 64 J^2), principal branch; purely imaginary
    /// with positive imaginary part when 8J > Gamma.
    Complex epsilon() const;
    Complex kappa_plus() const { return (2.0 * gamma + Gamma + epsilon()) / (2.0 * gamma); }
    Complex kappa_minus() const { return (2.0 * gamma + Gamma - epsilon()) / (2.0 * gamma); }
    Complex delta_plus() const { return (4.0 * gamma + Gamma + epsilon()) / (2.0 * gamma); }
    Complex delta_minus() const { return (4.0 * gamma + Gamma - epsilon()) / (2.0 * gamma); }
    Complex eta_plus() const { return (Gamma + epsilon()) / (2.0 * gamma); }
    Complex eta_minus() const { return (Gamma - epsilon()) / (2.0 * gamma); }
};

/// 4x4 density matrix in the standard basis above.
struct DensityMatrix {
    Matrix4c m = Matrix4c::Zero();

    /// Hermitian within herm_tol, unit trace within trace_tol, smallest
    /// eigenvalue >= -psd_tol. Throws ValidationError.
    void validate(double herm_tol = 1e-12, double trace_tol = 1e-12,
                  double psd_tol = 1e-10) const;

    double min_eigenvalue() const;
    static DensityMatrix maximally_mixed();
};

/// X-structured state: populations plus the two anti-/inner-diagonal coherences.
struct XState {
    double rho11 = 0.0;
    double rho22 = 0.0;
    double rho33 = 0.0;
    double rho44 = 0.0;
    Complex rho14{0.0, 0.0};
    Complex rho23{0.0, 0.0};

    void validate() const;
};

DensityMatrix embed(const XState& x);

/// Inverse of embed. Throws NonXStateError if any element outside the X
/// pattern has magnitude >= tol.
XState project_x(const DensityMatrix& rho, double tol = 1e-9);

enum class EwlFamily { Phi, Psi };

/// Extended Werner-like initial state descriptor: (1-r)/4 * I + r |psi><psi|
/// with |Phi> = alpha|10> + beta|01>, |Psi> = alpha|11> + beta|00>,
/// beta = sqrt(1 - alpha^2).
struct EwlSpec {
    EwlFamily family = EwlFamily::Phi;
    double r = 1.0;
    double alpha = 0.0;

    void validate() const;
    double beta() const { return std::sqrt(std::max(0.0, 1.0 - alpha * alpha)); }
};

XState build_ewl(const EwlSpec& spec);

} // namespace ouq
