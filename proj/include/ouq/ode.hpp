#pragma once

#include <span>
#include <vector>

#include "ouq/core.hpp"

namespace ouq {

struct OdeSettings {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 0.01; // in units of 1/Gamma

    void validate() const;
};

/// Integrates the master-equation system for the 16 real degrees of freedom
/// of the Hermitian parameterization with an adaptive dormand-prince 5(4)
/// stepper and dense output. rho11, rho44 and rho22+rho33 are conserved by
/// the right-hand side itself. Throws IntegrationError on step failure.
DensityMatrix evolve_ode(const DensityMatrix& rho0, const ModelParams& params, double t_end,
                         const OdeSettings& settings = {});

/// Dense-output variant: states at the given nondecreasing times (t >= 0).
std::vector<DensityMatrix> evolve_ode_curve(const DensityMatrix& rho0, const ModelParams& params,
                                            std::span<const double> times,
                                            const OdeSettings& settings = {});

} // namespace ouq
