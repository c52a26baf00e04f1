#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ouq/core.hpp"
#include "ouq/rng.hpp"
#include "ouq/specfun.hpp"

namespace ouq {

/// A sampled Ornstein-Uhlenbeck realization of (Omega_A, Omega_B) on the
/// uniform grid t0 + k*dt, k = 0..n-1.
struct NoisePath {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<double> omega_a;
    std::vector<double> omega_b;
};

struct McSettings {
    int n_traj = 20000;
    double dt = 1e-3;        // trajectory step in units of 1/Gamma
    std::uint64_t seed = 0;

    void validate() const;
};

/// Stationary standard deviation sqrt(Gamma*gamma/2).
double ou_stationary_stddev(const KernelParams& kp);
/// Conditional one-step standard deviation of the exact OU update,
/// sqrt((Gamma*gamma/2)(1 - e^{-2 gamma dt})).
double ou_step_stddev(const KernelParams& kp, double dt);

/// Per-trajectory RNG pair, derived from (seed, trajectory index).
struct TrajectoryRng {
    RngStream a;
    RngStream b;
    TrajectoryRng(std::uint64_t seed, std::uint64_t traj_index)
        : a(seed, 2 * traj_index), b(seed, 2 * traj_index + 1) {}
};

/// Draws both channels from their stationary law and advances them with the
/// exact discretization Omega(t+dt) = Omega(t) e^{-gamma dt} + step_sd * xi.
NoisePath sample_ou_path(const KernelParams& kp, double t_end, double dt, TrajectoryRng& rng,
                         double t0 = 0.0);

/// One stochastic-Schroedinger trajectory under a given noise realization
/// (values at step midpoints): per step a Strang split
/// exp(-i dt/2 Hz) exp(-i dt HJ) exp(-i dt/2 Hz), each factor exactly unitary.
Eigen::Vector4cd propagate_trajectory(const Eigen::Vector4cd& psi0, double J, double dt,
                                      std::span<const double> omega_a,
                                      std::span<const double> omega_b);
Eigen::Vector4cd propagate_trajectory(const Eigen::Vector4cd& psi0, double J,
                                      const NoisePath& midpoints);

struct McResult {
    double t = 0.0;
    DensityMatrix rho;
    Eigen::Matrix4d se = Eigen::Matrix4d::Zero(); // elementwise standard error
    int n_traj = 0;
};

/// Ensemble average of trajectories at each requested time. Mixed initial
/// states are eigendecomposed and every eigencomponent is propagated through
/// the same noise realization, which is exact by linearity. Trajectories are
/// reduced in fixed chunks so results do not depend on thread scheduling.
std::vector<McResult> evolve_montecarlo_curve(const DensityMatrix& rho0, const ModelParams& params,
                                              std::span<const double> times,
                                              const McSettings& settings, unsigned threads = 0);

McResult evolve_montecarlo(const DensityMatrix& rho0, const ModelParams& params, double t_end,
                           const McSettings& settings, unsigned threads = 0);

} // namespace ouq
