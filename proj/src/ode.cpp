#include "ouq/ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <boost/numeric/odeint.hpp>

#include "ouq/specfun.hpp"

namespace ouq {

namespace {

// State layout: [p11 p22 p33 p44, Re/Im rho12, Re/Im rho13, Re/Im rho14,
//                Re/Im rho23, Re/Im rho24, Re/Im rho34]
using State = std::array<double, 16>;

State pack(const DensityMatrix& rho) {
    State y{};
    y[0] = rho.m(0, 0).real();
    y[1] = rho.m(1, 1).real();
    y[2] = rho.m(2, 2).real();
    y[3] = rho.m(3, 3).real();
    const std::pair<int, int> up[6] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    for (int k = 0; k < 6; ++k) {
        y[4 + 2 * k] = rho.m(up[k].first, up[k].second).real();
        y[5 + 2 * k] = rho.m(up[k].first, up[k].second).imag();
    }
    return y;
}

DensityMatrix unpack(const State& y) {
    DensityMatrix rho;
    rho.m(0, 0) = y[0];
    rho.m(1, 1) = y[1];
    rho.m(2, 2) = y[2];
    rho.m(3, 3) = y[3];
    const std::pair<int, int> up[6] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    for (int k = 0; k < 6; ++k) {
        const Complex v(y[4 + 2 * k], y[5 + 2 * k]);
        rho.m(up[k].first, up[k].second) = v;
        rho.m(up[k].second, up[k].first) = std::conj(v);
    }
    return rho;
}

struct MasterRhs {
    double J, Gamma, gamma;

    void operator()(const State& y, State& dy, double t) const {
        const double G = kernel_G(KernelParams{Gamma, gamma}, t);
        const Complex r12(y[4], y[5]), r13(y[6], y[7]), r14(y[8], y[9]);
        const Complex r23(y[10], y[11]), r24(y[12], y[13]), r34(y[14], y[15]);
        const Complex i2J(0.0, 2.0 * J);

        dy[0] = 0.0;                                  // rho11
        dy[3] = 0.0;                                  // rho44
        const double pump = -4.0 * J * r23.imag();    // 2iJ(rho23 - rho23*) is real
        dy[1] = pump;                                 // rho22
        dy[2] = -pump;                                // rho33

        const Complex d12 = i2J * r13 - G * r12;
        const Complex d13 = i2J * r12 - G * r13;
        const Complex d14 = -2.0 * G * r14;
        const Complex d23 = i2J * (y[1] - y[2]) - 2.0 * G * r23;
        const Complex d24 = -i2J * r34 - G * r24;
        const Complex d34 = -i2J * r24 - G * r34;
        const Complex ds[6] = {d12, d13, d14, d23, d24, d34};
        for (int k = 0; k < 6; ++k) {
            dy[4 + 2 * k] = ds[k].real();
            dy[5 + 2 * k] = ds[k].imag();
        }
    }
};

} // namespace

void OdeSettings::validate() const {
    if (!(rel_tol > 0.0)) throw ValidationError("rel_tol", "must be positive");
    if (!(abs_tol > 0.0)) throw ValidationError("abs_tol", "must be positive");
    if (!(max_step > 0.0)) throw ValidationError("max_step", "must be positive");
}

std::vector<DensityMatrix> evolve_ode_curve(const DensityMatrix& rho0, const ModelParams& params,
                                            std::span<const double> times,
                                            const OdeSettings& settings) {
    namespace odeint = boost::numeric::odeint;
    params.validate();
    settings.validate();
    if (times.empty()) return {};
    if (times.front() < 0.0 || !std::is_sorted(times.begin(), times.end()))
        throw std::domain_error("evolve_ode: times must be nondecreasing and >= 0");

    const double dt_max = settings.max_step / params.Gamma;
    const MasterRhs rhs{params.J, params.Gamma, params.gamma};
    State y = pack(rho0);

    std::vector<DensityMatrix> out;
    out.reserve(times.size());
    double t_reached = 0.0;
    try {
        auto stepper = odeint::make_dense_output(settings.abs_tol, settings.rel_tol, dt_max,
                                                 odeint::runge_kutta_dopri5<State>());
        odeint::integrate_times(stepper, rhs, y, times.begin(), times.end(),
                                std::min(dt_max, 1e-4 / params.Gamma),
                                [&](const State& s, double t) {
                                    out.push_back(unpack(s));
                                    t_reached = t;
                                });
    } catch (const std::exception& e) {
        throw IntegrationError(std::string("adaptive step failed: ") + e.what(), t_reached);
    }
    return out;
}

DensityMatrix evolve_ode(const DensityMatrix& rho0, const ModelParams& params, double t_end,
                         const OdeSettings& settings) {
    if (t_end < 0.0) throw std::domain_error("evolve_ode: t_end must be >= 0");
    if (t_end == 0.0) return rho0;
    const double times[2] = {0.0, t_end};
    return evolve_ode_curve(rho0, params, times, settings).back();
}

} // namespace ouq
