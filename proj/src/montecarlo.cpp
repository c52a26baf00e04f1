#include "ouq/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace ouq {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) {
    std::uint64_t s = seed ^ (0x2545f4914f6cdd1dULL * (stream_id + 1));
    engine_.seed(splitmix64(s));
}

double RngStream::uniform() {
    // 53-bit mantissa uniform in (0,1); never exactly 0
    const std::uint64_t bits = engine_() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    cached_ = r * std::sin(2.0 * M_PI * u2);
    has_cached_ = true;
    return r * std::cos(2.0 * M_PI * u2);
}

void McSettings::validate() const {
    if (n_traj < 1) throw ValidationError("n_traj", "must be >= 1");
    if (!(dt > 0.0)) throw ValidationError("dt", "must be positive");
}

double ou_stationary_stddev(const KernelParams& kp) {
    return std::sqrt(0.5 * kp.Gamma * kp.gamma);
}

double ou_step_stddev(const KernelParams& kp, double dt) {
    return std::sqrt(0.5 * kp.Gamma * kp.gamma * (-std::expm1(-2.0 * kp.gamma * dt)));
}

NoisePath sample_ou_path(const KernelParams& kp, double t_end, double dt, TrajectoryRng& rng,
                         double t0) {
    kp.validate();
    if (!(dt > 0.0)) throw ValidationError("dt", "must be positive");
    const int n = std::max(1, static_cast<int>(std::ceil((t_end - t0) / dt)));
    NoisePath path;
    path.t0 = t0;
    path.dt = dt;
    path.omega_a.resize(n);
    path.omega_b.resize(n);
    const double decay = std::exp(-kp.gamma * dt);
    const double sd0 = ou_stationary_stddev(kp);
    const double sd = ou_step_stddev(kp, dt);
    path.omega_a[0] = sd0 * rng.a.normal();
    path.omega_b[0] = sd0 * rng.b.normal();
    for (int k = 1; k < n; ++k) {
        path.omega_a[k] = path.omega_a[k - 1] * decay + sd * rng.a.normal();
        path.omega_b[k] = path.omega_b[k - 1] * decay + sd * rng.b.normal();
    }
    return path;
}

Eigen::Vector4cd propagate_trajectory(const Eigen::Vector4cd& psi0, double J, double dt,
                                      std::span<const double> omega_a,
                                      std::span<const double> omega_b) {
    const double c = std::cos(2.0 * J * dt);
    const Complex mis(0.0, -std::sin(2.0 * J * dt));
    Eigen::Vector4cd psi = psi0;
    for (std::size_t k = 0; k < omega_a.size(); ++k) {
        const double wa = omega_a[k];
        const double wb = omega_b[k];
        // half-step z phases: basis z-eigenvalues (za, zb) = (+,+),(+,-),(-,+),(-,-)
        const double quarter = 0.25 * dt;
        const Complex p1 = std::polar(1.0, -(wa + wb) * quarter);
        const Complex p2 = std::polar(1.0, -(wa - wb) * quarter);
        psi(0) *= p1;
        psi(1) *= p2;
        psi(2) *= std::conj(p2);
        psi(3) *= std::conj(p1);
        // full J step mixes |10> and |01>
        const Complex u = psi(1), v = psi(2);
        psi(1) = c * u + mis * v;
        psi(2) = mis * u + c * v;
        // second z half-step
        psi(0) *= p1;
        psi(1) *= p2;
        psi(2) *= std::conj(p2);
        psi(3) *= std::conj(p1);
    }
    return psi;
}

Eigen::Vector4cd propagate_trajectory(const Eigen::Vector4cd& psi0, double J,
                                      const NoisePath& midpoints) {
    return propagate_trajectory(psi0, J, midpoints.dt, midpoints.omega_a, midpoints.omega_b);
}

namespace {

struct Accumulator {
    Eigen::Matrix4cd sum = Eigen::Matrix4cd::Zero();
    Eigen::Matrix4d sumsq_re = Eigen::Matrix4d::Zero();
    Eigen::Matrix4d sumsq_im = Eigen::Matrix4d::Zero();

    void add(const Eigen::Matrix4cd& x) {
        sum += x;
        sumsq_re += x.real().cwiseProduct(x.real());
        sumsq_im += x.imag().cwiseProduct(x.imag());
    }
    void merge(const Accumulator& o) {
        sum += o.sum;
        sumsq_re += o.sumsq_re;
        sumsq_im += o.sumsq_im;
    }
};

} // namespace

std::vector<McResult> evolve_montecarlo_curve(const DensityMatrix& rho0, const ModelParams& params,
                                              std::span<const double> times,
                                              const McSettings& settings, unsigned threads) {
    params.validate();
    settings.validate();
    rho0.validate(1e-9, 1e-9, 1e-9);
    if (times.empty()) return {};
    if (times.front() < 0.0 || !std::is_sorted(times.begin(), times.end()))
        throw std::domain_error("evolve_montecarlo: times must be nondecreasing and >= 0");

    // mixture decomposition of the initial state
    Eigen::SelfAdjointEigenSolver<Matrix4c> es(0.5 * (rho0.m + rho0.m.adjoint()));
    std::vector<std::pair<double, Eigen::Vector4cd>> components;
    for (int i = 0; i < 4; ++i)
        if (es.eigenvalues()(i) > 1e-12)
            components.emplace_back(es.eigenvalues()(i), es.eigenvectors().col(i));

    const double dt = settings.dt / params.Gamma;
    const KernelParams kp{params.Gamma, params.gamma};
    const double t_end = times.back();
    std::vector<int> sample_steps;
    int total_steps = 0;
    for (double t : times) {
        sample_steps.push_back(static_cast<int>(std::llround(t / dt)));
        total_steps = std::max(total_steps, sample_steps.back());
    }

    const std::size_t n_times = times.size();
    constexpr int kChunk = 64;
    const int n_chunks = (settings.n_traj + kChunk - 1) / kChunk;
    std::vector<std::vector<Accumulator>> chunk_acc(n_chunks,
                                                    std::vector<Accumulator>(n_times));

    auto run_chunk = [&](int chunk) {
        auto& acc = chunk_acc[chunk];
        const int lo = chunk * kChunk;
        const int hi = std::min(settings.n_traj, lo + kChunk);
        std::vector<Eigen::Matrix4cd> snapshot(n_times);
        for (int traj = lo; traj < hi; ++traj) {
            TrajectoryRng rng(settings.seed, static_cast<std::uint64_t>(traj));
            // noise values at step midpoints
            const NoisePath path =
                sample_ou_path(kp, (total_steps + 0.5) * dt, dt, rng, 0.5 * dt);
            for (auto& s : snapshot) s.setZero();
            for (const auto& [w, psi0] : components) {
                Eigen::Vector4cd psi = psi0;
                int step = 0;
                for (std::size_t s = 0; s < n_times; ++s) {
                    const int target = sample_steps[s];
                    if (target > step) {
                        psi = propagate_trajectory(
                            psi, params.J, dt,
                            std::span(path.omega_a).subspan(step, target - step),
                            std::span(path.omega_b).subspan(step, target - step));
                        step = target;
                    }
                    snapshot[s] += w * psi * psi.adjoint();
                }
            }
            for (std::size_t s = 0; s < n_times; ++s) acc[s].add(snapshot[s]);
        }
    };

    unsigned n_threads = threads ? threads : std::thread::hardware_concurrency();
    n_threads = std::max(1u, std::min<unsigned>(n_threads, n_chunks));
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (unsigned w = 0; w < n_threads; ++w)
        pool.emplace_back([&] {
            for (int c; (c = next.fetch_add(1)) < n_chunks;) run_chunk(c);
        });
    for (auto& th : pool) th.join();

    std::vector<McResult> out(n_times);
    const double n = settings.n_traj;
    for (std::size_t s = 0; s < n_times; ++s) {
        Accumulator total;
        for (int c = 0; c < n_chunks; ++c) total.merge(chunk_acc[c][s]); // fixed order
        McResult& r = out[s];
        r.t = times[s];
        r.n_traj = settings.n_traj;
        r.rho.m = total.sum / n;
        if (settings.n_traj > 1) {
            const Eigen::Matrix4d var_re =
                (total.sumsq_re / n - r.rho.m.real().cwiseProduct(r.rho.m.real())).cwiseMax(0.0);
            const Eigen::Matrix4d var_im =
                (total.sumsq_im / n - r.rho.m.imag().cwiseProduct(r.rho.m.imag())).cwiseMax(0.0);
            r.se = ((var_re + var_im) / (n - 1.0)).cwiseSqrt();
        }
    }
    return out;
}

McResult evolve_montecarlo(const DensityMatrix& rho0, const ModelParams& params, double t_end,
                           const McSettings& settings, unsigned threads) {
    if (t_end < 0.0) throw std::domain_error("evolve_montecarlo: t_end must be >= 0");
    const double times[1] = {t_end};
    return evolve_montecarlo_curve(rho0, params, times, settings, threads).front();
}

} // namespace ouq
