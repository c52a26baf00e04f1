#include "ouq/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>

#include "ouq/analytic.hpp"
#include "ouq/montecarlo.hpp"
#include "ouq/ode.hpp"

namespace ouq {

Engine parse_engine(const std::string& name) {
    if (name == "analytic") return Engine::Analytic;
    if (name == "ode") return Engine::Ode;
    if (name == "montecarlo" || name == "mc") return Engine::MonteCarlo;
    throw ValidationError("engine", "unknown engine '" + name + "'");
}

EwlFamily parse_family(const std::string& name) {
    if (name == "phi" || name == "Phi") return EwlFamily::Phi;
    if (name == "psi" || name == "Psi") return EwlFamily::Psi;
    throw ValidationError("family", "unknown family '" + name + "'");
}

std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 1) throw ValidationError("n", "grid needs at least one point");
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = lo;
        return v;
    }
    for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
    return v;
}

std::vector<double> logspace(double lo, double hi, int n) {
    if (!(lo > 0.0) || !(hi > 0.0))
        throw ValidationError("range", "log grid endpoints must be positive");
    auto v = linspace(std::log(lo), std::log(hi), n);
    for (auto& x : v) x = std::exp(x);
    return v;
}

void SweepConfig::validate() const {
    if (r.empty() || alpha.empty() || J.empty() || gamma_ratio.empty())
        throw ValidationError("ranges", "parameter ranges must be nonempty");
    for (double g : gamma_ratio)
        if (!(g >= 0.01))
            throw ValidationError("gamma_ratio", "gamma/Gamma must be >= 0.01, got " + std::to_string(g));
    for (double rv : r) EwlSpec{family, rv, alpha.front()}.validate();
    for (double av : alpha) EwlSpec{family, r.front(), av}.validate();
    for (double jv : J)
        if (!(jv >= 0.0)) throw ValidationError("J", "must be nonnegative");
    if (!(t_max > 0.0)) throw ValidationError("t_max", "must be positive");
    if (n_points < 2) throw ValidationError("n_points", "need at least 2 time samples");
    if (n_traj < 1) throw ValidationError("n_traj", "must be >= 1");
}

std::string format_csv(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

/// Analytic evaluation of one curve; J below threshold uses the J=0 form.
std::vector<XState> analytic_curve(const XState& x0, const ModelParams& params,
                                   const std::vector<double>& times) {
    std::vector<XState> out;
    out.reserve(times.size());
    if (params.J < 1e-10 * params.Gamma) {
        const KernelParams kp{params.Gamma, params.gamma};
        for (double t : times) {
            const double ef2 = std::exp(-2.0 * decay_f(kp, t));
            XState x = x0;
            x.rho14 = x0.rho14 * ef2;
            x.rho23 = x0.rho23 * ef2;
            out.push_back(x);
        }
        return out;
    }
    AnalyticPropagator prop(params);
    for (double t : times) out.push_back(prop.x_at(x0, t));
    return out;
}

std::vector<XState> ode_curve_x(const XState& x0, const ModelParams& params,
                                const std::vector<double>& times) {
    const auto rhos = evolve_ode_curve(embed(x0), params, times);
    std::vector<XState> out;
    out.reserve(rhos.size());
    for (const auto& rho : rhos) out.push_back(project_x(rho, 1e-9));
    return out;
}

std::vector<XState> mc_curve_x(const XState& x0, const ModelParams& params,
                               const std::vector<double>& times, const SweepConfig& config) {
    McSettings ms;
    ms.n_traj = config.n_traj;
    ms.dt = config.mc_dt;
    ms.seed = config.seed;
    const auto res = evolve_montecarlo_curve(embed(x0), params, times, ms, config.threads);
    std::vector<XState> out;
    out.reserve(res.size());
    for (const auto& r : res) out.push_back(project_x(r.rho, 1e-6));
    return out;
}

std::vector<EvolveRow> rows_from(const std::vector<double>& times, const std::vector<XState>& xs) {
    std::vector<EvolveRow> rows(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        rows[i].t = times[i];
        rows[i].x = xs[i];
        const auto m = measure_x(xs[i], times[i]);
        rows[i].C = m.C;
        rows[i].Bmax = m.Bmax;
    }
    return rows;
}

} // namespace

std::vector<EvolveRow> run_curve_point(EwlFamily family, double r, double alpha, double J,
                                       double gamma_ratio, const SweepConfig& config) {
    const EwlSpec spec{family, r, alpha};
    spec.validate();
    const XState x0 = build_ewl(spec);
    const ModelParams params{J, 1.0, gamma_ratio}; // Gamma = 1 time unit
    const auto times = linspace(0.0, config.t_max, config.n_points);

    std::vector<XState> xs;
    switch (config.engine) {
    case Engine::Analytic:
        try {
            xs = analytic_curve(x0, params, times);
        } catch (const DegenerateParametersError&) {
            if (!config.fallback_ode) throw;
            xs = ode_curve_x(x0, params, times);
        }
        break;
    case Engine::Ode:
        xs = ode_curve_x(x0, params, times);
        break;
    case Engine::MonteCarlo:
        xs = mc_curve_x(x0, params, times, config);
        break;
    }
    return rows_from(times, xs);
}

std::vector<EvolveRow> run_evolve_curve(const SweepConfig& config) {
    config.validate();
    return run_curve_point(config.family, config.r.front(), config.alpha.front(),
                           config.J.front(), config.gamma_ratio.front(), config);
}

void write_evolve_csv(std::ostream& os, const std::vector<EvolveRow>& rows) {
    os << "t,rho11,rho22,rho33,rho44,re_rho14,im_rho14,re_rho23,im_rho23,C,Bmax\n";
    for (const auto& row : rows) {
        os << format_csv(row.t) << ',' << format_csv(row.x.rho11) << ','
           << format_csv(row.x.rho22) << ',' << format_csv(row.x.rho33) << ','
           << format_csv(row.x.rho44) << ',' << format_csv(row.x.rho14.real()) << ','
           << format_csv(row.x.rho14.imag()) << ',' << format_csv(row.x.rho23.real()) << ','
           << format_csv(row.x.rho23.imag()) << ',' << format_csv(row.C) << ','
           << format_csv(row.Bmax) << '\n';
    }
}

namespace {

struct GridPoint {
    double r, alpha, J, gamma_ratio;
};

/// Runs fn over all grid points on a pool, preserving grid order in the output.
template <typename Fn>
void for_grid_ordered(const SweepConfig& config, Fn&& fn) {
    std::vector<GridPoint> grid;
    for (double r : config.r)
        for (double a : config.alpha)
            for (double j : config.J)
                for (double g : config.gamma_ratio) grid.push_back({r, a, j, g});

    std::vector<std::vector<EvolveRow>> results(grid.size());
    unsigned n_threads = config.threads ? config.threads : std::thread::hardware_concurrency();
    // Monte-Carlo curves parallelize internally; everything else per point.
    if (config.engine == Engine::MonteCarlo) n_threads = 1;
    n_threads = std::max(1u, std::min<unsigned>(n_threads, grid.size()));

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < grid.size();) {
            try {
                results[i] = run_curve_point(config.family, grid[i].r, grid[i].alpha, grid[i].J,
                                             grid[i].gamma_ratio, config);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < n_threads; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);

    for (std::size_t i = 0; i < grid.size(); ++i) fn(grid[i], results[i]);
}

} // namespace

void run_sweep_csv(std::ostream& os, const SweepConfig& config) {
    config.validate();
    os << "family,r,alpha,J,gamma_ratio,t,C,Bmax,P,Q\n";
    const char* fam = config.family == EwlFamily::Phi ? "phi" : "psi";
    for_grid_ordered(config, [&](const GridPoint& p, const std::vector<EvolveRow>& rows) {
        for (const auto& row : rows) {
            const auto b = bell_max_x(row.x);
            os << fam << ',' << format_csv(p.r) << ',' << format_csv(p.alpha) << ','
               << format_csv(p.J) << ',' << format_csv(p.gamma_ratio) << ','
               << format_csv(row.t) << ',' << format_csv(row.C) << ',' << format_csv(row.Bmax)
               << ',' << format_csv(b.P) << ',' << format_csv(b.Q) << '\n';
        }
    });
}

namespace {

std::filesystem::path write_figure_file(const std::filesystem::path& outdir,
                                        const std::string& name, const SweepConfig& config,
                                        const std::string& lead_column,
                                        double GridPoint::* lead_field) {
    const auto path = outdir / name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string());
    if (lead_column.empty())
        os << "t,C,bmax_minus_2\n";
    else
        os << lead_column << ",t,C,bmax_minus_2\n";
    for_grid_ordered(config, [&](const GridPoint& p, const std::vector<EvolveRow>& rows) {
        for (const auto& row : rows) {
            if (!lead_column.empty()) os << format_csv(p.*lead_field) << ',';
            os << format_csv(row.t) << ',' << format_csv(row.C) << ','
               << format_csv(row.Bmax - 2.0) << '\n';
        }
    });
    return path;
}

} // namespace

std::vector<std::filesystem::path> run_figure(const std::string& id,
                                              const std::filesystem::path& outdir,
                                              const SweepConfig& base) {
    std::filesystem::create_directories(outdir);
    SweepConfig cfg = base;
    cfg.family = EwlFamily::Phi;
    std::vector<std::filesystem::path> written;

    if (id == "1a" || id == "1b") {
        cfg.r = {0.95};
        cfg.alpha = {1.0};
        cfg.J = {id == "1a" ? 0.4 : 0.8};
        cfg.gamma_ratio = {0.1};
        written.push_back(write_figure_file(outdir, "figure" + id + ".csv", cfg, "", nullptr));
    } else if (id == "1c") {
        cfg.r = {0.95};
        cfg.alpha = {0.5}; // 1/sqrt(4)
        cfg.J = {0.0, 0.4, 0.8};
        cfg.gamma_ratio = {0.1};
        written.push_back(write_figure_file(outdir, "figure1c.csv", cfg, "J", &GridPoint::J));
    } else if (id == "2") {
        cfg.r = {0.95};
        cfg.alpha = {1.0};
        cfg.J = {0.5};
        cfg.gamma_ratio = logspace(0.01, 10.0, 101);
        written.push_back(
            write_figure_file(outdir, "figure2.csv", cfg, "gamma_ratio", &GridPoint::gamma_ratio));
    } else if (id == "3") {
        cfg.alpha = {1.0};
        cfg.J = {0.5};
        cfg.r = linspace(0.0, 1.0, 101);
        cfg.gamma_ratio = {10.0};
        written.push_back(write_figure_file(outdir, "figure3_markovian.csv", cfg, "r", &GridPoint::r));
        cfg.gamma_ratio = {0.1};
        written.push_back(
            write_figure_file(outdir, "figure3_nonmarkovian.csv", cfg, "r", &GridPoint::r));
    } else if (id == "4" || id == "5") {
        cfg.alpha = linspace(0.0, 1.0, 101);
        cfg.J = {id == "4" ? 0.0 : 0.5};
        cfg.gamma_ratio = {0.1};
        cfg.r = {0.95};
        written.push_back(write_figure_file(outdir, "figure" + id + "_r0.95.csv", cfg, "alpha",
                                            &GridPoint::alpha));
        cfg.r = {1.0};
        written.push_back(
            write_figure_file(outdir, "figure" + id + "_r1.csv", cfg, "alpha", &GridPoint::alpha));
    } else {
        throw ValidationError("figure", "unknown figure id '" + id + "'");
    }
    return written;
}

} // namespace ouq
