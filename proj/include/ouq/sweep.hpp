#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <numbers>
#include <string>
#include <vector>

#include "ouq/core.hpp"
#include "ouq/measures.hpp"

namespace ouq {

enum class Engine { Analytic, Ode, MonteCarlo };

Engine parse_engine(const std::string& name);
EwlFamily parse_family(const std::string& name);

/// Inclusive linear grid with n points (n >= 1).
std::vector<double> linspace(double lo, double hi, int n);
/// Inclusive log-spaced grid with n points (lo, hi > 0).
std::vector<double> logspace(double lo, double hi, int n);

struct SweepConfig {
    EwlFamily family = EwlFamily::Phi;
    std::vector<double> r{0.95};
    std::vector<double> alpha{1.0 / std::numbers::sqrt2};
    std::vector<double> J{0.0};           // units of Gamma
    std::vector<double> gamma_ratio{0.1}; // gamma/Gamma
    double t_max = 10.0;                  // in Gamma*t
    int n_points = 1000;
    Engine engine = Engine::Analytic;
    std::uint64_t seed = 0;
    int n_traj = 20000;
    double mc_dt = 1e-3;
    bool fallback_ode = false;
    unsigned threads = 0; // 0 = hardware concurrency

    void validate() const;
};

/// One evolved time point of a single-parameter-point curve.
struct EvolveRow {
    double t = 0.0;
    XState x;
    double C = 0.0;
    double Bmax = 0.0;
};

/// Evolves one parameter point (the first entry of each range) on the config
/// grid with the selected engine and computes both measures per time point.
/// Analytic-engine degeneracy falls back to the ODE when fallback_ode is set
/// and throws DegenerateParametersError otherwise.
std::vector<EvolveRow> run_evolve_curve(const SweepConfig& config);

/// Same, for explicit scalar parameters.
std::vector<EvolveRow> run_curve_point(EwlFamily family, double r, double alpha, double J,
                                       double gamma_ratio, const SweepConfig& config);

void write_evolve_csv(std::ostream& os, const std::vector<EvolveRow>& rows);

/// Long-format sweep over the full range product; rows ordered by
/// (r, alpha, J, gamma_ratio, t) grid index regardless of worker scheduling.
void run_sweep_csv(std::ostream& os, const SweepConfig& config);

/// Writes the CSV files behind one of the published figures into outdir;
/// returns the paths written. Known ids: 1a 1b 1c 2 3 4 5.
std::vector<std::filesystem::path> run_figure(const std::string& id,
                                              const std::filesystem::path& outdir,
                                              const SweepConfig& base);

/// 17-significant-digit, locale-independent number formatting used in all CSVs.
std::string format_csv(double v);

} // namespace ouq
