#include "ouq/measures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

namespace ouq {

namespace {

const Matrix4c& spin_flip() {
    // sigma_y x sigma_y in the standard basis
    static const Matrix4c s = [] {
        Matrix4c m = Matrix4c::Zero();
        m(0, 3) = -1.0;
        m(1, 2) = 1.0;
        m(2, 1) = 1.0;
        m(3, 0) = -1.0;
        return m;
    }();
    return s;
}

Eigen::Matrix2cd pauli(int i) {
    Eigen::Matrix2cd s;
    switch (i) {
    case 0: s << 0, 1, 1, 0; break;
    case 1: s << 0, Complex(0, -1), Complex(0, 1), 0; break;
    default: s << 1, 0, 0, -1; break;
    }
    return s;
}

Eigen::Matrix2cd direction_observable(double theta, double phi) {
    return std::sin(theta) * std::cos(phi) * pauli(0) +
           std::sin(theta) * std::sin(phi) * pauli(1) + std::cos(theta) * pauli(2);
}

double correlator(const DensityMatrix& rho, const Eigen::Matrix2cd& oa,
                  const Eigen::Matrix2cd& ob) {
    Matrix4c op;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            op.block<2, 2>(2 * i, 2 * j) = oa(i, j) * ob;
    return (rho.m * op).trace().real();
}

/// Nelder-Mead on R^n, minimizing. Returns best point found.
std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& fn,
                                std::vector<double> x0, double scale, int max_evals) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> pts(n + 1, x0);
    std::vector<double> val(n + 1);
    int evals = 0;
    for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += scale;
    for (std::size_t i = 0; i <= n; ++i) { val[i] = fn(pts[i]); ++evals; }

    auto order = [&] {
        std::vector<std::size_t> idx(n + 1);
        for (std::size_t i = 0; i <= n; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return val[a] < val[b]; });
        std::vector<std::vector<double>> p2;
        std::vector<double> v2;
        for (auto i : idx) { p2.push_back(pts[i]); v2.push_back(val[i]); }
        pts = std::move(p2);
        val = std::move(v2);
    };

    while (evals < max_evals) {
        order();
        if (std::abs(val[n] - val[0]) < 1e-12) break;
        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[i][j] / double(n);
        auto blend = [&](double coef) {
            std::vector<double> p(n);
            for (std::size_t j = 0; j < n; ++j) p[j] = centroid[j] + coef * (pts[n][j] - centroid[j]);
            return p;
        };
        auto xr = blend(-1.0);
        double fr = fn(xr); ++evals;
        if (fr < val[0]) {
            auto xe = blend(-2.0);
            double fe = fn(xe); ++evals;
            if (fe < fr) { pts[n] = xe; val[n] = fe; }
            else { pts[n] = xr; val[n] = fr; }
        } else if (fr < val[n - 1]) {
            pts[n] = xr; val[n] = fr;
        } else {
            auto xc = blend(0.5);
            double fc = fn(xc); ++evals;
            if (fc < val[n]) { pts[n] = xc; val[n] = fc; }
            else {
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t j = 0; j < n; ++j)
                        pts[i][j] = pts[0][j] + 0.5 * (pts[i][j] - pts[0][j]);
                    val[i] = fn(pts[i]); ++evals;
                }
            }
        }
    }
    order();
    return pts[0];
}

} // namespace

double concurrence_general(const DensityMatrix& rho) {
    rho.validate();
    const Matrix4c trans = rho.m * spin_flip() * rho.m.conjugate() * spin_flip();
    Eigen::ComplexEigenSolver<Matrix4c> es(trans, false);
    std::array<double, 4> lam{};
    for (int i = 0; i < 4; ++i) {
        const Complex ev = es.eigenvalues()(i);
        if (std::abs(ev.imag()) > 1e-8 || ev.real() < -1e-8)
            throw NumericDegradationError("spin-flip spectrum left the real nonnegative axis");
        lam[i] = std::max(0.0, ev.real());
    }
    std::sort(lam.begin(), lam.end(), std::greater<>());
    const double c = std::sqrt(lam[0]) - std::sqrt(lam[1]) - std::sqrt(lam[2]) - std::sqrt(lam[3]);
    return std::clamp(c, 0.0, 1.0);
}

double concurrence_x(const XState& x) {
    const double c = 2.0 * std::max({0.0,
                                     std::abs(x.rho23) - std::sqrt(std::max(0.0, x.rho11 * x.rho44)),
                                     std::abs(x.rho14) - std::sqrt(std::max(0.0, x.rho22 * x.rho33))});
    return std::min(c, 1.0);
}

BellX bell_max_x(const XState& x) {
    BellX b;
    b.P = x.rho11 + x.rho44 - x.rho22 - x.rho33;
    b.Q = 2.0 * (std::abs(x.rho14) + std::abs(x.rho23));
    b.bmax = 2.0 * std::hypot(b.P, b.Q);
    return b;
}

double bell_max_horodecki(const DensityMatrix& rho) {
    Eigen::Matrix3d t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Matrix4c op;
            const Eigen::Matrix2cd si = pauli(i), sj = pauli(j);
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    op.block<2, 2>(2 * a, 2 * b) = si(a, b) * sj;
            t(i, j) = (rho.m * op).trace().real();
        }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(t.transpose() * t, Eigen::EigenvaluesOnly);
    const auto u = es.eigenvalues(); // ascending
    return 2.0 * std::sqrt(std::max(0.0, u(1) + u(2)));
}

double bell_value(const DensityMatrix& rho, const BellAngles& g) {
    const auto oa = direction_observable(g.theta_a, g.phi_a);
    const auto oap = direction_observable(g.theta_a_prime, g.phi_a);
    const auto ob = direction_observable(g.theta_b, g.phi_b);
    const auto obp = direction_observable(g.theta_b_prime, g.phi_b);
    return std::abs(correlator(rho, oa, ob) - correlator(rho, oa, obp)) +
           correlator(rho, oap, ob) + correlator(rho, oap, obp);
}

std::pair<double, BellAngles> bell_numeric_max(const DensityMatrix& rho) {
    const double pi = M_PI;
    auto objective = [&](const std::vector<double>& v) {
        BellAngles g{v[0], v[1], v[2], v[3], v[4], v[5]};
        return -bell_value(rho, g);
    };

    // 16 starts: coarse theta grid x canonical azimuths, plus the textbook
    // CHSH setting.
    std::vector<std::vector<double>> starts;
    for (double ta : {0.0, pi / 2})
        for (double tb : {pi / 4, 3 * pi / 4})
            for (double pa : {0.0, pi / 2})
                for (double pb : {0.0, pi / 2})
                    starts.push_back({ta, ta + pi / 2, tb, tb - pi / 2, pa, pb});
    starts[0] = {0.0, pi / 2, pi / 4, 3 * pi / 4, 0.0, 0.0};

    double best = -1e300;
    BellAngles best_angles;
    for (const auto& s : starts) {
        const auto x = nelder_mead(objective, s, 0.3, 2000);
        const double v = -objective(x);
        if (v > best) {
            best = v;
            best_angles = BellAngles{x[0], x[1], x[2], x[3], x[4], x[5]};
        }
    }
    return {best, best_angles};
}

MeasureSample measure_x(const XState& x, double t) {
    MeasureSample s;
    s.t = t;
    s.C = concurrence_x(x);
    const BellX b = bell_max_x(x);
    s.Bmax = b.bmax;
    s.P = b.P;
    s.Q = b.Q;
    return s;
}

} // namespace ouq
