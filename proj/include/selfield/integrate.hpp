#ifndef SELFIELD_INTEGRATE_HPP
#define SELFIELD_INTEGRATE_HPP

#include "selfield/model.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace selfield {

/// Propagation engine configuration.
struct IntegratorConfig {
    StepMethod method = StepMethod::rk45_adaptive;
    double h = 1e-3; // fixed step (rk4) or initial step (rk45)
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    double h_min = 1e-14;
    double h_max = 0.0; // 0: no cap
    long max_steps = 4000000;
    /// abort when |y[blowup_index]| exceeds this (<= 0 disables)
    double blowup_threshold = 0.0;
    int blowup_index = 0;

    static IntegratorConfig from_grid(const RadialGrid& g) {
        IntegratorConfig c;
        c.method = g.method;
        c.h = g.h;
        c.abs_tol = g.abs_tol;
        c.rel_tol = g.rel_tol;
        return c;
    }
};

enum class TermCause { reached_r_end, event_fired, blowup, max_steps };

/// Sampled trajectory: states and derivatives at every accepted node.
template <std::size_t N>
struct Trajectory {
    std::vector<double> r;
    std::vector<std::array<double, N>> y;
    std::vector<std::array<double, N>> dy;
    TermCause cause = TermCause::reached_r_end;
    int event_id = -1;
    double r_term = 0.0;

    std::size_t size() const { return r.size(); }
    const std::array<double, N>& back() const { return y.back(); }
};

/// Observer called at every accepted node; returning true terminates the
/// propagation with cause event_fired.  May carry mutable state.
template <std::size_t N>
struct Event {
    int id = 0;
    std::function<bool(double r, const std::array<double, N>& y, const std::array<double, N>& dy)> fn;
};

namespace detail {

// Dormand-Prince 5(4) tableau
constexpr double dp_c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double dp_a[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double dp_e[7] = {71.0 / 57600,   0.0,        -71.0 / 16695, 71.0 / 1920,
                            -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

} // namespace detail

/// Propagates y' = f(r, y) from r0 to r1, sampling every accepted step.
/// Deterministic for a fixed config.  Throws SolverError(stiffness) on step
/// underflow and SolverError(numerical) when the RHS produces non-finite
/// values.
template <std::size_t N, class F>
Trajectory<N> propagate(F&& f, std::array<double, N> y0, double r0, double r1,
                        const IntegratorConfig& cfg, const std::vector<Event<N>>& events = {}) {
    if (!(r0 < r1)) throw SolverError(ErrorKind::domain, "propagate requires r0 < r1");
    for (double v : y0)
        if (!std::isfinite(v)) throw SolverError(ErrorKind::domain, "propagate: non-finite initial state");

    Trajectory<N> traj;
    auto push = [&traj](double r, const std::array<double, N>& y, const std::array<double, N>& dy) {
        traj.r.push_back(r);
        traj.y.push_back(y);
        traj.dy.push_back(dy);
    };
    auto finite = [](const std::array<double, N>& v) {
        for (double x : v)
            if (!std::isfinite(x)) return false;
        return true;
    };

    std::array<double, N> y = y0, dy{};
    double r = r0;
    f(r, y, dy);
    if (!finite(dy)) throw SolverError(ErrorKind::numerical, "propagate: NaN in RHS at start");
    push(r, y, dy);

    auto handle_node = [&](double rn, const std::array<double, N>& yn,
                           const std::array<double, N>& dyn) -> bool {
        push(rn, yn, dyn);
        if (cfg.blowup_threshold > 0.0 &&
            std::abs(yn[std::size_t(cfg.blowup_index)]) > cfg.blowup_threshold) {
            traj.cause = TermCause::blowup;
            traj.r_term = rn;
            return true;
        }
        for (const auto& ev : events) {
            if (ev.fn && ev.fn(rn, yn, dyn)) {
                traj.cause = TermCause::event_fired;
                traj.event_id = ev.id;
                traj.r_term = rn;
                return true;
            }
        }
        return false;
    };

    if (cfg.method == StepMethod::rk4_fixed) {
        const double h = cfg.h;
        long nsteps = long(std::ceil((r1 - r0) / h));
        std::array<double, N> k1{}, k2{}, k3{}, k4{}, yt{};
        for (long i = 0; i < nsteps; ++i) {
            double hs = std::min(h, r1 - r);
            if (hs <= 0.0) break;
            k1 = dy;
            for (std::size_t j = 0; j < N; ++j) yt[j] = y[j] + 0.5 * hs * k1[j];
            f(r + 0.5 * hs, yt, k2);
            for (std::size_t j = 0; j < N; ++j) yt[j] = y[j] + 0.5 * hs * k2[j];
            f(r + 0.5 * hs, yt, k3);
            for (std::size_t j = 0; j < N; ++j) yt[j] = y[j] + hs * k3[j];
            f(r + hs, yt, k4);
            for (std::size_t j = 0; j < N; ++j)
                y[j] += hs / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            r += hs;
            f(r, y, dy);
            if (!finite(y) || !finite(dy))
                throw SolverError(ErrorKind::numerical, "propagate: NaN at r=" + std::to_string(r));
            if (handle_node(r, y, dy)) return traj;
        }
        traj.cause = TermCause::reached_r_end;
        traj.r_term = r;
        return traj;
    }

    // Dormand-Prince 5(4), FSAL, standard PI-free step control
    double h = cfg.h > 0.0 ? cfg.h : 1e-4;
    double h_max = cfg.h_max > 0.0 ? cfg.h_max : (r1 - r0);
    h = std::min(h, h_max);
    std::array<std::array<double, N>, 7> k;
    k[0] = dy;
    std::array<double, N> yt{}, ynew{}, dynew{};
    long steps = 0;
    while (r < r1) {
        if (++steps > cfg.max_steps) {
            traj.cause = TermCause::max_steps;
            traj.r_term = r;
            return traj;
        }
        h = std::min(h, r1 - r);
        bool rejected = false;
        for (;;) {
            for (int st = 1; st < 7; ++st) {
                for (std::size_t j = 0; j < N; ++j) {
                    double acc = 0.0;
                    for (int m = 0; m < st; ++m) acc += detail::dp_a[st][m] * k[m][j];
                    yt[j] = y[j] + h * acc;
                }
                f(r + detail::dp_c[st] * h, yt, k[st]);
            }
            ynew = yt; // stage 7 evaluates at the 5th-order solution
            dynew = k[6];
            if (!finite(ynew) || !finite(dynew))
                throw SolverError(ErrorKind::numerical,
                                  "propagate: NaN in RHS near r=" + std::to_string(r));
            double err = 0.0;
            for (std::size_t j = 0; j < N; ++j) {
                double e = 0.0;
                for (int m = 0; m < 7; ++m) e += detail::dp_e[m] * k[m][j];
                e *= h;
                double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[j]), std::abs(ynew[j]));
                double w = e / sc;
                err += w * w;
            }
            err = std::sqrt(err / double(N));
            if (err <= 1.0) {
                double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
                double hnext = h * std::min(5.0, std::max(0.2, fac));
                if (rejected) hnext = std::min(hnext, h);
                r += h;
                y = ynew;
                k[0] = dynew;
                h = std::min(hnext, h_max);
                break;
            }
            rejected = true;
            h *= std::max(0.1, 0.9 * std::pow(err, -0.2));
            if (h < cfg.h_min)
                throw SolverError(ErrorKind::stiffness,
                                  "propagate: step underflow at r=" + std::to_string(r));
        }
        if (handle_node(r, y, k[0])) return traj;
    }
    traj.cause = TermCause::reached_r_end;
    traj.r_term = r;
    return traj;
}

// ---- quadrature over sampled meshes ----------------------------------------

/// Derivative-corrected trapezoid on one panel: O(h^4) for smooth integrands.
inline double panel_integral(double h, double f0, double f1, double df0, double df1) {
    return 0.5 * h * (f0 + f1) + h * h / 12.0 * (df0 - df1);
}

/// Integral of a nodal function given values and derivatives on a mesh.
double mesh_integral(const std::vector<double>& r, const std::vector<double>& f,
                     const std::vector<double>& df);

/// Cumulative version (result[i] = integral up to r[i]).
std::vector<double> mesh_cumulative(const std::vector<double>& r, const std::vector<double>& f,
                                    const std::vector<double>& df);

// ---- radial Poisson ---------------------------------------------------------

struct PoissonResult {
    RadialProfile phi;       // potential with phi(inf) = 0
    double total_charge = 0; // int rho r^2 dr including the fitted tail
    double tail_charge = 0;  // contribution of the exponential tail fit
    bool tail_warning = false;
};

/// Solves phi'' + (2/r) phi' = rho on the source mesh via the radial Green
/// construction phi(r) = -(1/r) int_0^r s^2 rho ds - int_r^inf s rho ds.
/// The tail beyond the mesh is an exponential fit on the last decade; a
/// non-decaying tail sets tail_warning.
PoissonResult poisson_particular(const RadialProfile& source);

/// (1/2) int (phi')^2 r^2 dr for the potential of the given source
double field_self_energy(const RadialProfile& source);

} // namespace selfield

#endif
