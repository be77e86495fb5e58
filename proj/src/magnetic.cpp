#include "selfield/magnetic.hpp"

#include "selfield/integrate.hpp"

#include <algorithm>
#include <cmath>

namespace selfield {

MagneticResult solve_lambda(const SolutionRecord& rec) {
    MagneticResult out;
    if (rec.k.empty()) throw SolverError(ErrorKind::domain, "solve_lambda: record has no profiles");
    const double rs = rec.k.r.front();
    const double r0 = rec.k.r.back();
    const double beta = rec.beta0;

    if (std::all_of(rec.k.value.begin(), rec.k.value.end(), [](double v) { return v == 0.0; })) {
        out.lambda.r = rec.k.r;
        out.lambda.value.assign(rec.k.size(), 0.0);
        out.lambda.deriv.assign(rec.k.size(), 0.0);
        return out;
    }

    // source 2 k n, interpolated off the stored profiles (the lambda equation
    // is linear, so hand-scaled records stay consistent)
    auto rhs = [&rec](double r, const std::array<double, 2>& y, std::array<double, 2>& dy) {
        double src = 2.0 * rec.k.eval(r) * rec.nfun.eval(r);
        dy[0] = y[1];
        dy[1] = src + 2.0 * y[0] / (r * r) - 2.0 * y[1] / r;
    };

    // particular start: lambda ~ s0 r^2/4 for A (s0 = 2 k(0) n(0) = -beta^2),
    // lambda ~ -(3/5) beta^2 r^3 for B
    std::array<double, 2> y0{};
    if (rec.ansatz.variant == Ansatz::A) {
        y0[0] = -beta * beta * rs * rs / 4.0;
        y0[1] = -beta * beta * rs / 2.0;
    } else {
        y0[0] = -0.6 * beta * beta * rs * rs * rs;
        y0[1] = -1.8 * beta * beta * rs * rs;
    }

    IntegratorConfig cfg;
    cfg.abs_tol = 1e-13;
    cfg.rel_tol = 1e-11;
    Trajectory<2> traj = propagate<2>(rhs, y0, rs, r0, cfg);

    double lam = traj.y.back()[0];
    double dlam = traj.y.back()[1];
    // lambda ~ H r + mu/r^2  =>  3H = lambda' + 2 lambda/r
    double H = (dlam + 2.0 * lam / r0) / 3.0;
    if (!std::isfinite(H))
        throw SolverError(ErrorKind::numerical, "solve_lambda: growth coefficient not finite");
    out.growth_removed = H;
    out.gamma0 = -H;
    out.mu = r0 * r0 * (lam - H * r0);
    out.mu_identity = rec.ansatz.variant == Ansatz::A ? rec.q : rec.q / 3.0;

    // resample the corrected lambda onto the record mesh
    RadialProfile raw;
    raw.r = traj.r;
    raw.value.resize(traj.size());
    raw.deriv.resize(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
        raw.value[i] = traj.y[i][0];
        raw.deriv[i] = traj.y[i][1];
    }
    out.lambda.r = rec.k.r;
    out.lambda.value.resize(rec.k.size());
    out.lambda.deriv.resize(rec.k.size());
    for (std::size_t i = 0; i < rec.k.size(); ++i) {
        double r = rec.k.r[i];
        out.lambda.value[i] = raw.eval(r) - H * r;
        out.lambda.deriv[i] = raw.eval_deriv(r) - H;
    }
    return out;
}

double moment_identity_check(const SolutionRecord& rec, const MagneticResult& mag) {
    double w = rec.ansatz.variant == Ansatz::A ? 1.0 : 1.0 / 3.0;
    return std::abs(3.0 * mag.mu - 3.0 * w * rec.q);
}

} // namespace selfield
