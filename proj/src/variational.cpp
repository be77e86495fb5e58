#include "selfield/variational.hpp"

#include "selfield/integrate.hpp"

#include <algorithm>
#include <cmath>

namespace selfield {

double laguerre(int N, int a, double x) {
    if (N < 0) throw SolverError(ErrorKind::domain, "laguerre: N must be >= 0");
    double gm = 1.0;
    if (N == 0) return gm;
    double g = 1.0 + a - x;
    for (int m = 1; m < N; ++m) {
        double gn = ((2.0 * m + a + 1.0 - x) * g - (m + a) * gm) / (m + 1.0);
        gm = g;
        g = gn;
    }
    return g;
}

double laguerre_scaled(int N, int a, double x) {
    if (N < 0) throw SolverError(ErrorKind::domain, "laguerre: N must be >= 0");
    double e = std::exp(-0.5 * x);
    double gm = e;
    if (N == 0) return gm;
    double g = (1.0 + a - x) * e;
    for (int m = 1; m < N; ++m) {
        double gn = ((2.0 * m + a + 1.0 - x) * g - (m + a) * gm) / (m + 1.0);
        gm = g;
        g = gn;
    }
    return g;
}

namespace {

struct Shape {
    double f;
    double fp;
};

// trial shape and derivative; d/dx L_N^{(a)} = -L_{N-1}^{(a+1)}
Shape trial_shape(Ansatz ansatz, int N, double x) {
    int a = ansatz == Ansatz::A ? 1 : 3;
    double L = laguerre_scaled(N, a, x);
    double dL = N > 0 ? -laguerre_scaled(N - 1, a + 1, x) : 0.0;
    if (ansatz == Ansatz::A) return {L, dL - 0.5 * L};
    return {x * L, L + x * dL - 0.5 * x * L};
}

} // namespace

TrialIntegrals trial_integrals(Ansatz ansatz, int N) {
    int a = ansatz == Ansatz::A ? 1 : 3;
    double xmax = 4.0 * N + 2.0 * a + 60.0 + 10.0 * std::sqrt(double(N + 1));

    // y = [G, IT, IV, Ic, IS] with G' = f^2 x^2 and IS' = 2 G f^2 x
    // (integration by parts of int (G/x)^2 dx)
    auto rhs = [ansatz, N](double x, const std::array<double, 5>& y, std::array<double, 5>& dy) {
        Shape s = trial_shape(ansatz, N, x);
        double f2 = s.f * s.f;
        dy[0] = f2 * x * x;
        dy[1] = s.fp * s.fp * x * x;
        dy[2] = f2 * x;
        dy[3] = f2;
        dy[4] = 2.0 * y[0] * f2 * x;
    };
    IntegratorConfig cfg;
    cfg.abs_tol = 1e-13;
    cfg.rel_tol = 1e-12;
    cfg.h = 1e-3;
    Trajectory<5> traj = propagate<5>(rhs, {0, 0, 0, 0, 0}, 0.0, xmax, cfg);
    const auto& y = traj.y.back();
    return {y[0], y[1], y[2], y[3], y[4]};
}

int trial_zero_count(const TrialFamily& t) { return t.N; }

namespace {

struct EnergyTerms {
    double T, V, S, q;
};

EnergyTerms energy_terms(const TrialFamily& t, const TrialIntegrals& I, bool self_field) {
    if (!(t.amplitude > 0.0) || !(t.scale > 0.0))
        throw SolverError(ErrorKind::domain, "trial requires positive amplitude and scale");
    double c2 = t.amplitude * t.amplitude;
    double s = t.scale;
    EnergyTerms e;
    e.q = c2 * s * s * s * I.Iq;
    e.T = c2 * s * (I.IT + (t.ansatz.variant == Ansatz::B ? 2.0 * I.Ic : 0.0));
    e.V = c2 * s * s * I.IV;
    e.S = self_field ? 0.5 * c2 * c2 * s * s * s * s * s * I.IS : 0.0;
    return e;
}

EnergyBreakdown breakdown_from_terms(const EnergyTerms& e) {
    EnergyBreakdown eb;
    double E = e.T - e.V + e.S;
    eb.w_binding = -E;
    eb.self_energy = e.S;
    eb.epsilon = eb.w_binding - e.S;
    eb.w_binding_alt = e.T; // int n^2 r^2 dr of the trial
    eb.identity_residual =
        eb.w_binding != 0.0 ? std::abs(eb.w_binding - eb.w_binding_alt) / std::abs(eb.w_binding)
                            : 0.0;
    return eb;
}

// on the q = 1 manifold:  E(s) = A2/s^2 - A1/s
struct Reduced {
    double A1, A2;
};

Reduced reduced_coefficients(Ansatz ansatz, const TrialIntegrals& I, bool self_field) {
    Reduced r;
    r.A2 = (I.IT + (ansatz == Ansatz::B ? 2.0 * I.Ic : 0.0)) / I.Iq;
    r.A1 = I.IV / I.Iq - (self_field ? I.IS / (2.0 * I.Iq * I.Iq) : 0.0);
    return r;
}

double normalized_amplitude(double scale, const TrialIntegrals& I) {
    return 1.0 / std::sqrt(scale * scale * scale * I.Iq);
}

} // namespace

EnergyBreakdown energy_functional(const TrialFamily& t, bool self_field) {
    if (!(std::isfinite(t.amplitude) && std::isfinite(t.scale)))
        throw SolverError(ErrorKind::domain, "trial parameters must be finite");
    TrialIntegrals I = trial_integrals(t.ansatz.variant, t.N);
    return breakdown_from_terms(energy_terms(t, I, self_field));
}

double trial_charge(const TrialFamily& t) {
    TrialIntegrals I = trial_integrals(t.ansatz.variant, t.N);
    return t.amplitude * t.amplitude * t.scale * t.scale * t.scale * I.Iq;
}

VariationalResult optimize(AnsatzKind ansatz, int N, bool self_field) {
    if (N < 0) throw SolverError(ErrorKind::domain, "optimize: N must be >= 0");
    TrialIntegrals I = trial_integrals(ansatz.variant, N);
    Reduced rc = reduced_coefficients(ansatz.variant, I, self_field);
    int n = ansatz.principal(N);

    auto E = [&](double s) { return rc.A2 / (s * s) - rc.A1 / s; };

    // golden section on [a, b] around the linear-problem optimum s = n
    double a = 0.25 * n, b = 6.0 * n;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = E(c), fd = E(d);
    int iters = 0;
    while (b - a > 1e-8 * n && iters < 400) {
        ++iters;
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = E(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = E(d);
        }
    }
    double s = 0.5 * (a + b);
    // one parabolic refinement through (a, mid, b)
    {
        double m = s, fa = E(a), fm = E(m), fb = E(b);
        double num = (m - a) * (m - a) * (fm - fb) - (m - b) * (m - b) * (fm - fa);
        double den = (m - a) * (fm - fb) - (m - b) * (fm - fa);
        if (den != 0.0) {
            double sp = m - 0.5 * num / den;
            if (sp > 0.0 && std::isfinite(sp) && E(sp) <= fm) s = sp;
        }
    }

    VariationalResult out;
    out.trial.ansatz = ansatz;
    out.trial.N = N;
    out.trial.scale = s;
    out.trial.amplitude = normalized_amplitude(s, I);
    out.iterations = iters;
    out.converged = iters < 400;
    EnergyTerms terms = energy_terms(out.trial, I, self_field);
    out.energy = breakdown_from_terms(terms);
    out.w_var = out.energy.w_binding;
    return out;
}

VariationalResult optimize_two_param(AnsatzKind ansatz, int N, bool self_field) {
    TrialIntegrals I = trial_integrals(ansatz.variant, N);
    int n = ansatz.principal(N);
    const double penalty = 1e6;

    auto objective = [&](double lc, double ls) {
        TrialFamily t{ansatz, N, std::exp(lc), std::exp(ls)};
        EnergyTerms e = energy_terms(t, I, self_field);
        double E = e.T - e.V + e.S;
        double d = e.q - 1.0;
        return E + penalty * d * d;
    };

    // Nelder-Mead on (log amplitude, log scale)
    double s0 = double(n);
    std::array<std::array<double, 2>, 3> simplex{
        std::array<double, 2>{std::log(normalized_amplitude(s0, I)), std::log(s0)},
        std::array<double, 2>{std::log(normalized_amplitude(s0, I)) + 0.12, std::log(s0)},
        std::array<double, 2>{std::log(normalized_amplitude(s0, I)), std::log(s0) + 0.12},
    };
    std::array<double, 3> fv;
    for (int i = 0; i < 3; ++i) fv[i] = objective(simplex[i][0], simplex[i][1]);

    int iters = 0;
    for (; iters < 4000; ++iters) {
        std::array<int, 3> ord{0, 1, 2};
        std::sort(ord.begin(), ord.end(), [&](int i, int j) { return fv[i] < fv[j]; });
        auto& best = simplex[ord[0]];
        auto& worst = simplex[ord[2]];
        double spread = 0.0;
        for (int i = 0; i < 3; ++i) spread = std::max(spread, std::abs(fv[ord[0]] - fv[i]));
        double width = std::max(std::abs(simplex[ord[0]][0] - simplex[ord[2]][0]),
                                std::abs(simplex[ord[0]][1] - simplex[ord[2]][1]));
        if (spread < 1e-10 * (1.0 + std::abs(fv[ord[0]])) && width < 1e-10) break;

        std::array<double, 2> cen{0.5 * (simplex[ord[0]][0] + simplex[ord[1]][0]),
                                  0.5 * (simplex[ord[0]][1] + simplex[ord[1]][1])};
        std::array<double, 2> refl{2.0 * cen[0] - worst[0], 2.0 * cen[1] - worst[1]};
        double fr = objective(refl[0], refl[1]);
        if (fr < fv[ord[0]]) {
            std::array<double, 2> exp2{3.0 * cen[0] - 2.0 * worst[0], 3.0 * cen[1] - 2.0 * worst[1]};
            double fe = objective(exp2[0], exp2[1]);
            if (fe < fr) {
                worst = exp2;
                fv[ord[2]] = fe;
            } else {
                worst = refl;
                fv[ord[2]] = fr;
            }
        } else if (fr < fv[ord[1]]) {
            worst = refl;
            fv[ord[2]] = fr;
        } else {
            std::array<double, 2> con{0.5 * (cen[0] + worst[0]), 0.5 * (cen[1] + worst[1])};
            double fcon = objective(con[0], con[1]);
            if (fcon < fv[ord[2]]) {
                worst = con;
                fv[ord[2]] = fcon;
            } else {
                for (int i : {ord[1], ord[2]}) {
                    simplex[i][0] = 0.5 * (simplex[i][0] + best[0]);
                    simplex[i][1] = 0.5 * (simplex[i][1] + best[1]);
                    fv[i] = objective(simplex[i][0], simplex[i][1]);
                }
            }
        }
    }

    int ib = 0;
    for (int i = 1; i < 3; ++i)
        if (fv[i] < fv[ib]) ib = i;

    VariationalResult out;
    out.trial.ansatz = ansatz;
    out.trial.N = N;
    out.trial.amplitude = std::exp(simplex[ib][0]);
    out.trial.scale = std::exp(simplex[ib][1]);
    out.iterations = iters;
    out.converged = iters < 4000;
    EnergyTerms terms = energy_terms(out.trial, I, self_field);
    out.energy = breakdown_from_terms(terms);
    out.w_var = out.energy.w_binding;
    return out;
}

} // namespace selfield
