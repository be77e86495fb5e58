#include "selfield/observables.hpp"

#include "selfield/integrate.hpp"

#include <cmath>

namespace selfield {

namespace {

// quadrature of k^2 r^2, n^2 r^2, (U')^2 r^2, k^2 r over the stored mesh;
// nodal derivatives reconstructed through the governing equations
struct ProfileQuads {
    double q = 0.0, n2 = 0.0, du2 = 0.0, vq = 0.0;
};

ProfileQuads profile_quads(const SolutionRecord& rec) {
    const auto& r = rec.k.r;
    std::size_t m = r.size();
    std::vector<double> fq(m), dfq(m), fn(m), dfn(m), fu(m), dfu(m), fv(m), dfv(m);
    for (std::size_t i = 0; i < m; ++i) {
        double ri = r[i];
        double k = rec.k.value[i], kp = rec.k.deriv[i];
        double n = rec.nfun.value[i], np = rec.nfun.deriv[i];
        double du = rec.u.deriv[i];
        double ddu = rec.self_field ? -k * k - 2.0 * du / ri : 0.0;
        fq[i] = k * k * ri * ri;
        dfq[i] = 2.0 * k * kp * ri * ri + 2.0 * k * k * ri;
        fn[i] = n * n * ri * ri;
        dfn[i] = 2.0 * n * np * ri * ri + 2.0 * n * n * ri;
        fu[i] = du * du * ri * ri;
        dfu[i] = 2.0 * du * ddu * ri * ri + 2.0 * du * du * ri;
        fv[i] = k * k * ri;
        dfv[i] = 2.0 * k * kp * ri + k * k;
    }
    ProfileQuads out;
    out.q = mesh_integral(r, fq, dfq);
    out.n2 = mesh_integral(r, fn, dfn);
    out.du2 = mesh_integral(r, fu, dfu);
    out.vq = mesh_integral(r, fv, dfv);
    return out;
}

// analytic continuation beyond r0: k ~ k(r0) e^{-sqrt(eps)(r-r0)}, U' ~ -q/r^2
struct Tails {
    double q = 0.0, n2 = 0.0, du2 = 0.0, vq = 0.0;
};

Tails profile_tails(const SolutionRecord& rec) {
    Tails t;
    if (!(rec.epsilon > 0.0)) return t;
    double r0 = rec.k.r.back();
    double k0 = rec.k.value.back();
    double se = std::sqrt(rec.epsilon);
    t.q = k0 * k0 * (r0 * r0 / (2.0 * se) + r0 / (2.0 * rec.epsilon) +
                     1.0 / (4.0 * rec.epsilon * se));
    t.n2 = rec.epsilon * t.q;
    t.vq = k0 * k0 * (r0 / (2.0 * se) + 1.0 / (4.0 * rec.epsilon));
    if (rec.self_field) t.du2 = rec.q_gauss * rec.q_gauss / r0;
    return t;
}

} // namespace

EnergyBreakdown binding_energy(const SolutionRecord& rec) {
    if (rec.k.empty()) throw SolverError(ErrorKind::domain, "binding_energy: empty record");
    EnergyBreakdown eb;
    double r0 = rec.u.r.back();
    eb.epsilon = rec.self_field ? rec.u.value.back() + r0 * rec.u.deriv.back() : rec.delta0;

    ProfileQuads pq = profile_quads(rec);
    Tails t = profile_tails(rec);
    eb.self_energy = 0.5 * (pq.du2 + t.du2);
    eb.w_binding = eb.epsilon + eb.self_energy;
    eb.w_binding_alt = pq.n2 + t.n2;
    eb.identity_residual = std::abs(eb.w_binding - eb.w_binding_alt) / eb.w_binding;
    if (eb.identity_residual > 1e-2)
        throw SolverError(ErrorKind::not_converged,
                          "binding_energy: identity residual above 1e-2, record not converged",
                          rec.beta0, rec.delta0);
    return eb;
}

BohrFit bohr_law_fit(const std::vector<SolutionRecord>& records) {
    if (records.size() < 1) throw SolverError(ErrorKind::domain, "bohr_law_fit: no records");
    BohrFit fit;
    for (const auto& rec : records) {
        fit.n.push_back(rec.n);
        fit.wn2.push_back(rec.w_binding * rec.n * rec.n);
    }
    double sum = 0.0;
    for (double v : fit.wn2) sum += v;
    fit.W = sum / double(fit.wn2.size());
    for (double v : fit.wn2) fit.residual.push_back(v - fit.W);
    return fit;
}

double angular_momentum(const SolutionRecord& rec) {
    return 0.5 * rec.q * rec.ansatz.sign_factor();
}

DimensionalReport dimensional_report(const SolutionRecord& rec, const DimensionalConstants& c) {
    DimensionalReport rep;
    rep.n = rec.n;
    double ea2 = rec.epsilon * c.alpha * c.alpha;
    rep.omega = (1.0 - ea2) / (1.0 + ea2);
    rep.w_binding_rydberg = 4.0 * rec.w_binding;
    rep.w_binding_eV = rep.w_binding_rydberg * c.rydberg_eV;
    rep.w_binding_exact = rep.w_binding_rydberg / (1.0 + ea2);
    rep.mu_phys = rec.mu * (1.0 + ea2); // mu * 2/(1+omega)
    rep.j_hbar = rec.j;
    rep.effective_rydberg = 4.0 * rec.w_binding * rec.n * rec.n;
    return rep;
}

double renormalization_factor_sq(double w_fit) {
    if (!(w_fit > 0.0)) throw SolverError(ErrorKind::domain, "renormalization factor needs W > 0");
    return 1.0 / (4.0 * w_fit);
}

double virial_residual(const SolutionRecord& rec) {
    return rec.int_k2_r - 2.0 * rec.w_binding_alt - rec.self_energy;
}

} // namespace selfield
