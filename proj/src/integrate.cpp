#include "selfield/integrate.hpp"

#include <algorithm>
#include <cmath>

namespace selfield {

double mesh_integral(const std::vector<double>& r, const std::vector<double>& f,
                     const std::vector<double>& df) {
    if (r.size() != f.size() || r.size() < 2)
        throw SolverError(ErrorKind::domain, "mesh_integral: bad mesh");
    bool corrected = df.size() == r.size();
    double acc = 0.0;
    for (std::size_t i = 1; i < r.size(); ++i) {
        double h = r[i] - r[i - 1];
        acc += corrected ? panel_integral(h, f[i - 1], f[i], df[i - 1], df[i])
                         : 0.5 * h * (f[i - 1] + f[i]);
    }
    return acc;
}

std::vector<double> mesh_cumulative(const std::vector<double>& r, const std::vector<double>& f,
                                    const std::vector<double>& df) {
    if (r.size() != f.size() || r.empty())
        throw SolverError(ErrorKind::domain, "mesh_cumulative: bad mesh");
    bool corrected = df.size() == r.size();
    std::vector<double> out(r.size(), 0.0);
    for (std::size_t i = 1; i < r.size(); ++i) {
        double h = r[i] - r[i - 1];
        out[i] = out[i - 1] + (corrected ? panel_integral(h, f[i - 1], f[i], df[i - 1], df[i])
                                         : 0.5 * h * (f[i - 1] + f[i]));
    }
    return out;
}

namespace {

// exponential fit rho ~ C exp(-a r) on the last decade of the mesh
struct TailFit {
    double a = 0.0;
    double c = 0.0;
    bool ok = false;
};

TailFit fit_exp_tail(const RadialProfile& src) {
    TailFit fit;
    std::size_t m = src.size();
    if (m < 4) return fit;
    double r_end = src.r.back();
    std::size_t i0 = m - 2;
    while (i0 > 0 && src.r[i0] > 0.9 * r_end) --i0;
    double v0 = src.value[i0], v1 = src.value.back();
    if (!(v0 > 0.0) || !(v1 > 0.0) || !(v1 < v0)) return fit;
    fit.a = std::log(v0 / v1) / (r_end - src.r[i0]);
    fit.c = v1 * std::exp(fit.a * r_end);
    fit.ok = fit.a > 0.0;
    return fit;
}

} // namespace

PoissonResult poisson_particular(const RadialProfile& source) {
    std::size_t m = source.size();
    if (m < 2) throw SolverError(ErrorKind::domain, "poisson_particular: source too short");

    std::vector<double> f(m), df;
    for (std::size_t i = 0; i < m; ++i) f[i] = source.value[i] * source.r[i] * source.r[i];
    if (source.has_deriv()) {
        df.resize(m);
        for (std::size_t i = 0; i < m; ++i)
            df[i] = source.deriv[i] * source.r[i] * source.r[i] + 2.0 * source.value[i] * source.r[i];
    }
    // enclosed charge Q(r) = int_0^r s^2 rho ds; the head below the first node
    // treats rho as constant
    std::vector<double> q = mesh_cumulative(source.r, f, df);
    double head = source.value.front() * std::pow(source.r.front(), 3) / 3.0;
    for (double& v : q) v += head;

    // outer integral T(r) = int_r^inf s rho ds
    std::vector<double> g(m), dg;
    for (std::size_t i = 0; i < m; ++i) g[i] = source.value[i] * source.r[i];
    if (source.has_deriv()) {
        dg.resize(m);
        for (std::size_t i = 0; i < m; ++i) dg[i] = source.deriv[i] * source.r[i] + source.value[i];
    }
    std::vector<double> gcum = mesh_cumulative(source.r, g, dg);

    PoissonResult out;
    TailFit tail = fit_exp_tail(source);
    double r_end = source.r.back();
    double tail_t = 0.0; // int_rend^inf s rho ds
    if (tail.ok) {
        double e = tail.c * std::exp(-tail.a * r_end);
        tail_t = e * (r_end / tail.a + 1.0 / (tail.a * tail.a));
        out.tail_charge =
            e * (r_end * r_end / tail.a + 2.0 * r_end / (tail.a * tail.a) +
                 2.0 / (tail.a * tail.a * tail.a));
    } else {
        // non-decaying or sign-changing tail: nothing sensible to add
        out.tail_warning = true;
    }
    out.total_charge = q.back() + out.tail_charge;

    out.phi.r = source.r;
    out.phi.value.resize(m);
    out.phi.deriv.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        double qi = q[i];
        double ti = (gcum.back() - gcum[i]) + tail_t;
        out.phi.value[i] = -qi / source.r[i] - ti;
        out.phi.deriv[i] = qi / (source.r[i] * source.r[i]);
    }
    return out;
}

double field_self_energy(const RadialProfile& source) {
    PoissonResult p = poisson_particular(source);
    std::size_t m = source.size();
    // integrand Q^2/r^2 with Q = r^2 phi'
    std::vector<double> f(m), df(m);
    for (std::size_t i = 0; i < m; ++i) {
        double r = source.r[i];
        double qi = p.phi.deriv[i] * r * r;
        f[i] = qi * qi / (r * r);
        df[i] = 2.0 * qi * source.value[i] - 2.0 * f[i] / r;
    }
    double acc = mesh_integral(source.r, f, df);
    // beyond the mesh Q is constant: int Q^2/r^2 = Q^2/r_end
    double qt = p.total_charge;
    acc += qt * qt / source.r.back();
    return 0.5 * acc;
}

// ---- RadialProfile interpolation --------------------------------------------

namespace {

std::size_t locate(const std::vector<double>& xs, double x) {
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    std::size_t i = std::size_t(it - xs.begin());
    if (i == 0) return 0;
    if (i >= xs.size()) return xs.size() - 2;
    return i - 1;
}

} // namespace

double RadialProfile::eval(double x) const {
    if (empty()) throw SolverError(ErrorKind::domain, "empty profile");
    if (x <= r.front()) return value.front();
    if (x >= r.back()) return value.back();
    std::size_t i = locate(r, x);
    double h = r[i + 1] - r[i];
    double t = (x - r[i]) / h;
    if (!has_deriv()) return value[i] + t * (value[i + 1] - value[i]);
    double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * value[i] + (t3 - 2 * t2 + t) * h * deriv[i] +
           (-2 * t3 + 3 * t2) * value[i + 1] + (t3 - t2) * h * deriv[i + 1];
}

double RadialProfile::eval_deriv(double x) const {
    if (!has_deriv()) throw SolverError(ErrorKind::domain, "profile has no derivatives");
    if (x <= r.front()) return deriv.front();
    if (x >= r.back()) return deriv.back();
    std::size_t i = locate(r, x);
    double h = r[i + 1] - r[i];
    double t = (x - r[i]) / h;
    double t2 = t * t;
    return ((6 * t2 - 6 * t) * value[i] + (3 * t2 - 4 * t + 1) * h * deriv[i] +
            (-6 * t2 + 6 * t) * value[i + 1] + (3 * t2 - 2 * t) * h * deriv[i + 1]) /
           h;
}

} // namespace selfield
