#include "selfield/integrate.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace selfield;

TEST_CASE("exponential decay to 1e-10") {
    auto rhs = [](double, const std::array<double, 1>& y, std::array<double, 1>& dy) {
        dy[0] = -y[0];
    };
    IntegratorConfig cfg;
    Trajectory<1> t = propagate<1>(rhs, {1.0}, 0.0, 1.0, cfg);
    CHECK(t.cause == TermCause::reached_r_end);
    CHECK(std::abs(t.back()[0] - std::exp(-1.0)) < 1e-10);
}

TEST_CASE("harmonic radial solution stays constant") {
    // U'' + (2/r) U' = 0 with U(r_s) = delta, U'(r_s) = 0  =>  U == delta
    auto rhs = [](double r, const std::array<double, 2>& y, std::array<double, 2>& dy) {
        dy[0] = y[1];
        dy[1] = -2.0 / r * y[1];
    };
    IntegratorConfig cfg;
    Trajectory<2> t = propagate<2>(rhs, {0.37, 0.0}, 1e-6, 50.0, cfg);
    CHECK(t.back()[0] == doctest::Approx(0.37).epsilon(1e-12));
    CHECK(std::abs(t.back()[1]) < 1e-12);
}

TEST_CASE("rk4 fixed-step convergence order >= 3.9") {
    auto rhs = [](double r, const std::array<double, 1>& y, std::array<double, 1>& dy) {
        dy[0] = std::cos(r) * y[0];
    };
    auto run = [&](double h) {
        IntegratorConfig cfg;
        cfg.method = StepMethod::rk4_fixed;
        cfg.h = h;
        Trajectory<1> t = propagate<1>(rhs, {1.0}, 0.0, 2.0, cfg);
        return std::abs(t.back()[0] - std::exp(std::sin(2.0)));
    };
    double e1 = run(0.02), e2 = run(0.01);
    double order = std::log2(e1 / e2);
    CHECK(order >= 3.9);
}

TEST_CASE("rk4 fixed-step is bitwise reproducible") {
    auto rhs = [](double r, const std::array<double, 1>& y, std::array<double, 1>& dy) {
        dy[0] = -y[0] * r;
    };
    IntegratorConfig cfg;
    cfg.method = StepMethod::rk4_fixed;
    cfg.h = 1e-3;
    Trajectory<1> t1 = propagate<1>(rhs, {1.0}, 0.0, 3.0, cfg);
    Trajectory<1> t2 = propagate<1>(rhs, {1.0}, 0.0, 3.0, cfg);
    REQUIRE(t1.size() == t2.size());
    for (std::size_t i = 0; i < t1.size(); ++i) CHECK(t1.y[i][0] == t2.y[i][0]);
}

TEST_CASE("events terminate and report monotonically") {
    auto rhs = [](double, const std::array<double, 1>& y, std::array<double, 1>& dy) {
        dy[0] = y[0];
    };
    IntegratorConfig cfg;
    std::vector<Event<1>> events(1);
    events[0].id = 7;
    events[0].fn = [](double, const std::array<double, 1>& y, const std::array<double, 1>&) {
        return y[0] > 10.0;
    };
    Trajectory<1> t = propagate<1>(rhs, {1.0}, 0.0, 10.0, cfg, events);
    CHECK(t.cause == TermCause::event_fired);
    CHECK(t.event_id == 7);
    // the predicate is false for every sampled node before the firing one
    for (std::size_t i = 0; i + 1 < t.size(); ++i) CHECK(t.y[i][0] <= 10.0);
    CHECK(t.back()[0] > 10.0);
    CHECK(t.r_term == doctest::Approx(std::log(10.0)).epsilon(1e-2));
}

TEST_CASE("blowup threshold and stiffness errors") {
    auto rhs = [](double, const std::array<double, 1>& y, std::array<double, 1>& dy) {
        dy[0] = y[0] * y[0]; // finite-time blowup at r = 1
    };
    IntegratorConfig cfg;
    cfg.blowup_threshold = 1e6;
    Trajectory<1> t = propagate<1>(rhs, {1.0}, 0.0, 2.0, cfg);
    CHECK(t.cause == TermCause::blowup);
    CHECK(t.r_term < 1.001);

    cfg.blowup_threshold = 0.0;
    CHECK_THROWS_AS(propagate<1>(rhs, {1.0}, 0.0, 2.0, cfg), SolverError);
}

namespace {

RadialProfile exp_density(double rmax, std::size_t m) {
    // 1s-type density k^2 = e^{-r}/2, normalized: int k^2 r^2 dr = 1
    RadialProfile p;
    p.r.resize(m);
    p.value.resize(m);
    p.deriv.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        double r = 1e-8 + (rmax - 1e-8) * double(i) / double(m - 1);
        p.r[i] = r;
        p.value[i] = 0.5 * std::exp(-r);
        p.deriv[i] = -0.5 * std::exp(-r);
    }
    return p;
}

// independent brute-force oracle: (1/2) iint rho(r) rho(s) r^2 s^2 / max(r,s)
// by composite Simpson with the kink split at s = r
double hartree_double_quadrature(double rmax, std::size_t panels) {
    auto rho = [](double r) { return 0.5 * std::exp(-r); };
    auto simpson = [](auto f, double a, double b, std::size_t np) {
        double h = (b - a) / double(2 * np);
        double acc = f(a) + f(b);
        for (std::size_t i = 1; i < 2 * np; ++i) acc += f(a + h * i) * (i % 2 ? 4.0 : 2.0);
        return acc * h / 3.0;
    };
    auto inner = [&](double r) {
        double near = r > 0.0 ? simpson([&](double s) { return rho(s) * s * s; }, 0.0, r, panels) / r
                              : 0.0;
        double far = simpson([&](double s) { return rho(s) * s; }, r, rmax, panels);
        return near + far;
    };
    return 0.5 * simpson([&](double r) { return rho(r) * r * r * inner(r); }, 0.0, rmax, panels);
}

} // namespace

TEST_CASE("poisson: zero source gives zero potential") {
    RadialProfile p = exp_density(30.0, 200);
    for (auto& v : p.value) v = 0.0;
    for (auto& v : p.deriv) v = 0.0;
    PoissonResult res = poisson_particular(p);
    for (double v : res.phi.value) CHECK(std::abs(v) < 1e-15);
}

TEST_CASE("poisson: unit charge gives -1/r far field") {
    RadialProfile p = exp_density(60.0, 24001);
    PoissonResult res = poisson_particular(p);
    CHECK(res.total_charge == doctest::Approx(1.0).epsilon(1e-9));
    double r = 55.0;
    std::size_t i = res.phi.size() - 1;
    while (res.phi.r[i] > r) --i;
    CHECK(res.phi.value[i] == doctest::Approx(-1.0 / res.phi.r[i]).epsilon(1e-7));
}

TEST_CASE("poisson: 1s self-energy equals the double-quadrature Hartree value") {
    // the Coulomb integral int (phi')^2 r^2 dr is 5/16 for this density; the
    // field self-energy carries the extra 1/2
    RadialProfile p = exp_density(60.0, 24001);
    double se = field_self_energy(p);
    double oracle = hartree_double_quadrature(60.0, 1200);
    CHECK(se == doctest::Approx(oracle).epsilon(2e-7));
    CHECK(2.0 * se == doctest::Approx(5.0 / 16.0).epsilon(1e-7));
    CHECK(se == doctest::Approx(5.0 / 32.0).epsilon(1e-7));
}

TEST_CASE("poisson: laplacian of the output reproduces the source") {
    RadialProfile p = exp_density(40.0, 64001);
    PoissonResult res = poisson_particular(p);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 1; i + 1 < p.size(); ++i) {
        double h = p.r[i + 1] - p.r[i - 1];
        double ddphi = (res.phi.deriv[i + 1] - res.phi.deriv[i - 1]) / h;
        double lap = ddphi + 2.0 / p.r[i] * res.phi.deriv[i];
        num += (lap - p.value[i]) * (lap - p.value[i]);
        den += p.value[i] * p.value[i];
    }
    CHECK(std::sqrt(num / den) < 1e-6);
}

TEST_CASE("poisson propagation matches the quadrature route") {
    // propagate U'' + (2/r)U' = -k^2 for the same density and compare the
    // self-energy integral against the Green-function route
    auto rhs = [](double r, const std::array<double, 3>& y, std::array<double, 3>& dy) {
        double k2 = 0.5 * std::exp(-r);
        dy[0] = y[1];
        dy[1] = -k2 - 2.0 / r * y[1];
        dy[2] = y[1] * y[1] * r * r; // int (U')^2 r^2
    };
    IntegratorConfig cfg;
    cfg.abs_tol = 1e-13;
    cfg.rel_tol = 1e-12;
    double rs = 1e-7;
    Trajectory<3> t = propagate<3>(rhs, {0.0, 0.0, 0.0}, rs, 60.0, cfg);
    double q_at_end = -t.back()[1] * 60.0 * 60.0; // enclosed charge from U'
    double self_energy = 0.5 * (t.back()[2] + q_at_end * q_at_end / 60.0);
    CHECK(q_at_end == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(self_energy == doctest::Approx(5.0 / 32.0).epsilon(1e-8));
}

TEST_CASE("non-decaying tail sets the extrapolation warning") {
    RadialProfile p;
    for (int i = 0; i < 100; ++i) {
        double r = 0.1 + 0.1 * i;
        p.r.push_back(r);
        p.value.push_back(1.0); // constant source: no convergent tail
    }
    PoissonResult res = poisson_particular(p);
    CHECK(res.tail_warning);
}
