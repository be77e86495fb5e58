#include "selfield/model.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace selfield;

TEST_CASE("ansatz A right-hand side matches hand evaluation") {
    // zero field is a fixed point of the spinor sector
    SpinorState d = spinor_rhs(Ansatz::A, 1.0, {0.0, 0.0, 0.5, 0.0});
    CHECK(d.k == 0.0);
    CHECK(d.n == 0.0);
    CHECK(d.du == 0.0);

    d = spinor_rhs(Ansatz::A, 2.0, {1.0, 0.0, 0.5, 0.0});
    CHECK(d.k == 0.0);
    CHECK(d.n == doctest::Approx(0.0));
    CHECK(d.du == doctest::Approx(-1.0));

    d = spinor_rhs(Ansatz::A, 1.0, {0.1, -0.05, 0.023, -0.01});
    CHECK(d.k == doctest::Approx(-0.05));
    CHECK(d.n == doctest::Approx((0.023 - 1.0) * 0.1 - 2.0 * (-0.05)));
    CHECK(d.n == doctest::Approx(0.0023));
    CHECK(d.du == doctest::Approx(-0.01 + 0.02));
}

TEST_CASE("ansatz B right-hand side matches hand evaluation") {
    SpinorState d = spinor_rhs(Ansatz::B, 1.0, {0.0, 0.0, 0.1, 0.0});
    CHECK(d.k == 0.0);
    CHECK(d.n == 0.0);
    CHECK(d.du == 0.0);

    d = spinor_rhs(Ansatz::B, 1.0, {1.0, -3.0, 1.0, 0.0});
    CHECK(d.k == doctest::Approx(1.0)); // 3 - 2
    CHECK(d.n == doctest::Approx(0.0));
    CHECK(d.du == doctest::Approx(-1.0));
}

TEST_CASE("r <= 0 is a domain error") {
    CHECK_THROWS_AS(spinor_rhs(Ansatz::A, 0.0, {1, 0, 0, 0}), SolverError);
    CHECK_THROWS_AS(spinor_rhs(Ansatz::B, -1.0, {1, 0, 0, 0}), SolverError);
}

TEST_CASE("first-order pair eliminates to the displayed second-order form") {
    // A: k'' + (2/r) k' = (U - 1/r) k, B gains the -(2/r^2) k term.  Random
    // states; k'' obtained by chaining the first-order system.
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        double r = 0.2 + 3.0 * (u(rng) + 1.0);
        SpinorState s{u(rng), u(rng), u(rng), u(rng)};
        for (Ansatz a : {Ansatz::A, Ansatz::B}) {
            SpinorState d = spinor_rhs(a, r, s);
            double kp = d.k;
            // k'' via the derivative of the k'-expression along the flow
            double kpp;
            if (a == Ansatz::A) {
                kpp = d.n;
            } else {
                kpp = -d.n - 2.0 * kp / r + 2.0 * s.k / (r * r);
            }
            double lhs = kpp + 2.0 / r * kp - (a == Ansatz::B ? 2.0 / (r * r) * s.k : 0.0);
            double rhs = (s.u - 1.0 / r) * s.k;
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        }
    }
}

TEST_CASE("series start reproduces the leading asymptotics") {
    // A: k -> beta, n -> -beta/2; B: k -> 0, n -> -3 beta
    SpinorState a = series_start(Ansatz::A, 1.0, 0.0, 1e-9);
    CHECK(a.k == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(a.n == doctest::Approx(-0.5).epsilon(1e-7));
    CHECK(a.u == doctest::Approx(0.0).epsilon(1e-12));

    SpinorState b = series_start(Ansatz::B, 1.0, 0.0, 1e-9);
    CHECK(b.k == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(b.n == doctest::Approx(-3.0).epsilon(1e-7));
    CHECK(b.u == doctest::Approx(0.0).epsilon(1e-12));

    // Table-like values: k ~ beta (1 - r/2) at r = 1e-4
    SpinorState t = series_start(Ansatz::A, 0.492787, 0.365947, 1e-4);
    CHECK(t.k == doctest::Approx(0.492787 * (1.0 - 5e-5)).epsilon(1e-7));
}

namespace {

// independent oracle: series coefficients straight from the ODE recurrence
// (coefficient matching of k'' + (2/r)k' [- (2/r^2)k] = (U - 1/r) k and
// U'' + (2/r)U' = -k^2), evaluated as plain polynomials
struct SeriesOracle {
    double beta, delta;
    Ansatz a;

    // k = beta * sum c_m r^m
    std::array<double, 5> kc() const {
        std::array<double, 5> c{};
        if (a == Ansatz::A) {
            c[0] = 1.0;
            c[1] = -c[0] / 2.0;                     // 2 a1 = -a0
            c[2] = (delta * c[0] - c[1]) / 6.0;     // 6 a2 = d a0 - a1
            c[3] = (delta * c[1] - c[2]) / 12.0;    // 12 a3 = d a1 - a2
        } else {
            c[1] = 1.0;
            c[2] = -c[1] / 4.0;                     // 4 c2 = -c1
            c[3] = (delta * c[1] - c[2]) / 10.0;    // 10 c3 = d c1 - c2
            c[4] = (delta * c[2] - c[3]) / 18.0;    // 18 c4 = d c2 - c3
        }
        return c;
    }
    double k(double r) const {
        auto c = kc();
        double acc = 0.0;
        for (int m = 4; m >= 0; --m) acc = acc * r + c[std::size_t(m)];
        return beta * acc;
    }
    double kp(double r) const {
        auto c = kc();
        double acc = 0.0;
        for (int m = 4; m >= 1; --m) acc = acc * r + m * c[std::size_t(m)];
        return beta * acc;
    }
    double kpp(double r) const {
        auto c = kc();
        double acc = 0.0;
        for (int m = 4; m >= 2; --m) acc = acc * r + m * (m - 1) * c[std::size_t(m)];
        return beta * acc;
    }
    double n(double r) const { return a == Ansatz::A ? kp(r) : -kp(r) - 2.0 * k(r) / r; }
    double np(double r) const {
        if (a == Ansatz::A) return kpp(r);
        return -kpp(r) - 2.0 * kp(r) / r + 2.0 * k(r) / (r * r);
    }
    double u(double r) const {
        double b2 = beta * beta;
        if (a == Ansatz::A) return delta - b2 * r * r / 6.0 + b2 * r * r * r / 12.0;
        return delta - b2 * std::pow(r, 4) / 20.0 + b2 * std::pow(r, 5) / 60.0;
    }
    double du(double r) const {
        double b2 = beta * beta;
        if (a == Ansatz::A) return -b2 * r / 3.0 + b2 * r * r / 4.0;
        return -b2 * std::pow(r, 3) / 5.0 + b2 * std::pow(r, 4) / 12.0;
    }
};

double series_residual(Ansatz a, double rs) {
    SeriesOracle o{0.7, 0.3, a};
    SpinorState s = series_start(a, 0.7, 0.3, rs);
    SpinorState d = spinor_rhs(a, rs, s);
    return std::abs(o.np(rs) - d.n);
}

} // namespace

TEST_CASE("series start agrees with the recurrence oracle") {
    for (Ansatz a : {Ansatz::A, Ansatz::B}) {
        SeriesOracle o{0.7, 0.3, a};
        for (double r : {1e-6, 1e-4, 1e-2}) {
            SpinorState s = series_start(a, 0.7, 0.3, r);
            CHECK(s.k == doctest::Approx(o.k(r)).epsilon(1e-14));
            CHECK(s.n == doctest::Approx(o.n(r)).epsilon(1e-12));
            CHECK(s.u == doctest::Approx(o.u(r)).epsilon(1e-14));
            CHECK(s.du == doctest::Approx(o.du(r)).epsilon(1e-12));
        }
    }
}

TEST_CASE("series residual order: O(r^2) for A, O(r^3) for B") {
    for (Ansatz a : {Ansatz::A, Ansatz::B}) {
        double r1 = series_residual(a, 1e-2);
        double r2 = series_residual(a, 1e-3);
        double order = std::log10(r1 / r2);
        if (a == Ansatz::A)
            CHECK(order >= 1.8);
        else
            CHECK(order >= 2.7);
    }
    CHECK(series_residual(Ansatz::A, 1e-6) < 1e-12);
    CHECK(series_residual(Ansatz::B, 1e-6) < 1e-12);
}

TEST_CASE("principal number and conjugate sign") {
    AnsatzKind a;
    CHECK(a.principal(0) == 1);
    CHECK(a.principal(2) == 3);
    AnsatzKind b{Ansatz::B, SpinSign::minus};
    CHECK(b.principal(0) == 2);
    CHECK(b.sign_factor() == -1.0);
    CHECK(linear_epsilon(Ansatz::A, 0) == doctest::Approx(0.25));
    CHECK(linear_epsilon(Ansatz::B, 0) == doctest::Approx(1.0 / 16.0));
}

TEST_CASE("grid and problem validation") {
    RadialGrid g;
    g.r_start = -1.0;
    CHECK_THROWS_AS(g.validate(), SolverError);
    ShootingProblem p;
    p.nodes = -1;
    CHECK_THROWS_AS(p.validate(), SolverError);
}
