#include "selfield/model.hpp"

#include <algorithm>

namespace selfield {

Ansatz ansatz_from_letter(char c) {
    if (c == 'A' || c == 'a') return Ansatz::A;
    if (c == 'B' || c == 'b') return Ansatz::B;
    throw SolverError(ErrorKind::domain, std::string("unknown ansatz '") + c + "'");
}

void RadialGrid::validate() const {
    if (!(r_start > 0.0) || !(r_start < r_max))
        throw SolverError(ErrorKind::domain, "grid requires 0 < r_start < r_max");
    if (method == StepMethod::rk4_fixed && !(h > 0.0))
        throw SolverError(ErrorKind::domain, "fixed-step grid requires h > 0");
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
        throw SolverError(ErrorKind::domain, "tolerances must be positive");
}

void ShootingProblem::validate() const {
    grid.validate();
    if (nodes < 0) throw SolverError(ErrorKind::domain, "node count must be >= 0");
    if (!(tol_beta > 0.0) || !(tol_charge > 0.0))
        throw SolverError(ErrorKind::domain, "tolerances must be positive");
    if (beta_bracket.first != 0.0 || beta_bracket.second != 0.0) {
        if (!(beta_bracket.first < beta_bracket.second))
            throw SolverError(ErrorKind::domain, "beta bracket requires lo < hi");
    }
}

double ShootingProblem::default_r_max(Ansatz a, int nodes) {
    int n = nodes + (a == Ansatz::A ? 1 : 2);
    double base = a == Ansatz::A ? 150.0 : 300.0;
    // the decaying stretch survives until roughly ln(1/tol_beta)/(2 sqrt(eps));
    // with eps a few times below 1/(4n^2) that scales linearly in n
    return std::max(base, 280.0 * n);
}

SpinorState spinor_rhs(Ansatz ansatz, double r, const SpinorState& s) {
    if (!(r > 0.0))
        throw SolverError(ErrorKind::domain, "spinor_rhs requires r > 0");
    SpinorState d;
    if (ansatz == Ansatz::A) {
        d.k = s.n;
        d.n = (s.u - 1.0 / r) * s.k - (2.0 / r) * s.n;
    } else {
        d.k = -s.n - (2.0 / r) * s.k;
        d.n = -(s.u - 1.0 / r) * s.k;
    }
    d.u = s.du;
    d.du = -s.k * s.k - (2.0 / r) * s.du;
    return d;
}

SpinorState series_start(Ansatz ansatz, double beta, double delta, double r) {
    SpinorState s;
    if (ansatz == Ansatz::A) {
        double a2 = (2.0 * delta + 1.0) / 12.0;
        double a3 = -(8.0 * delta + 1.0) / 144.0;
        s.k = beta * (1.0 + r * (-0.5 + r * (a2 + r * a3)));
        s.n = beta * (-0.5 + r * (2.0 * a2 + r * 3.0 * a3));
        s.u = delta + beta * beta * r * r * (-1.0 / 6.0 + r / 12.0);
        s.du = beta * beta * r * (-1.0 / 3.0 + r / 4.0);
    } else {
        double c3 = (4.0 * delta + 1.0) / 40.0;
        double c4 = -(14.0 * delta + 1.0) / 720.0;
        s.k = beta * r * (1.0 + r * (-0.25 + r * (c3 + r * c4)));
        double kp = beta * (1.0 + r * (-0.5 + r * (3.0 * c3 + r * 4.0 * c4)));
        s.n = -kp - 2.0 * s.k / r;
        s.u = delta + beta * beta * r * r * r * r * (-1.0 / 20.0 + r / 60.0);
        s.du = beta * beta * r * r * r * (-1.0 / 5.0 + r / 12.0);
    }
    return s;
}

SpinorState series_start_linear(Ansatz ansatz, double beta, double delta, double r) {
    // same spinor series with the potential frozen at U == delta
    SpinorState s = series_start(ansatz, beta, delta, r);
    s.u = delta;
    s.du = 0.0;
    return s;
}

} // namespace selfield
