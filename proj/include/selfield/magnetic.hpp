#ifndef SELFIELD_MAGNETIC_HPP
#define SELFIELD_MAGNETIC_HPP

#include "selfield/model.hpp"

namespace selfield {

/// Magnetic potential harmonic lambda (A_phi = lambda sin(theta)) for a
/// converged record, with the linear growth removed by superposition.
struct MagneticResult {
    RadialProfile lambda; // on the record's mesh, with the H r term removed
    double gamma0 = 0.0;  // slope of lambda at the origin
    double mu = 0.0;      // r0^2 lambda(r0)
    double mu_identity = 0.0; // q for ansatz A, q/3 for B
    double growth_removed = 0.0; // the H coefficient that was cancelled
};

// Solves lambda'' + (2/r) lambda' - (2/r^2) lambda = 2 k n on top of the
// record's profiles.  The particular solution (regular start, zero linear
// mode) is combined with the exact homogeneous solution lambda_h = r so that
// the growing term of lambda ~ H r + mu/r^2 cancels at r0.
MagneticResult solve_lambda(const SolutionRecord& rec);

/// |3 mu - 3 w q| with w = 1 (A) or 1/3 (B); exact for exact solutions
double moment_identity_check(const SolutionRecord& rec, const MagneticResult& mag);

} // namespace selfield

#endif
