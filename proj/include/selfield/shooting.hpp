#ifndef SELFIELD_SHOOTING_HPP
#define SELFIELD_SHOOTING_HPP

#include "selfield/integrate.hpp"
#include "selfield/model.hpp"

#include <vector>

namespace selfield {

enum class ShotClass { decayed, blew_up_positive, crossed_negative_extra_node };

const char* shot_class_name(ShotClass c);

/// One integration of the coupled system at fixed (beta, delta), classified
/// by the first deviation in the tail of the post-Nth-node lobe:
///   - an (N+1)-th sign change of k  -> crossed_negative_extra_node
///   - |k| growing again (k k' > 0 after the lobe peak) -> blew_up_positive
///   - reaching r_max still decaying -> decayed
struct ShotOutcome {
    ShotClass cls = ShotClass::decayed;
    int sign_changes = 0;
    double r0 = 0.0;    // tail-trough radius: the reliable cut-off
    std::size_t i0 = 0; // node index of r0
    Trajectory<4> traj; // k, n, U, U'
};

ShotOutcome shoot_once(const ShootingProblem& p, double beta, double delta);

/// bisection record for one inner solve, kept for diagnostics and tests
struct BetaSolve {
    double beta = 0.0;
    ShotOutcome shot; // outcome at the returned beta
    int iterations = 0;
    std::vector<std::pair<double, ShotClass>> trace; // every classified beta in order
};

/// Bracketing bisection on beta at fixed delta until the relative bracket
/// width reaches tol_beta.  blew_up_positive marks the small-beta side,
/// crossed_negative_extra_node the large-beta side; the bracket is validated
/// and expanded before bisecting.
BetaSolve solve_beta(const ShootingProblem& p, double delta);

/// Full eigen-solve: outer iteration on delta drives the normalization
/// integral to q = 1 (electroneutrality), with the inner beta-bisection nested
/// inside; then epsilon = U(r0) + r0 U'(r0).  With self_field = false the
/// problem is linear and the roles collapse: delta is bisected directly on the
/// node-count classification and beta only sets the normalization.
SolutionRecord solve_delta(const ShootingProblem& p);

namespace shooting_detail {

/// everything extracted from one augmented final pass (internal + tests)
struct Extraction {
    double epsilon = 0.0;
    double q_int = 0.0;
    double q_gauss = 0.0;
    double r0 = 0.0;
    double self_energy = 0.0;
    double w_alt = 0.0;
    double int_k2_r = 0.0;
    bool valid = false; // epsilon > 0 and sane q
    ShotClass cls = ShotClass::decayed;
    int sign_changes = 0;
    Trajectory<8> traj;
    std::size_t i0 = 0;
};

Extraction final_pass(const ShootingProblem& p, double beta, double delta);

} // namespace shooting_detail

} // namespace selfield

#endif
