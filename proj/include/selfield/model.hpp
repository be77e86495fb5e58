#ifndef SELFIELD_MODEL_HPP
#define SELFIELD_MODEL_HPP

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace selfield {

/// The two closed angular substitutions: A is s-like (l=0), B is p-like (l=1).
enum class Ansatz { A, B };

/// Conjugate-ansatz selector; flips the reported signs of j and mu only.
enum class SpinSign { plus, minus };

struct AnsatzKind {
    Ansatz variant = Ansatz::A;
    SpinSign sign = SpinSign::plus;

    int l() const { return variant == Ansatz::A ? 0 : 1; }
    /// principal number n = N + l + 1 for N radial nodes
    int principal(int nodes) const { return nodes + l() + 1; }
    double sign_factor() const { return sign == SpinSign::plus ? 1.0 : -1.0; }
};

inline char ansatz_letter(Ansatz a) { return a == Ansatz::A ? 'A' : 'B'; }
Ansatz ansatz_from_letter(char c);

/// Step-control choice for radial propagation.
enum class StepMethod { rk4_fixed, rk45_adaptive };

/// Radial sampling window plus step control.  Identical configs produce
/// identical node sequences.
struct RadialGrid {
    double r_start = 1e-6;
    double r_max = 150.0;
    StepMethod method = StepMethod::rk45_adaptive;
    double h = 1e-3;        // rk4_fixed step
    double abs_tol = 1e-12; // rk45 tolerances
    double rel_tol = 1e-10;

    void validate() const;
};

/// A sampled radial function: values and (optionally) first derivatives on a
/// strictly increasing mesh.
struct RadialProfile {
    std::vector<double> r;
    std::vector<double> value;
    std::vector<double> deriv;

    std::size_t size() const { return r.size(); }
    bool empty() const { return r.empty(); }
    bool has_deriv() const { return deriv.size() == r.size(); }

    /// cubic Hermite interpolation (falls back to linear without derivatives)
    double eval(double x) const;
    double eval_deriv(double x) const;
};

/// Coupled radial state (k, n, U, U') shared by both ansatz systems.
struct SpinorState {
    double k = 0.0;
    double n = 0.0;
    double u = 0.0;
    double du = 0.0;
};

// First-order form of the reduced radial systems.
//   A:  k' = n,             n' = (U - 1/r) k - (2/r) n
//   B:  k' = -n - (2/r) k,  n' = -(U - 1/r) k
// both coupled to U'' = -k^2 - (2/r) U'.
// Returns (k', n', U', U''); requires r > 0 (the origin is entered only
// through series_start).
SpinorState spinor_rhs(Ansatz ansatz, double r, const SpinorState& s);

/// dk/dr expressed through the state (n for A, -n - 2k/r for B)
inline double k_prime(Ansatz ansatz, double r, const SpinorState& s) {
    return ansatz == Ansatz::A ? s.n : -s.n - 2.0 * s.k / r;
}

// Power-series start near the origin, consistent with the governing ODEs one
// order beyond the leading behavior:
//   A: k = beta (1 - r/2 + a2 r^2 + a3 r^3), n = k',
//      U = delta - beta^2 r^2/6 + beta^2 r^3/12
//   B: k = beta (r - r^2/4 + c3 r^3 + c4 r^4), n = -k' - 2k/r,
//      U = delta - beta^2 r^4/20 + beta^2 r^5/60
// The r^2 coefficient of U'' + (2/r)U' = -k^2 fixes the B quartic term to
// beta^2/20 (not beta/20).
SpinorState series_start(Ansatz ansatz, double beta, double delta, double r);

/// series start for the linear-regression mode (self-field off, U frozen)
SpinorState series_start_linear(Ansatz ansatz, double beta, double delta, double r);

/// Shooting configuration for one (ansatz, N) eigenstate.
struct ShootingProblem {
    AnsatzKind ansatz;
    int nodes = 0;
    RadialGrid grid;
    bool self_field = true; // false = linear regression mode, U == delta
    std::pair<double, double> beta_bracket{0.0, 0.0}; // (0,0): choose automatically
    double delta_guess = 0.0;                         // 0: choose automatically
    double tol_beta = 1e-12;  // relative bracket width
    double tol_charge = 1e-4; // |q - 1| for a normalized record

    void validate() const;
    /// spec default r_max grows with the principal number
    static double default_r_max(Ansatz a, int nodes);
};

/// Converged eigen-solution plus everything derived from it.
struct SolutionRecord {
    AnsatzKind ansatz;
    int nodes = 0;
    int n = 1; // principal number
    bool self_field = true;

    double beta0 = 0.0;  // k(0) for A, leading slope of k ~ beta r for B
    double delta0 = 0.0; // U(0)
    double gamma0 = 0.0; // lambda slope at the origin
    double epsilon = 0.0;
    double q = 0.0;       // normalization integral incl. analytic tail
    double q_gauss = 0.0; // -r0^2 U'(r0) cross-check
    double r0 = 0.0;      // cut-off radius actually used

    RadialProfile k, nfun, u, lambda;

    double self_energy = 0.0;   // (1/2) int (phi')^2 r^2 dr
    double w_binding = 0.0;     // epsilon + self_energy
    double w_binding_alt = 0.0; // int n^2 r^2 dr
    double identity_residual = 0.0;
    double mu = 0.0;
    double mu_identity = 0.0; // integral-identity value (q for A, q/3 for B)
    double j = 0.0;

    // raw quadratures over [r_start, r0] plus tails, kept for identity checks
    double int_k2_r = 0.0; // int k^2 r dr
};

/// Physical constants used only for dimensional restoration; never entering
/// the reduced radial equations.
struct DimensionalConstants {
    double alpha = 7.2973525693e-3;
    double rydberg_eV = 13.605693;
    bool mu_in_bohr_magnetons = true;
};

/// error taxonomy shared by the solvers and the CLI exit codes
enum class ErrorKind {
    domain,
    bracket,
    degenerate_bracket,
    stiffness,
    numerical,
    cutoff_too_small,
    not_converged,
};

class SolverError : public std::runtime_error {
  public:
    SolverError(ErrorKind kind, const std::string& what, double beta = 0.0, double delta = 0.0)
        : std::runtime_error(what), kind_(kind), beta_(beta), delta_(delta) {}
    ErrorKind kind() const { return kind_; }
    double beta() const { return beta_; }
    double delta() const { return delta_; }

  private:
    ErrorKind kind_;
    double beta_, delta_;
};

/// linear-problem eigenvalue 1/(4 n^2), n = N + l + 1
inline double linear_epsilon(Ansatz a, int nodes) {
    int n = nodes + (a == Ansatz::A ? 1 : 2);
    return 1.0 / (4.0 * double(n) * double(n));
}

} // namespace selfield

#endif
