#ifndef SELFIELD_VARIATIONAL_HPP
#define SELFIELD_VARIATIONAL_HPP

#include "selfield/model.hpp"
#include "selfield/observables.hpp"

namespace selfield {

/// Generalized Laguerre polynomial L_N^{(a)}(x) by the three-term recurrence.
double laguerre(int N, int a, double x);

/// L_N^{(a)}(x) e^{-x/2}, with the damping folded through the recurrence so
/// large N and large x do not overflow.
double laguerre_scaled(int N, int a, double x);

/// Laguerre-type trial state  k(r) = amplitude * f(r/scale), with
/// f(x) = L_N^{(1)}(x) e^{-x/2} for ansatz A and x L_N^{(3)}(x) e^{-x/2} for B.
/// The trial k has exactly N positive-radius zeros.
struct TrialFamily {
    AnsatzKind ansatz;
    int N = 0;
    double amplitude = 1.0;
    double scale = 1.0;
};

/// scale-free integrals of the trial shape f(x):
///   Iq = int f^2 x^2, IT = int f'^2 x^2, IV = int f^2 x, Ic = int f^2,
///   IS = int (G/x)^2 dx  with G(x) = int_0^x f^2 t^2 dt (Poisson route)
struct TrialIntegrals {
    double Iq = 0.0, IT = 0.0, IV = 0.0, Ic = 0.0, IS = 0.0;
};

TrialIntegrals trial_integrals(Ansatz ansatz, int N);

/// number of zeros of the trial on r > 0 (zeros of the Laguerre factor)
int trial_zero_count(const TrialFamily& t);

/// E[k] = T - V + S at the given (amplitude, scale):
///   T = int k'^2 r^2 dr (+ 2 int k^2 dr for B),  V = int k^2 r dr,
///   S = (1/2) int (phi')^2 r^2 dr with phi'' + (2/r) phi' = k^2.
/// Returned as the binding decomposition with w_binding = -E.
EnergyBreakdown energy_functional(const TrialFamily& t, bool self_field = true);

/// normalization integral q = int k^2 r^2 dr of the trial
double trial_charge(const TrialFamily& t);

struct VariationalResult {
    TrialFamily trial; // optimal parameters
    double w_var = 0.0;
    EnergyBreakdown energy;
    int iterations = 0;
    bool converged = false;
};

/// Maximizes W = -E over the scale on the q = 1 manifold (the amplitude is
/// eliminated by normalization): golden section plus parabolic refinement,
/// initialized at scale = n.
VariationalResult optimize(AnsatzKind ansatz, int N, bool self_field = true);

/// Unconstrained two-parameter mode mirroring the description "varied over
/// the amplitude and scale": Nelder-Mead on (log amplitude, log scale) with a
/// quadratic penalty on |q-1|.  Must agree with optimize() at the optimum.
VariationalResult optimize_two_param(AnsatzKind ansatz, int N, bool self_field = true);

} // namespace selfield

#endif
