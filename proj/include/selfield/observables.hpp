#ifndef SELFIELD_OBSERVABLES_HPP
#define SELFIELD_OBSERVABLES_HPP

#include "selfield/model.hpp"

#include <vector>

namespace selfield {

/// Binding-energy decomposition: W = epsilon + self-energy must match the
/// independent representation int n^2 r^2 dr for every regular solution.
struct EnergyBreakdown {
    double epsilon = 0.0;
    double self_energy = 0.0;
    double w_binding = 0.0;
    double w_binding_alt = 0.0;
    double identity_residual = 0.0;
};

/// Recomputes both energy representations from the stored profiles by panel
/// quadrature plus the analytic exponential/Coulomb tails beyond r0.  This is
/// the file-driven route; the solver's in-pass accumulators are the other.
EnergyBreakdown binding_energy(const SolutionRecord& rec);

struct BohrFit {
    double W = 0.0;               // mean of W_n * n^2
    std::vector<int> n;
    std::vector<double> wn2;      // per-record W_n * n^2
    std::vector<double> residual; // wn2 - W
};

/// Bohr-law fit W_n = W/n^2 over records of one ansatz (n = N+1 or N+2).
BohrFit bohr_law_fit(const std::vector<SolutionRecord>& records);

/// j = q/2 with the conjugate-ansatz sign
double angular_momentum(const SolutionRecord& rec);

/// Dimensionless observables restored to physical units.
struct DimensionalReport {
    int n = 1;
    double w_binding_rydberg = 0.0; // 4 W, in units of the effective Rydberg
    double w_binding_eV = 0.0;
    double omega = 0.0;             // frequency from 1+omega = 2/(1+eps alpha^2)
    double mu_phys = 0.0;           // in e hbar / 2mc
    double j_hbar = 0.0;
    double effective_rydberg = 0.0; // 4 W n^2, to compare against 1 (experiment)
    double w_binding_exact = 0.0;   // with the exact (1+eps alpha^2) prefactor, in R
};

DimensionalReport dimensional_report(const SolutionRecord& rec, const DimensionalConstants& c);

/// X^2 = 1/(4W) for the fitted Bohr constant: the (incorrect) moment scaling
/// induced by equating the spectrum to the observed Rydberg.
double renormalization_factor_sq(double w_fit);

/// Virial-type check derivable from the two energy forms:
/// int k^2 r dr - 2 int n^2 r^2 dr - self_energy, zero for exact solutions.
double virial_residual(const SolutionRecord& rec);

} // namespace selfield

#endif
