#ifndef SELFIELD_SPECTRUM_HPP
#define SELFIELD_SPECTRUM_HPP

#include "selfield/model.hpp"
#include "selfield/variational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace selfield {

enum class SpectrumMethod { shooting, variational, both };

struct SpectrumOptions {
    SpectrumMethod method = SpectrumMethod::both;
    bool linear = false;
    double r_max = 0.0; // 0: per-state default
    double tol_charge = 1e-4;
    double delta_guess = 0.0;
    StepMethod step = StepMethod::rk45_adaptive;
    double h = 1e-3;
    unsigned threads = 0; // 0: SELFIELD_THREADS or hardware
    bool with_magnetics = true;
};

struct SpectrumRow {
    int nodes = 0;
    int n = 1;
    std::optional<SolutionRecord> record;
    std::optional<VariationalResult> var;
    std::string error; // per-n failures keep the sweep going
};

struct SpectrumResult {
    AnsatzKind ansatz;
    std::vector<SpectrumRow> rows;
};

/// Sweeps node counts [nodes_from, nodes_to]; independent states may run on a
/// worker pool (capped by SELFIELD_THREADS), results assembled in node order.
SpectrumResult run_spectrum(AnsatzKind ansatz, int nodes_from, int nodes_to,
                            const SpectrumOptions& opt = {});

/// table with the fixed header n,beta,delta,epsilon,W_n,W_var,Wn_n2,Wvar_n2,errors
std::string spectrum_csv(const SpectrumResult& res);

/// one full solve (shooting + magnetic + observables) for a single state
SolutionRecord solve_state(AnsatzKind ansatz, int nodes, const SpectrumOptions& opt,
                           ShootingProblem* used = nullptr);

unsigned resolve_thread_count(unsigned requested, std::size_t jobs);

} // namespace selfield

#endif
