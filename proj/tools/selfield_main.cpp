// selfield: regular solutions of the self-consistent hydrogen model
// (spinor field + its own electrostatic field) by shooting and variational
// methods.  Subcommands: solve, spectrum, profiles, check.

#include "selfield/magnetic.hpp"
#include "selfield/observables.hpp"
#include "selfield/record_io.hpp"
#include "selfield/shooting.hpp"
#include "selfield/spectrum.hpp"
#include "selfield/variational.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

namespace {

using namespace selfield;

int exit_code_for(const SolverError& e) {
    switch (e.kind()) {
        case ErrorKind::bracket:
        case ErrorKind::degenerate_bracket: return 2;
        default: return 3;
    }
}

struct CommonFlags {
    std::string ansatz = "A";
    int nodes = 0;
    bool linear = false;
    bool minus_sign = false;
    double r_max = 0.0;
    double tol_charge = 1e-4;
    double delta_guess = 0.0;
    std::string beta_bracket; // "lo,hi"
    std::string integrator = "rk45";
    double h = 1e-3;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--ansatz", f.ansatz, "ansatz A (s-like) or B (p-like)")
        ->check(CLI::IsMember({"A", "B", "a", "b"}));
    cmd->add_option("--nodes", f.nodes, "node count N of the main radial function")
        ->check(CLI::NonNegativeNumber);
    cmd->add_flag("--linear", f.linear, "self-field off (linear regression mode)");
    cmd->add_flag("--conjugate", f.minus_sign, "conjugate ansatz: flips the signs of j and mu");
    cmd->add_option("--r-max", f.r_max, "radial window (0: per-state default)");
    cmd->add_option("--tol-charge", f.tol_charge, "|q-1| tolerance for electroneutrality");
    cmd->add_option("--delta-guess", f.delta_guess, "starting U(0) for the outer iteration");
    cmd->add_option("--beta-bracket", f.beta_bracket, "initial beta bracket as lo,hi");
    cmd->add_option("--integrator", f.integrator, "rk45 (adaptive) or rk4 (fixed step)")
        ->check(CLI::IsMember({"rk45", "rk4"}));
    cmd->add_option("--rk4-step", f.h, "step size for --integrator rk4");
}

SpectrumOptions to_options(const CommonFlags& f) {
    SpectrumOptions o;
    o.linear = f.linear;
    o.r_max = f.r_max;
    o.tol_charge = f.tol_charge;
    o.delta_guess = f.delta_guess;
    o.step = f.integrator == "rk4" ? StepMethod::rk4_fixed : StepMethod::rk45_adaptive;
    o.h = f.h;
    return o;
}

AnsatzKind to_kind(const CommonFlags& f) {
    AnsatzKind k;
    k.variant = ansatz_from_letter(f.ansatz[0]);
    k.sign = f.minus_sign ? SpinSign::minus : SpinSign::plus;
    return k;
}

std::pair<double, double> parse_bracket(const std::string& s) {
    if (s.empty()) return {0.0, 0.0};
    auto comma = s.find(',');
    if (comma == std::string::npos)
        throw SolverError(ErrorKind::domain, "--beta-bracket expects lo,hi");
    return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
}

int cmd_solve(const CommonFlags& f, const std::string& out_path) {
    AnsatzKind kind = to_kind(f);
    ShootingProblem p;
    p.ansatz = kind;
    p.nodes = f.nodes;
    p.self_field = !f.linear;
    p.grid.r_max =
        f.r_max > 0.0 ? f.r_max : ShootingProblem::default_r_max(kind.variant, f.nodes);
    p.grid.method = f.integrator == "rk4" ? StepMethod::rk4_fixed : StepMethod::rk45_adaptive;
    p.grid.h = f.h;
    p.tol_charge = f.tol_charge;
    p.delta_guess = f.delta_guess;
    p.beta_bracket = parse_bracket(f.beta_bracket);

    SolutionRecord rec = solve_delta(p);
    MagneticResult mag = solve_lambda(rec);
    rec.lambda = mag.lambda;
    rec.gamma0 = mag.gamma0;
    rec.mu = mag.mu;
    rec.mu_identity = mag.mu_identity;
    rec.j = angular_momentum(rec);

    write_record_file(out_path, rec, p);

    DimensionalConstants consts;
    DimensionalReport rep = dimensional_report(rec, consts);
    std::printf("ansatz %c  N=%d (n=%d)%s\n", ansatz_letter(rec.ansatz.variant), rec.nodes, rec.n,
                f.linear ? "  [linear mode]" : "");
    std::printf("  beta0    = %.6f\n  delta0   = %.6f\n  epsilon  = %.6g\n", rec.beta0, rec.delta0,
                rec.epsilon);
    std::printf("  q        = %.6f   (gauss %.6f)\n", rec.q, rec.q_gauss);
    std::printf("  W        = %.6g   (alt %.6g, residual %.2e)\n", rec.w_binding,
                rec.w_binding_alt, rec.identity_residual);
    std::printf("  mu       = %.6f   j = %+.4f   r0 = %.1f\n", rec.mu, rec.j, rec.r0);
    std::printf("  W_B      = %.4f R = %.4f eV\n", rep.w_binding_rydberg, rep.w_binding_eV);
    std::printf("  record  -> %s\n", out_path.c_str());
    return 0;
}

int cmd_spectrum(const CommonFlags& f, int from, int to, const std::string& method,
                 unsigned threads, const std::string& out_path) {
    SpectrumOptions o = to_options(f);
    o.threads = threads;
    o.method = method == "shooting" ? SpectrumMethod::shooting
               : method == "variational" ? SpectrumMethod::variational
                                         : SpectrumMethod::both;
    SpectrumResult res = run_spectrum(to_kind(f), from, to, o);
    std::string csv = spectrum_csv(res);
    std::ofstream out(out_path);
    if (!out) throw SolverError(ErrorKind::domain, "cannot open for writing: " + out_path);
    out << csv;

    int failures = 0;
    for (const auto& row : res.rows)
        if (!row.error.empty()) {
            ++failures;
            std::fprintf(stderr, "n=%d: %s\n", row.n, row.error.c_str());
        }
    std::printf("%zu rows -> %s (%d failures)\n", res.rows.size(), out_path.c_str(), failures);
    return 0;
}

int cmd_profiles(const std::string& in_path, const std::string& out_path, std::size_t samples) {
    SolutionRecord rec = read_record_file(in_path);
    std::ofstream out(out_path);
    if (!out) throw SolverError(ErrorKind::domain, "cannot open for writing: " + out_path);
    out << profiles_csv(rec, samples);
    std::printf("%zu samples -> %s\n", samples, out_path.c_str());
    return 0;
}

int cmd_check(const std::vector<std::string>& paths, double tol_identity, double tol_charge,
              double tol_moment) {
    bool ok = true;
    std::vector<SolutionRecord> records;
    for (const auto& path : paths) {
        SolutionRecord rec = read_record_file(path);
        records.push_back(rec);
        EnergyBreakdown eb = binding_energy(rec);
        double charge_gap = std::abs(rec.q - rec.q_gauss);
        double moment_gap = rec.lambda.empty()
                                ? 0.0
                                : std::abs(3.0 * rec.mu -
                                           3.0 * (rec.ansatz.variant == Ansatz::A ? rec.q
                                                                                  : rec.q / 3.0));
        double virial = std::abs(virial_residual(rec));
        bool row_ok = eb.identity_residual <= tol_identity &&
                      (!rec.self_field || charge_gap <= tol_charge) && moment_gap <= tol_moment;
        ok = ok && row_ok;
        std::printf("%s: n=%d identity=%.2e charge_gap=%.2e moment_gap=%.2e virial=%.2e %s\n",
                    path.c_str(), rec.n, eb.identity_residual, charge_gap, moment_gap, virial,
                    row_ok ? "ok" : "FAIL");
    }
    if (records.size() >= 2) {
        BohrFit fit = bohr_law_fit(records);
        std::printf("bohr fit: W = %.6f  X^2 = %.4f\n", fit.W,
                    renormalization_factor_sq(fit.W));
    }
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"regular solutions of the self-consistent hydrogen model"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value config file; flags override");

    CommonFlags f;

    auto* solve = app.add_subcommand("solve", "solve one (ansatz, N) state and write JSON");
    add_common(solve, f);
    std::string solve_out;
    solve->add_option("--out", solve_out, "output record (JSON)")->required();

    auto* spectrum = app.add_subcommand("spectrum", "sweep node counts and write a CSV table");
    add_common(spectrum, f);
    int from = 0, to = 0;
    std::string method = "both", spectrum_out;
    unsigned threads = 0;
    spectrum->add_option("--nodes-from", from, "first node count")->required();
    spectrum->add_option("--nodes-to", to, "last node count")->required();
    spectrum->add_option("--method", method, "shooting | variational | both")
        ->check(CLI::IsMember({"shooting", "variational", "both"}));
    spectrum->add_option("--threads", threads, "worker cap (also SELFIELD_THREADS)");
    spectrum->add_option("--out", spectrum_out, "output table (CSV)")->required();

    auto* profiles = app.add_subcommand("profiles", "resample a record to plot-ready CSV");
    std::string prof_in, prof_out;
    std::size_t samples = 2000;
    profiles->add_option("--in", prof_in, "input record (JSON)")->required();
    profiles->add_option("--out", prof_out, "output CSV")->required();
    profiles->add_option("--samples", samples, "uniform sample count");

    auto* check = app.add_subcommand("check", "verify integral identities of records");
    std::vector<std::string> check_paths;
    double tol_identity = 1e-3, tol_charge_chk = 1e-3, tol_moment = 3e-2;
    check->add_option("records", check_paths, "record JSON files")->required();
    check->add_option("--tol-identity", tol_identity, "energy identity tolerance");
    check->add_option("--tol-charge", tol_charge_chk, "q consistency tolerance");
    check->add_option("--tol-moment", tol_moment, "magnetic moment identity tolerance");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(f, solve_out);
        if (spectrum->parsed()) return cmd_spectrum(f, from, to, method, threads, spectrum_out);
        if (profiles->parsed()) return cmd_profiles(prof_in, prof_out, samples);
        if (check->parsed()) return cmd_check(check_paths, tol_identity, tol_charge_chk, tol_moment);
    } catch (const selfield::SolverError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
