#include "selfield/record_io.hpp"

#include "selfield/integrate.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace selfield {

using ordered_json = nlohmann::ordered_json;

namespace {

std::vector<std::size_t> downsample_indices(std::size_t m, std::size_t cap) {
    std::vector<std::size_t> idx;
    if (m <= cap) {
        idx.resize(m);
        for (std::size_t i = 0; i < m; ++i) idx[i] = i;
        return idx;
    }
    std::size_t stride = (m + cap - 2) / (cap - 1);
    for (std::size_t i = 0; i + 1 < m; i += stride) idx.push_back(i);
    idx.push_back(m - 1);
    return idx;
}

ordered_json profile_array(const std::vector<double>& v, const std::vector<std::size_t>& idx) {
    ordered_json a = ordered_json::array();
    for (std::size_t i : idx) a.push_back(i < v.size() ? v[i] : 0.0);
    return a;
}

ordered_json config_json(const ShootingProblem& cfg) {
    ordered_json c;
    c["ansatz"] = std::string(1, ansatz_letter(cfg.ansatz.variant));
    c["sign"] = cfg.ansatz.sign == SpinSign::plus ? "plus" : "minus";
    c["nodes"] = cfg.nodes;
    c["linear"] = !cfg.self_field;
    c["r_start"] = cfg.grid.r_start;
    c["r_max"] = cfg.grid.r_max;
    c["method"] = cfg.grid.method == StepMethod::rk4_fixed ? "rk4_fixed" : "rk45_adaptive";
    c["h"] = cfg.grid.h;
    c["abs_tol"] = cfg.grid.abs_tol;
    c["rel_tol"] = cfg.grid.rel_tol;
    c["tol_beta"] = cfg.tol_beta;
    c["tol_charge"] = cfg.tol_charge;
    c["beta_bracket"] = {cfg.beta_bracket.first, cfg.beta_bracket.second};
    c["delta_guess"] = cfg.delta_guess;
    return c;
}

std::string iso_now() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

} // namespace

std::string record_to_json(const SolutionRecord& rec, const ShootingProblem& cfg,
                           std::size_t max_profile_points, const std::string& timestamp) {
    ordered_json j;
    j["ansatz"] = std::string(1, ansatz_letter(rec.ansatz.variant));
    j["nodes"] = rec.nodes;
    j["n"] = rec.n;
    j["beta0"] = rec.beta0;
    j["delta0"] = rec.delta0;
    j["gamma0"] = rec.gamma0;
    j["epsilon"] = rec.epsilon;
    j["q"] = rec.q;
    j["r0"] = rec.r0;
    j["self_energy"] = rec.self_energy;
    j["w_binding"] = rec.w_binding;
    j["w_binding_alt"] = rec.w_binding_alt;
    j["identity_residual"] = rec.identity_residual;
    j["mu"] = rec.mu;
    j["j"] = rec.j;

    auto idx = downsample_indices(rec.k.size(), max_profile_points);
    ordered_json prof;
    prof["r"] = profile_array(rec.k.r, idx);
    prof["k"] = profile_array(rec.k.value, idx);
    prof["n"] = profile_array(rec.nfun.value, idx);
    prof["U"] = profile_array(rec.u.value, idx);
    prof["lambda"] = rec.lambda.empty() ? ordered_json::array()
                                        : profile_array(rec.lambda.value, idx);
    j["profiles"] = prof;
    j["config"] = config_json(cfg);
    j["provenance"] = {{"version", kVersion},
                       {"timestamp", timestamp.empty() ? iso_now() : timestamp}};
    return j.dump(1);
}

namespace {

// U' from the enclosed charge: U' = -(1/r^2) int_0^r k^2 s^2 ds
std::vector<double> rebuild_du(const RadialProfile& k, bool linear) {
    std::size_t m = k.size();
    std::vector<double> du(m, 0.0);
    if (linear) return du;
    std::vector<double> f(m), df(m);
    for (std::size_t i = 0; i < m; ++i) {
        f[i] = k.value[i] * k.value[i] * k.r[i] * k.r[i];
        df[i] = 2.0 * k.value[i] * k.deriv[i] * k.r[i] * k.r[i] +
                2.0 * k.value[i] * k.value[i] * k.r[i];
    }
    std::vector<double> q = mesh_cumulative(k.r, f, df);
    double head = k.value.front() * k.value.front() * std::pow(k.r.front(), 3) / 3.0;
    for (std::size_t i = 0; i < m; ++i) du[i] = -(q[i] + head) / (k.r[i] * k.r[i]);
    return du;
}

} // namespace

SolutionRecord record_from_json(const std::string& text, ShootingProblem* cfg_out) {
    ordered_json j = ordered_json::parse(text);
    SolutionRecord rec;
    std::string a = j.at("ansatz").get<std::string>();
    if (a.empty()) throw SolverError(ErrorKind::domain, "record: empty ansatz");
    rec.ansatz.variant = ansatz_from_letter(a[0]);
    rec.nodes = j.at("nodes").get<int>();
    rec.n = j.at("n").get<int>();
    rec.beta0 = j.at("beta0").get<double>();
    rec.delta0 = j.at("delta0").get<double>();
    rec.gamma0 = j.at("gamma0").get<double>();
    rec.epsilon = j.at("epsilon").get<double>();
    rec.q = j.at("q").get<double>();
    rec.r0 = j.at("r0").get<double>();
    rec.self_energy = j.at("self_energy").get<double>();
    rec.w_binding = j.at("w_binding").get<double>();
    rec.w_binding_alt = j.at("w_binding_alt").get<double>();
    rec.identity_residual = j.at("identity_residual").get<double>();
    rec.mu = j.at("mu").get<double>();
    rec.j = j.at("j").get<double>();
    rec.ansatz.sign = rec.j < 0.0 ? SpinSign::minus : SpinSign::plus;

    const auto& prof = j.at("profiles");
    rec.k.r = prof.at("r").get<std::vector<double>>();
    rec.k.value = prof.at("k").get<std::vector<double>>();
    rec.nfun.r = rec.k.r;
    rec.nfun.value = prof.at("n").get<std::vector<double>>();
    rec.u.r = rec.k.r;
    rec.u.value = prof.at("U").get<std::vector<double>>();
    auto lam = prof.at("lambda").get<std::vector<double>>();
    if (!lam.empty()) {
        rec.lambda.r = rec.k.r;
        rec.lambda.value = std::move(lam);
    }

    bool linear = false;
    if (j.contains("config")) {
        const auto& c = j.at("config");
        linear = c.value("linear", false);
        if (cfg_out) {
            cfg_out->ansatz = rec.ansatz;
            cfg_out->nodes = rec.nodes;
            cfg_out->self_field = !linear;
            cfg_out->grid.r_start = c.value("r_start", 1e-6);
            cfg_out->grid.r_max = c.value("r_max", 0.0);
            cfg_out->grid.method = c.value("method", std::string("rk45_adaptive")) == "rk4_fixed"
                                       ? StepMethod::rk4_fixed
                                       : StepMethod::rk45_adaptive;
            cfg_out->grid.h = c.value("h", 1e-3);
            cfg_out->grid.abs_tol = c.value("abs_tol", 1e-12);
            cfg_out->grid.rel_tol = c.value("rel_tol", 1e-10);
            cfg_out->tol_beta = c.value("tol_beta", 1e-12);
            cfg_out->tol_charge = c.value("tol_charge", 1e-4);
            cfg_out->delta_guess = c.value("delta_guess", 0.0);
        }
    }
    rec.self_field = !linear;

    // derivatives from the governing equations
    std::size_t m = rec.k.size();
    rec.k.deriv.resize(m);
    rec.nfun.deriv.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        double r = rec.k.r[i];
        double kk = rec.k.value[i], nn = rec.nfun.value[i], uu = rec.u.value[i];
        if (rec.ansatz.variant == Ansatz::A) {
            rec.k.deriv[i] = nn;
            rec.nfun.deriv[i] = (uu - 1.0 / r) * kk - 2.0 * nn / r;
        } else {
            rec.k.deriv[i] = -nn - 2.0 * kk / r;
            rec.nfun.deriv[i] = -(uu - 1.0 / r) * kk;
        }
    }
    rec.u.deriv = rebuild_du(rec.k, linear);
    rec.q_gauss = linear ? rec.q : -rec.r0 * rec.r0 * rec.u.deriv.back();

    // int k^2 r dr for the virial check
    if (m >= 2) {
        std::vector<double> f(m), df(m);
        for (std::size_t i = 0; i < m; ++i) {
            f[i] = rec.k.value[i] * rec.k.value[i] * rec.k.r[i];
            df[i] = 2.0 * rec.k.value[i] * rec.k.deriv[i] * rec.k.r[i] +
                    rec.k.value[i] * rec.k.value[i];
        }
        rec.int_k2_r = mesh_integral(rec.k.r, f, df);
        if (rec.epsilon > 0.0) {
            double k0 = rec.k.value.back(), se = std::sqrt(rec.epsilon);
            rec.int_k2_r += k0 * k0 * (rec.r0 / (2.0 * se) + 1.0 / (4.0 * rec.epsilon));
        }
    }
    return rec;
}

void write_record_file(const std::string& path, const SolutionRecord& rec,
                       const ShootingProblem& cfg) {
    std::ofstream out(path);
    if (!out) throw SolverError(ErrorKind::domain, "cannot open for writing: " + path);
    out << record_to_json(rec, cfg) << "\n";
}

SolutionRecord read_record_file(const std::string& path, ShootingProblem* cfg_out) {
    std::ifstream in(path);
    if (!in) throw SolverError(ErrorKind::domain, "cannot open: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return record_from_json(ss.str(), cfg_out);
}

std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string profiles_csv(const SolutionRecord& rec, std::size_t samples) {
    if (rec.k.size() < 2) throw SolverError(ErrorKind::domain, "profiles_csv: empty record");
    if (samples < 2) samples = 2;
    RadialProfile lam = rec.lambda;
    if (!lam.empty() && !lam.has_deriv()) {
        // finite-difference slopes are enough for plotting output
        lam.deriv.resize(lam.size());
        for (std::size_t i = 0; i < lam.size(); ++i) {
            std::size_t i0 = i == 0 ? 0 : i - 1;
            std::size_t i1 = i + 1 == lam.size() ? i : i + 1;
            lam.deriv[i] = (lam.value[i1] - lam.value[i0]) / (lam.r[i1] - lam.r[i0]);
        }
    }
    std::string out = "r,k,n,U,lambda\n";
    double ra = rec.k.r.front(), rb = rec.k.r.back();
    for (std::size_t i = 0; i < samples; ++i) {
        double r = ra + (rb - ra) * double(i) / double(samples - 1);
        out += csv_num(r);
        out += ',';
        out += csv_num(rec.k.eval(r));
        out += ',';
        out += csv_num(rec.nfun.eval(r));
        out += ',';
        out += csv_num(rec.u.eval(r));
        out += ',';
        out += csv_num(lam.empty() ? 0.0 : lam.eval(r));
        out += '\n';
    }
    return out;
}

} // namespace selfield
