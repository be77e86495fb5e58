#include "selfield/spectrum.hpp"

#include "selfield/magnetic.hpp"
#include "selfield/observables.hpp"
#include "selfield/record_io.hpp"
#include "selfield/shooting.hpp"

#include <cstdlib>
#include <future>
#include <thread>

namespace selfield {

unsigned resolve_thread_count(unsigned requested, std::size_t jobs) {
    unsigned t = requested;
    if (t == 0) {
        if (const char* env = std::getenv("SELFIELD_THREADS")) {
            long v = std::strtol(env, nullptr, 10);
            if (v > 0) t = unsigned(v);
        }
    }
    if (t == 0) t = std::max(1u, std::thread::hardware_concurrency());
    return unsigned(std::min<std::size_t>(t, std::max<std::size_t>(jobs, 1)));
}

SolutionRecord solve_state(AnsatzKind ansatz, int nodes, const SpectrumOptions& opt,
                           ShootingProblem* used) {
    ShootingProblem p;
    p.ansatz = ansatz;
    p.nodes = nodes;
    p.self_field = !opt.linear;
    p.grid.r_max = opt.r_max > 0.0 ? opt.r_max
                                   : ShootingProblem::default_r_max(ansatz.variant, nodes);
    p.grid.method = opt.step;
    p.grid.h = opt.h;
    p.tol_charge = opt.tol_charge;
    p.delta_guess = opt.delta_guess;

    SolutionRecord rec = solve_delta(p);
    if (opt.with_magnetics) {
        MagneticResult mag = solve_lambda(rec);
        rec.lambda = mag.lambda;
        rec.gamma0 = mag.gamma0;
        rec.mu = mag.mu;
        rec.mu_identity = mag.mu_identity;
    }
    if (used) *used = p;
    return rec;
}

SpectrumResult run_spectrum(AnsatzKind ansatz, int nodes_from, int nodes_to,
                            const SpectrumOptions& opt) {
    if (nodes_from < 0 || nodes_to < nodes_from)
        throw SolverError(ErrorKind::domain, "spectrum: bad node range");

    SpectrumResult res;
    res.ansatz = ansatz;
    std::size_t count = std::size_t(nodes_to - nodes_from + 1);
    res.rows.resize(count);

    auto work = [&](std::size_t i) {
        SpectrumRow row;
        row.nodes = nodes_from + int(i);
        row.n = ansatz.principal(row.nodes);
        if (opt.method != SpectrumMethod::variational) {
            try {
                row.record = solve_state(ansatz, row.nodes, opt);
            } catch (const SolverError& e) {
                row.error = e.what();
            } catch (const std::exception& e) {
                row.error = e.what();
            }
        }
        if (opt.method != SpectrumMethod::shooting) {
            try {
                row.var = optimize(ansatz, row.nodes, !opt.linear);
            } catch (const std::exception& e) {
                if (!row.error.empty()) row.error += "; ";
                row.error += e.what();
            }
        }
        return row;
    };

    unsigned threads = resolve_thread_count(opt.threads, count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) res.rows[i] = work(i);
        return res;
    }
    std::size_t next = 0;
    while (next < count) {
        std::size_t batch = std::min<std::size_t>(threads, count - next);
        std::vector<std::future<SpectrumRow>> fut;
        fut.reserve(batch);
        for (std::size_t b = 0; b < batch; ++b)
            fut.push_back(std::async(std::launch::async, work, next + b));
        for (std::size_t b = 0; b < batch; ++b) res.rows[next + b] = fut[b].get();
        next += batch;
    }
    return res;
}

std::string spectrum_csv(const SpectrumResult& res) {
    std::string out = "n,beta,delta,epsilon,W_n,W_var,Wn_n2,Wvar_n2,errors\n";
    for (const auto& row : res.rows) {
        double n2 = double(row.n) * double(row.n);
        out += std::to_string(row.n);
        out += ',';
        if (row.record) {
            out += csv_num(row.record->beta0);
            out += ',';
            out += csv_num(row.record->delta0);
            out += ',';
            out += csv_num(row.record->epsilon);
            out += ',';
            out += csv_num(row.record->w_binding);
            out += ',';
        } else {
            out += ",,,,";
        }
        if (row.var) {
            out += csv_num(row.var->w_var);
            out += ',';
        } else {
            out += ',';
        }
        if (row.record) out += csv_num(row.record->w_binding * n2);
        out += ',';
        if (row.var) out += csv_num(row.var->w_var * n2);
        out += ',';
        // commas in messages would break the column layout
        std::string err = row.error;
        for (char& c : err)
            if (c == ',' || c == '\n') c = ';';
        out += err;
        out += '\n';
    }
    return out;
}

} // namespace selfield
