#include "selfield/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace selfield {

const char* shot_class_name(ShotClass c) {
    switch (c) {
        case ShotClass::decayed: return "decayed";
        case ShotClass::blew_up_positive: return "blew_up_positive";
        case ShotClass::crossed_negative_extra_node: return "crossed_negative_extra_node";
    }
    return "?";
}

namespace {

constexpr int EV_EXTRA_NODE = 1;
constexpr int EV_UPTURN = 2;
constexpr double DECAY_FLOOR = 1e-8; // relative to max|k|

// Stateful classifier observing accepted nodes.  Counts sign changes of k,
// arms after the final-lobe peak, and fires on the first tail deviation.
class Classifier {
  public:
    Classifier(int target_nodes, double beta) : target_(target_nodes), kscale_(std::abs(beta)) {}

    template <std::size_t N>
    bool operator()(double r, const std::array<double, N>& y, const std::array<double, N>& dy) {
        (void)r;
        double k = y[0], kp = dy[0];
        kmax_ = std::max(kmax_, std::abs(k));
        double s = k > 0.0 ? 1.0 : (k < 0.0 ? -1.0 : last_sign_);
        if (s != last_sign_) {
            last_sign_ = s;
            ++count_;
            armed_ = false;
            if (count_ > target_) {
                fired_ = EV_EXTRA_NODE;
                return true;
            }
            return false;
        }
        if (count_ == target_) {
            if (!armed_) {
                if (k * kp < 0.0) armed_ = true;
            } else if (k * kp > 0.0) {
                fired_ = EV_UPTURN;
                return true;
            }
        }
        if (std::abs(k) > 1e3 * std::max(kmax_, kscale_)) {
            fired_ = EV_UPTURN;
            return true;
        }
        return false;
    }

    int count() const { return count_; }
    int fired() const { return fired_; }
    double kmax() const { return kmax_; }

  private:
    int target_;
    double kscale_;
    double kmax_ = 0.0;
    double last_sign_ = 1.0;
    int count_ = 0;
    bool armed_ = false;
    int fired_ = 0;
};

// tail trough of |k| after the last sign change, capped by the decay floor
template <std::size_t N>
std::size_t trough_index(const Trajectory<N>& traj, double kmax) {
    std::size_t m = traj.size();
    std::size_t last_change = 0;
    double s = traj.y[0][0] >= 0.0 ? 1.0 : -1.0;
    for (std::size_t i = 1; i < m; ++i) {
        double k = traj.y[i][0];
        double si = k > 0.0 ? 1.0 : (k < 0.0 ? -1.0 : s);
        if (si != s) {
            s = si;
            last_change = i;
        }
    }
    std::size_t peak = last_change;
    for (std::size_t i = last_change; i < m; ++i)
        if (std::abs(traj.y[i][0]) > std::abs(traj.y[peak][0])) peak = i;
    std::size_t best = peak;
    for (std::size_t i = peak; i < m; ++i) {
        double a = std::abs(traj.y[i][0]);
        if (a < std::abs(traj.y[best][0])) best = i;
        if (a < DECAY_FLOOR * kmax) break; // below the floor the tail is noise
    }
    return best;
}

IntegratorConfig shot_config(const ShootingProblem& p, double beta) {
    IntegratorConfig cfg = IntegratorConfig::from_grid(p.grid);
    cfg.blowup_threshold = 1e9 * std::max(std::abs(beta), 1.0); // NaN guard only
    return cfg;
}

template <std::size_t N, class Traj>
ShotClass classify_end(const Traj& traj, const Classifier& cl, int target) {
    if (traj.cause == TermCause::event_fired)
        return cl.fired() == EV_EXTRA_NODE ? ShotClass::crossed_negative_extra_node
                                           : ShotClass::blew_up_positive;
    if (traj.cause == TermCause::blowup) return ShotClass::blew_up_positive;
    if (traj.cause == TermCause::max_steps)
        throw SolverError(ErrorKind::numerical, "shoot: max step count exceeded");
    // reached r_max
    double k = traj.y.back()[0], kp = traj.dy.back()[0];
    if (cl.count() == target && (k * kp < 0.0 || std::abs(k) <= DECAY_FLOOR * cl.kmax()))
        return ShotClass::decayed;
    return ShotClass::blew_up_positive;
}

} // namespace

ShotOutcome shoot_once(const ShootingProblem& p, double beta, double delta) {
    p.validate();
    const Ansatz a = p.ansatz.variant;
    const bool linear = !p.self_field;
    SpinorState s0 = linear ? series_start_linear(a, beta, delta, p.grid.r_start)
                            : series_start(a, beta, delta, p.grid.r_start);

    auto rhs = [a, linear](double r, const std::array<double, 4>& y, std::array<double, 4>& dy) {
        SpinorState s{y[0], y[1], y[2], y[3]};
        SpinorState d = spinor_rhs(a, r, s);
        dy[0] = d.k;
        dy[1] = d.n;
        dy[2] = linear ? 0.0 : d.u;
        dy[3] = linear ? 0.0 : d.du;
    };

    Classifier cl(p.nodes, beta);
    std::vector<Event<4>> events(1);
    events[0].id = 1;
    events[0].fn = [&cl](double r, const std::array<double, 4>& y, const std::array<double, 4>& dy) {
        return cl(r, y, dy);
    };

    ShotOutcome out;
    try {
        out.traj = propagate<4>(rhs, {s0.k, s0.n, s0.u, s0.du}, p.grid.r_start, p.grid.r_max,
                                shot_config(p, beta), events);
    } catch (const SolverError& e) {
        std::ostringstream msg;
        msg << e.what() << " (beta=" << beta << ", delta=" << delta << ")";
        throw SolverError(e.kind(), msg.str(), beta, delta);
    }
    out.cls = classify_end<4>(out.traj, cl, p.nodes);
    out.sign_changes = std::min(cl.count(), p.nodes + 1);
    out.i0 = trough_index(out.traj, cl.kmax());
    out.r0 = out.traj.r[out.i0];
    return out;
}

namespace {

double beta_scale_guess(const ShootingProblem& p) {
    int n = p.ansatz.principal(p.nodes);
    double g = p.ansatz.variant == Ansatz::A ? 0.5 / std::pow(double(n), 1.5)
                                             : 0.06 / std::pow(double(n), 1.5);
    return g;
}

} // namespace

BetaSolve solve_beta(const ShootingProblem& p, double delta) {
    double blo, bhi;
    if (p.beta_bracket.first != 0.0 || p.beta_bracket.second != 0.0) {
        blo = p.beta_bracket.first;
        bhi = p.beta_bracket.second;
    } else {
        double g = beta_scale_guess(p);
        blo = 0.3 * g;
        bhi = 3.0 * g;
    }

    BetaSolve res;
    auto classify = [&](double b) {
        ShotOutcome s = shoot_once(p, b, delta);
        res.trace.emplace_back(b, s.cls);
        return s;
    };

    ShotOutcome slo = classify(blo);
    if (slo.cls == ShotClass::decayed) {
        res.beta = blo;
        res.shot = std::move(slo);
        return res;
    }
    ShotOutcome shi = classify(bhi);
    if (shi.cls == ShotClass::decayed) {
        res.beta = bhi;
        res.shot = std::move(shi);
        return res;
    }

    // expand until the endpoints disagree: blew_up marks the small-beta side
    int grow = 0;
    while (slo.cls == shi.cls) {
        if (++grow > 90)
            throw SolverError(ErrorKind::bracket,
                              "solve_beta: endpoints classify identically after expansion", bhi,
                              delta);
        if (slo.cls == ShotClass::blew_up_positive) {
            bhi *= 1.6;
            shi = classify(bhi);
            if (shi.cls == ShotClass::decayed) {
                res.beta = bhi;
                res.shot = std::move(shi);
                return res;
            }
        } else {
            blo /= 1.6;
            slo = classify(blo);
            if (slo.cls == ShotClass::decayed) {
                res.beta = blo;
                res.shot = std::move(slo);
                return res;
            }
        }
    }

    while (bhi - blo > p.tol_beta * std::abs(bhi)) {
        ++res.iterations;
        if (res.iterations > 300)
            throw SolverError(ErrorKind::degenerate_bracket,
                              "solve_beta: bracket failed to collapse", 0.5 * (blo + bhi), delta);
        double bm = 0.5 * (blo + bhi);
        if (!(blo < bm && bm < bhi)) break; // double resolution floor
        ShotOutcome sm = classify(bm);
        if (sm.cls == ShotClass::decayed) {
            res.beta = bm;
            res.shot = std::move(sm);
            return res;
        }
        if (sm.cls == slo.cls) {
            blo = bm;
            slo = std::move(sm);
        } else {
            bhi = bm;
            shi = std::move(sm);
        }
    }
    res.beta = 0.5 * (blo + bhi);
    res.shot = shoot_once(p, res.beta, delta);
    return res;
}

// ---- final augmented pass ----------------------------------------------------

namespace shooting_detail {

Extraction final_pass(const ShootingProblem& p, double beta, double delta) {
    const Ansatz a = p.ansatz.variant;
    const bool linear = !p.self_field;
    const double rs = p.grid.r_start;
    SpinorState s0 = linear ? series_start_linear(a, beta, delta, rs)
                            : series_start(a, beta, delta, rs);

    // y = [k, n, U, U', int k^2 r^2, int n^2 r^2, int U'^2 r^2, int k^2 r]
    auto rhs = [a, linear](double r, const std::array<double, 8>& y, std::array<double, 8>& dy) {
        SpinorState s{y[0], y[1], y[2], y[3]};
        SpinorState d = spinor_rhs(a, r, s);
        dy[0] = d.k;
        dy[1] = d.n;
        dy[2] = linear ? 0.0 : d.u;
        dy[3] = linear ? 0.0 : d.du;
        double r2 = r * r;
        dy[4] = y[0] * y[0] * r2;
        dy[5] = y[1] * y[1] * r2;
        dy[6] = y[3] * y[3] * r2;
        dy[7] = y[0] * y[0] * r;
    };

    // analytic heads over [0, r_start]
    double b2 = beta * beta;
    std::array<double, 8> y0{};
    y0[0] = s0.k;
    y0[1] = s0.n;
    y0[2] = s0.u;
    y0[3] = s0.du;
    if (a == Ansatz::A) {
        y0[4] = b2 * std::pow(rs, 3) / 3.0;
        y0[5] = b2 / 4.0 * std::pow(rs, 3) / 3.0;
        y0[6] = linear ? 0.0 : b2 * b2 * std::pow(rs, 5) / 45.0;
        y0[7] = b2 * rs * rs / 2.0;
    } else {
        y0[4] = b2 * std::pow(rs, 5) / 5.0;
        y0[5] = 9.0 * b2 * std::pow(rs, 3) / 3.0;
        y0[6] = 0.0;
        y0[7] = b2 * std::pow(rs, 4) / 4.0;
    }

    Classifier cl(p.nodes, beta);
    std::vector<Event<8>> events(1);
    events[0].id = 1;
    events[0].fn = [&cl](double r, const std::array<double, 8>& y, const std::array<double, 8>& dy) {
        return cl(r, y, dy);
    };

    Extraction ex;
    ex.traj = propagate<8>(rhs, y0, rs, p.grid.r_max, shot_config(p, beta), events);
    ex.cls = classify_end<8>(ex.traj, cl, p.nodes);
    ex.sign_changes = std::min(cl.count(), p.nodes + 1);
    ex.i0 = trough_index(ex.traj, cl.kmax());
    ex.r0 = ex.traj.r[ex.i0];

    const auto& yr = ex.traj.y[ex.i0];
    double u = yr[2], du = yr[3];
    ex.epsilon = linear ? delta : u + ex.r0 * du;
    ex.q_gauss = linear ? yr[4] : -ex.r0 * ex.r0 * du;

    double zq = yr[4], zn = yr[5], zu = yr[6], zv = yr[7];
    if (ex.epsilon > 0.0) {
        double se = std::sqrt(ex.epsilon);
        double k0 = yr[0];
        double tq = k0 * k0 *
                    (ex.r0 * ex.r0 / (2.0 * se) + ex.r0 / (2.0 * ex.epsilon) +
                     1.0 / (4.0 * ex.epsilon * se));
        zq += tq;
        zn += ex.epsilon * tq;
        zv += k0 * k0 * (ex.r0 / (2.0 * se) + 1.0 / (4.0 * ex.epsilon));
        if (!linear) zu += ex.q_gauss * ex.q_gauss / ex.r0;
    }
    ex.q_int = zq;
    ex.w_alt = zn;
    ex.self_energy = 0.5 * zu;
    ex.int_k2_r = zv;
    ex.valid = ex.epsilon > 1e-12 && std::isfinite(ex.q_int) && ex.q_int < 3.0 &&
               ex.sign_changes <= p.nodes;
    if (linear) ex.q_gauss = ex.q_int;
    return ex;
}

} // namespace shooting_detail

using shooting_detail::Extraction;
using shooting_detail::final_pass;

namespace {

SolutionRecord build_record(const ShootingProblem& p, double beta, double delta,
                            const Extraction& ex, double scale) {
    SolutionRecord rec;
    rec.ansatz = p.ansatz;
    rec.nodes = p.nodes;
    rec.n = p.ansatz.principal(p.nodes);
    rec.self_field = p.self_field;
    rec.beta0 = beta * scale;
    rec.delta0 = delta;
    rec.epsilon = ex.epsilon;
    rec.r0 = ex.r0;

    double s2 = scale * scale;
    rec.q = ex.q_int * s2;
    rec.q_gauss = p.self_field ? ex.q_gauss : rec.q;
    rec.self_energy = ex.self_energy; // zero in linear mode by construction
    rec.w_binding = ex.epsilon + rec.self_energy;
    rec.w_binding_alt = ex.w_alt * s2;
    rec.identity_residual = std::abs(rec.w_binding - rec.w_binding_alt) / rec.w_binding;
    rec.int_k2_r = ex.int_k2_r * s2;
    rec.j = 0.5 * rec.q * p.ansatz.sign_factor();

    std::size_t m = ex.i0 + 1;
    rec.k.r.assign(ex.traj.r.begin(), ex.traj.r.begin() + m);
    rec.nfun.r = rec.k.r;
    rec.u.r = rec.k.r;
    rec.k.value.resize(m);
    rec.k.deriv.resize(m);
    rec.nfun.value.resize(m);
    rec.nfun.deriv.resize(m);
    rec.u.value.resize(m);
    rec.u.deriv.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        rec.k.value[i] = ex.traj.y[i][0] * scale;
        rec.k.deriv[i] = ex.traj.dy[i][0] * scale;
        rec.nfun.value[i] = ex.traj.y[i][1] * scale;
        rec.nfun.deriv[i] = ex.traj.dy[i][1] * scale;
        rec.u.value[i] = ex.traj.y[i][2];
        rec.u.deriv[i] = ex.traj.y[i][3];
    }
    return rec;
}

SolutionRecord solve_linear(const ShootingProblem& p) {
    // linear problem: classification depends on delta only; beta rescales
    double eps_lin = linear_epsilon(p.ansatz.variant, p.nodes);
    double dlo = p.delta_guess > 0.0 ? 0.55 * p.delta_guess : 0.55 * eps_lin;
    double dhi = p.delta_guess > 0.0 ? 1.9 * p.delta_guess : 1.9 * eps_lin;

    auto classify = [&](double d) { return shoot_once(p, 1.0, d).cls; };
    ShotClass clo = classify(dlo), chi = classify(dhi);
    int grow = 0;
    while (clo == chi) {
        if (++grow > 60)
            throw SolverError(ErrorKind::bracket, "linear solve: no classification flip in delta",
                              1.0, dhi);
        if (clo == ShotClass::crossed_negative_extra_node) {
            dhi *= 1.5;
            chi = classify(dhi);
        } else {
            dlo /= 1.5;
            clo = classify(dlo);
        }
    }
    while (dhi - dlo > 1e-13 * dhi) {
        double dm = 0.5 * (dlo + dhi);
        if (!(dlo < dm && dm < dhi)) break;
        ShotClass cm = classify(dm);
        if (cm == ShotClass::decayed) {
            dlo = dhi = dm;
            break;
        }
        (cm == clo ? dlo : dhi) = dm;
    }
    double delta = 0.5 * (dlo + dhi);
    Extraction ex = final_pass(p, 1.0, delta);
    if (!(ex.q_int > 0.0))
        throw SolverError(ErrorKind::numerical, "linear solve: empty normalization", 1.0, delta);
    double scale = 1.0 / std::sqrt(ex.q_int);
    return build_record(p, 1.0, delta, ex, scale);
}

} // namespace

SolutionRecord solve_delta(const ShootingProblem& problem) {
    problem.validate();
    if (!problem.self_field) return solve_linear(problem);

    ShootingProblem p = problem;
    if (p.grid.r_max <= 0.0)
        p.grid.r_max = ShootingProblem::default_r_max(p.ansatz.variant, p.nodes);

    const double eps_lin = linear_epsilon(p.ansatz.variant, p.nodes);
    const double q_goal = std::min(1e-6, p.tol_charge);

    for (int attempt = 0;; ++attempt) {
        double dlo = 1.02 * eps_lin;
        double dhi = 2.6 * eps_lin;
        if (p.delta_guess > 0.0) {
            dlo = std::max(dlo, 0.8 * p.delta_guess);
            dhi = std::max(dhi, 1.25 * p.delta_guess);
        }

        double beta_warm = 0.0;
        auto evaluate = [&](double d) -> std::pair<double, Extraction> {
            ShootingProblem pi = p;
            if (beta_warm > 0.0 && (pi.beta_bracket.first == 0.0 && pi.beta_bracket.second == 0.0))
                pi.beta_bracket = {0.45 * beta_warm, 2.1 * beta_warm};
            BetaSolve bs;
            try {
                bs = solve_beta(pi, d);
            } catch (const SolverError&) {
                if (pi.beta_bracket.first != 0.0) {
                    pi.beta_bracket = {0.0, 0.0}; // retry with the default bracket
                    bs = solve_beta(pi, d);
                } else {
                    throw;
                }
            }
            beta_warm = bs.beta;
            return {bs.beta, final_pass(p, bs.beta, d)};
        };

        // establish the low (q < 1) end; below the linear eigenvalue there is
        // no bracket at all, which also means "delta too small"
        double glo;
        double beta_lo;
        Extraction ex_lo;
        for (int tries = 0;; ++tries) {
            if (tries > 30)
                throw SolverError(ErrorKind::bracket, "solve_delta: no feasible low delta", 0.0,
                                  dlo);
            try {
                auto [b, ex] = evaluate(dlo);
                if (ex.valid && ex.q_int < 1.0) {
                    glo = ex.q_int - 1.0;
                    beta_lo = b;
                    ex_lo = std::move(ex);
                    break;
                }
                if (!ex.valid) {
                    dhi = dlo; // already beyond the branch end
                    dlo = 0.5 * (1.02 * eps_lin + dlo);
                } else {
                    dhi = dlo; // q >= 1 already
                    dlo = 0.5 * (1.02 * eps_lin + dlo);
                }
            } catch (const SolverError&) {
                dlo = 0.5 * (dlo + dhi); // infeasible inner problem: raise delta
            }
        }

        // safeguarded outer iteration: bisection with secant acceleration on the
        // valid (q < 1) side; invalid extractions count as "delta too large"
        double g_lo = glo;
        double d_best = dlo, beta_best = beta_lo, g_best = glo;
        Extraction ex_best = std::move(ex_lo);
        double dhi_valid_g = std::numeric_limits<double>::quiet_NaN();
        double dhi_valid_d = std::numeric_limits<double>::quiet_NaN();

        for (int it = 0; it < 200; ++it) {
            if (std::abs(g_best) <= q_goal) break;
            if (dhi - dlo < 1e-15 * dhi) break;
            double d;
            if (std::isfinite(dhi_valid_g)) {
                d = dlo - g_lo * (dhi_valid_d - dlo) / (dhi_valid_g - g_lo);
                double w = dhi - dlo;
                if (!(d > dlo + 0.02 * w && d < dhi - 0.02 * w)) d = 0.5 * (dlo + dhi);
            } else {
                d = 0.5 * (dlo + dhi);
            }
            std::pair<double, Extraction> pe;
            try {
                pe = evaluate(d);
            } catch (const SolverError&) {
                dhi = d;
                continue;
            }
            Extraction& ex = pe.second;
            if (!ex.valid) {
                dhi = d;
                dhi_valid_g = std::numeric_limits<double>::quiet_NaN();
                continue;
            }
            double g = ex.q_int - 1.0;
            if (g < 0.0) {
                dlo = d;
                g_lo = g;
            } else {
                dhi = d;
                dhi_valid_g = g;
                dhi_valid_d = d;
            }
            if (std::abs(g) < std::abs(g_best)) {
                g_best = g;
                d_best = d;
                beta_best = pe.first;
                ex_best = std::move(ex);
            }
        }

        bool charge_ok = std::abs(g_best) <= p.tol_charge;
        bool consistent =
            std::abs(ex_best.q_int - ex_best.q_gauss) <= 10.0 * p.tol_charge;
        if (charge_ok && consistent) return build_record(p, beta_best, d_best, ex_best, 1.0);

        if (attempt >= 2)
            throw SolverError(ErrorKind::cutoff_too_small,
                              charge_ok ? "solve_delta: q estimates disagree; r_max too small"
                                        : "solve_delta: |q-1| stalled above tol_charge",
                              beta_best, d_best);
        p.grid.r_max *= 1.6; // retry with a longer radial window
    }
}

} // namespace selfield
