#include "steklov/solve.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace steklov {

const char* to_string(TrajectoryStatus s) {
    switch (s) {
        case TrajectoryStatus::ReachedZero: return "ReachedZero";
        case TrajectoryStatus::NearSingularHessian: return "NearSingularHessian";
        case TrajectoryStatus::StepFailure: return "StepFailure";
    }
    return "?";
}

Vector minimize_convexified(const Polynomial& f, const SteklovCoeffs& s, double t0,
                            const SolverConfig& cfg, const Vector* x_init) {
    const int n = dim(f);
    Vector x = x_init ? *x_init : Vector::Zero(n);
    Vector g = steklov_grad_x(s, x, t0);
    for (int it = 0; it < cfg.newton_max_iters; ++it) {
        if (g.lpNorm<Eigen::Infinity>() <= cfg.newton_tol) return x;
        const SymMatrix h = steklov_hess_x(s, x, t0);
        const Vector dx = -solve_sym(h, g, cfg.rcond_threshold).x;
        const double phi0 = g.squaredNorm();
        double step = 1.0;
        Vector x_new;
        Vector g_new;
        for (int halving = 0; halving < 30; ++halving) {
            x_new = x + step * dx;
            g_new = steklov_grad_x(s, x_new, t0);
            if (g_new.squaredNorm() <= phi0 * (1.0 - 2.0e-4 * step)) break;
            step *= 0.5;
        }
        x = x_new;
        g = g_new;
    }
    if (g.lpNorm<Eigen::Infinity>() <= cfg.newton_tol) return x;
    throw NewtonFailureError("minimize_convexified: no convergence in " +
                             std::to_string(cfg.newton_max_iters) + " iterations (|grad|_inf = " +
                             std::to_string(g.lpNorm<Eigen::Infinity>()) + ")");
}

namespace {

// Dormand-Prince 5(4) coefficients
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176,
                 A65 = -5103.0 / 18656;
constexpr double A71 = 35.0 / 384, A73 = 500.0 / 1113, A74 = 125.0 / 192, A75 = -2187.0 / 6784,
                 A76 = 11.0 / 84;
constexpr double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920, E5 = -17253.0 / 339200,
                 E6 = 22.0 / 525, E7 = -1.0 / 40;

struct RhsOutcome {
    bool ok;
    double bad_t;    // stage t at which the Hessian failed
    double rcond;    // rcond seen there (0 for an indefinite matrix)
};

} // namespace

TrajectoryResult trajectory(const Polynomial& f, const SteklovCoeffs& s, const Vector& x0,
                            double t0, const SolverConfig& cfg) {
    const int n = dim(f);
    TrajectoryResult out;
    out.rhs_evaluations = 0;
    out.steps_accepted = 0;
    out.steps_rejected = 0;

    {
        const double g0 = steklov_grad_x(s, x0, t0).lpNorm<Eigen::Infinity>();
        if (!(g0 <= 10.0 * cfg.newton_tol))
            throw std::invalid_argument(
                "trajectory: x0 is not a stationary point of mu(., t0) (|grad|_inf = " +
                std::to_string(g0) + ")");
    }

    out.samples.emplace_back(t0, x0);
    if (t0 <= 0.0) {
        out.status = TrajectoryStatus::ReachedZero;
        out.x_final = x0;
        return out;
    }

    RhsOutcome flag{true, 0.0, 0.0};
    auto rhs = [&](double t, const Vector& x, Vector& dxdt) -> bool {
        ++out.rhs_evaluations;
        const SymMatrix h = steklov_hess_x(s, x, t);
        const Vector gq = s.q.gradient(x);
        const SpdSolveResult sol = solve_spd(h, gq);
        if (!sol.positive_definite || sol.rcond < cfg.rcond_threshold) {
            flag = {false, t, sol.positive_definite ? sol.rcond : 0.0};
            return false;
        }
        dxdt = -(t / 3.0) * sol.x;
        return true;
    };

    double t = t0;
    Vector x = x0;
    Vector k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), x_new(n), err(n), stage(n);

    const double hmin = 1e-14 * t0;
    bool singular_seen = false;
    double singular_t = 0.0;

    auto finish_singular = [&](double at) {
        out.status = TrajectoryStatus::NearSingularHessian;
        out.abort_t = at;
        out.x_final = x;
        if (out.samples.back().first != t) out.samples.emplace_back(t, x);
        return out;
    };

    if (!rhs(t, x, k1)) return finish_singular(flag.bad_t);

    // initial step: small fraction of the interval, scaled down when the
    // velocity is already large
    double h = -std::min(t0 / 50.0, 0.1 / (1.0 + k1.norm()));
    bool just_rejected = false;

    const long max_attempts = 100000000L;
    for (long attempt = 0; attempt < max_attempts; ++attempt) {
        if (t + h < 0.0) h = -t;

        bool stage_ok = true;
        stage = x + h * (A21 * k1);
        stage_ok = rhs(t + C2 * h, stage, k2);
        if (stage_ok) {
            stage = x + h * (A31 * k1 + A32 * k2);
            stage_ok = rhs(t + C3 * h, stage, k3);
        }
        if (stage_ok) {
            stage = x + h * (A41 * k1 + A42 * k2 + A43 * k3);
            stage_ok = rhs(t + C4 * h, stage, k4);
        }
        if (stage_ok) {
            stage = x + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4);
            stage_ok = rhs(t + C5 * h, stage, k5);
        }
        if (stage_ok) {
            stage = x + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5);
            stage_ok = rhs(t + h, stage, k6);
        }
        if (stage_ok) {
            x_new = x + h * (A71 * k1 + A73 * k3 + A74 * k4 + A75 * k5 + A76 * k6);
            stage_ok = rhs(t + h, x_new, k7);
        }

        if (!stage_ok) {
            // A stage hit a non-PD or near-singular Hessian. Retry with a
            // smaller step; a genuine fold keeps failing all the way down.
            singular_seen = true;
            singular_t = flag.bad_t;
            ++out.steps_rejected;
            h *= 0.5;
            just_rejected = true;
            if (std::abs(h) < hmin) return finish_singular(singular_t);
            continue;
        }

        err = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);
        double err_norm = 0.0;
        for (int i = 0; i < n; ++i) {
            const double sc =
                cfg.ode_atol + cfg.ode_rtol * std::max(std::abs(x[i]), std::abs(x_new[i]));
            const double e = err[i] / sc;
            err_norm += e * e;
        }
        err_norm = std::sqrt(err_norm / n);

        if (err_norm <= 1.0) {
            t += h;
            x = x_new;
            k1 = k7;  // first-same-as-last
            ++out.steps_accepted;
            singular_seen = false;
            if (cfg.trace_every && *cfg.trace_every > 0 &&
                out.steps_accepted % *cfg.trace_every == 0 && t > 0.0)
                out.samples.emplace_back(t, x);
            if (t <= 0.0) {
                out.status = TrajectoryStatus::ReachedZero;
                out.x_final = x;
                out.samples.emplace_back(0.0, x);
                return out;
            }
            const double fac =
                std::min(just_rejected ? 1.0 : 6.0,
                         std::max(0.2, 0.9 * std::pow(err_norm > 0 ? 1.0 / err_norm : 1e16, 0.2)));
            h *= fac;
            just_rejected = false;
        } else {
            ++out.steps_rejected;
            h *= std::max(0.2, 0.9 * std::pow(1.0 / err_norm, 0.2));
            just_rejected = true;
        }
        if (std::abs(h) < hmin) {
            if (singular_seen) return finish_singular(singular_t);
            out.status = TrajectoryStatus::StepFailure;
            out.abort_t = t;
            out.x_final = x;
            if (out.samples.back().first != t) out.samples.emplace_back(t, x);
            return out;
        }
    }
    out.status = TrajectoryStatus::StepFailure;
    out.abort_t = t;
    out.x_final = x;
    return out;
}

Certificate certify_endpoint(const Polynomial& f, const Vector& x_star) {
    Certificate c;
    c.grad_inf = gradient(f, x_star).lpNorm<Eigen::Infinity>();
    const Vector ev = sym_eigvals(hessian(f, x_star), "endpoint Hessian");
    c.eig_min = ev[0];
    c.hessian_pd = c.eig_min > 0.0;
    return c;
}

namespace {

ConvexifyPlan make_plan(const Polynomial& f, const SolverConfig& cfg) {
    if (cfg.t0_mode == SolverConfig::T0Sel::User) {
        ConvexifyPlan plan;
        plan.t0 = cfg.user_t0;
        plan.mode = T0Mode::UserSupplied;
        plan.margin = 0.0;
        if (plan.t0 < 0.0) throw std::invalid_argument("user t0 must be >= 0");
        return plan;
    }

    const SpectrumInfo info = classify_C(f);
    if (info.classification != CSpectrumClass::PositiveDefinite) {
        std::string why;
        switch (info.classification) {
            case CSpectrumClass::NotPSD:
                why = "C is not positive semidefinite: no t convexifies mu_f";
                break;
            case CSpectrumClass::SingularPSD:
                why = "C is singular PSD: automatic t0 unavailable (see the null-space "
                      "condition sampler); supply --t0 explicitly";
                break;
            default:
                why = "C = 0: mu_f(., t) is convex iff f is convex; nothing to convexify";
        }
        throw Theorem3InapplicableError(why);
    }

    const std::optional<NormalQuartic> normal = as_normal(f);
    const bool is_normal = normal && normal->is_normal();

    if (cfg.t0_mode == SolverConfig::T0Sel::AutoNormal && is_normal)
        return t0_normal(*normal, cfg.margin);

    // ball route (Theorem 3): radius from the user, else from the normal-form
    // minimizer enclosure
    double L;
    if (cfg.ball_L) {
        L = *cfg.ball_L;
    } else if (is_normal) {
        L = ball_radius_normal(*normal).L_l2;
    } else {
        throw std::invalid_argument(
            "ball-mode t0 needs a radius: polynomial is not in normal form, supply L");
    }
    const ThetaEstimate theta = theta_L_estimate(f, L);
    return t0_ball(f, L, theta.value, info.lambda_min_C, cfg.margin);
}

} // namespace

SolveReport run_algorithm1(const Polynomial& f, const SolverConfig& cfg,
                           TrajectoryResult* trace_out) {
    const auto t_start = std::chrono::steady_clock::now();
    SolveReport rep;
    const int n = dim(f);
    rep.x_star = Vector::Zero(n);
    rep.x0 = Vector::Zero(n);

    auto finish = [&](SolveReport& r) {
        r.wall_time =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
        return r;
    };

    ConvexifyPlan plan;
    try {
        plan = make_plan(f, cfg);
    } catch (const std::exception& e) {
        rep.success = false;
        rep.failure_reason = std::string("convexify: ") + e.what();
        return finish(rep);
    }
    rep.t0_used = plan.t0;

    const SteklovCoeffs s = steklov_build(f);

    try {
        rep.x0 = minimize_convexified(f, s, plan.t0, cfg);
    } catch (const std::exception& e) {
        rep.success = false;
        rep.failure_reason = std::string("newton: ") + e.what();
        return finish(rep);
    }

    TrajectoryResult tr = trajectory(f, s, rep.x0, plan.t0, cfg);
    rep.trajectory_status = tr.status;
    rep.x_star = tr.x_final;
    if (trace_out) *trace_out = tr;

    if (tr.status != TrajectoryStatus::ReachedZero) {
        rep.success = false;
        if (tr.status == TrajectoryStatus::NearSingularHessian)
            rep.failure_reason = "trajectory: near-singular Hessian at t = " +
                                 std::to_string(tr.abort_t);
        else
            rep.failure_reason = "trajectory: step size underflow at t = " +
                                 std::to_string(tr.abort_t);
        const Certificate c = certify_endpoint(f, rep.x_star);
        rep.f_star = eval(f, rep.x_star);
        rep.grad_inf = c.grad_inf;
        rep.eig_min = c.eig_min;
        rep.hessian_pd = c.hessian_pd;
        return finish(rep);
    }

    if (cfg.polish) {
        for (int it = 0; it < 5; ++it) {
            const Vector g = gradient(f, rep.x_star);
            if (g.lpNorm<Eigen::Infinity>() == 0.0) break;
            try {
                rep.x_star -= solve_sym(hessian(f, rep.x_star), g, cfg.rcond_threshold).x;
            } catch (const NearSingularError&) {
                break;  // keep the unpolished endpoint
            }
        }
    }

    const Certificate c = certify_endpoint(f, rep.x_star);
    rep.f_star = eval(f, rep.x_star);
    rep.grad_inf = c.grad_inf;
    rep.eig_min = c.eig_min;
    rep.hessian_pd = c.hessian_pd;
    rep.success = c.grad_inf <= 1e-6;
    if (!rep.success)
        rep.failure_reason = "endpoint gradient too large: |grad f|_inf = " +
                             std::to_string(c.grad_inf) + " > 1e-6";
    return finish(rep);
}

void write_trace_csv(std::ostream& out, const TrajectoryResult& tr) {
    if (tr.samples.empty()) return;
    const int n = static_cast<int>(tr.samples.front().second.size());
    out << 't';
    for (int i = 1; i <= n; ++i) out << ",x" << i;
    out << '\n';
    char buf[40];
    for (const auto& [t, x] : tr.samples) {
        std::snprintf(buf, sizeof buf, "%.17g", t);
        out << buf;
        for (int i = 0; i < n; ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", x[i]);
            out << ',' << buf;
        }
        out << '\n';
    }
}

} // namespace steklov
