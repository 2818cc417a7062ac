#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "steklov/convexify.hpp"
#include "steklov/steklov.hpp"

namespace steklov {

struct SolverConfig {
    enum class T0Sel { AutoNormal, Ball, User };

    T0Sel t0_mode = T0Sel::AutoNormal;
    double user_t0 = 0.0;            // T0Sel::User
    std::optional<double> ball_L;    // l2 radius override for the ball route
    double margin = 0.1;

    double newton_tol = 1e-12;       // inf-norm gradient threshold
    int newton_max_iters = 200;

    double ode_rtol = 1e-12;
    double ode_atol = 1e-12;
    double rcond_threshold = 1e-12;

    bool polish = false;             // up to 5 Newton steps on grad f after the trajectory
    std::optional<int> trace_every;  // record every k-th accepted step; start/end always kept
};

enum class TrajectoryStatus { ReachedZero, NearSingularHessian, StepFailure };

const char* to_string(TrajectoryStatus s);

struct TrajectoryResult {
    std::vector<std::pair<double, Vector>> samples;  // t descending from t0
    TrajectoryStatus status;
    double abort_t = 0.0;  // t where rcond/definiteness failed, or the stalled t
    Vector x_final;        // endpoint (ReachedZero) or last accepted point

    long rhs_evaluations = 0;
    long steps_accepted = 0;
    long steps_rejected = 0;
};

struct Certificate {
    double grad_inf;
    double eig_min;
    bool hessian_pd;  // eig_min > 0
};

struct SolveReport {
    Vector x_star;
    double f_star = 0.0;
    double grad_inf = 0.0;
    bool hessian_pd = false;
    double eig_min = 0.0;
    double t0_used = 0.0;
    Vector x0;
    bool success = false;
    std::string failure_reason;  // empty on success
    double wall_time = 0.0;      // seconds
    TrajectoryStatus trajectory_status = TrajectoryStatus::ReachedZero;
};

/// Step 1: damped Newton on grad_x mu(., t0) from x_init (default 0),
/// backtracking on ||grad||^2 with Armijo factor 1e-4 and at most 30
/// halvings. Stops when ||grad||_inf <= cfg.newton_tol. Throws
/// NewtonFailureError at the iteration cap and NearSingularError when the
/// Newton system degenerates (a sign that t0 did not convexify).
Vector minimize_convexified(const Polynomial& f, const SteklovCoeffs& s, double t0,
                            const SolverConfig& cfg, const Vector* x_init = nullptr);

/// Step 2: integrates dx/dt = -(t/3) [hess_x mu]^{-1} grad q from t0 down to
/// 0 with an adaptive Dormand-Prince 5(4) pair. Every right-hand side
/// evaluates a Cholesky solve; a non-positive-definite Hessian rejects the
/// step, and persistent rejections (or an rcond below cfg.rcond_threshold)
/// end the run with NearSingularHessian at the offending t.
TrajectoryResult trajectory(const Polynomial& f, const SteklovCoeffs& s, const Vector& x0,
                            double t0, const SolverConfig& cfg);

/// grad-inf norm, smallest Hessian eigenvalue and the PD flag at x_star.
Certificate certify_endpoint(const Polynomial& f, const Vector& x_star);

/// Steps 1-3 composed: convexification plan, Newton minimizer, trajectory,
/// endpoint certification. Success requires the trajectory to reach t = 0
/// with ||grad f(x(0))||_inf <= 1e-6. When trace_out is non-null it receives
/// the trajectory samples (complete or up to the abort).
SolveReport run_algorithm1(const Polynomial& f, const SolverConfig& cfg,
                           TrajectoryResult* trace_out = nullptr);

/// CSV trace "t,x1,...,xn", one row per recorded sample, 17 significant digits.
void write_trace_csv(std::ostream& out, const TrajectoryResult& tr);

} // namespace steklov
