#pragma once

#include <cstdint>
#include <optional>

#include "steklov/poly.hpp"

namespace steklov {

enum class CSpectrumClass {
    Zero,              // C == 0: mu_f(.,t) convex iff f convex; nothing to gain
    NotPSD,            // some eigenvalue < 0: no t makes mu_f convex
    SingularPSD,       // PSD with nontrivial null space: Lemma-2 territory
    PositiveDefinite,  // convexification threshold always exists
};

const char* to_string(CSpectrumClass c);

struct SpectrumInfo {
    double lambda_min_C;
    double lambda_max_C;
    CSpectrumClass classification;
    int null_dim_estimate;  // eigenvalues with |lambda| <= psd_tol
    double psd_tol;         // 1e-10 * (1 + lambda_max_C)
};

SpectrumInfo classify_C(const Polynomial& f);

enum class T0Mode { NormalForm, BallTheorem3, UserSupplied };

struct ConvexifyPlan {
    double t0;
    T0Mode mode;
    std::optional<double> L;        // l2 ball radius (BallTheorem3)
    std::optional<double> theta_L;  // min-eigenvalue bound used (BallTheorem3)
    double margin;
    bool already_convex = false;    // bound was nonpositive; t0 is just the margin
};

/// t0 = sqrt(|lambda_min(B)| / (2 a_k)) + margin with a_k = min_i a_i.
/// Convexity of mu_f(., t) for t > t0 is global in x on the normal form.
/// When lambda_min(B) >= 0 the polynomial is already convex and t0 = margin.
/// Throws NotNormalError unless min_i a_i > 0.
ConvexifyPlan t0_normal(const NormalQuartic& f, double margin);

struct ThetaEstimate {
    double value;
    bool guaranteed;  // true: valid lower bound; false: sampling heuristic
};

struct ThetaSamplingConfig {
    int num_samples = 2048;
    int refine_candidates = 8;
    int refine_sweeps = 30;
    std::uint64_t seed = 1;
};

/// Estimate of theta_L = min over the l2 ball B[0,L] of lambda_min(hess f(x)).
/// Normal form: the analytic bound 2 lambda_min(B) (guaranteed). Constant
/// Hessian (degree <= 2): exact (guaranteed). Otherwise: random sampling in
/// the ball plus coordinate-descent refinement, scaled by 1.1 when negative
/// (heuristic flag).
ThetaEstimate theta_L_estimate(const Polynomial& f, double L, const ThetaSamplingConfig& cfg = {});

/// t0 = sqrt(6 |theta_L| / lambda_min_C) + margin when theta_L < 0, else
/// just the margin (mu_f already convex over the ball for all t > 0).
/// Throws Theorem3InapplicableError when lambda_min_C <= 0.
ConvexifyPlan t0_ball(const Polynomial& f, double L, double theta_L, double lambda_min_C,
                      double margin);

struct BallRadius {
    double L_inf;    // all global minimizers lie in the closed inf-norm ball
    double eps_hat;  // minimizing epsilon of L(eps); 0 when d = 0
    double L_l2;     // sqrt(n) * L_inf, an enclosing l2 radius
};

/// L(eps) = max(||d||_1/eps, sqrt((n rho(B) + eps)/a_k)) minimized over
/// eps > 0 by bisection on the crossing of the two branches.
/// Throws NotNormalError unless min_i a_i > 0.
BallRadius ball_radius_normal(const NormalQuartic& f);

struct NullSpaceSample {
    double min_phi;
    Vector alpha;  // witness coefficients on the null-space basis
    Vector x;      // witness point in B[0,L]
    int null_dim;
};

/// Samples phi_N(alpha, x) = w^T hess f(x) w, w = sum_i alpha_i v_i over the
/// orthonormal eigenbasis of N(C), for uniform alpha on the unit sphere and
/// x in the l2 ball B[0,L]. A positive minimum is evidence (not proof) for
/// the Lemma-2 convexifiability condition. Requires classify_C = SingularPSD.
NullSpaceSample null_space_condition_sample(const Polynomial& f, double L, int num_samples,
                                            std::uint64_t seed = 1);

} // namespace steklov
