#include "steklov/convexify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace steklov {

const char* to_string(CSpectrumClass c) {
    switch (c) {
        case CSpectrumClass::Zero: return "Zero";
        case CSpectrumClass::NotPSD: return "NotPSD";
        case CSpectrumClass::SingularPSD: return "SingularPSD";
        case CSpectrumClass::PositiveDefinite: return "PositiveDefinite";
    }
    return "?";
}

SpectrumInfo classify_C(const Polynomial& f) {
    const SymMatrix c = c_matrix(f);
    const Vector ev = sym_eigvals(c, "C matrix");
    SpectrumInfo info;
    info.lambda_min_C = ev[0];
    info.lambda_max_C = ev[ev.size() - 1];
    info.psd_tol = 1e-10 * (1.0 + info.lambda_max_C);
    info.null_dim_estimate = 0;
    for (int i = 0; i < ev.size(); ++i)
        if (std::abs(ev[i]) <= info.psd_tol) ++info.null_dim_estimate;

    if (info.lambda_max_C <= info.psd_tol)
        info.classification = CSpectrumClass::Zero;
    else if (info.lambda_min_C < -info.psd_tol)
        info.classification = CSpectrumClass::NotPSD;
    else if (info.lambda_min_C > info.psd_tol)
        info.classification = CSpectrumClass::PositiveDefinite;
    else
        info.classification = CSpectrumClass::SingularPSD;
    return info;
}

ConvexifyPlan t0_normal(const NormalQuartic& f, double margin) {
    if (!f.is_normal())
        throw NotNormalError("t0_normal: requires min_i a_i > 0");
    const Vector ev = sym_eigvals(f.B(), "B matrix");
    const double lam_min = ev[0];
    ConvexifyPlan plan;
    plan.mode = T0Mode::NormalForm;
    plan.margin = margin;
    if (lam_min >= 0.0) {
        plan.t0 = margin;
        plan.already_convex = true;
        return plan;
    }
    plan.t0 = std::sqrt(std::abs(lam_min) / (2.0 * f.min_a())) + margin;
    return plan;
}

namespace {

double lambda_min_hess(const Polynomial& f, const Vector& x) {
    return sym_eigvals(hessian(f, x), "Hessian")[0];
}

Vector sample_in_ball(int n, double L, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Vector v(n);
    double nrm = 0.0;
    do {
        for (int i = 0; i < n; ++i) v[i] = gauss(rng);
        nrm = v.norm();
    } while (nrm == 0.0);
    const double r = L * std::pow(unif(rng), 1.0 / n);
    return (r / nrm) * v;
}

} // namespace

ThetaEstimate theta_L_estimate(const Polynomial& f, double L, const ThetaSamplingConfig& cfg) {
    if (L <= 0.0) throw std::invalid_argument("theta_L_estimate: L must be > 0");
    if (const auto* nq = std::get_if<NormalQuartic>(&f)) {
        // 12 diag(a_i x_i^2) >= 0 when normal, so lambda_min(hess f) >= 2 lambda_min(B)
        if (nq->is_normal()) {
            const Vector ev = sym_eigvals(nq->B(), "B matrix");
            return {2.0 * ev[0], true};
        }
    }
    const int n = dim(f);
    if (to_monomial(f).degree() <= 2) {
        // constant Hessian: the minimum over any ball is exact
        return {lambda_min_hess(f, Vector::Zero(n)), true};
    }

    std::mt19937_64 rng(cfg.seed);
    struct Cand { double val; Vector x; };
    std::vector<Cand> best;
    auto consider = [&](const Vector& x) {
        const double v = lambda_min_hess(f, x);
        best.push_back({v, x});
        std::sort(best.begin(), best.end(), [](const Cand& a, const Cand& b) { return a.val < b.val; });
        if (static_cast<int>(best.size()) > cfg.refine_candidates) best.pop_back();
        return v;
    };

    consider(Vector::Zero(n));
    for (int s = 0; s < cfg.num_samples; ++s) consider(sample_in_ball(n, L, rng));

    // coordinate descent from the most negative candidates
    double min_found = best.front().val;
    for (auto cand : best) {
        Vector x = cand.x;
        double cur = cand.val;
        double step = L / 10.0;
        for (int sweep = 0; sweep < cfg.refine_sweeps; ++sweep) {
            bool improved = false;
            for (int i = 0; i < n; ++i) {
                for (double sgn : {1.0, -1.0}) {
                    Vector y = x;
                    y[i] += sgn * step;
                    if (y.norm() > L) continue;
                    const double v = lambda_min_hess(f, y);
                    if (v < cur) {
                        cur = v;
                        x = y;
                        improved = true;
                    }
                }
            }
            if (!improved) step *= 0.5;
            if (step < 1e-9 * L) break;
        }
        min_found = std::min(min_found, cur);
    }
    if (min_found < 0.0) min_found *= 1.1;  // safety inflation, still a heuristic
    return {min_found, false};
}

ConvexifyPlan t0_ball(const Polynomial& f, double L, double theta_L, double lambda_min_C,
                      double margin) {
    (void)f;
    if (lambda_min_C <= 0.0)
        throw Theorem3InapplicableError("t0_ball: requires lambda_min(C) > 0");
    ConvexifyPlan plan;
    plan.mode = T0Mode::BallTheorem3;
    plan.L = L;
    plan.theta_L = theta_L;
    plan.margin = margin;
    if (theta_L >= 0.0) {
        plan.t0 = margin;
        plan.already_convex = true;
        return plan;
    }
    plan.t0 = std::sqrt(6.0 * std::abs(theta_L) / lambda_min_C) + margin;
    return plan;
}

BallRadius ball_radius_normal(const NormalQuartic& f) {
    if (!f.is_normal())
        throw NotNormalError("ball_radius_normal: requires min_i a_i > 0");
    const int n = f.dim();
    const Vector ev = sym_eigvals(f.B(), "B matrix");
    const double rho = std::max(std::abs(ev[0]), std::abs(ev[ev.size() - 1]));
    const double ak = f.min_a();
    const double d1 = f.d().lpNorm<1>();
    const double nrho = n * rho;

    if (d1 == 0.0) {
        const double L = std::sqrt(nrho / ak);
        return {L, 0.0, std::sqrt(static_cast<double>(n)) * L};
    }

    // g(eps) = d1/eps - sqrt((n rho + eps)/ak): strictly decreasing, positive
    // near 0, negative for large eps; L(eps_hat) sits at the sign change.
    auto g = [&](double eps) { return d1 / eps - std::sqrt((nrho + eps) / ak); };
    double lo = d1 * d1 * ak / (nrho + 1.0);
    while (g(lo) <= 0.0) lo *= 0.5;
    double hi = 10.0 * d1 * std::max(1.0, std::sqrt(ak / std::max(nrho, 1e-300)));
    while (g(hi) >= 0.0) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) > 0.0) lo = mid;
        else hi = mid;
        if (hi - lo <= 1e-12 * hi) break;
    }
    const double eps_hat = 0.5 * (lo + hi);
    const double L = d1 / eps_hat;
    return {L, eps_hat, std::sqrt(static_cast<double>(n)) * L};
}

NullSpaceSample null_space_condition_sample(const Polynomial& f, double L, int num_samples,
                                            std::uint64_t seed) {
    if (num_samples < 1)
        throw std::invalid_argument("null_space_condition_sample: num_samples must be >= 1");
    const SpectrumInfo info = classify_C(f);
    if (info.classification != CSpectrumClass::SingularPSD)
        throw ConditionNotApplicableError(
            "null_space_condition_sample: C must be singular positive-semidefinite, got " +
            std::string(to_string(info.classification)));

    const EigenDecomposition ed = sym_eig(c_matrix(f), "C matrix");
    const int n = dim(f);
    std::vector<int> null_cols;
    for (int i = 0; i < n; ++i)
        if (std::abs(ed.values[i]) <= info.psd_tol) null_cols.push_back(i);
    const int m = static_cast<int>(null_cols.size());
    Matrix basis(n, m);
    for (int k = 0; k < m; ++k) basis.col(k) = ed.vectors.col(null_cols[k]);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    NullSpaceSample out;
    out.null_dim = m;
    out.min_phi = std::numeric_limits<double>::infinity();
    for (int s = 0; s < num_samples; ++s) {
        Vector alpha(m);
        double nrm = 0.0;
        do {
            for (int k = 0; k < m; ++k) alpha[k] = gauss(rng);
            nrm = alpha.norm();
        } while (nrm == 0.0);
        alpha /= nrm;
        const Vector x = sample_in_ball(n, L, rng);
        const Vector w = basis * alpha;
        const double phi = w.dot(hessian(f, x).dense() * w);
        if (phi < out.min_phi) {
            out.min_phi = phi;
            out.alpha = alpha;
            out.x = x;
        }
    }
    return out;
}

} // namespace steklov
