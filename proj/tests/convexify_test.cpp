#include <doctest.h>

#include <random>

#include "steklov/bench.hpp"
#include "steklov/convexify.hpp"
#include "steklov/steklov.hpp"
#include "test_util.hpp"

using namespace steklov;

TEST_CASE("classify_C: fixed cases") {
    const ProblemSpec f1 = builtin_problem("f1");
    const SpectrumInfo i1 = classify_C(f1.polynomial);
    CHECK(i1.classification == CSpectrumClass::PositiveDefinite);
    CHECK(i1.lambda_min_C == doctest::Approx(24.0));

    const ProblemSpec rb = builtin_problem("rosenbrock:4");
    const SpectrumInfo i2 = classify_C(rb.polynomial);
    CHECK(i2.classification == CSpectrumClass::SingularPSD);
    CHECK(i2.null_dim_estimate == 1);

    Vector a(2);
    a << -1.0, 1.0;
    const NormalQuartic bad(a, SymMatrix::identity(2), Vector::Zero(2));
    CHECK(classify_C(Polynomial(bad)).classification == CSpectrumClass::NotPSD);

    MonomialPoly quad(2);
    quad.add_term({2, 0}, 1.0);
    CHECK(classify_C(Polynomial(quad)).classification == CSpectrumClass::Zero);
}

TEST_CASE("t0_normal: published bounds") {
    const auto f1 = as_normal(builtin_problem("f1").polynomial);
    const ConvexifyPlan p1 = t0_normal(*f1, 0.0);
    CHECK(p1.t0 == doctest::Approx(std::sqrt(2.0297405025105)).epsilon(1e-6));
    CHECK(p1.t0 == doctest::Approx(1.42469).epsilon(1e-4));
    // the reference choice t0 = sqrt(2.1) corresponds to this margin
    const double margin = std::sqrt(2.1) - p1.t0;
    CHECK(t0_normal(*f1, margin).t0 == doctest::Approx(std::sqrt(2.1)).epsilon(1e-12));

    const auto q61 = as_normal(builtin_problem("q61").polynomial);
    CHECK(t0_normal(*q61, 0.0).t0 == doctest::Approx(1.440).epsilon(5e-4));

    const auto ce = as_normal(builtin_problem("counterexample").polynomial);
    const ConvexifyPlan pce = t0_normal(*ce, 0.0);
    CHECK(std::abs(pce.t0 - 0.694) <= 5e-4);
}

TEST_CASE("t0_normal: error and already-convex branches") {
    Vector a(2);
    a << 1.0, -0.5;
    CHECK_THROWS_AS(t0_normal(NormalQuartic(a, SymMatrix::identity(2), Vector::Zero(2)), 0.1),
                    NotNormalError);

    const NormalQuartic convex(Vector::Ones(2), SymMatrix::identity(2), Vector::Zero(2));
    const ConvexifyPlan plan = t0_normal(convex, 0.05);
    CHECK(plan.already_convex);
    CHECK(plan.t0 == doctest::Approx(0.05));
}

TEST_CASE("theta_L_estimate: guaranteed paths") {
    const ProblemSpec f1 = builtin_problem("f1");
    const ThetaEstimate th = theta_L_estimate(f1.polynomial, 3.0);
    CHECK(th.guaranteed);
    CHECK(th.value == doctest::Approx(-8.118962010042).epsilon(1e-10));

    MonomialPoly quad(2);  // x^T x: constant Hessian 2I
    quad.add_term({2, 0}, 1.0);
    quad.add_term({0, 2}, 1.0);
    const ThetaEstimate th2 = theta_L_estimate(Polynomial(quad), 5.0);
    CHECK(th2.value == doctest::Approx(2.0));
    CHECK(th2.value >= 0.0);
    CHECK(th2.guaranteed);
}

TEST_CASE("theta_L_estimate: sampling beats a dense grid on n = 2") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 5; ++trial) {
        const MonomialPoly mp = testutil::random_monomial_poly(2, rng, 0.4, 1.5);
        const Polynomial p = mp;
        if (to_monomial(p).degree() <= 2) continue;
        const double L = 1.0;
        const ThetaEstimate th = theta_L_estimate(p, L, {512, 6, 25, 7});

        double grid_min = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= 100; ++i) {
            for (int j = 0; j <= 100; ++j) {
                Vector x(2);
                x << -L + 2.0 * L * i / 100.0, -L + 2.0 * L * j / 100.0;
                if (x.norm() > L) continue;
                grid_min = std::min(grid_min, sym_eigvals(hessian(p, x))[0]);
            }
        }
        CHECK(th.value <= grid_min + 1e-6);
    }
}

TEST_CASE("t0_ball: algebraic identity with the normal-form bound") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 6);
        const NormalQuartic nq = testutil::random_normal_quartic(n, rng, 0.6, 2.0, 1.5);
        const Vector ev = sym_eigvals(nq.B());
        if (ev[0] >= 0.0) continue;
        const ConvexifyPlan pn = t0_normal(nq, 0.0);
        // theta = 2 lambda_min(B), lambda_min(C) = 24 a_k
        const ConvexifyPlan pb =
            t0_ball(Polynomial(nq), 1.0, 2.0 * ev[0], 24.0 * nq.min_a(), 0.0);
        CHECK(std::abs(pn.t0 - pb.t0) <= 1e-12 * (1.0 + pn.t0));
    }
}

TEST_CASE("t0_ball: f1 numbers, theta >= 0 branch, inapplicable raise") {
    const ProblemSpec f1 = builtin_problem("f1");
    const ConvexifyPlan p = t0_ball(f1.polynomial, 3.0, -8.118962010042, 24.0, 0.0);
    CHECK(p.t0 * p.t0 == doctest::Approx(2.0297405).epsilon(1e-6));

    const ConvexifyPlan pz = t0_ball(f1.polynomial, 3.0, 0.0, 24.0, 0.07);
    CHECK(pz.t0 == doctest::Approx(0.07));
    CHECK(pz.already_convex);

    CHECK_THROWS_AS(t0_ball(f1.polynomial, 3.0, -1.0, 0.0, 0.1), Theorem3InapplicableError);
}

TEST_CASE("ball_radius_normal: d = 0 branch and the f1 crossing") {
    const auto f1B = as_normal(builtin_problem("f1").polynomial)->B();
    const NormalQuartic nod(Vector::Ones(2), f1B, Vector::Zero(2));
    const BallRadius r0 = ball_radius_normal(nod);
    CHECK(r0.eps_hat == doctest::Approx(0.0));
    CHECK(r0.L_inf == doctest::Approx(std::sqrt(2.0 * 4.059481005021)).epsilon(1e-9));

    const auto f1 = as_normal(builtin_problem("f1").polynomial);
    const BallRadius r = ball_radius_normal(*f1);
    // eps_hat solves eps^3 + 2 rho eps^2 = |d|_1^2
    const double nrho = 2.0 * 4.059481005021;
    CHECK(r.eps_hat * r.eps_hat * r.eps_hat + nrho * r.eps_hat * r.eps_hat ==
          doctest::Approx(0.25).epsilon(1e-9));
    CHECK(r.L_inf == doctest::Approx(0.5 / r.eps_hat).epsilon(1e-12));

    // grid referee over L(eps)
    double grid_min = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 1000000; ++k) {
        const double eps = 2.0 * k / 1000000.0;
        grid_min = std::min(grid_min, std::max(0.5 / eps, std::sqrt(nrho + eps)));
    }
    CHECK(r.L_inf == doctest::Approx(grid_min).epsilon(1e-6));

    // scaling d by 10 pushes both eps_hat and L up
    const NormalQuartic scaled(f1->a(), f1->B(), 10.0 * f1->d(), f1->constant());
    const BallRadius rs = ball_radius_normal(scaled);
    CHECK(rs.eps_hat > r.eps_hat);
    CHECK(rs.L_inf > r.L_inf);
}

TEST_CASE("ball_radius_normal rejects non-normal input") {
    Vector a(2);
    a << 0.0, 1.0;
    CHECK_THROWS_AS(ball_radius_normal(NormalQuartic(a, SymMatrix::identity(2), Vector::Zero(2))),
                    NotNormalError);
}

TEST_CASE("null-space condition sampler") {
    const ProblemSpec rb = builtin_problem("rosenbrock:4");
    const NullSpaceSample s = null_space_condition_sample(rb.polynomial, 2.0, 200);
    CHECK(s.null_dim == 1);
    CHECK(s.min_phi == doctest::Approx(200.0).epsilon(1e-9));

    // f = x1^4: the null direction e2 sees a zero quadratic form
    MonomialPoly pure(2);
    pure.add_term({4, 0}, 1.0);
    const NullSpaceSample s2 = null_space_condition_sample(Polynomial(pure), 1.0, 50);
    CHECK(s2.min_phi == doctest::Approx(0.0));

    // varying case: f = x1^4 + 0.5 x1 x2^2, phi_N(+-1, x) = x1, min over the ball = -L
    MonomialPoly vary(2);
    vary.add_term({4, 0}, 1.0);
    vary.add_term({1, 2}, 0.5);
    const double L = 1.5;
    const NullSpaceSample s3 = null_space_condition_sample(Polynomial(vary), L, 4000, 9);
    double grid_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 100; ++i)
        for (int j = 0; j <= 100; ++j) {
            Vector x(2);
            x << -L + 2.0 * L * i / 100.0, -L + 2.0 * L * j / 100.0;
            if (x.norm() > L) continue;
            const Matrix h = hessian(Polynomial(vary), x).dense();
            grid_min = std::min(grid_min, h(1, 1));
        }
    CHECK(s3.min_phi >= grid_min - 1e-8);
    CHECK(s3.min_phi <= grid_min + 0.15 * L);  // sampling comes close to the grid floor

    CHECK_THROWS_AS(null_space_condition_sample(builtin_problem("f1").polynomial, 1.0, 10),
                    ConditionNotApplicableError);
}

TEST_CASE("convexification soundness on random normal instances") {
    std::mt19937_64 rng(43);
    int done = 0;
    while (done < 30) {
        const int n = 2 + static_cast<int>(rng() % 9);
        const NormalQuartic nq = testutil::random_normal_quartic(n, rng, 1.0, 2.0, 1.0);
        if (sym_eigvals(nq.B())[0] >= 0.0) continue;
        ++done;
        const ConvexifyPlan plan = t0_normal(nq, 0.05);
        const SteklovCoeffs s = steklov_build(Polynomial(nq));
        const double L = ball_radius_normal(nq).L_l2;
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int k = 0; k < 30; ++k) {
            Vector x(n);
            for (int i = 0; i < n; ++i) x[i] = u(rng);
            x *= L / std::max(1.0, x.norm());
            CHECK(sym_eigvals(steklov_hess_x(s, x, plan.t0))[0] >= -1e-8);
        }
    }
}

TEST_CASE("sharpness: f1 at 0.9x the bound is not convexified") {
    const ProblemSpec f1 = builtin_problem("f1");
    const SteklovCoeffs s = steklov_build(f1.polynomial);
    const double bound = t0_normal(*as_normal(f1.polynomial), 0.0).t0;
    const double t = 0.9 * bound;
    CHECK(sym_eigvals(steklov_hess_x(s, Vector::Zero(2), t))[0] < 0.0);
}

TEST_CASE("ball contains brute-force minimizers of random normal quartics") {
    std::mt19937_64 rng(44);
    for (int trial = 0; trial < 8; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 2);  // dense 0.01 grid feasible for n <= 2
        const NormalQuartic nq =
            testutil::random_normal_quartic(std::max(n, 2), rng, 0.8, 2.0, 1.2, 0.8);
        const BallRadius r = ball_radius_normal(nq);
        const double lim = r.L_inf + 1.0;
        const int steps = static_cast<int>(2.0 * lim / 0.01);
        Vector best(2);
        double best_v = std::numeric_limits<double>::infinity();
        Vector x(2);
        for (int i = 0; i <= steps; ++i) {
            x[0] = -lim + 0.01 * i;
            for (int j = 0; j <= steps; ++j) {
                x[1] = -lim + 0.01 * j;
                const double v = nq.eval(x);
                if (v < best_v) {
                    best_v = v;
                    best = x;
                }
            }
        }
        CHECK(best.lpNorm<Eigen::Infinity>() <= r.L_inf + 1e-9);
    }
}
