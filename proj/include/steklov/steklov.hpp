#pragma once

#include <memory>

#include "steklov/poly.hpp"

namespace steklov {

/// Coefficients of the Steklov polynomial
///   mu_f(x, t) = f(x) + (t^2/6) q(x) + kappa t^4,
/// where q is the trace-of-Hessian quadratic and kappa the constant quartic
/// tail. Exact for every quartic f, and mu_f(x, 0) = f(x).
struct SteklovCoeffs {
    std::shared_ptr<const Polynomial> f;
    QuadraticPoly q;
    double kappa;
};

SteklovCoeffs steklov_build(Polynomial f);
SteklovCoeffs steklov_build(std::shared_ptr<const Polynomial> f);

/// mu_f(x, t); t = 0 is allowed and returns f(x).
double steklov_eval(const SteklovCoeffs& s, const Vector& x, double t);

/// grad_x mu = grad f + (t^2/6) grad q
Vector steklov_grad_x(const SteklovCoeffs& s, const Vector& x, double t);

/// hess_x mu = hess f + (t^2/6) C, with C the constant Hessian of q
SymMatrix steklov_hess_x(const SteklovCoeffs& s, const Vector& x, double t);

/// d/dt grad_x mu = (t/3) grad q
Vector steklov_grad_tx(const SteklovCoeffs& s, const Vector& x, double t);

/// Independent referee for the Steklov identity: the average of f over the
/// box prod_i [x_i - t, x_i + t], computed with a tensor-product 3-node
/// Gauss-Legendre rule (exact for degree <= 5 per axis, so exact here up to
/// roundoff). Requires t > 0 and n <= 6 (3^n evaluation points).
double quadrature_oracle(const Polynomial& f, const Vector& x, double t);

} // namespace steklov
