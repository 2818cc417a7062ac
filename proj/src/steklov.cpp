#include "steklov/steklov.hpp"

#include <cmath>
#include <stdexcept>

namespace steklov {

SteklovCoeffs steklov_build(Polynomial f) {
    return steklov_build(std::make_shared<const Polynomial>(std::move(f)));
}

SteklovCoeffs steklov_build(std::shared_ptr<const Polynomial> f) {
    QuadraticPoly q = trace_hessian_poly(*f);
    const double kappa = quartic_tail_kappa(*f);
    return SteklovCoeffs{std::move(f), std::move(q), kappa};
}

double steklov_eval(const SteklovCoeffs& s, const Vector& x, double t) {
    if (t < 0.0) throw std::invalid_argument("steklov_eval: t must be >= 0");
    const double t2 = t * t;
    return eval(*s.f, x) + t2 / 6.0 * s.q.eval(x) + s.kappa * t2 * t2;
}

Vector steklov_grad_x(const SteklovCoeffs& s, const Vector& x, double t) {
    return gradient(*s.f, x) + (t * t / 6.0) * s.q.gradient(x);
}

SymMatrix steklov_hess_x(const SteklovCoeffs& s, const Vector& x, double t) {
    // hess f + (t^2/6) C with C = 2 M_q
    SymMatrix h = hessian(*s.f, x);
    SymMatrix c = s.q.M;
    c *= t * t / 3.0;
    h += c;
    return h;
}

Vector steklov_grad_tx(const SteklovCoeffs& s, const Vector& x, double t) {
    return (t / 3.0) * s.q.gradient(x);
}

double quadrature_oracle(const Polynomial& f, const Vector& x, double t) {
    const int n = dim(f);
    if (n > 6)
        throw std::invalid_argument("quadrature_oracle: n > 6 (3^n points; referee use only)");
    if (t <= 0.0) throw std::invalid_argument("quadrature_oracle: t must be > 0");
    if (x.size() != n) throw std::invalid_argument("quadrature_oracle: dimension mismatch");

    // 3-node Gauss-Legendre on [-1,1], weights normalized to average
    const double u = std::sqrt(3.0 / 5.0);
    const double node[3] = {-u, 0.0, u};
    const double w[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

    long total = 1;
    for (int i = 0; i < n; ++i) total *= 3;

    Vector p(n);
    double acc = 0.0;
    for (long idx = 0; idx < total; ++idx) {
        long rem = idx;
        double weight = 1.0;
        for (int i = 0; i < n; ++i) {
            const int k = static_cast<int>(rem % 3);
            rem /= 3;
            p[i] = x[i] + t * node[k];
            weight *= w[k];
        }
        acc += weight * eval(f, p);
    }
    return acc;
}

} // namespace steklov
