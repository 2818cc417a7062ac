#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "steklov/linalg.hpp"

namespace steklov {

/// Exponent vector of one monomial, dense over the n variables.
using ExponentVec = std::vector<std::uint8_t>;

constexpr int kMaxDegree = 4;

/// Sparse multivariate polynomial of total degree <= 4, stored as an
/// exponent-vector -> coefficient map. Term order is lexicographic, which
/// keeps serialization deterministic. Zero coefficients are never stored.
class MonomialPoly {
public:
    /// Zero polynomial in one variable.
    MonomialPoly() : n_(1) {}
    explicit MonomialPoly(int n);

    int dim() const { return n_; }

    /// Adds c * x^e, merging with an existing term. Terms whose coefficient
    /// cancels to zero are removed. Throws std::invalid_argument when the
    /// total degree exceeds 4 or e has the wrong length.
    void add_term(const ExponentVec& e, double c);

    double coeff(const ExponentVec& e) const;
    const std::map<ExponentVec, double>& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }
    int degree() const;

    double eval(const Vector& x) const;
    Vector gradient(const Vector& x) const;
    SymMatrix hessian(const Vector& x) const;

private:
    int n_;
    std::map<ExponentVec, double> terms_;
};

/// Quadratic polynomial c0 + g^T x + x^T M x with symmetric M, so the
/// gradient is g + 2 M x and the (constant) Hessian is 2 M.
struct QuadraticPoly {
    double c0;
    Vector g;
    SymMatrix M;

    int dim() const { return M.size(); }
    double eval(const Vector& x) const;
    Vector gradient(const Vector& x) const;
};

/// Structured quartic  sum_i a_i x_i^4 + x^T B x + d^T x + constant.
/// The polynomial is "normal" when min_i a_i > 0; a is stored unrestricted
/// and convexification entry points check normality themselves.
///
/// The constant term is not part of the classical normal form but is kept so
/// that expanded problems (e.g. sum (x_i^2 - i)^2) evaluate to their
/// published objective values.
class NormalQuartic {
public:
    NormalQuartic(Vector a, SymMatrix B, Vector d, double constant = 0.0);

    int dim() const { return static_cast<int>(a_.size()); }
    const Vector& a() const { return a_; }
    const SymMatrix& B() const { return b_; }
    const Vector& d() const { return d_; }
    double constant() const { return c0_; }

    bool is_normal() const;
    double min_a() const { return a_.minCoeff(); }

    double eval(const Vector& x) const;
    Vector gradient(const Vector& x) const;
    SymMatrix hessian(const Vector& x) const;

    MonomialPoly to_monomial() const;

private:
    Vector a_, d_;
    SymMatrix b_;
    double c0_;
};

/// Either concrete representation; both answer the same operation set below.
using Polynomial = std::variant<MonomialPoly, NormalQuartic>;

int dim(const Polynomial& f);
double eval(const Polynomial& f, const Vector& x);
Vector gradient(const Polynomial& f, const Vector& x);
SymMatrix hessian(const Polynomial& f, const Vector& x);

/// q(x) = trace(hessian f(x)) = sum_i d^2f/dx_i^2, a polynomial of degree <= 2.
QuadraticPoly trace_hessian_poly(const Polynomial& f);

/// kappa = (1/120) sum_i f_iiii + (1/36) sum_{j>i} f_iijj (fourth partials
/// of a quartic are constants). Normal form: sum_i a_i / 5.
double quartic_tail_kappa(const Polynomial& f);

/// C = sum_i Hessian(f_ii), the constant Hessian of trace_hessian_poly(f).
SymMatrix c_matrix(const Polynomial& f);

/// Expands either representation to the monomial map.
MonomialPoly to_monomial(const Polynomial& f);

/// Structural detection: a MonomialPoly whose quartic terms are all pure
/// x_i^4 (no cubics, no mixed quartics) converts to NormalQuartic form.
/// A NormalQuartic input is returned as-is.
std::optional<NormalQuartic> as_normal(const Polynomial& f);

/// Parses Format A ("mqp <n>" header, one "<coeff> <e1> ... <en>" term per
/// line) or Format B ("normal <n>" header with a/B/d rows and an optional
/// trailing "c <constant>" line). '#' starts a comment. Throws ParseError
/// with a 1-based line number.
Polynomial parse_poly(std::istream& in);
Polynomial parse_poly_text(const std::string& text);
Polynomial parse_poly_file(const std::string& path);

/// Serializes to the matching input format (Format A for MonomialPoly,
/// Format B for NormalQuartic), deterministically.
std::string format_poly(const Polynomial& f);

} // namespace steklov
