#pragma once

#include <Eigen/Core>
#include <string>

#include "steklov/errors.hpp"

namespace steklov {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Dense real symmetric matrix. Symmetry is checked (or forced) at
/// construction, so every downstream consumer may rely on it.
class SymMatrix {
public:
    /// n-by-n zero matrix, n >= 1.
    explicit SymMatrix(int n);

    /// Wraps a dense matrix. With symmetrize = false the input must satisfy
    /// |m(i,j) - m(j,i)| <= tol * (1 + max|m|) or an exception is thrown;
    /// with symmetrize = true the symmetric part (m + m^T)/2 is stored.
    static SymMatrix from_dense(const Matrix& m, bool symmetrize = false, double tol = 1e-12);

    static SymMatrix identity(int n);
    static SymMatrix diagonal(const Vector& d);

    int size() const { return static_cast<int>(m_.rows()); }
    double operator()(int i, int j) const { return m_(i, j); }

    /// Sets both (i,j) and (j,i).
    void set(int i, int j, double v) { m_(i, j) = v; m_(j, i) = v; }
    void add(int i, int j, double v);

    const Matrix& dense() const { return m_; }

    double norm_inf() const;  // max absolute row sum
    double trace() const { return m_.trace(); }

    SymMatrix& operator+=(const SymMatrix& other);
    SymMatrix& operator*=(double s) { m_ *= s; return *this; }
    friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { a += b; return a; }
    friend SymMatrix operator*(double s, SymMatrix a) { a *= s; return a; }

private:
    Matrix m_;
};

struct EigenDecomposition {
    Vector values;   // ascending
    Matrix vectors;  // column k pairs with values[k]
};

/// Eigenvalues of a symmetric matrix, sorted ascending. Householder
/// tridiagonalization followed by implicit-shift QL iteration.
/// Throws EigenConvergenceError if the iteration cap is exceeded.
Vector sym_eigvals(const SymMatrix& m, const std::string& label = "symmetric matrix");

/// Full spectral decomposition, eigenvalues ascending.
EigenDecomposition sym_eig(const SymMatrix& m, const std::string& label = "symmetric matrix");

struct SymSolveResult {
    Vector x;
    double rcond;  // 1-norm reciprocal condition estimate of the factorization
    bool spd;      // true when the Cholesky route succeeded
};

/// Solves M x = b. Tries Cholesky first and falls back to symmetric-pivoted
/// LDL^T when M is not positive definite. Throws NearSingularError when the
/// rcond estimate falls below min_rcond.
SymSolveResult solve_sym(const SymMatrix& m, const Vector& b, double min_rcond = 0.0);

struct SpdSolveResult {
    bool positive_definite;  // Cholesky succeeded
    Vector x;                // valid only when positive_definite
    double rcond;            // 0 when the factorization failed
};

/// Cholesky-only solve for callers that must reject indefinite matrices
/// (the trajectory right-hand side). Never throws on rank issues.
SpdSolveResult solve_spd(const SymMatrix& m, const Vector& b);

} // namespace steklov
