#include "steklov/linalg.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <stdexcept>

namespace steklov {

SymMatrix::SymMatrix(int n) {
    if (n < 1) throw std::invalid_argument("SymMatrix: dimension must be >= 1");
    m_ = Matrix::Zero(n, n);
}

SymMatrix SymMatrix::from_dense(const Matrix& m, bool symmetrize, double tol) {
    if (m.rows() != m.cols() || m.rows() < 1)
        throw std::invalid_argument("SymMatrix: input must be square, n >= 1");
    SymMatrix out(static_cast<int>(m.rows()));
    if (symmetrize) {
        out.m_ = 0.5 * (m + m.transpose());
        return out;
    }
    const double scale = 1.0 + m.cwiseAbs().maxCoeff();
    if (((m - m.transpose()).cwiseAbs().maxCoeff()) > tol * scale)
        throw std::invalid_argument("SymMatrix: input is not symmetric");
    out.m_ = m;
    return out;
}

SymMatrix SymMatrix::identity(int n) {
    SymMatrix out(n);
    out.m_ = Matrix::Identity(n, n);
    return out;
}

SymMatrix SymMatrix::diagonal(const Vector& d) {
    SymMatrix out(static_cast<int>(d.size()));
    out.m_ = d.asDiagonal();
    return out;
}

void SymMatrix::add(int i, int j, double v) {
    m_(i, j) += v;
    if (i != j) m_(j, i) += v;
}

double SymMatrix::norm_inf() const {
    return m_.cwiseAbs().rowwise().sum().maxCoeff();
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& other) {
    if (other.size() != size()) throw std::invalid_argument("SymMatrix: size mismatch");
    m_ += other.m_;
    return *this;
}

Vector sym_eigvals(const SymMatrix& m, const std::string& label) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m.dense(), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw EigenConvergenceError("eigenvalue iteration failed to converge for " + label +
                                    " (n = " + std::to_string(m.size()) + ")");
    return es.eigenvalues();
}

EigenDecomposition sym_eig(const SymMatrix& m, const std::string& label) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m.dense());
    if (es.info() != Eigen::Success)
        throw EigenConvergenceError("eigenvalue iteration failed to converge for " + label +
                                    " (n = " + std::to_string(m.size()) + ")");
    return {es.eigenvalues(), es.eigenvectors()};
}

SymSolveResult solve_sym(const SymMatrix& m, const Vector& b, double min_rcond) {
    if (b.size() != m.size()) throw std::invalid_argument("solve_sym: dimension mismatch");
    Eigen::LLT<Matrix> llt(m.dense());
    if (llt.info() == Eigen::Success) {
        SymSolveResult r{llt.solve(b), llt.rcond(), true};
        if (r.rcond < min_rcond) throw NearSingularError(r.rcond);
        return r;
    }
    Eigen::LDLT<Matrix> ldlt(m.dense());
    if (ldlt.info() != Eigen::Success)
        throw NearSingularError(0.0, "LDL^T factorization failed");
    SymSolveResult r{ldlt.solve(b), ldlt.rcond(), false};
    if (r.rcond < min_rcond) throw NearSingularError(r.rcond);
    return r;
}

SpdSolveResult solve_spd(const SymMatrix& m, const Vector& b) {
    Eigen::LLT<Matrix> llt(m.dense());
    if (llt.info() != Eigen::Success) return {false, Vector(), 0.0};
    return {true, llt.solve(b), llt.rcond()};
}

} // namespace steklov
