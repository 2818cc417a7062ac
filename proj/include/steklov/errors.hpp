#pragma once

#include <stdexcept>
#include <string>

namespace steklov {

/// Input file could not be parsed. `line` is 1-based (0 when unknown).
class ParseError : public std::runtime_error {
public:
    ParseError(std::string msg, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

/// A symmetric solve met a reciprocal condition number below the caller's threshold.
class NearSingularError : public std::runtime_error {
public:
    explicit NearSingularError(double rcond, const std::string& context = "symmetric solve")
        : std::runtime_error(context + ": matrix near-singular (rcond = " + std::to_string(rcond) + ")"),
          rcond_(rcond) {}
    double rcond() const noexcept { return rcond_; }

private:
    double rcond_;
};

/// Eigenvalue iteration did not converge within the internal cap.
class EigenConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An operation requiring min_i a_i > 0 was applied to a non-normal quartic.
class NotNormalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// t0_ball requires lambda_min(C) > 0.
class Theorem3InapplicableError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The null-space sampler requires a singular positive-semidefinite C.
class ConditionNotApplicableError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Newton refused to converge within the iteration cap.
class NewtonFailureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace steklov
