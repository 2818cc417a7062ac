#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "steklov/solve.hpp"

namespace steklov {

/// One named benchmark problem. recommended_t0 carries the t0 the reference
/// results were produced with, where one is published; the solver's default
/// margin policy is used otherwise.
struct ProblemSpec {
    std::string name;
    Polynomial polynomial;
    std::optional<double> known_value;
    std::string known_value_source;
    std::optional<Vector> known_point;
    std::optional<double> recommended_t0;
    std::optional<double> better_known_value;  // a better minimum known from the literature
};

/// Built-in problems: f1, f2, qing:N (N >= 2), q61..q64, counterexample,
/// rosenbrock:N (N >= 2). Throws std::invalid_argument for unknown names.
ProblemSpec builtin_problem(const std::string& name);
std::vector<std::string> builtin_problem_names();

/// Random structured quartic with a_i ~ U[1,2], b_ii ~ U[-1,1],
/// b_ij = b_ji ~ U[ib_lo, ib_hi] (one draw per i<j), d_i ~ U[-1,1].
/// Driven by a seeded mt19937_64; draw order is a, then B rows (diagonal
/// entry then the off-diagonal tail), then d.
NormalQuartic random_normal(int n, double ib_lo, double ib_hi, std::uint64_t seed);

/// Per-instance seed derived from the batch seed via splitmix64, so any
/// failure is replayable in isolation.
std::uint64_t instance_seed(std::uint64_t batch_seed, int index);

struct BatchStats {
    int n = 0;
    double ib_lo = 0.0, ib_hi = 0.0;
    int count = 0;
    int failures = 0;         // ||grad f(x(0))||_inf > 1e-6 or trajectory aborted
    double failure_rate = 0.0;
    std::vector<std::uint64_t> seeds_of_failures;
    double mean_wall_time = 0.0;  // seconds per instance
    std::uint64_t batch_seed = 0;
    int pd_violations = 0;    // non-failures whose endpoint Hessian was not PD
};

/// Runs run_algorithm1 over `count` seeded random instances with the batch
/// settings (ODE tolerances 1e-8, Newton tolerance 1e-10), optionally on
/// `jobs` worker threads. Statistics are independent of the worker count.
BatchStats batch_run(int n, double ib_lo, double ib_hi, int count, std::uint64_t seed,
                     const SolverConfig& base_cfg, int jobs = 1);

/// CSV: header "n,ib_lo,ib_hi,count,failures,rate,mean_time", one row per
/// stats entry, rate with 6 significant digits.
std::string emit_batch_csv(const std::vector<BatchStats>& stats);

/// JSON array mirroring the BatchStats field names.
std::string emit_batch_json(const std::vector<BatchStats>& stats);
std::vector<BatchStats> parse_batch_json(const std::string& text);

/// JSON object mirroring the SolveReport field names.
std::string emit_report_json(const SolveReport& report);

} // namespace steklov
