// steklov: global minimization of multivariate quartic polynomials by
// Steklov convexification and trajectory tracking.
//
// Exit codes: 0 success, 1 usage/parse/IO error, 2 solver failure.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "steklov/bench.hpp"

using namespace steklov;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSolverFailure = 2;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_vec(const Vector& v) {
    std::string s = "[";
    for (int i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += fmt(v[i]);
    }
    return s + "]";
}

void print_report_human(const SolveReport& rep) {
    std::cout << "status          : " << (rep.success ? "Success" : "Failure") << '\n';
    if (!rep.success) std::cout << "reason          : " << rep.failure_reason << '\n';
    std::cout << "t0 used         : " << fmt(rep.t0_used) << '\n'
              << "x0 (convexified): " << fmt_vec(rep.x0) << '\n'
              << "x*              : " << fmt_vec(rep.x_star) << '\n'
              << "f(x*)           : " << fmt(rep.f_star) << '\n'
              << "|grad f(x*)|_inf: " << fmt(rep.grad_inf) << '\n'
              << "hessian PD      : " << (rep.hessian_pd ? "yes" : "no")
              << "  (lambda_min = " << fmt(rep.eig_min) << ")\n"
              << "wall time [s]   : " << rep.wall_time << '\n';
}

struct SolveFlags {
    std::string input;
    std::optional<std::uint64_t> seed_instance;
    int seed_n = 0;
    std::pair<double, double> ib{-1.0, 1.0};
    std::string t0 = "auto";
    double margin = 0.1;
    std::optional<double> L;
    double rtol = 1e-12, atol = 1e-12;
    double newton_tol = 1e-12;
    double rcond = 1e-12;
    bool polish = false;
    std::string trace_file;
    bool json = false;
};

SolverConfig to_config(const SolveFlags& fl) {
    SolverConfig cfg;
    if (fl.t0 == "auto") {
        cfg.t0_mode = SolverConfig::T0Sel::AutoNormal;
    } else if (fl.t0 == "ball") {
        cfg.t0_mode = SolverConfig::T0Sel::Ball;
    } else {
        cfg.t0_mode = SolverConfig::T0Sel::User;
        try {
            std::size_t pos = 0;
            cfg.user_t0 = std::stod(fl.t0, &pos);
            if (pos != fl.t0.size()) throw std::invalid_argument(fl.t0);
        } catch (const std::exception&) {
            throw CLI::ValidationError("--t0", "expected 'auto', 'ball' or a number");
        }
    }
    cfg.margin = fl.margin;
    cfg.ball_L = fl.L;
    cfg.ode_rtol = fl.rtol;
    cfg.ode_atol = fl.atol;
    cfg.newton_tol = fl.newton_tol;
    cfg.rcond_threshold = fl.rcond;
    cfg.polish = fl.polish;
    if (!fl.trace_file.empty()) cfg.trace_every = 1;
    return cfg;
}

int run_solve_on(const Polynomial& poly, const SolverConfig& cfg, const SolveFlags& fl) {
    TrajectoryResult trace;
    const bool want_trace = !fl.trace_file.empty();
    const SolveReport rep = run_algorithm1(poly, cfg, want_trace ? &trace : nullptr);
    if (want_trace && !trace.samples.empty()) {
        std::ofstream out(fl.trace_file);
        if (!out) {
            std::cerr << "error: cannot write trace file '" << fl.trace_file << "'\n";
            return kExitUsage;
        }
        write_trace_csv(out, trace);
    }
    if (fl.json)
        std::cout << emit_report_json(rep) << '\n';
    else
        print_report_human(rep);
    return rep.success ? kExitOk : kExitSolverFailure;
}

Polynomial load_input(const SolveFlags& fl) {
    if (fl.seed_instance) {
        if (fl.seed_n < 2)
            throw CLI::ValidationError("--n", "random instances need --n >= 2");
        return random_normal(fl.seed_n, fl.ib.first, fl.ib.second, *fl.seed_instance);
    }
    return parse_poly_file(fl.input);
}

int cmd_info(const std::string& input, double L, int samples, bool json) {
    const Polynomial poly = parse_poly_file(input);
    const int n = dim(poly);
    const SpectrumInfo info = classify_C(poly);
    const double kappa = quartic_tail_kappa(poly);
    const auto normal = as_normal(poly);
    const bool is_normal = normal && normal->is_normal();

    nlohmann::json j{{"n", n},
                     {"representation", std::holds_alternative<NormalQuartic>(poly)
                                            ? "normal" : "mqp"},
                     {"kappa", kappa},
                     {"lambda_min_C", info.lambda_min_C},
                     {"lambda_max_C", info.lambda_max_C},
                     {"classification", to_string(info.classification)},
                     {"null_dim_estimate", info.null_dim_estimate}};

    std::optional<ConvexifyPlan> plan_normal;
    std::optional<BallRadius> radius;
    if (is_normal) {
        plan_normal = t0_normal(*normal, 0.0);
        radius = ball_radius_normal(*normal);
        j["t0_bound_normal"] = plan_normal->t0;
        j["already_convex"] = plan_normal->already_convex;
        j["L_inf"] = radius->L_inf;
        j["eps_hat"] = radius->eps_hat;
        j["L_l2"] = radius->L_l2;
    }
    std::optional<ConvexifyPlan> plan_ball;
    std::optional<ThetaEstimate> theta;
    if (info.classification == CSpectrumClass::PositiveDefinite) {
        const double ball = radius ? radius->L_l2 : L;
        theta = theta_L_estimate(poly, ball);
        plan_ball = t0_ball(poly, ball, theta->value, info.lambda_min_C, 0.0);
        j["theta_L"] = theta->value;
        j["theta_L_guaranteed"] = theta->guaranteed;
        j["t0_bound_ball"] = plan_ball->t0;
        j["ball_L"] = ball;
    }
    std::optional<NullSpaceSample> ns;
    if (info.classification == CSpectrumClass::SingularPSD) {
        ns = null_space_condition_sample(poly, L, samples);
        j["phi_N_sampled_min"] = ns->min_phi;
        j["null_dim"] = ns->null_dim;
        j["phi_N_samples"] = samples;
    }

    if (json) {
        std::cout << j.dump(2) << '\n';
        return kExitOk;
    }

    std::cout << "n               : " << n << '\n'
              << "representation  : " << j["representation"].get<std::string>() << '\n'
              << "kappa (t^4 coef): " << fmt(kappa) << '\n'
              << "lambda_min(C)   : " << fmt(info.lambda_min_C) << '\n'
              << "lambda_max(C)   : " << fmt(info.lambda_max_C) << '\n'
              << "classification  : " << to_string(info.classification) << '\n';
    if (info.classification == CSpectrumClass::Zero)
        std::cout << "note            : C = 0: mu_f(.,t) is convex iff f is convex\n";
    if (info.classification == CSpectrumClass::NotPSD)
        std::cout << "note            : C not PSD: no t0 makes mu_f convex\n";
    if (plan_normal) {
        std::cout << "t0 bound (normal form)    : " << fmt(plan_normal->t0)
                  << (plan_normal->already_convex ? "  (already convex)" : "") << '\n';
        std::cout << "L(eps_hat) inf-norm radius: " << fmt(radius->L_inf)
                  << "  (eps_hat = " << fmt(radius->eps_hat) << ", l2 " << fmt(radius->L_l2)
                  << ")\n";
    }
    if (plan_ball) {
        std::cout << "theta_L estimate          : " << fmt(theta->value)
                  << (theta->guaranteed ? "  (guaranteed bound)" : "  (heuristic)") << '\n'
                  << "t0 bound (ball theorem)   : " << fmt(plan_ball->t0) << "  over |x| <= "
                  << fmt(*plan_ball->L) << '\n';
    }
    if (ns) {
        std::cout << "phi_N sampled min         : " << fmt(ns->min_phi) << "  over " << samples
                  << " samples, null dim " << ns->null_dim << '\n'
                  << "  positive values are evidence (not proof) for convexifiability\n";
    }
    return kExitOk;
}

int cmd_bench(const std::string& problem, bool json, const std::string& out_file) {
    const ProblemSpec ps = builtin_problem(problem);
    SolverConfig cfg;
    if (ps.recommended_t0) {
        cfg.t0_mode = SolverConfig::T0Sel::User;
        cfg.user_t0 = *ps.recommended_t0;
    }
    const SolveReport rep = run_algorithm1(ps.polynomial, cfg);

    if (json || !out_file.empty()) {
        nlohmann::json j = nlohmann::json::parse(emit_report_json(rep));
        j["problem"] = ps.name;
        if (ps.known_value) {
            j["known_value"] = *ps.known_value;
            j["known_value_source"] = ps.known_value_source;
        }
        if (ps.better_known_value) j["better_known_value"] = *ps.better_known_value;
        const std::string text = j.dump(2);
        if (!out_file.empty()) {
            std::ofstream out(out_file);
            if (!out) {
                std::cerr << "error: cannot write '" << out_file << "'\n";
                return kExitUsage;
            }
            out << text << '\n';
        }
        if (json) std::cout << text << '\n';
    }
    if (!json) {
        std::cout << "problem         : " << ps.name << '\n';
        print_report_human(rep);
        if (ps.known_value)
            std::cout << "known value     : " << fmt(*ps.known_value) << "  ("
                      << ps.known_value_source << ")  |diff| = "
                      << fmt(std::abs(rep.f_star - *ps.known_value)) << '\n';
        if (ps.better_known_value)
            std::cout << "better known    : " << fmt(*ps.better_known_value)
                      << "  (deeper minimizer reported in the literature)\n";
    }
    return rep.success ? kExitOk : kExitSolverFailure;
}

int cmd_batch(int n, std::pair<double, double> ib, int count, std::uint64_t seed, int jobs,
              const std::string& out_file, const std::string& format) {
    SolverConfig cfg;
    const BatchStats stats = batch_run(n, ib.first, ib.second, count, seed, cfg, jobs);
    const std::vector<BatchStats> all{stats};
    const std::string text = format == "json" ? emit_batch_json(all) : emit_batch_csv(all);
    if (!out_file.empty()) {
        std::ofstream out(out_file);
        if (!out) {
            std::cerr << "error: cannot write '" << out_file << "'\n";
            return kExitUsage;
        }
        out << text;
    } else {
        std::cout << text;
    }
    std::cerr << "batch: " << stats.failures << "/" << stats.count << " failures ("
              << stats.failure_rate * 100.0 << "%), pd violations " << stats.pd_violations
              << '\n';
    if (!stats.seeds_of_failures.empty()) {
        std::cerr << "failure seeds:";
        for (auto s : stats.seeds_of_failures) std::cerr << ' ' << s;
        std::cerr << "  (replay: steklov solve --seed-instance SEED --n " << stats.n << " --ib "
                  << stats.ib_lo << ',' << stats.ib_hi << ")\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Global minimization of multivariate quartic polynomials via Steklov "
                 "convexification and trajectory tracking"};
    app.require_subcommand(1);

    // --- solve ---
    SolveFlags sf;
    auto* solve = app.add_subcommand("solve", "Run the solver on a polynomial file");
    auto* in_opt = solve->add_option("--input", sf.input, "Polynomial file (Format A or B)");
    auto* seed_opt = solve->add_option("--seed-instance", sf.seed_instance,
                                       "Solve the random instance with this seed instead");
    solve->add_option("--n", sf.seed_n, "Dimension for --seed-instance");
    solve->add_option("--ib", sf.ib, "Off-diagonal interval LO,HI for --seed-instance")
        ->delimiter(',');
    in_opt->excludes(seed_opt);
    solve->add_option("--t0", sf.t0, "'auto', 'ball' or an explicit value")
        ->capture_default_str();
    solve->add_option("--margin", sf.margin, "Additive margin on the t0 bound")
        ->capture_default_str();
    solve->add_option("--L", sf.L, "l2 ball radius for the ball route");
    solve->add_option("--rtol", sf.rtol, "ODE relative tolerance")->capture_default_str();
    solve->add_option("--atol", sf.atol, "ODE absolute tolerance")->capture_default_str();
    solve->add_option("--newton-tol", sf.newton_tol, "Newton gradient tolerance")
        ->capture_default_str();
    solve->add_option("--rcond", sf.rcond, "Near-singularity rcond threshold")
        ->capture_default_str();
    solve->add_flag("--polish", sf.polish, "Newton-polish the endpoint on grad f");
    solve->add_option("--trace", sf.trace_file, "Write the trajectory CSV here");
    solve->add_flag("--json", sf.json, "Machine-readable report");

    // --- info ---
    std::string info_input;
    double info_L = 1.0;
    int info_samples = 1000;
    bool info_json = false;
    auto* info = app.add_subcommand("info", "Convexification dossier for a polynomial file");
    info->add_option("--input", info_input, "Polynomial file")->required();
    info->add_option("--L", info_L, "Ball radius for sampling checks")->capture_default_str();
    info->add_option("--samples", info_samples, "Null-space condition sample count")
        ->capture_default_str();
    info->add_flag("--json", info_json, "Machine-readable dossier");

    // --- bench ---
    std::string bench_problem, bench_out;
    bool bench_json = false;
    auto* bench = app.add_subcommand("bench", "Run a built-in benchmark problem");
    bench->add_option("--problem", bench_problem, "f1, f2, qing:N, q61..q64, counterexample, rosenbrock:N")
        ->required();
    bench->add_flag("--json", bench_json, "Machine-readable report");
    bench->add_option("--out", bench_out, "Also write the JSON report to this file");

    // --- batch ---
    int batch_n = 0, batch_count = 0, batch_jobs = 0;
    std::pair<double, double> batch_ib{-1.0, 1.0};
    std::uint64_t batch_seed = 1;
    std::string batch_out, batch_format = "csv";
    auto* batch = app.add_subcommand("batch", "Random-instance batch with failure statistics");
    batch->add_option("--n", batch_n, "Dimension")->required();
    batch->add_option("--ib", batch_ib, "Off-diagonal interval LO,HI")->required()->delimiter(',');
    batch->add_option("--count", batch_count, "Number of instances")->required();
    batch->add_option("--seed", batch_seed, "Batch seed")->capture_default_str();
    batch->add_option("--jobs", batch_jobs, "Worker threads (default: STEKLOV_JOBS or 1)");
    batch->add_option("--out", batch_out, "Output file (default: stdout)");
    batch->add_option("--format", batch_format, "csv or json")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (solve->parsed()) {
            if (sf.input.empty() && !sf.seed_instance) {
                std::cerr << "error: solve needs --input or --seed-instance\n";
                return kExitUsage;
            }
            return run_solve_on(load_input(sf), to_config(sf), sf);
        }
        if (info->parsed()) return cmd_info(info_input, info_L, info_samples, info_json);
        if (bench->parsed()) return cmd_bench(bench_problem, bench_json, bench_out);
        if (batch->parsed()) {
            if (batch_jobs <= 0) {
                const char* env = std::getenv("STEKLOV_JOBS");
                batch_jobs = env ? std::max(1, std::atoi(env)) : 1;
            }
            if (batch_format != "csv" && batch_format != "json") {
                std::cerr << "error: --format must be csv or json\n";
                return kExitUsage;
            }
            return cmd_batch(batch_n, batch_ib, batch_count, batch_seed, batch_jobs, batch_out,
                             batch_format);
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitSolverFailure;
    }
    return kExitUsage;
}
