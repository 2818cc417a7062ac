#include "steklov/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace steklov {

namespace {

Vector vec(std::initializer_list<double> xs) {
    Vector v(static_cast<Eigen::Index>(xs.size()));
    int i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

SymMatrix sym(int n, std::initializer_list<double> rows) {
    Matrix m(n, n);
    auto it = rows.begin();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = *it++;
    return SymMatrix::from_dense(m);
}

/// sum_{i<n} (1 - x_i)^2 + 100 (x_{i+1} - x_i^2)^2, expanded term by term.
MonomialPoly rosenbrock(int n) {
    MonomialPoly p(n);
    auto term = [&](double c, std::initializer_list<std::pair<int, int>> powers) {
        ExponentVec e(n, 0);
        for (auto [var, pw] : powers) e[var] = static_cast<std::uint8_t>(pw);
        p.add_term(e, c);
    };
    for (int i = 0; i + 1 < n; ++i) {
        term(1.0, {});
        term(-2.0, {{i, 1}});
        term(1.0, {{i, 2}});
        term(100.0, {{i + 1, 2}});
        term(-200.0, {{i, 2}, {i + 1, 1}});
        term(100.0, {{i, 4}});
    }
    return p;
}

/// sum_i (x_i^2 - i)^2 + sum_{j>i} b x_i x_j + sum_i d x_i in normal form;
/// the expanded constant sum_i i^2 is kept so values match the published ones.
NormalQuartic qing_family(int n, double b_off, double d_all) {
    Vector a = Vector::Ones(n);
    Matrix B = Matrix::Constant(n, n, b_off / 2.0);
    double c0 = 0.0;
    for (int i = 0; i < n; ++i) {
        B(i, i) = -2.0 * (i + 1);
        c0 += static_cast<double>(i + 1) * (i + 1);
    }
    return NormalQuartic(a, SymMatrix::from_dense(B), Vector::Constant(n, d_all), c0);
}

int parse_family_size(const std::string& name, std::size_t colon, int min_n) {
    int n = 0;
    try {
        n = std::stoi(name.substr(colon + 1));
    } catch (const std::exception&) {
        throw std::invalid_argument("bad problem size in '" + name + "'");
    }
    if (n < min_n)
        throw std::invalid_argument("'" + name + "': size must be >= " + std::to_string(min_n));
    return n;
}

} // namespace

ProblemSpec builtin_problem(const std::string& name) {
    ProblemSpec ps;
    ps.name = name;

    if (name == "f1") {
        ps.polynomial = NormalQuartic(vec({1, 1}), sym(2, {-2, -0.35, -0.35, -4}),
                                      vec({0.2, 0.3}), 5.0);
        ps.known_value = -1.727802817222;
        ps.known_value_source = "reference run, 12 dp";
        ps.known_point = vec({-1.128494496206, -1.477960288995});
        ps.recommended_t0 = std::sqrt(2.1);
        return ps;
    }
    if (name == "f2" || name == "qing:3") {
        ps.polynomial = qing_family(3, -0.7, 0.2);
        ps.known_value = -5.274573029462;
        ps.known_value_source = "reference run, 12 dp";
        ps.known_point = vec({-1.231880992829, -1.542141914625, -1.815208552194});
        ps.recommended_t0 = std::sqrt(3.1);
        return ps;
    }
    if (name.rfind("qing:", 0) == 0) {
        const int n = parse_family_size(name, 4, 2);
        ps.polynomial = qing_family(n, -0.7, 0.2);
        ps.known_value_source = "reference run";
        switch (n) {
            case 5: ps.known_value = -2.425189606694e1; break;
            case 10: ps.known_value = -1.937676325137e2; break;
            case 50: ps.known_value = -2.434927308593e4; break;
            case 100: ps.known_value = -1.951017166604e5; break;
            case 500: ps.known_value = -2.442736975195e7; break;
            case 1000: ps.known_value = -1.954665241231e8; break;
            case 2000: ps.known_value = -1.563932649564e9; break;
            case 5000: ps.known_value = -2.443840227592e10; break;
            default: ps.known_value_source.clear(); break;
        }
        return ps;
    }
    if (name == "q61") {
        ps.polynomial = NormalQuartic(
            vec({9, 2, 6, 4, 8, 7}),
            sym(6, {4, 4, 9, 3, 4, 1,
                    4, 3, 7, 9, 9, 2,
                    9, 7, 4, 7, 6, 6,
                    3, 9, 7, 4, 2, 6,
                    4, 9, 6, 2, 8, 3,
                    1, 2, 6, 6, 3, 5}),
            vec({2, 6, 5, 0, 0, 2}));
        ps.known_value = -28.94281730403047;
        ps.known_value_source = "reference run";
        ps.known_point = vec({0.545218813388, -1.464410189792, -0.720606654276, 1.178144265592,
                              0.794065108243, -0.465794119448});
        ps.recommended_t0 = 1.540;
        return ps;
    }
    if (name == "q62") {
        ps.polynomial = NormalQuartic(
            vec({4, 1, 8, 4, 6, 7}),
            sym(6, {4, 0, 0, 3, 0, 3,
                    0, 0, 0, 6, 6, 0,
                    0, 0, 5, 0, 3, 6,
                    3, 6, 0, 4, 4, 3,
                    0, 6, 3, 4, 4, 5,
                    3, 0, 6, 3, 5, 2}),
            vec({8, 7, 7, 8, 6, 2}));
        ps.known_value = -23.0056478266632;
        ps.known_value_source = "reference run";
        ps.known_point = vec({-0.654664171603, -1.869516007115, -0.368135071982, 0.819086646324,
                              0.775622316964, -0.531322790207});
        ps.recommended_t0 = 1.940;
        return ps;
    }
    if (name == "q63") {
        ps.polynomial = NormalQuartic(
            vec({9, 7, 1, 4, 9, 9}),
            sym(6, {8, 0, 1, 3, 9, 9,
                    0, 0, 9, 5, 2, 6,
                    1, 9, 4, 1, 1, 8,
                    3, 5, 1, 0, 8, 0,
                    9, 2, 1, 8, 2, 1,
                    9, 6, 8, 0, 1, 8}),
            vec({5, 8, 6, 9, 9, 0}));
        ps.known_value = -31.78036928464823;
        ps.known_value_source = "reference run";
        ps.known_point = vec({-0.677847258779, 0.915757213506, -1.676567471092, -1.129390429402,
                              0.769478574815, 0.740933617859});
        ps.recommended_t0 = 2.271;
        return ps;
    }
    if (name == "q64") {
        ps.polynomial = NormalQuartic(
            vec({1, 2, 1, 6, 2, 1}),
            sym(6, {4, 1, 4, 2, 4, 4,
                    1, 1, 4, 0, 1, 7,
                    4, 4, 4, 6, 6, 7,
                    2, 0, 6, 6, 7, 9,
                    4, 1, 6, 7, 3, 0,
                    4, 7, 7, 9, 0, 3}),
            vec({8, 7, 6, 4, 7, 6}));
        // trajectory lands in a non-global basin here; a deeper minimizer
        // with value -70.87818171 is known from the literature
        ps.known_value = -60.614291716400;
        ps.known_value_source = "reference run (non-global)";
        ps.known_point = vec({0.707423237483, 1.239514850400, 1.260381219594, 1.082078205488,
                              -1.644024006236, -2.351712409938});
        ps.recommended_t0 = 2.340;
        ps.better_known_value = -70.87818171;
        return ps;
    }
    if (name == "counterexample") {
        ps.polynomial = NormalQuartic(vec({1.05, 1.96}),
                                      sym(2, {-0.670, -0.442, -0.442, -0.436}),
                                      vec({0.08911, -0.2315}));
        ps.recommended_t0 = 0.694;
        return ps;
    }
    if (name.rfind("rosenbrock:", 0) == 0) {
        const int n = parse_family_size(name, 10, 2);
        ps.polynomial = rosenbrock(n);
        ps.known_value = 0.0;
        ps.known_value_source = "exact";
        ps.known_point = Vector::Ones(n);
        return ps;
    }
    throw std::invalid_argument("unknown problem '" + name + "'");
}

std::vector<std::string> builtin_problem_names() {
    return {"f1", "f2", "qing:N", "q61", "q62", "q63", "q64", "counterexample", "rosenbrock:N"};
}

NormalQuartic random_normal(int n, double ib_lo, double ib_hi, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("random_normal: n must be >= 2");
    if (ib_lo > ib_hi) throw std::invalid_argument("random_normal: interval is empty");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ua(1.0, 2.0);
    std::uniform_real_distribution<double> u11(-1.0, 1.0);
    std::uniform_real_distribution<double> uib(ib_lo, ib_hi);

    Vector a(n), d(n);
    Matrix B(n, n);
    for (int i = 0; i < n; ++i) a[i] = ua(rng);
    for (int i = 0; i < n; ++i) {
        B(i, i) = u11(rng);
        for (int j = i + 1; j < n; ++j) B(i, j) = B(j, i) = uib(rng);
    }
    for (int i = 0; i < n; ++i) d[i] = u11(rng);
    return NormalQuartic(a, SymMatrix::from_dense(B), d);
}

std::uint64_t instance_seed(std::uint64_t batch_seed, int index) {
    // splitmix64 over batch_seed + index
    std::uint64_t z = batch_seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

BatchStats batch_run(int n, double ib_lo, double ib_hi, int count, std::uint64_t seed,
                     const SolverConfig& base_cfg, int jobs) {
    if (count < 1) throw std::invalid_argument("batch_run: count must be >= 1");
    if (jobs < 1) jobs = 1;

    SolverConfig cfg = base_cfg;
    cfg.t0_mode = SolverConfig::T0Sel::AutoNormal;
    cfg.ode_rtol = 1e-8;
    cfg.ode_atol = 1e-8;
    cfg.newton_tol = 1e-10;
    cfg.trace_every.reset();

    struct Local {
        std::vector<std::uint64_t> fail_seeds;
        std::vector<int> fail_indices;
        double time_sum = 0.0;
        int failures = 0;
        int pd_violations = 0;
    };
    std::vector<Local> locals(static_cast<std::size_t>(jobs));
    std::atomic<int> next{0};

    auto worker = [&](int wid) {
        Local& loc = locals[static_cast<std::size_t>(wid)];
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= count) break;
            const std::uint64_t iseed = instance_seed(seed, i);
            const Polynomial poly = random_normal(n, ib_lo, ib_hi, iseed);
            const SolveReport rep = run_algorithm1(poly, cfg);
            loc.time_sum += rep.wall_time;
            const bool failed =
                rep.trajectory_status != TrajectoryStatus::ReachedZero || rep.grad_inf > 1e-6;
            if (failed) {
                ++loc.failures;
                loc.fail_seeds.push_back(iseed);
                loc.fail_indices.push_back(i);
            } else if (!rep.hessian_pd) {
                ++loc.pd_violations;
            }
        }
    };

    if (jobs == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(jobs));
        for (int w = 0; w < jobs; ++w) pool.emplace_back(worker, w);
        for (auto& th : pool) th.join();
    }

    BatchStats stats;
    stats.n = n;
    stats.ib_lo = ib_lo;
    stats.ib_hi = ib_hi;
    stats.count = count;
    stats.batch_seed = seed;
    std::vector<std::pair<int, std::uint64_t>> fails;
    for (const auto& loc : locals) {
        stats.failures += loc.failures;
        stats.pd_violations += loc.pd_violations;
        stats.mean_wall_time += loc.time_sum;
        for (std::size_t k = 0; k < loc.fail_seeds.size(); ++k)
            fails.emplace_back(loc.fail_indices[k], loc.fail_seeds[k]);
    }
    std::sort(fails.begin(), fails.end());
    for (const auto& [idx, s] : fails) stats.seeds_of_failures.push_back(s);
    stats.failure_rate = static_cast<double>(stats.failures) / count;
    stats.mean_wall_time /= count;
    return stats;
}

namespace {

nlohmann::json stats_to_json(const BatchStats& s) {
    return nlohmann::json{{"n", s.n},
                          {"ib_lo", s.ib_lo},
                          {"ib_hi", s.ib_hi},
                          {"count", s.count},
                          {"failures", s.failures},
                          {"failure_rate", s.failure_rate},
                          {"seeds_of_failures", s.seeds_of_failures},
                          {"mean_wall_time", s.mean_wall_time},
                          {"batch_seed", s.batch_seed},
                          {"pd_violations", s.pd_violations}};
}

} // namespace

std::string emit_batch_csv(const std::vector<BatchStats>& stats) {
    std::ostringstream out;
    out << "n,ib_lo,ib_hi,count,failures,rate,mean_time\n";
    char buf[64];
    for (const auto& s : stats) {
        std::snprintf(buf, sizeof buf, "%d,%.6g,%.6g,%d,%d,%.6g,%.6g\n", s.n, s.ib_lo, s.ib_hi,
                      s.count, s.failures, s.failure_rate, s.mean_wall_time);
        out << buf;
    }
    return out.str();
}

std::string emit_batch_json(const std::vector<BatchStats>& stats) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& s : stats) arr.push_back(stats_to_json(s));
    return arr.dump(2);
}

std::vector<BatchStats> parse_batch_json(const std::string& text) {
    const nlohmann::json arr = nlohmann::json::parse(text);
    std::vector<BatchStats> out;
    for (const auto& j : arr) {
        BatchStats s;
        s.n = j.at("n").get<int>();
        s.ib_lo = j.at("ib_lo").get<double>();
        s.ib_hi = j.at("ib_hi").get<double>();
        s.count = j.at("count").get<int>();
        s.failures = j.at("failures").get<int>();
        s.failure_rate = j.at("failure_rate").get<double>();
        s.seeds_of_failures = j.at("seeds_of_failures").get<std::vector<std::uint64_t>>();
        s.mean_wall_time = j.at("mean_wall_time").get<double>();
        s.batch_seed = j.at("batch_seed").get<std::uint64_t>();
        s.pd_violations = j.at("pd_violations").get<int>();
        out.push_back(std::move(s));
    }
    return out;
}

std::string emit_report_json(const SolveReport& rep) {
    nlohmann::json j{{"x_star", std::vector<double>(rep.x_star.begin(), rep.x_star.end())},
                     {"f_star", rep.f_star},
                     {"grad_inf", rep.grad_inf},
                     {"hessian_pd", rep.hessian_pd},
                     {"eig_min", rep.eig_min},
                     {"t0_used", rep.t0_used},
                     {"x0", std::vector<double>(rep.x0.begin(), rep.x0.end())},
                     {"status", rep.success ? "Success" : "Failure"},
                     {"failure_reason", rep.failure_reason},
                     {"trajectory_status", to_string(rep.trajectory_status)},
                     {"wall_time", rep.wall_time}};
    return j.dump(2);
}

} // namespace steklov
