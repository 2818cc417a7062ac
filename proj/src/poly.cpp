#include "steklov/poly.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace steklov {

namespace {

int total_degree(const ExponentVec& e) {
    return std::accumulate(e.begin(), e.end(), 0);
}

double pow_small(double x, int k) {
    double v = 1.0;
    for (int i = 0; i < k; ++i) v *= x;
    return v;
}

/// x^e with exponent i reduced by `drop_i` and exponent j by `drop_j`.
double eval_reduced(const ExponentVec& e, const Vector& x, int i, int drop_i, int j, int drop_j) {
    double v = 1.0;
    for (int k = 0; k < static_cast<int>(e.size()); ++k) {
        int ek = e[k];
        if (k == i) ek -= drop_i;
        if (k == j) ek -= drop_j;
        v *= pow_small(x[k], ek);
    }
    return v;
}

} // namespace

MonomialPoly::MonomialPoly(int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("MonomialPoly: dimension must be >= 1");
}

void MonomialPoly::add_term(const ExponentVec& e, double c) {
    if (static_cast<int>(e.size()) != n_)
        throw std::invalid_argument("MonomialPoly: exponent vector has wrong length");
    if (total_degree(e) > kMaxDegree)
        throw std::invalid_argument("MonomialPoly: term degree exceeds 4");
    if (c == 0.0) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        it->second += c;
        if (it->second == 0.0) terms_.erase(it);
    }
}

double MonomialPoly::coeff(const ExponentVec& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? 0.0 : it->second;
}

int MonomialPoly::degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
    return d;
}

double MonomialPoly::eval(const Vector& x) const {
    if (x.size() != n_) throw std::invalid_argument("MonomialPoly::eval: dimension mismatch");
    double v = 0.0;
    for (const auto& [e, c] : terms_) {
        double m = c;
        for (int k = 0; k < n_; ++k) m *= pow_small(x[k], e[k]);
        v += m;
    }
    return v;
}

Vector MonomialPoly::gradient(const Vector& x) const {
    if (x.size() != n_) throw std::invalid_argument("MonomialPoly::gradient: dimension mismatch");
    Vector g = Vector::Zero(n_);
    for (const auto& [e, c] : terms_) {
        for (int i = 0; i < n_; ++i) {
            if (e[i] == 0) continue;
            g[i] += c * e[i] * eval_reduced(e, x, i, 1, -1, 0);
        }
    }
    return g;
}

SymMatrix MonomialPoly::hessian(const Vector& x) const {
    if (x.size() != n_) throw std::invalid_argument("MonomialPoly::hessian: dimension mismatch");
    SymMatrix h(n_);
    for (const auto& [e, c] : terms_) {
        for (int i = 0; i < n_; ++i) {
            if (e[i] == 0) continue;
            if (e[i] >= 2)
                h.add(i, i, c * e[i] * (e[i] - 1) * eval_reduced(e, x, i, 2, -1, 0));
            for (int j = i + 1; j < n_; ++j) {
                if (e[j] == 0) continue;
                h.add(i, j, c * e[i] * e[j] * eval_reduced(e, x, i, 1, j, 1));
            }
        }
    }
    return h;
}

double QuadraticPoly::eval(const Vector& x) const {
    return c0 + g.dot(x) + x.dot(M.dense() * x);
}

Vector QuadraticPoly::gradient(const Vector& x) const {
    return g + 2.0 * (M.dense() * x);
}

NormalQuartic::NormalQuartic(Vector a, SymMatrix B, Vector d, double constant)
    : a_(std::move(a)), d_(std::move(d)), b_(std::move(B)), c0_(constant) {
    const int n = static_cast<int>(a_.size());
    if (n < 1 || d_.size() != n || b_.size() != n)
        throw std::invalid_argument("NormalQuartic: a, B, d dimensions disagree");
}

bool NormalQuartic::is_normal() const { return a_.minCoeff() > 0.0; }

double NormalQuartic::eval(const Vector& x) const {
    if (x.size() != dim()) throw std::invalid_argument("NormalQuartic::eval: dimension mismatch");
    const Vector x2 = x.cwiseProduct(x);
    return a_.dot(x2.cwiseProduct(x2)) + x.dot(b_.dense() * x) + d_.dot(x) + c0_;
}

Vector NormalQuartic::gradient(const Vector& x) const {
    if (x.size() != dim())
        throw std::invalid_argument("NormalQuartic::gradient: dimension mismatch");
    return 4.0 * a_.cwiseProduct(x.cwiseProduct(x).cwiseProduct(x)) + 2.0 * (b_.dense() * x) + d_;
}

SymMatrix NormalQuartic::hessian(const Vector& x) const {
    if (x.size() != dim())
        throw std::invalid_argument("NormalQuartic::hessian: dimension mismatch");
    Matrix h = 2.0 * b_.dense();
    for (int i = 0; i < dim(); ++i) h(i, i) += 12.0 * a_[i] * x[i] * x[i];
    return SymMatrix::from_dense(h, true);
}

MonomialPoly MonomialPoly_from_normal(const NormalQuartic& f) {
    const int n = f.dim();
    MonomialPoly p(n);
    ExponentVec e(n, 0);
    if (f.constant() != 0.0) p.add_term(e, f.constant());
    for (int i = 0; i < n; ++i) {
        e.assign(n, 0);
        e[i] = 4;
        p.add_term(e, f.a()[i]);
        e[i] = 1;
        p.add_term(e, f.d()[i]);
        e[i] = 2;
        p.add_term(e, f.B()(i, i));
        e[i] = 0;
        for (int j = i + 1; j < n; ++j) {
            e[i] = 1;
            e[j] = 1;
            p.add_term(e, 2.0 * f.B()(i, j));
            e[i] = 0;
            e[j] = 0;
        }
    }
    return p;
}

MonomialPoly NormalQuartic::to_monomial() const { return MonomialPoly_from_normal(*this); }

int dim(const Polynomial& f) {
    return std::visit([](const auto& p) { return p.dim(); }, f);
}

double eval(const Polynomial& f, const Vector& x) {
    return std::visit([&](const auto& p) { return p.eval(x); }, f);
}

Vector gradient(const Polynomial& f, const Vector& x) {
    return std::visit([&](const auto& p) { return p.gradient(x); }, f);
}

SymMatrix hessian(const Polynomial& f, const Vector& x) {
    return std::visit([&](const auto& p) { return p.hessian(x); }, f);
}

QuadraticPoly trace_hessian_poly(const Polynomial& f) {
    const int n = dim(f);
    if (const auto* nq = std::get_if<NormalQuartic>(&f)) {
        // q(x) = 12 sum a_i x_i^2 + 2 tr(B)
        return {2.0 * nq->B().trace(), Vector::Zero(n),
                SymMatrix::diagonal(12.0 * nq->a())};
    }
    const auto& mp = std::get<MonomialPoly>(f);
    QuadraticPoly q{0.0, Vector::Zero(n), SymMatrix(n)};
    for (const auto& [e, c] : mp.terms()) {
        for (int i = 0; i < n; ++i) {
            if (e[i] < 2) continue;
            // d^2/dx_i^2 of c x^e: c e_i (e_i - 1) x^{e - 2 e^i}, degree <= 2
            const double cc = c * e[i] * (e[i] - 1);
            ExponentVec r(e);
            r[i] -= 2;
            int nz1 = -1, nz2 = -1;
            for (int k = 0; k < n; ++k) {
                for (int rep = 0; rep < r[k]; ++rep) {
                    if (nz1 < 0) nz1 = k;
                    else nz2 = k;
                }
            }
            if (nz1 < 0) q.c0 += cc;                          // constant
            else if (nz2 < 0) q.g[nz1] += cc;                 // linear
            else if (nz1 == nz2) q.M.add(nz1, nz1, cc);       // x_k^2
            else q.M.add(nz1, nz2, cc / 2.0);                 // x_k x_l, split symmetric
        }
    }
    return q;
}

double quartic_tail_kappa(const Polynomial& f) {
    if (const auto* nq = std::get_if<NormalQuartic>(&f)) return nq->a().sum() / 5.0;
    const auto& mp = std::get<MonomialPoly>(f);
    const int n = mp.dim();
    double kappa = 0.0;
    for (const auto& [e, c] : mp.terms()) {
        if (total_degree(e) != 4) continue;
        // pure x_i^4: f_iiii = 24 c; pair x_i^2 x_j^2: f_iijj = 4 c
        int quartic_at = -1, pair_i = -1, pair_j = -1;
        bool other = false;
        for (int k = 0; k < n; ++k) {
            if (e[k] == 4) quartic_at = k;
            else if (e[k] == 2) (pair_i < 0 ? pair_i : pair_j) = k;
            else if (e[k] != 0) other = true;
        }
        if (quartic_at >= 0) kappa += c / 5.0;                       // 24c / 120
        else if (!other && pair_i >= 0 && pair_j >= 0) kappa += c / 9.0;  // 4c / 36
    }
    return kappa;
}

SymMatrix c_matrix(const Polynomial& f) {
    QuadraticPoly q = trace_hessian_poly(f);
    SymMatrix c = q.M;
    c *= 2.0;
    return c;
}

MonomialPoly to_monomial(const Polynomial& f) {
    if (const auto* nq = std::get_if<NormalQuartic>(&f)) return nq->to_monomial();
    return std::get<MonomialPoly>(f);
}

std::optional<NormalQuartic> as_normal(const Polynomial& f) {
    if (const auto* nq = std::get_if<NormalQuartic>(&f)) return *nq;
    const auto& mp = std::get<MonomialPoly>(f);
    const int n = mp.dim();
    Vector a = Vector::Zero(n), d = Vector::Zero(n);
    SymMatrix b(n);
    double c0 = 0.0;
    for (const auto& [e, c] : mp.terms()) {
        const int deg = total_degree(e);
        int nz = 0, first = -1, second = -1;
        for (int k = 0; k < n; ++k) {
            if (e[k] > 0) {
                ++nz;
                if (first < 0) first = k;
                else second = k;
            }
        }
        if (deg == 0) c0 = c;
        else if (deg == 1) d[first] = c;
        else if (deg == 2 && nz == 1) b.set(first, first, c);
        else if (deg == 2 && nz == 2) b.set(first, second, c / 2.0);
        else if (deg == 4 && nz == 1) a[first] = c;
        else return std::nullopt;  // cubic or mixed-quartic structure
    }
    return NormalQuartic(a, b, d, c0);
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream ss(line);
    std::string t;
    while (ss >> t) {
        if (t[0] == '#') break;
        toks.push_back(t);
    }
    return toks;
}

double parse_real(const std::string& tok, int lineno) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(tok, &pos);
    } catch (const std::exception&) {
        throw ParseError("expected a number, got '" + tok + "'", lineno);
    }
    if (pos != tok.size()) throw ParseError("trailing characters in number '" + tok + "'", lineno);
    return v;
}

int parse_exponent(const std::string& tok, int lineno) {
    for (char ch : tok)
        if (!std::isdigit(static_cast<unsigned char>(ch)))
            throw ParseError("exponent must be a nonnegative integer, got '" + tok + "'", lineno);
    try {
        return std::stoi(tok);
    } catch (const std::exception&) {
        throw ParseError("exponent out of range: '" + tok + "'", lineno);
    }
}

Polynomial parse_mqp(std::istream& in, int n, int lineno) {
    MonomialPoly p(n);
    std::string line;
    while (std::getline(in, line)) {
        ++lineno;
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        if (static_cast<int>(toks.size()) != n + 1)
            throw ParseError("expected <coeff> followed by " + std::to_string(n) + " exponents",
                             lineno);
        const double c = parse_real(toks[0], lineno);
        ExponentVec e(n);
        int deg = 0;
        for (int k = 0; k < n; ++k) {
            const int ek = parse_exponent(toks[k + 1], lineno);
            if (ek > kMaxDegree) throw ParseError("term degree exceeds 4", lineno);
            e[k] = static_cast<std::uint8_t>(ek);
            deg += ek;
        }
        if (deg > kMaxDegree) throw ParseError("term degree exceeds 4", lineno);
        p.add_term(e, c);
    }
    return p;
}

Polynomial parse_normal(std::istream& in, int n, int lineno) {
    std::optional<Vector> a, d;
    std::optional<double> c0;
    Matrix b(n, n);
    int b_rows = 0;
    std::string line;
    auto read_reals = [&](const std::vector<std::string>& toks, int want, int ln) {
        if (static_cast<int>(toks.size()) != want + 1)
            throw ParseError("expected " + std::to_string(want) + " values after '" + toks[0] + "'",
                             ln);
        Vector v(want);
        for (int k = 0; k < want; ++k) v[k] = parse_real(toks[k + 1], ln);
        return v;
    };
    while (std::getline(in, line)) {
        ++lineno;
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        if (toks[0] == "a") {
            if (a) throw ParseError("duplicate 'a' line", lineno);
            a = read_reals(toks, n, lineno);
        } else if (toks[0] == "B") {
            if (b_rows >= n) throw ParseError("more than " + std::to_string(n) + " 'B' rows", lineno);
            b.row(b_rows++) = read_reals(toks, n, lineno);
        } else if (toks[0] == "d") {
            if (d) throw ParseError("duplicate 'd' line", lineno);
            d = read_reals(toks, n, lineno);
        } else if (toks[0] == "c") {
            if (c0) throw ParseError("duplicate 'c' line", lineno);
            c0 = read_reals(toks, 1, lineno)[0];
        } else {
            throw ParseError("unknown directive '" + toks[0] + "' (expected a, B, d or c)", lineno);
        }
    }
    if (!a) throw ParseError("missing 'a' line", lineno);
    if (b_rows != n) throw ParseError("expected " + std::to_string(n) + " 'B' rows, got " +
                                          std::to_string(b_rows), lineno);
    if (!d) throw ParseError("missing 'd' line", lineno);
    SymMatrix bs(n);
    try {
        bs = SymMatrix::from_dense(b, false, 1e-12);
    } catch (const std::invalid_argument&) {
        throw ParseError("B is not symmetric", lineno);
    }
    return NormalQuartic(*a, bs, *d, c0.value_or(0.0));
}

} // namespace

Polynomial parse_poly(std::istream& in) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        if (toks.size() != 2)
            throw ParseError("expected header 'mqp <n>' or 'normal <n>'", lineno);
        int n = 0;
        try {
            n = std::stoi(toks[1]);
        } catch (const std::exception&) {
            throw ParseError("bad dimension '" + toks[1] + "'", lineno);
        }
        if (n < 1) throw ParseError("dimension must be >= 1", lineno);
        if (toks[0] == "mqp") return parse_mqp(in, n, lineno);
        if (toks[0] == "normal") return parse_normal(in, n, lineno);
        throw ParseError("unknown format '" + toks[0] + "' (expected 'mqp' or 'normal')", lineno);
    }
    throw ParseError("empty input", lineno);
}

Polynomial parse_poly_text(const std::string& text) {
    std::istringstream ss(text);
    return parse_poly(ss);
}

Polynomial parse_poly_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return parse_poly(in);
}

std::string format_poly(const Polynomial& f) {
    std::ostringstream out;
    out.precision(17);
    if (const auto* nq = std::get_if<NormalQuartic>(&f)) {
        const int n = nq->dim();
        out << "normal " << n << "\na";
        for (int i = 0; i < n; ++i) out << ' ' << nq->a()[i];
        out << '\n';
        for (int i = 0; i < n; ++i) {
            out << "B";
            for (int j = 0; j < n; ++j) out << ' ' << (*nq).B()(i, j);
            out << '\n';
        }
        out << "d";
        for (int i = 0; i < n; ++i) out << ' ' << nq->d()[i];
        out << '\n';
        if (nq->constant() != 0.0) out << "c " << nq->constant() << '\n';
        return out.str();
    }
    const auto& mp = std::get<MonomialPoly>(f);
    out << "mqp " << mp.dim() << '\n';
    for (const auto& [e, c] : mp.terms()) {
        out << c;
        for (auto ek : e) out << ' ' << static_cast<int>(ek);
        out << '\n';
    }
    return out.str();
}

} // namespace steklov
