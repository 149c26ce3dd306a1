#include "gnesolve/polysys.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <sstream>

#include "linprog.hpp"

namespace gnesolve {

SparsePolynomial& SparsePolynomial::operator+=(const SparsePolynomial& q) {
    if (q.dim_ != dim_) throw std::invalid_argument("dimension mismatch");
    for (const auto& [a, c] : q.terms_) add_term(a, c);
    return *this;
}

SparsePolynomial& SparsePolynomial::operator-=(const SparsePolynomial& q) {
    if (q.dim_ != dim_) throw std::invalid_argument("dimension mismatch");
    for (const auto& [a, c] : q.terms_) add_term(a, -c);
    return *this;
}

SparsePolynomial& SparsePolynomial::operator*=(Complex s) {
    if (s == Complex(0.0)) {
        terms_.clear();
        return *this;
    }
    for (auto& [a, c] : terms_) c *= s;
    return *this;
}

SparsePolynomial operator*(const SparsePolynomial& p, const SparsePolynomial& q) {
    if (p.dim_ != q.dim_) throw std::invalid_argument("dimension mismatch");
    SparsePolynomial r(p.dim_);
    Monomial sum(p.dim_);
    for (const auto& [a, ca] : p.terms_) {
        for (const auto& [b, cb] : q.terms_) {
            for (int i = 0; i < p.dim_; ++i) sum[i] = a[i] + b[i];
            r.add_term(sum, ca * cb);
        }
    }
    return r;
}

Complex evaluate(const SparsePolynomial& p, const std::vector<Complex>& z) {
    if (static_cast<int>(z.size()) != p.ambient_dim())
        throw std::invalid_argument("point dimension mismatch");
    Complex acc(0.0);
    for (const auto& [a, c] : p.terms()) {
        Complex t = c;
        for (int i = 0; i < p.ambient_dim(); ++i) {
            for (int e = 0; e < a[i]; ++e) t *= z[i];
        }
        acc += t;
    }
    return acc;
}

double evaluate_real(const SparsePolynomial& p, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != p.ambient_dim())
        throw std::invalid_argument("point dimension mismatch");
    double acc = 0.0;
    for (const auto& [a, c] : p.terms()) {
        double t = c.real();
        for (int i = 0; i < p.ambient_dim(); ++i)
            for (int e = 0; e < a[i]; ++e) t *= x[i];
        acc += t;
    }
    return acc;
}

SparsePolynomial differentiate(const SparsePolynomial& p, int var) {
    if (var < 0 || var >= p.ambient_dim()) throw std::out_of_range("variable index out of range");
    SparsePolynomial d(p.ambient_dim());
    for (const auto& [a, c] : p.terms()) {
        if (a[var] == 0) continue;
        Monomial b = a;
        b[var] -= 1;
        d.add_term(b, c * static_cast<double>(a[var]));
    }
    return d;
}

SparsePolynomial facial_restriction(const SparsePolynomial& p, const WeightVector& w) {
    if (p.is_zero()) throw std::invalid_argument("facial restriction of the zero polynomial");
    if (static_cast<int>(w.w.size()) != p.ambient_dim())
        throw std::invalid_argument("weight vector dimension mismatch");
    long long h_min = 0;
    bool first = true;
    for (const auto& [a, c] : p.terms()) {
        long long h = 0;
        for (int i = 0; i < p.ambient_dim(); ++i) h += w.w[i] * a[i];
        if (first || h < h_min) h_min = h;
        first = false;
    }
    SparsePolynomial r(p.ambient_dim());
    for (const auto& [a, c] : p.terms()) {
        long long h = 0;
        for (int i = 0; i < p.ambient_dim(); ++i) h += w.w[i] * a[i];
        if (h == h_min) r.add_term(a, c);
    }
    return r;
}

std::vector<Monomial> support(const SparsePolynomial& p) {
    std::vector<Monomial> s;
    s.reserve(p.num_terms());
    for (const auto& [a, c] : p.terms()) s.push_back(a);
    return s;
}

std::vector<Monomial> newton_polytope_vertices(const SparsePolynomial& p) {
    if (p.is_zero()) throw std::invalid_argument("Newton polytope of the zero polynomial");
    const std::vector<Monomial> pts = support(p);
    const int k = p.ambient_dim();
    const int s = static_cast<int>(pts.size());
    std::vector<Monomial> verts;
    for (int i = 0; i < s; ++i) {
        if (s == 1) {
            verts.push_back(pts[i]);
            break;
        }
        // pts[i] is a vertex iff it is not a convex combination of the rest.
        Eigen::MatrixXd A(k + 1, s - 1);
        Eigen::VectorXd b(k + 1);
        int col = 0;
        for (int j = 0; j < s; ++j) {
            if (j == i) continue;
            for (int r = 0; r < k; ++r) A(r, col) = static_cast<double>(pts[j][r]);
            A(k, col) = 1.0;
            ++col;
        }
        for (int r = 0; r < k; ++r) b[r] = static_cast<double>(pts[i][r]);
        b[k] = 1.0;
        auto lpres = lp::solve(A, b, Eigen::VectorXd::Zero(s - 1));
        if (lpres.status == lp::Status::Infeasible) verts.push_back(pts[i]);
    }
    std::sort(verts.begin(), verts.end());  // plain lexicographic
    return verts;
}

SparsePolynomial embed(const SparsePolynomial& p, int new_dim) {
    if (new_dim < p.ambient_dim()) throw std::invalid_argument("embed target dimension too small");
    SparsePolynomial q(new_dim);
    for (const auto& [a, c] : p.terms()) {
        Monomial b(new_dim, 0);
        std::copy(a.begin(), a.end(), b.begin());
        q.add_term(b, c);
    }
    return q;
}

SparsePolynomial restrict_variables(const SparsePolynomial& p,
                                    const std::vector<int>& fixed_vars,
                                    const std::vector<double>& values) {
    if (fixed_vars.size() != values.size())
        throw std::invalid_argument("fixed_vars/values size mismatch");
    std::vector<int> fixed_pos(p.ambient_dim(), -1);
    for (std::size_t i = 0; i < fixed_vars.size(); ++i) {
        if (fixed_vars[i] < 0 || fixed_vars[i] >= p.ambient_dim())
            throw std::out_of_range("fixed variable index out of range");
        fixed_pos[fixed_vars[i]] = static_cast<int>(i);
    }
    std::vector<int> kept;
    for (int v = 0; v < p.ambient_dim(); ++v)
        if (fixed_pos[v] < 0) kept.push_back(v);
    if (kept.empty()) throw std::invalid_argument("cannot fix every variable");

    SparsePolynomial q(static_cast<int>(kept.size()));
    Monomial b(kept.size());
    for (const auto& [a, c] : p.terms()) {
        Complex coeff = c;
        for (int v = 0; v < p.ambient_dim(); ++v) {
            if (fixed_pos[v] >= 0)
                for (int e = 0; e < a[v]; ++e) coeff *= values[fixed_pos[v]];
        }
        for (std::size_t j = 0; j < kept.size(); ++j) b[j] = a[kept[j]];
        if (coeff != Complex(0.0)) q.add_term(b, coeff);
    }
    return q;
}

std::string to_string(const SparsePolynomial& p) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [a, c] : p.terms()) {
        if (!first) os << " + ";
        first = false;
        if (c.imag() == 0.0) {
            os << c.real();
        } else {
            os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
        }
        for (int i = 0; i < p.ambient_dim(); ++i) {
            if (a[i] == 0) continue;
            os << "*x" << (i + 1);
            if (a[i] > 1) os << "^" << a[i];
        }
    }
    return os.str();
}

namespace {

void enumerate_monomials(int dim, Monomial& cur, int pos, int remaining,
                         std::vector<Monomial>& out) {
    if (pos == dim) {
        out.push_back(cur);
        return;
    }
    for (int e = 0; e <= remaining; ++e) {
        cur[pos] = e;
        enumerate_monomials(dim, cur, pos + 1, remaining - e, out);
    }
    cur[pos] = 0;
}

}  // namespace

std::vector<Monomial> monomials_up_to(int dim, int deg) {
    std::vector<Monomial> out;
    Monomial cur(dim, 0);
    enumerate_monomials(dim, cur, 0, deg, out);
    std::sort(out.begin(), out.end(), GradedLexLess{});
    return out;
}

PolynomialSystem facial_system(const PolynomialSystem& sys, const WeightVector& w) {
    if (w.is_zero()) throw std::invalid_argument("facial system requires a nonzero weight");
    PolynomialSystem out(sys.ambient_dim);
    for (const auto& p : sys.polys) out.push(facial_restriction(p, w));
    return out;
}

std::vector<Complex> evaluate_system(const PolynomialSystem& sys, const std::vector<Complex>& z) {
    std::vector<Complex> v;
    v.reserve(sys.polys.size());
    for (const auto& p : sys.polys) v.push_back(evaluate(p, z));
    return v;
}

}  // namespace gnesolve
