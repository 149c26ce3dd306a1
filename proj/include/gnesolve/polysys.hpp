#pragma once

#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace gnesolve {

using Complex = std::complex<double>;

// Exponent vector of a monomial. Length always equals the ambient dimension
// of the owning polynomial; entries are >= 0.
using Monomial = std::vector<int>;

inline int total_degree(const Monomial& a) {
    int d = 0;
    for (int e : a) d += e;
    return d;
}

// Graded lexicographic order: total degree first, then lex.
struct GradedLexLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        const int da = total_degree(a), db = total_degree(b);
        if (da != db) return da < db;
        return a < b;
    }
};

// Integer weight vector w; exposes the face of a support minimizing <w,.>.
struct WeightVector {
    std::vector<long long> w;

    bool is_zero() const {
        for (long long v : w)
            if (v != 0) return false;
        return true;
    }
};

// Multivariate polynomial with complex coefficients, stored sparsely as
// monomial -> coefficient. Zero coefficients are pruned on insertion, so the
// key set is exactly the support. Iteration order is graded lex, which fixes
// the accumulation order of evaluate() and the printing order.
class SparsePolynomial {
public:
    using TermMap = std::map<Monomial, Complex, GradedLexLess>;

    explicit SparsePolynomial(int ambient_dim) : dim_(ambient_dim) {
        if (ambient_dim <= 0) throw std::invalid_argument("ambient_dim must be positive");
    }

    static SparsePolynomial constant(int dim, Complex c) {
        SparsePolynomial p(dim);
        p.add_term(Monomial(dim, 0), c);
        return p;
    }

    static SparsePolynomial variable(int dim, int var, Complex scale = 1.0) {
        SparsePolynomial p(dim);
        Monomial a(dim, 0);
        a.at(var) = 1;
        p.add_term(a, scale);
        return p;
    }

    static SparsePolynomial term(int dim, const Monomial& a, Complex c) {
        SparsePolynomial p(dim);
        p.add_term(a, c);
        return p;
    }

    int ambient_dim() const { return dim_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t num_terms() const { return terms_.size(); }
    const TermMap& terms() const { return terms_; }

    // Total degree; -1 for the zero polynomial.
    int degree() const {
        if (terms_.empty()) return -1;
        return total_degree(terms_.rbegin()->first);
    }

    Complex coeff(const Monomial& a) const {
        auto it = terms_.find(a);
        return it == terms_.end() ? Complex(0.0) : it->second;
    }

    void add_term(const Monomial& a, Complex c) {
        if (static_cast<int>(a.size()) != dim_)
            throw std::invalid_argument("monomial length does not match ambient dimension");
        for (int e : a)
            if (e < 0) throw std::invalid_argument("negative exponent");
        auto [it, inserted] = terms_.try_emplace(a, c);
        if (!inserted) it->second += c;
        if (it->second == Complex(0.0)) terms_.erase(it);
    }

    bool has_real_coefficients() const {
        for (const auto& [a, c] : terms_)
            if (c.imag() != 0.0) return false;
        return true;
    }

    SparsePolynomial& operator+=(const SparsePolynomial& q);
    SparsePolynomial& operator-=(const SparsePolynomial& q);
    SparsePolynomial& operator*=(Complex s);

    friend SparsePolynomial operator+(SparsePolynomial p, const SparsePolynomial& q) { return p += q; }
    friend SparsePolynomial operator-(SparsePolynomial p, const SparsePolynomial& q) { return p -= q; }
    friend SparsePolynomial operator*(SparsePolynomial p, Complex s) { return p *= s; }
    friend SparsePolynomial operator*(Complex s, SparsePolynomial p) { return p *= s; }
    friend SparsePolynomial operator-(SparsePolynomial p) { return p *= Complex(-1.0); }
    friend SparsePolynomial operator*(const SparsePolynomial& p, const SparsePolynomial& q);

    friend bool operator==(const SparsePolynomial& p, const SparsePolynomial& q) {
        return p.dim_ == q.dim_ && p.terms_ == q.terms_;
    }

private:
    int dim_;
    TermMap terms_;
};

// Sum of c_a * z^a with accumulation in graded lex order.
Complex evaluate(const SparsePolynomial& p, const std::vector<Complex>& z);
double evaluate_real(const SparsePolynomial& p, const std::vector<double>& x);

// Formal partial derivative with respect to variable `var`.
SparsePolynomial differentiate(const SparsePolynomial& p, int var);

// Sub-polynomial supported on the minimizers of <w,.> over the support.
SparsePolynomial facial_restriction(const SparsePolynomial& p, const WeightVector& w);

std::vector<Monomial> support(const SparsePolynomial& p);

// Vertices of the Newton polytope conv(support(p)), sorted lexicographically.
std::vector<Monomial> newton_polytope_vertices(const SparsePolynomial& p);

// Embed a polynomial into a larger variable space; existing variables keep
// their indices, new ones get exponent zero.
SparsePolynomial embed(const SparsePolynomial& p, int new_dim);

// Fix the variables listed in `fixed_vars` at `values`, producing a polynomial
// in the remaining variables (in their original relative order).
SparsePolynomial restrict_variables(const SparsePolynomial& p,
                                    const std::vector<int>& fixed_vars,
                                    const std::vector<double>& values);

// Canonical textual form "c * x1^a1*...*xk^ak + ...".
std::string to_string(const SparsePolynomial& p);

// All monomials in `dim` variables of total degree <= deg, graded lex order.
std::vector<Monomial> monomials_up_to(int dim, int deg);

struct PolynomialSystem {
    int ambient_dim = 0;
    std::vector<SparsePolynomial> polys;

    PolynomialSystem() = default;
    explicit PolynomialSystem(int dim) : ambient_dim(dim) {}

    void push(SparsePolynomial p) {
        if (p.ambient_dim() != ambient_dim)
            throw std::invalid_argument("system members must share the ambient dimension");
        polys.push_back(std::move(p));
    }

    std::size_t size() const { return polys.size(); }
    bool is_square() const { return static_cast<int>(polys.size()) == ambient_dim; }
};

// Componentwise facial restriction. Requires w nonzero.
PolynomialSystem facial_system(const PolynomialSystem& sys, const WeightVector& w);

std::vector<Complex> evaluate_system(const PolynomialSystem& sys, const std::vector<Complex>& z);

}  // namespace gnesolve
