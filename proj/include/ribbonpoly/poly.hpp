/**
 * poly.hpp
 *
 * Sparse multivariate Laurent polynomials over arbitrary-precision integers,
 * plus the thin rational-function layer needed by the composition formulas.
 *
 * Conventions:
 *  - a Monomial maps variable names to nonzero integer exponents (negative
 *    exponents are allowed everywhere);
 *  - terms are kept in a canonical graded order: higher total degree first,
 *    ties broken on the first variable name (ascending) whose exponents
 *    differ, higher exponent first.  Printing walks that order, so
 *    canonical_string() is byte-deterministic for equal polynomials.
 */
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ribbonpoly {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

struct Monomial {
    std::map<std::string, int> exps;

    Monomial() = default;
    Monomial(const std::string& var, int e) {
        if (e != 0) exps[var] = e;
    }

    long long degree() const {
        long long d = 0;
        for (const auto& [v, e] : exps) d += e;
        return d;
    }

    int exponent(const std::string& var) const {
        auto it = exps.find(var);
        return it == exps.end() ? 0 : it->second;
    }

    Monomial& operator*=(const Monomial& o) {
        for (const auto& [v, e] : o.exps) {
            int ne = exponent(v) + e;
            if (ne == 0)
                exps.erase(v);
            else
                exps[v] = ne;
        }
        return *this;
    }
    friend Monomial operator*(Monomial a, const Monomial& b) { return a *= b; }

    Monomial pow(int k) const {
        Monomial r;
        for (const auto& [v, e] : exps) r.exps[v] = e * k;
        if (k == 0) r.exps.clear();
        return r;
    }

    bool divides(const Monomial& m) const {
        for (const auto& [v, e] : exps)
            if (m.exponent(v) < e) return false;
        return true;
    }

    bool operator==(const Monomial& o) const { return exps == o.exps; }
    bool operator!=(const Monomial& o) const { return !(*this == o); }
};

// Canonical term order; see the file comment.
struct MonomialLess {
    bool operator()(const Monomial& x, const Monomial& y) const {
        long long dx = x.degree(), dy = y.degree();
        if (dx != dy) return dx > dy;
        auto it = x.exps.begin(), jt = y.exps.begin();
        while (it != x.exps.end() && jt != y.exps.end()) {
            if (it->first == jt->first) {
                if (it->second != jt->second) return it->second > jt->second;
                ++it;
                ++jt;
            } else if (it->first < jt->first) {
                return it->second > 0;
            } else {
                return jt->second < 0;
            }
        }
        if (it != x.exps.end()) return it->second > 0;
        if (jt != y.exps.end()) return jt->second < 0;
        return false;
    }
};

template <class Coeff>
class PolyT {
public:
    using TermMap = std::map<Monomial, Coeff, MonomialLess>;

    PolyT() = default;
    PolyT(long v) {
        if (v != 0) terms_[Monomial{}] = Coeff(v);
    }
    PolyT(const Coeff& c) {
        if (c != 0) terms_[Monomial{}] = c;
    }
    PolyT(const Monomial& m, const Coeff& c) {
        if (c != 0) terms_[m] = c;
    }

    static PolyT var(const std::string& name, int e = 1) {
        return PolyT(Monomial(name, e), Coeff(1));
    }

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    bool operator==(const PolyT& o) const { return terms_ == o.terms_; }
    bool operator!=(const PolyT& o) const { return !(*this == o); }

    PolyT& operator+=(const PolyT& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    PolyT& operator-=(const PolyT& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    PolyT& operator*=(const PolyT& o) { return *this = *this * o; }

    friend PolyT operator+(PolyT a, const PolyT& b) { return a += b; }
    friend PolyT operator-(PolyT a, const PolyT& b) { return a -= b; }
    friend PolyT operator-(const PolyT& a) { return PolyT() - a; }
    friend PolyT operator*(const PolyT& a, const PolyT& b) {
        PolyT r;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
        return r;
    }

    void add_term(const Monomial& m, const Coeff& c) {
        if (c == 0) return;
        auto [it, fresh] = terms_.try_emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    PolyT pow(int k) const {
        if (k < 0) throw std::invalid_argument("negative power of a polynomial");
        PolyT r(1);
        PolyT base = *this;
        while (k > 0) {
            if (k & 1) r *= base;
            base *= base;
            k >>= 1;
        }
        return r;
    }

    // Multiply by a bare monomial (a Laurent shift; always exact).
    PolyT shifted(const Monomial& m) const {
        PolyT r;
        for (const auto& [mm, c] : terms_) r.terms_[mm * m] = c;
        return r;
    }

    // Per-variable minimum exponent across all terms, with absent = 0.
    // Used to strip monomial content before long division.
    Monomial min_exponents() const {
        std::map<std::string, int> mins;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            for (auto& [v, lo] : mins)
                if (!m.exps.count(v) && lo > 0) lo = 0;
            for (const auto& [v, e] : m.exps) {
                auto it = mins.find(v);
                if (it == mins.end())
                    mins[v] = first ? e : std::min(e, 0);
                else
                    it->second = std::min(it->second, e);
            }
            first = false;
        }
        Monomial r;
        for (const auto& [v, e] : mins)
            if (e != 0) r.exps[v] = e;
        return r;
    }

    // Terms whose exponent of `var` equals k, with var stripped.
    PolyT coefficient_of(const std::string& var, int k) const {
        PolyT r;
        for (const auto& [m, c] : terms_) {
            if (m.exponent(var) != k) continue;
            Monomial stripped = m;
            stripped.exps.erase(var);
            r.terms_[stripped] = c;
        }
        return r;
    }

    std::vector<std::string> variables() const {
        std::map<std::string, int> seen;
        for (const auto& [m, c] : terms_)
            for (const auto& [v, e] : m.exps) seen[v] = 1;
        std::vector<std::string> out;
        for (const auto& [v, one] : seen) out.push_back(v);
        return out;
    }

private:
    TermMap terms_;
};

using MultiPoly = PolyT<Int>;
using QPoly = PolyT<Rat>;

inline QPoly to_qpoly(const MultiPoly& p) {
    QPoly q;
    for (const auto& [m, c] : p.terms()) q.add_term(m, Rat(c));
    return q;
}

// gcd of the absolute values of all coefficients; 0 for the zero polynomial.
inline Int content(const MultiPoly& p) {
    Int g = 0;
    for (const auto& [m, c] : p.terms()) {
        g = boost::multiprecision::gcd(g, boost::multiprecision::abs(c));
        if (g == 1) break;
    }
    return g;
}

// Exact division of Laurent polynomials.  Returns nothing when den does not
// divide num in Int[vars,vars^-1].  Monomial content is stripped first so the
// core long division runs on ordinary polynomials under the canonical order.
inline std::optional<MultiPoly> try_divide(const MultiPoly& num, const MultiPoly& den) {
    if (den.is_zero()) throw std::invalid_argument("division by the zero polynomial");
    if (num.is_zero()) return MultiPoly();
    Monomial mn = num.min_exponents(), md = den.min_exponents();
    QPoly n = to_qpoly(num.shifted(mn.pow(-1)));
    QPoly d = to_qpoly(den.shifted(md.pow(-1)));
    const auto& dlt = *d.terms().begin();
    QPoly q;
    while (!n.is_zero()) {
        const auto& nlt = *n.terms().begin();
        if (!dlt.first.divides(nlt.first)) return std::nullopt;
        Monomial qm = nlt.first * dlt.first.pow(-1);
        Rat qc = nlt.second / dlt.second;
        QPoly qt(qm, qc);
        q += qt;
        n -= qt * d;
    }
    MultiPoly out;
    for (const auto& [m, c] : q.terms()) {
        if (boost::multiprecision::denominator(c) != 1) return std::nullopt;
        out.add_term(m, boost::multiprecision::numerator(c));
    }
    Monomial shift = mn * md.pow(-1);
    return out.shifted(shift);
}

inline MultiPoly divide_exact(const MultiPoly& num, const MultiPoly& den) {
    auto q = try_divide(num, den);
    if (!q) throw std::runtime_error("polynomial division is not exact");
    return *q;
}

// Reduce modulo d^2 - d: every d-exponent >= 1 collapses to 1.  Idempotent.
inline MultiPoly d_reduce(const MultiPoly& p, const std::string& var = "d") {
    MultiPoly r;
    for (const auto& [m, c] : p.terms()) {
        Monomial mm = m;
        if (mm.exponent(var) > 1) mm.exps[var] = 1;
        r.add_term(mm, c);
    }
    return r;
}

inline std::string canonical_string(const MultiPoly& p) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : p.terms()) {
        bool neg = c < 0;
        Int mag = boost::multiprecision::abs(c);
        std::string term;
        if (mag != 1 || m.exps.empty()) term = mag.str();
        for (const auto& [v, e] : m.exps) {
            if (!term.empty()) term += "*";
            term += v;
            if (e != 1) term += "^" + std::to_string(e);
        }
        if (first) {
            out += (neg ? "-" : "") + term;
            first = false;
        } else {
            out += (neg ? " - " : " + ") + term;
        }
    }
    return out;
}

// Exact evaluation at a rational point.  Every variable of p must be bound;
// a negative exponent at zero is reported as a zero denominator.
inline Rat evaluate(const MultiPoly& p, const std::map<std::string, Rat>& point) {
    Rat sum = 0;
    for (const auto& [m, c] : p.terms()) {
        Rat t(c);
        for (const auto& [v, e] : m.exps) {
            auto it = point.find(v);
            if (it == point.end())
                throw std::invalid_argument("evaluate: unbound variable " + v);
            Rat base = it->second;
            int k = e;
            if (k < 0) {
                if (base == 0) throw std::invalid_argument("evaluate: zero to a negative power");
                base = 1 / base;
                k = -k;
            }
            for (int i = 0; i < k; ++i) t *= base;
        }
        sum += t;
    }
    return sum;
}

class RationalFn {
public:
    RationalFn() : num_(), den_(1) {}
    RationalFn(long v) : num_(v), den_(1) {}
    RationalFn(const MultiPoly& n) : num_(n), den_(1) {}
    RationalFn(const MultiPoly& n, const MultiPoly& d) : num_(n), den_(d) {
        if (den_.is_zero()) throw std::invalid_argument("rational function with zero denominator");
        normalize();
    }

    const MultiPoly& num() const { return num_; }
    const MultiPoly& den() const { return den_; }

    friend RationalFn operator+(const RationalFn& a, const RationalFn& b) {
        return RationalFn(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RationalFn operator-(const RationalFn& a, const RationalFn& b) {
        return RationalFn(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RationalFn operator*(const RationalFn& a, const RationalFn& b) {
        return RationalFn(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RationalFn operator/(const RationalFn& a, const RationalFn& b) {
        if (b.num_.is_zero()) throw std::invalid_argument("division by a zero rational function");
        return RationalFn(a.num_ * b.den_, a.den_ * b.num_);
    }
    RationalFn& operator+=(const RationalFn& o) { return *this = *this + o; }
    RationalFn& operator-=(const RationalFn& o) { return *this = *this - o; }
    RationalFn& operator*=(const RationalFn& o) { return *this = *this * o; }
    RationalFn& operator/=(const RationalFn& o) { return *this = *this / o; }

    RationalFn pow(int k) const {
        if (k >= 0) return RationalFn(num_.pow(k), den_.pow(k));
        if (num_.is_zero()) throw std::invalid_argument("negative power of the zero function");
        return RationalFn(den_.pow(-k), num_.pow(-k));
    }

    // Equality by cross-multiplication; no gcd reduction is ever attempted.
    bool operator==(const RationalFn& o) const { return num_ * o.den_ == o.num_ * den_; }
    bool operator!=(const RationalFn& o) const { return !(*this == o); }

    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return try_divide(num_, den_).has_value(); }

    MultiPoly to_polynomial() const {
        auto q = try_divide(num_, den_);
        if (!q) throw std::runtime_error("rational function is not a polynomial");
        return *q;
    }

    std::string canonical() const {
        MultiPoly one(1);
        if (den_ == one) return canonical_string(num_);
        return "(" + canonical_string(num_) + ")/(" + canonical_string(den_) + ")";
    }

private:
    // Strip common integer content and make the denominator's leading
    // coefficient positive, so equal fractions built the same way print the
    // same.  (Equality testing never relies on this.)
    void normalize() {
        if (num_.is_zero()) {
            den_ = MultiPoly(1);
            return;
        }
        Int g = boost::multiprecision::gcd(content(num_), content(den_));
        if (g > 1) {
            num_ = scale_down(num_, g);
            den_ = scale_down(den_, g);
        }
        if (den_.terms().begin()->second < 0) {
            num_ = -num_;
            den_ = -den_;
        }
    }
    static MultiPoly scale_down(const MultiPoly& p, const Int& g) {
        MultiPoly r;
        for (const auto& [m, c] : p.terms()) r.add_term(m, c / g);
        return r;
    }

    MultiPoly num_, den_;
};

// Simultaneous exact substitution var -> rational function.  Unbound
// variables stay as themselves; negative exponents of bound variables invert
// the binding (an error if the binding is zero).
inline RationalFn substitute(const MultiPoly& p, const std::map<std::string, RationalFn>& bindings) {
    RationalFn acc;
    for (const auto& [m, c] : p.terms()) {
        RationalFn term{MultiPoly(c)};
        Monomial residual;
        for (const auto& [v, e] : m.exps) {
            auto it = bindings.find(v);
            if (it == bindings.end()) {
                residual.exps[v] = e;
                continue;
            }
            if (e < 0 && it->second.is_zero())
                throw std::invalid_argument("substitute: zero denominator from " + v + "^" +
                                            std::to_string(e));
            term *= it->second.pow(e);
        }
        term *= RationalFn(MultiPoly(residual, Int(1)));
        acc += term;
    }
    return acc;
}

// Substitution that is known to stay polynomial (polynomial bindings used
// with nonnegative exponents, or invertible monomial bindings).
inline MultiPoly substitute_poly(const MultiPoly& p, const std::map<std::string, RationalFn>& bindings) {
    return substitute(p, bindings).to_polynomial();
}

}  // namespace ribbonpoly
