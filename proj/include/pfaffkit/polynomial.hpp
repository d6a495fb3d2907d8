#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pfaffkit/monomial.hpp"

namespace pfk {

template <class K>
K k_pow(K base, std::uint64_t e) {
    if (e == 0) throw std::invalid_argument("k_pow: exponent must be positive");
    K result = base;
    --e;
    K sq = base;
    while (e) {
        if (e & 1) result = result * sq;
        sq = sq * sq;
        e >>= 1;
    }
    return result;
}

// Sparse multivariate polynomial over an exact field K. Terms live in a map
// ordered by descending graded lex, so iteration starts at the leading term
// and printing is canonical by construction. Zero coefficients are never
// stored; the total degree is cached on normalization.
template <class K>
class Polynomial {
public:
    using Terms = std::map<Monomial, K, GrlexDesc>;

    explicit Polynomial(std::size_t n_vars = 0) : n_(n_vars) {}

    static Polynomial zero(std::size_t n_vars) { return Polynomial(n_vars); }

    static Polynomial constant(std::size_t n_vars, K c) {
        Polynomial p(n_vars);
        if (!c.is_zero()) p.terms_.emplace(Monomial(n_vars), std::move(c));
        p.refresh();
        return p;
    }

    static Polynomial variable(std::size_t n_vars, std::size_t i, K coeff) {
        return term(n_vars, Monomial::unit(n_vars, i), std::move(coeff));
    }

    static Polynomial term(std::size_t n_vars, Monomial m, K c) {
        if (m.n_vars() != n_vars) throw std::invalid_argument("Polynomial: bad monomial width");
        Polynomial p(n_vars);
        if (!c.is_zero()) p.terms_.emplace(std::move(m), std::move(c));
        p.refresh();
        return p;
    }

    static Polynomial from_terms(std::size_t n_vars, Terms t) {
        Polynomial p(n_vars);
        p.terms_ = std::move(t);
        p.strip();
        return p;
    }

    std::size_t n_vars() const { return n_; }
    const Terms& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_constant());
    }

    // total degree; -1 for the zero polynomial
    std::int64_t degree() const { return degree_; }

    bool is_homogeneous() const {
        if (terms_.empty()) return true;
        auto d = terms_.begin()->first.degree();
        for (const auto& [m, c] : terms_)
            if (m.degree() != d) return false;
        return true;
    }

    const Monomial& leading_monomial() const {
        if (terms_.empty()) throw std::domain_error("leading_monomial of zero polynomial");
        return terms_.begin()->first;
    }
    const K& leading_coefficient() const {
        if (terms_.empty()) throw std::domain_error("leading_coefficient of zero polynomial");
        return terms_.begin()->second;
    }

    K coefficient(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? K{} : it->second;
    }

    std::uint32_t degree_in(std::size_t var) const {
        std::uint32_t d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.exponent(var));
        return d;
    }

    Polynomial operator-() const {
        Polynomial r(n_);
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        r.refresh();
        return r;
    }

    Polynomial& operator+=(const Polynomial& o) {
        require_same_vars(o);
        for (const auto& [m, c] : o.terms_) {
            auto [it, inserted] = terms_.emplace(m, c);
            if (!inserted) it->second += c;
        }
        strip();
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        require_same_vars(o);
        for (const auto& [m, c] : o.terms_) {
            // find first: negating c outright would reject unattached Fp constants
            // even when the term is only being subtracted from an existing one
            auto it = terms_.find(m);
            if (it == terms_.end()) terms_.emplace(m, -c);
            else it->second -= c;
        }
        strip();
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        a.require_same_vars(b);
        Polynomial r(a.n_);
        for (const auto& [ma, ca] : a.terms_) {
            for (const auto& [mb, cb] : b.terms_) {
                Monomial m = ma.times(mb);
                K c = ca * cb;
                auto it = r.terms_.find(m);
                if (it == r.terms_.end()) r.terms_.emplace(std::move(m), std::move(c));
                else it->second += c;
            }
        }
        r.strip();
        return r;
    }
    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

    Polynomial scaled(const K& c) const {
        Polynomial r(n_);
        if (c.is_zero()) return r;
        for (const auto& [m, cf] : terms_) r.terms_.emplace(m, cf * c);
        r.strip();
        return r;
    }

    // multiply by a bare monomial; no coefficient needed
    Polynomial shifted(const Monomial& m) const {
        Polynomial r(n_);
        for (const auto& [mm, c] : terms_) r.terms_.emplace(mm.times(m), c);
        r.refresh();
        return r;
    }

    Polynomial pow(std::uint32_t e) const {
        if (e == 0) {
            // the caller owes us a usable 1; over Fp an unattached one would
            // be wrong, so take the modulus from our own leading coefficient
            if (terms_.empty()) throw std::domain_error("pow(0) of zero polynomial");
            K one = leading_coefficient() / leading_coefficient();
            return constant(n_, one);
        }
        Polynomial result = *this;
        for (std::uint32_t i = 1; i < e; ++i) result *= *this;
        return result;
    }

    Polynomial derivative(std::size_t var) const {
        if (var >= n_) throw std::invalid_argument("derivative: no such variable");
        Polynomial r(n_);
        for (const auto& [m, c] : terms_) {
            std::uint32_t e = m.exponent(var);
            if (e == 0) continue;
            std::vector<std::uint32_t> ex = m.exponents();
            ex[var] = e - 1;
            K nc = c.times_int(static_cast<long long>(e));
            if (!nc.is_zero()) r.terms_.emplace(Monomial(std::move(ex)), std::move(nc));
        }
        r.refresh();
        return r;
    }

    K evaluate(const std::vector<K>& pt) const {
        if (pt.size() != n_)
            throw std::invalid_argument("evaluate: point has wrong number of coordinates");
        K acc{};
        for (const auto& [m, c] : terms_) {
            K t = c;
            for (std::size_t i = 0; i < n_; ++i)
                if (std::uint32_t e = m.exponent(i)) t = t * k_pow(pt[i], e);
            acc = acc + t;
        }
        return acc;
    }

    bool operator==(const Polynomial& o) const { return n_ == o.n_ && terms_ == o.terms_; }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    std::string str(const std::vector<std::string>& names) const {
        if (terms_.empty()) return "0";
        std::string s;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            bool neg = k_is_negative(c);
            if (first) {
                if (neg) s += "-";
                first = false;
            } else {
                s += neg ? " - " : " + ";
            }
            std::string cs = k_abs_str(c);
            std::string ms = monomial_string(m, names);
            if (ms.empty()) {
                s += cs;
            } else if (cs == "1") {
                s += ms;
            } else {
                s += cs + "*" + ms;
            }
        }
        return s;
    }

    std::string str() const { return str(default_names(n_)); }

    static std::vector<std::string> default_names(std::size_t n) {
        std::vector<std::string> names;
        names.reserve(n);
        for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
        return names;
    }

private:
    void require_same_vars(const Polynomial& o) const {
        if (n_ != o.n_) throw std::invalid_argument("Polynomial: variable count mismatch");
    }
    void strip() {
        for (auto it = terms_.begin(); it != terms_.end();) {
            if (it->second.is_zero()) it = terms_.erase(it);
            else ++it;
        }
        refresh();
    }
    void refresh() {
        degree_ = terms_.empty() ? -1 : static_cast<std::int64_t>(terms_.begin()->first.degree());
    }

    std::size_t n_;
    Terms terms_;
    std::int64_t degree_ = -1;
};

// Substitute images[i] for variable i throughout f. Every image must live in
// one common ring, which becomes the ring of the result.
template <class K>
Polynomial<K> substitute(const Polynomial<K>& f, const std::vector<Polynomial<K>>& images) {
    if (images.size() != f.n_vars())
        throw std::invalid_argument("substitute: need one image per variable");
    std::size_t m = images.empty() ? 0 : images[0].n_vars();
    for (const auto& img : images)
        if (img.n_vars() != m) throw std::invalid_argument("substitute: image ring mismatch");
    Polynomial<K> acc(m);
    for (const auto& [mon, c] : f.terms()) {
        Polynomial<K> t = Polynomial<K>::constant(m, c);
        for (std::size_t i = 0; i < f.n_vars(); ++i)
            if (std::uint32_t e = mon.exponent(i)) t *= images[i].pow(e);
        acc += t;
    }
    return acc;
}

// Quotient f/g when it exists. Leading terms in grlex are multiplicative, so
// when f = q*g the division loop never stalls; the first stall proves g does
// not divide f and we bail with nullopt.
template <class K>
std::optional<Polynomial<K>> exact_divide(const Polynomial<K>& f, const Polynomial<K>& g) {
    if (g.is_zero()) throw std::invalid_argument("exact_divide: zero divisor");
    if (f.n_vars() != g.n_vars()) throw std::invalid_argument("exact_divide: variable count mismatch");
    Polynomial<K> q(f.n_vars());
    Polynomial<K> r = f;
    const Monomial& gm = g.leading_monomial();
    const K& gc = g.leading_coefficient();
    while (!r.is_zero()) {
        const Monomial& rm = r.leading_monomial();
        if (!gm.divides(rm)) return std::nullopt;
        Polynomial<K> t =
            Polynomial<K>::term(f.n_vars(), rm.divide(gm), r.leading_coefficient() / gc);
        q += t;
        r -= t * g;
    }
    return q;
}

// Largest e with d^e dividing f; f nonzero, d nonconstant.
template <class K>
std::uint32_t divisibility_multiplicity(const Polynomial<K>& f, const Polynomial<K>& d) {
    if (f.is_zero()) throw std::invalid_argument("multiplicity of zero polynomial");
    if (d.is_constant()) throw std::invalid_argument("multiplicity with constant divisor");
    std::uint32_t e = 0;
    Polynomial<K> cur = f;
    while (true) {
        auto q = exact_divide(cur, d);
        if (!q) return e;
        cur = *q;
        ++e;
    }
}

}  // namespace pfk
