#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "pfaffkit/poly_gcd.hpp"
#include "pfaffkit/polynomial.hpp"

namespace pfk {

// Quotient of two polynomials in canonical form: gcd(num, den) = 1 and the
// denominator is monic in graded lex. Canonical form makes operator== a
// structural comparison.
template <class K>
class RationalFunction {
public:
    explicit RationalFunction(Polynomial<K> num)
        : num_(std::move(num)), den_(Polynomial<K>::constant(num_.n_vars(), K::one())) {}

    RationalFunction(Polynomial<K> num, Polynomial<K> den)
        : num_(std::move(num)), den_(std::move(den)) {
        if (num_.n_vars() != den_.n_vars())
            throw std::invalid_argument("RationalFunction: variable count mismatch");
        if (den_.is_zero()) throw std::domain_error("RationalFunction: zero denominator");
        canonicalize();
    }

    static RationalFunction zero(std::size_t n_vars) {
        return RationalFunction(Polynomial<K>(n_vars));
    }

    const Polynomial<K>& num() const { return num_; }
    const Polynomial<K>& den() const { return den_; }
    std::size_t n_vars() const { return num_.n_vars(); }

    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }

    RationalFunction operator-() const {
        RationalFunction r = *this;
        r.num_ = -r.num_;
        return r;
    }

    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
        return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
        return RationalFunction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
        return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
        if (b.is_zero()) throw std::domain_error("RationalFunction: division by zero");
        return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
    }

    RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
    RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
    RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }

    bool operator==(const RationalFunction& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const RationalFunction& o) const { return !(*this == o); }

    std::string str(const std::vector<std::string>& names) const {
        if (num_.is_zero() || den_.is_constant()) return num_.str(names);
        std::string ns = num_.str(names);
        if (num_.term_count() > 1) ns = "(" + ns + ")";
        std::string ds = den_.str(names);
        // keep "x" and "x^2" bare; anything wider gets parentheses
        bool den_simple = den_.term_count() == 1 && monomial_width(den_.leading_monomial()) == 1;
        if (!den_simple) ds = "(" + ds + ")";
        return ns + "/" + ds;
    }
    std::string str() const { return str(Polynomial<K>::default_names(n_vars())); }

private:
    static int monomial_width(const Monomial& m) {
        int w = 0;
        for (std::size_t i = 0; i < m.n_vars(); ++i)
            if (m.exponent(i) > 0) ++w;
        return w;
    }

    void canonicalize() {
        if (num_.is_zero()) {
            den_ = Polynomial<K>::constant(n_vars(), K::one());
            return;
        }
        Polynomial<K> g = poly_gcd(num_, den_);
        num_ = *exact_divide(num_, g);
        den_ = *exact_divide(den_, g);
        K lc = den_.leading_coefficient();
        num_ = num_.scaled(lc.inv());
        den_ = den_.scaled(lc.inv());
    }

    Polynomial<K> num_, den_;
};

}  // namespace pfk
