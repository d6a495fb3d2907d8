#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace pfk {

// Exact rational scalar. Thin wrapper over mpq_class that keeps the value
// in lowest terms with a positive denominator; gmp only promises that after
// an explicit canonicalize(), which is easy to forget at call sites.
class Rat {
public:
    Rat() : v_(0) {}
    Rat(int n) : v_(n) {}
    Rat(long n) : v_(n) {}
    Rat(long long n) : v_(mpz_class(std::to_string(n))) {}
    Rat(long n, long d) : v_(n, d) {
        if (d == 0) throw std::domain_error("Rat: zero denominator");
        v_.canonicalize();
    }
    explicit Rat(const mpz_class& n) : v_(n) {}
    Rat(const mpz_class& n, const mpz_class& d) : v_(n, d) {
        if (d == 0) throw std::domain_error("Rat: zero denominator");
        v_.canonicalize();
    }

    static Rat one() { return Rat(1); }

    // Accepts "7", "-3/2" and anything else mpz understands, base 10.
    static Rat from_string(const std::string& s) {
        auto slash = s.find('/');
        if (slash == std::string::npos) return Rat(mpz_class(s));
        return Rat(mpz_class(s.substr(0, slash)), mpz_class(s.substr(slash + 1)));
    }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_one() const { return v_ == 1; }
    bool is_negative() const { return sgn(v_) < 0; }
    bool is_integer() const { return v_.get_den() == 1; }

    Rat operator-() const { return Rat(mpq_class(-v_)); }

    Rat inv() const {
        if (is_zero()) throw std::domain_error("Rat: inverse of zero");
        return Rat(v_.get_den(), v_.get_num());
    }

    Rat times_int(long long m) const { return *this * Rat(m); }

    friend Rat operator+(const Rat& a, const Rat& b) { return Rat(mpq_class(a.v_ + b.v_)); }
    friend Rat operator-(const Rat& a, const Rat& b) { return Rat(mpq_class(a.v_ - b.v_)); }
    friend Rat operator*(const Rat& a, const Rat& b) { return Rat(mpq_class(a.v_ * b.v_)); }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.is_zero()) throw std::domain_error("Rat: division by zero");
        return Rat(mpq_class(a.v_ / b.v_));
    }

    Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
    Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
    Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }

    friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }

    // Total order on values, used only to make outputs deterministic.
    friend int compare(const Rat& a, const Rat& b) { return cmp(a.v_, b.v_); }

    const mpq_class& value() const { return v_; }
    mpz_class num() const { return v_.get_num(); }
    mpz_class den() const { return v_.get_den(); }
    std::string str() const { return v_.get_str(); }

private:
    explicit Rat(mpq_class q) : v_(std::move(q)) {}

    mpq_class v_;
};

inline bool k_is_negative(const Rat& r) { return r.is_negative(); }
inline std::string k_abs_str(const Rat& r) { return mpq_class(abs(r.value())).get_str(); }

}  // namespace pfk
