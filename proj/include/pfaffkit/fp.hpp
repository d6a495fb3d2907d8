#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

#include "pfaffkit/errors.hpp"
#include "pfaffkit/rat.hpp"

namespace pfk {

// Element of the prime field F_p for an odd prime p < 2^63. The modulus
// rides along with every value and two values with different (nonzero)
// moduli refuse to combine. A value with modulus 0 is an "unattached" small
// integer constant (a default constructed element is the unattached zero);
// it adopts the modulus of whatever it first meets, so zero-initialised
// accumulators and context-free constants like 1 behave.
class Fp {
public:
    Fp() = default;
    Fp(std::uint64_t value, std::uint64_t p) : v_(value % check(p)), p_(p) {}

    // the integer 1 before any modulus is known
    static Fp one() {
        Fp f;
        f.v_ = 1;
        return f;
    }

    static Fp from_int(long long n, std::uint64_t p) {
        check(p);
        if (n >= 0) return Fp(static_cast<std::uint64_t>(n) % p, p);
        std::uint64_t m = static_cast<std::uint64_t>(-(n + 1)) + 1;  // |n| without UB at INT64_MIN
        std::uint64_t r = m % p;
        return Fp(r == 0 ? 0 : p - r, p);
    }

    // Reduces num/den mod p; throws bad_prime_error when p divides den.
    static Fp from_rat(const Rat& q, std::uint64_t p) {
        check(p);
        std::uint64_t n = mpz_fdiv_ui(q.num().get_mpz_t(), p);
        std::uint64_t d = mpz_fdiv_ui(q.den().get_mpz_t(), p);
        if (d == 0) throw bad_prime_error("denominator divisible by p=" + std::to_string(p));
        return Fp(n, p) * Fp(d, p).inv();
    }

    std::uint64_t value() const { return v_; }
    std::uint64_t modulus() const { return p_; }

    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }

    Fp operator-() const {
        if (p_ == 0) {
            if (v_ == 0) return Fp();
            throw std::domain_error("Fp: cannot negate an unattached constant");
        }
        return Fp(v_ == 0 ? 0 : p_ - v_, p_);
    }

    Fp inv() const {
        if (v_ == 0) throw std::domain_error("Fp: inverse of zero");
        if (p_ == 0) {
            if (v_ == 1) return *this;
            throw std::domain_error("Fp: cannot invert an unattached constant");
        }
        // extended Euclid; p_ < 2^63 so signed arithmetic is safe
        std::int64_t t = 0, nt = 1;
        std::int64_t r = static_cast<std::int64_t>(p_), nr = static_cast<std::int64_t>(v_);
        while (nr != 0) {
            std::int64_t q = r / nr;
            std::int64_t tmp = t - q * nt; t = nt; nt = tmp;
            tmp = r - q * nr; r = nr; nr = tmp;
        }
        if (t < 0) t += static_cast<std::int64_t>(p_);
        return Fp(static_cast<std::uint64_t>(t), p_);
    }

    Fp times_int(long long m) const {
        if (p_ == 0) {
            if (v_ == 0 || m == 0) return Fp();
            if (v_ == 1 && m > 0) {
                Fp f;
                f.v_ = static_cast<std::uint64_t>(m);
                return f;
            }
            throw std::domain_error("Fp: unattached constant arithmetic out of range");
        }
        return *this * from_int(m, p_);
    }

    friend Fp operator+(const Fp& a, const Fp& b) {
        std::uint64_t p = reconcile(a, b);
        if (p == 0) {  // both unattached: plain integer addition of small constants
            Fp f;
            f.v_ = a.v_ + b.v_;
            return f;
        }
        std::uint64_t s = a.v_ % p + b.v_ % p;  // both summands < p < 2^63, no overflow
        if (s >= p) s -= p;
        return Fp(s, p);
    }
    friend Fp operator-(const Fp& a, const Fp& b) {
        std::uint64_t p = reconcile(a, b);
        if (p == 0) {
            if (b.v_ > a.v_) throw std::domain_error("Fp: unattached constant arithmetic out of range");
            Fp f;
            f.v_ = a.v_ - b.v_;
            return f;
        }
        return Fp(a.v_ % p, p) + (-Fp(b.v_ % p, p));
    }
    friend Fp operator*(const Fp& a, const Fp& b) {
        std::uint64_t p = reconcile(a, b);
        if (p == 0) {
            Fp f;
            f.v_ = a.v_ * b.v_;  // unattached constants are tiny
            return f;
        }
        auto prod = static_cast<unsigned __int128>(a.v_ % p) * (b.v_ % p);
        return Fp(static_cast<std::uint64_t>(prod % p), p);
    }
    friend Fp operator/(const Fp& a, const Fp& b) { return a * b.inv(); }

    Fp& operator+=(const Fp& o) { return *this = *this + o; }
    Fp& operator-=(const Fp& o) { return *this = *this - o; }
    Fp& operator*=(const Fp& o) { return *this = *this * o; }

    friend bool operator==(const Fp& a, const Fp& b) {
        if (a.v_ != b.v_) return false;
        return a.p_ == b.p_ || a.p_ == 0 || b.p_ == 0;
    }
    friend bool operator!=(const Fp& a, const Fp& b) { return !(a == b); }

    friend int compare(const Fp& a, const Fp& b) {
        return a.v_ < b.v_ ? -1 : (a.v_ > b.v_ ? 1 : 0);
    }

    std::string str() const { return std::to_string(v_); }

private:
    static std::uint64_t check(std::uint64_t p) {
        if (p < 2) throw std::invalid_argument("Fp: modulus must be at least 2");
        if (p >= (std::uint64_t{1} << 63)) throw std::invalid_argument("Fp: modulus must be < 2^63");
        return p;
    }
    static std::uint64_t reconcile(const Fp& a, const Fp& b) {
        if (a.p_ == b.p_) return a.p_;
        if (a.p_ == 0) return b.p_;
        if (b.p_ == 0) return a.p_;
        throw std::invalid_argument("Fp: mixing moduli " + std::to_string(a.p_) + " and " +
                                    std::to_string(b.p_));
    }

    std::uint64_t v_ = 0;
    std::uint64_t p_ = 0;  // 0 means unattached zero
};

// Rejects moduli the toolkit does not support: p must be an odd prime < 2^63.
inline void require_odd_prime(std::uint64_t p) {
    if (p < 3 || p % 2 == 0 || p >= (std::uint64_t{1} << 63))
        throw std::invalid_argument("modulus must be an odd prime below 2^63, got " + std::to_string(p));
    mpz_class z(std::to_string(p));
    if (mpz_probab_prime_p(z.get_mpz_t(), 32) == 0)
        throw std::invalid_argument(std::to_string(p) + " is not prime");
}

inline bool k_is_negative(const Fp&) { return false; }
inline std::string k_abs_str(const Fp& a) { return a.str(); }

}  // namespace pfk
