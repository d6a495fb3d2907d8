#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace pfk {

// Exponent vector of a monomial in a fixed number of variables. Exponents
// are machine integers; additions are checked so silent wraparound cannot
// corrupt a computation.
class Monomial {
public:
    explicit Monomial(std::size_t n_vars = 0) : e_(n_vars, 0) {}
    explicit Monomial(std::vector<std::uint32_t> e) : e_(std::move(e)) {}

    static Monomial unit(std::size_t n_vars, std::size_t var, std::uint32_t k = 1) {
        Monomial m(n_vars);
        m.e_.at(var) = k;
        return m;
    }

    std::size_t n_vars() const { return e_.size(); }
    std::uint32_t exponent(std::size_t i) const { return e_[i]; }
    const std::vector<std::uint32_t>& exponents() const { return e_; }

    std::uint64_t degree() const {
        return std::accumulate(e_.begin(), e_.end(), std::uint64_t{0});
    }
    bool is_constant() const {
        return std::all_of(e_.begin(), e_.end(), [](std::uint32_t x) { return x == 0; });
    }

    Monomial times(const Monomial& o) const {
        require_same_vars(o);
        Monomial r(e_.size());
        for (std::size_t i = 0; i < e_.size(); ++i) {
            std::uint64_t s = std::uint64_t{e_[i]} + o.e_[i];
            if (s > std::numeric_limits<std::uint32_t>::max())
                throw std::overflow_error("Monomial: exponent overflow");
            r.e_[i] = static_cast<std::uint32_t>(s);
        }
        return r;
    }

    bool divides(const Monomial& o) const {
        require_same_vars(o);
        for (std::size_t i = 0; i < e_.size(); ++i)
            if (e_[i] > o.e_[i]) return false;
        return true;
    }

    // this / d, entrywise; caller must know d divides this
    Monomial divide(const Monomial& d) const {
        require_same_vars(d);
        Monomial r(e_.size());
        for (std::size_t i = 0; i < e_.size(); ++i) {
            if (d.e_[i] > e_[i]) throw std::invalid_argument("Monomial: quotient not defined");
            r.e_[i] = e_[i] - d.e_[i];
        }
        return r;
    }

    bool operator==(const Monomial& o) const { return e_ == o.e_; }

private:
    void require_same_vars(const Monomial& o) const {
        if (e_.size() != o.e_.size())
            throw std::invalid_argument("Monomial: variable count mismatch");
    }

    std::vector<std::uint32_t> e_;
};

// Graded lexicographic comparison: higher total degree wins, ties fall to
// lexicographic order with the earlier variable dominating. Returns +1 when
// a is the larger monomial. This is the single term order used everywhere.
inline int grlex_compare(const Monomial& a, const Monomial& b) {
    std::uint64_t da = a.degree(), db = b.degree();
    if (da != db) return da > db ? 1 : -1;
    for (std::size_t i = 0; i < a.n_vars(); ++i) {
        if (a.exponent(i) != b.exponent(i)) return a.exponent(i) > b.exponent(i) ? 1 : -1;
    }
    return 0;
}

// Comparator placing the grlex-largest monomial first, so that map iteration
// starts at the leading term.
struct GrlexDesc {
    bool operator()(const Monomial& a, const Monomial& b) const {
        return grlex_compare(a, b) > 0;
    }
};

namespace detail {
inline void enumerate_exact(std::size_t n, std::uint32_t d, std::vector<std::uint32_t>& cur,
                            std::vector<Monomial>& out) {
    if (cur.size() + 1 == n) {
        cur.push_back(d);
        out.emplace_back(cur);
        cur.pop_back();
        return;
    }
    for (std::uint32_t e = 0; e <= d; ++e) {
        cur.push_back(e);
        enumerate_exact(n, d - e, cur, out);
        cur.pop_back();
    }
}
}  // namespace detail

// All monomials of total degree exactly d, in descending grlex order.
inline std::vector<Monomial> monomials_of_degree(std::size_t n_vars, std::uint32_t d) {
    if (n_vars == 0) {
        if (d == 0) return {Monomial(0)};
        return {};
    }
    std::vector<Monomial> out;
    std::vector<std::uint32_t> cur;
    detail::enumerate_exact(n_vars, d, cur, out);
    std::sort(out.begin(), out.end(), GrlexDesc{});
    return out;
}

// All monomials of total degree at most d, in descending grlex order.
inline std::vector<Monomial> monomials_up_to_degree(std::size_t n_vars, std::uint32_t d) {
    std::vector<Monomial> out;
    for (std::uint32_t k = 0; k <= d; ++k) {
        auto part = monomials_of_degree(n_vars, k);
        out.insert(out.end(), part.begin(), part.end());
    }
    std::sort(out.begin(), out.end(), GrlexDesc{});
    return out;
}

inline std::string monomial_string(const Monomial& m, const std::vector<std::string>& names) {
    std::string s;
    for (std::size_t i = 0; i < m.n_vars(); ++i) {
        std::uint32_t e = m.exponent(i);
        if (e == 0) continue;
        if (!s.empty()) s += "*";
        s += names.at(i);
        if (e > 1) s += "^" + std::to_string(e);
    }
    return s;
}

}  // namespace pfk
