#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pfaffkit/polynomial.hpp"
#include "pfaffkit/vector_field.hpp"

namespace pfk {

// Alternating p-form (equally, p-multivector) with polynomial coefficients,
// stored sparsely on strictly increasing index tuples. Degree is fixed at
// construction; a degree larger than n_vars is allowed and forces the zero
// form, which keeps wedge total.
template <class K>
class DifferentialForm {
public:
    using Index = std::vector<std::size_t>;
    using Terms = std::map<Index, Polynomial<K>>;

    DifferentialForm(std::size_t n_vars, std::size_t degree) : n_(n_vars), deg_(degree) {
        if (n_ == 0) throw std::invalid_argument("DifferentialForm: empty ring");
    }

    static DifferentialForm from_terms(std::size_t n_vars, std::size_t degree,
                                       std::vector<std::pair<Index, Polynomial<K>>> terms) {
        DifferentialForm w(n_vars, degree);
        for (auto& [idx, c] : terms) w.add_term(std::move(idx), std::move(c));
        return w;
    }

    // dx_i
    static DifferentialForm basis_covector(std::size_t n_vars, std::size_t i) {
        DifferentialForm w(n_vars, 1);
        w.add_term({i}, Polynomial<K>::constant(n_vars, K::one()));
        return w;
    }

    std::size_t n_vars() const { return n_; }
    std::size_t degree() const { return deg_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    // Accumulates c on the tuple idx, sorting it and tracking the permutation
    // sign; tuples with a repeated index annihilate.
    void add_term(Index idx, Polynomial<K> c) {
        if (idx.size() != deg_)
            throw std::invalid_argument("DifferentialForm: tuple length != form degree");
        for (auto i : idx)
            if (i >= n_) throw std::invalid_argument("DifferentialForm: index out of range");
        if (c.n_vars() != n_)
            throw std::invalid_argument("DifferentialForm: coefficient ring mismatch");
        if (c.is_zero()) return;
        int sign = sort_index(idx);
        if (sign == 0) return;
        if (sign < 0) c = -c;
        auto it = terms_.find(idx);
        if (it == terms_.end()) {
            terms_.emplace(std::move(idx), std::move(c));
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    // coefficient on a tuple, in any order (sign-adjusted); zero if absent
    Polynomial<K> coefficient(Index idx) const {
        int sign = sort_index(idx);
        if (sign == 0) return Polynomial<K>::zero(n_);
        auto it = terms_.find(idx);
        if (it == terms_.end()) return Polynomial<K>::zero(n_);
        return sign < 0 ? -it->second : it->second;
    }

    DifferentialForm operator-() const {
        DifferentialForm r(n_, deg_);
        for (const auto& [i, c] : terms_) r.terms_.emplace(i, -c);
        return r;
    }

    DifferentialForm& operator+=(const DifferentialForm& o) {
        check_compatible(o);
        for (const auto& [i, c] : o.terms_) {
            auto it = terms_.find(i);
            if (it == terms_.end()) {
                terms_.emplace(i, c);
            } else {
                it->second += c;
                if (it->second.is_zero()) terms_.erase(it);
            }
        }
        return *this;
    }
    DifferentialForm& operator-=(const DifferentialForm& o) { return *this += -o; }

    friend DifferentialForm operator+(DifferentialForm a, const DifferentialForm& b) {
        a += b;
        return a;
    }
    friend DifferentialForm operator-(DifferentialForm a, const DifferentialForm& b) {
        a -= b;
        return a;
    }

    // coefficient-wise product with a polynomial
    DifferentialForm times(const Polynomial<K>& f) const {
        DifferentialForm r(n_, deg_);
        if (f.is_zero()) return r;
        for (const auto& [i, c] : terms_) r.terms_.emplace(i, c * f);
        return r;
    }
    DifferentialForm scaled(const K& a) const { return times(Polynomial<K>::constant(n_, a)); }

    // interior product i_X
    DifferentialForm contract(const VectorField<K>& X) const {
        if (X.n_vars() != n_) throw std::invalid_argument("contract: ring mismatch");
        if (deg_ == 0) throw std::invalid_argument("contract: cannot contract a 0-form");
        DifferentialForm r(n_, deg_ - 1);
        for (const auto& [idx, c] : terms_) {
            for (std::size_t j = 0; j < idx.size(); ++j) {
                const Polynomial<K>& comp = X.component(idx[j]);
                if (comp.is_zero()) continue;
                Index rest;
                rest.reserve(idx.size() - 1);
                for (std::size_t k = 0; k < idx.size(); ++k)
                    if (k != j) rest.push_back(idx[k]);
                Polynomial<K> p = c * comp;
                if (j % 2) p = -p;
                r.add_term(std::move(rest), std::move(p));
            }
        }
        return r;
    }

    DifferentialForm exterior_derivative() const {
        DifferentialForm r(n_, deg_ + 1);
        for (const auto& [idx, c] : terms_) {
            for (std::size_t v = 0; v < n_; ++v) {
                Polynomial<K> pc = c.derivative(v);
                if (pc.is_zero()) continue;
                Index ext;
                ext.reserve(idx.size() + 1);
                ext.push_back(v);
                ext.insert(ext.end(), idx.begin(), idx.end());
                r.add_term(std::move(ext), std::move(pc));
            }
        }
        return r;
    }

    std::int64_t coefficient_degree() const {
        std::int64_t d = -1;
        for (const auto& [i, c] : terms_) d = std::max(d, c.degree());
        return d;
    }

    // common degree when every coefficient is homogeneous of one degree
    std::optional<std::int64_t> homogeneous_coefficient_degree() const {
        std::optional<std::int64_t> d;
        for (const auto& [i, c] : terms_) {
            if (!c.is_homogeneous()) return std::nullopt;
            if (d && *d != c.degree()) return std::nullopt;
            d = c.degree();
        }
        return d;
    }

    bool operator==(const DifferentialForm& o) const {
        return n_ == o.n_ && deg_ == o.deg_ && terms_ == o.terms_;
    }
    bool operator!=(const DifferentialForm& o) const { return !(*this == o); }

    std::string str(const std::vector<std::string>& names) const {
        if (names.size() != n_) throw std::invalid_argument("str: one name per variable");
        if (terms_.empty()) return "0";
        if (deg_ == 0) return terms_.begin()->second.str(names);
        std::string s;
        for (const auto& [idx, c] : terms_) {
            std::string basis;
            for (std::size_t j = 0; j < idx.size(); ++j) {
                if (j) basis += "^";
                basis += "d" + names[idx[j]];
            }
            // single-term coefficients carry their sign into the joiner;
            // multi-term ones are parenthesized and joined with " + "
            bool negative = false;
            std::string piece;
            if (c.term_count() == 1) {
                negative = k_is_negative(c.leading_coefficient());
                std::string mag = negative ? (-c).str(names) : c.str(names);
                piece = mag == "1" ? basis : mag + " " + basis;
            } else {
                piece = "(" + c.str(names) + ") " + basis;
            }
            if (s.empty())
                s += negative ? "-" + piece : piece;
            else
                s += (negative ? " - " : " + ") + piece;
        }
        return s;
    }
    std::string str() const { return str(Polynomial<K>::default_names(n_)); }

private:
    // insertion sort; returns the permutation sign, 0 on a repeated index
    static int sort_index(Index& idx) {
        int sign = 1;
        for (std::size_t i = 1; i < idx.size(); ++i) {
            std::size_t j = i;
            while (j > 0 && idx[j] < idx[j - 1]) {
                std::swap(idx[j], idx[j - 1]);
                sign = -sign;
                --j;
            }
        }
        for (std::size_t i = 1; i < idx.size(); ++i)
            if (idx[i] == idx[i - 1]) return 0;
        return sign;
    }

    void check_compatible(const DifferentialForm& o) const {
        if (n_ != o.n_ || deg_ != o.deg_)
            throw std::invalid_argument("DifferentialForm: ring or degree mismatch");
    }

    std::size_t n_;
    std::size_t deg_;
    Terms terms_;
};

template <class K>
DifferentialForm<K> operator*(const Polynomial<K>& f, const DifferentialForm<K>& w) {
    return w.times(f);
}
template <class K>
DifferentialForm<K> operator*(const DifferentialForm<K>& w, const Polynomial<K>& f) {
    return w.times(f);
}

template <class K>
DifferentialForm<K> wedge(const DifferentialForm<K>& a, const DifferentialForm<K>& b) {
    if (a.n_vars() != b.n_vars()) throw std::invalid_argument("wedge: ring mismatch");
    DifferentialForm<K> r(a.n_vars(), a.degree() + b.degree());
    for (const auto& [ia, ca] : a.terms()) {
        for (const auto& [ib, cb] : b.terms()) {
            typename DifferentialForm<K>::Index idx;
            idx.reserve(ia.size() + ib.size());
            idx.insert(idx.end(), ia.begin(), ia.end());
            idx.insert(idx.end(), ib.begin(), ib.end());
            r.add_term(std::move(idx), ca * cb);
        }
    }
    return r;
}

template <class K>
DifferentialForm<K> differential(const Polynomial<K>& f) {
    DifferentialForm<K> r(f.n_vars(), 1);
    for (std::size_t v = 0; v < f.n_vars(); ++v) r.add_term({v}, f.derivative(v));
    return r;
}

template <class K>
bool radial_contraction_vanishes(const DifferentialForm<K>& w) {
    if (w.degree() == 0) return w.is_zero();
    return w.contract(VectorField<K>::radial(w.n_vars())).is_zero();
}

// coefficient-wise exact division; nullopt as soon as one coefficient fails
template <class K>
std::optional<DifferentialForm<K>> divide_exact(const DifferentialForm<K>& w,
                                                const Polynomial<K>& f) {
    DifferentialForm<K> r(w.n_vars(), w.degree());
    for (const auto& [i, c] : w.terms()) {
        auto q = exact_divide(c, f);
        if (!q) return std::nullopt;
        r.add_term(i, std::move(*q));
    }
    return r;
}

// Pullback along the polynomial map whose i-th coordinate is images[i]:
// coefficients are substituted and each dx_i becomes d(images[i]).
template <class K>
DifferentialForm<K> pullback(const DifferentialForm<K>& w,
                             const std::vector<Polynomial<K>>& images) {
    if (images.size() != w.n_vars())
        throw std::invalid_argument("pullback: one image per source variable");
    if (images.empty()) throw std::invalid_argument("pullback: empty image list");
    const std::size_t m = images[0].n_vars();
    std::vector<DifferentialForm<K>> dimg;
    dimg.reserve(images.size());
    for (const auto& g : images) {
        if (g.n_vars() != m) throw std::invalid_argument("pullback: image ring mismatch");
        dimg.push_back(differential(g));
    }
    DifferentialForm<K> r(m, w.degree());
    for (const auto& [idx, c] : w.terms()) {
        Polynomial<K> cc = substitute(c, images);
        if (cc.is_zero()) continue;
        if (idx.empty()) {
            r.add_term({}, std::move(cc));
            continue;
        }
        DifferentialForm<K> p = dimg[idx[0]];
        for (std::size_t j = 1; j < idx.size(); ++j) p = wedge(p, dimg[idx[j]]);
        r += p.times(cc);
    }
    return r;
}

}  // namespace pfk
