#pragma once

#include <map>
#include <optional>
#include <type_traits>
#include <vector>

#include "pfaffkit/polynomial.hpp"
#include "pfaffkit/rat.hpp"

// Multivariate gcd over a field, by content extraction and primitive
// pseudo-remainder sequences. The polynomial ring is viewed recursively as
// S[v] with S the polynomials in the remaining variables; Gauss's lemma
// splits the gcd into a content part (recursive) and a primitive part
// (pseudo-Euclid in v, re-primitivised after every step to stop coefficient
// blowup). Everything returned is monic in the global graded-lex order, which
// fixes the unit ambiguity.

namespace pfk {

template <class K>
Polynomial<K> monic(const Polynomial<K>& f) {
    if (f.is_zero()) return f;
    return f.scaled(f.leading_coefficient().inv());
}

// Unit-scales a rational-coefficient polynomial to coprime integer
// coefficients. Over Q the polynomial content is always a unit, so without
// this the pseudo-remainder sequence below would grow exponentially; other
// coefficient fields pass through unchanged.
template <class K>
Polynomial<K> scalar_reduced(const Polynomial<K>& f) {
    if constexpr (std::is_same_v<K, Rat>) {
        if (f.is_zero()) return f;
        mpz_class g = 0, l = 1;
        for (const auto& [m, c] : f.terms()) {
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.num().get_mpz_t());
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.den().get_mpz_t());
        }
        return f.scaled(Rat(l, g));
    } else {
        return f;
    }
}

// largest variable index actually present
template <class K>
std::optional<std::size_t> top_variable(const Polynomial<K>& f) {
    for (std::size_t v = f.n_vars(); v-- > 0;)
        if (f.degree_in(v) > 0) return v;
    return std::nullopt;
}

// coefficients of powers of x_v: exponent of v -> polynomial free of v
template <class K>
std::map<std::uint32_t, Polynomial<K>> split_by_variable(const Polynomial<K>& f, std::size_t v) {
    std::map<std::uint32_t, typename Polynomial<K>::Terms> buckets;
    for (const auto& [m, c] : f.terms()) {
        std::vector<std::uint32_t> e = m.exponents();
        std::uint32_t ev = e[v];
        e[v] = 0;
        buckets[ev].emplace(Monomial(std::move(e)), c);
    }
    std::map<std::uint32_t, Polynomial<K>> out;
    for (auto& [ev, terms] : buckets)
        out.emplace(ev, Polynomial<K>::from_terms(f.n_vars(), std::move(terms)));
    return out;
}

template <class K>
Polynomial<K> leading_coeff_in(const Polynomial<K>& f, std::size_t v) {
    auto parts = split_by_variable(f, v);
    return parts.rbegin()->second;
}

template <class K>
Polynomial<K> poly_gcd(const Polynomial<K>& f, const Polynomial<K>& g);

template <class K>
Polynomial<K> gcd_of_list(const std::vector<Polynomial<K>>& polys) {
    Polynomial<K> acc = monic(polys.at(0));
    for (std::size_t i = 1; i < polys.size(); ++i) acc = poly_gcd(acc, polys[i]);
    return acc;
}

// content and primitive part with respect to x_v
template <class K>
Polynomial<K> content_in(const Polynomial<K>& f, std::size_t v) {
    std::vector<Polynomial<K>> coeffs;
    for (auto& [e, c] : split_by_variable(f, v)) coeffs.push_back(c);
    return gcd_of_list(coeffs);
}

template <class K>
Polynomial<K> primitive_part_in(const Polynomial<K>& f, std::size_t v) {
    return scalar_reduced(*exact_divide(f, content_in(f, v)));
}

// pseudo-remainder of a by b in the variable x_v; any S-unit multiple will do
// because the caller re-primitivises immediately
template <class K>
Polynomial<K> pseudo_remainder(Polynomial<K> r, const Polynomial<K>& b, std::size_t v) {
    std::uint32_t db = b.degree_in(v);
    Polynomial<K> lb = leading_coeff_in(b, v);
    while (!r.is_zero() && r.degree_in(v) >= db) {
        std::uint32_t dr = r.degree_in(v);
        Polynomial<K> lr = leading_coeff_in(r, v);
        r = scalar_reduced(r * lb - (b * lr).shifted(Monomial::unit(r.n_vars(), v, dr - db)));
    }
    return r;
}

template <class K>
Polynomial<K> poly_gcd(const Polynomial<K>& f, const Polynomial<K>& g) {
    if (f.is_zero()) return monic(g);
    if (g.is_zero()) return monic(f);
    if (f.is_constant() || g.is_constant())
        return Polynomial<K>::constant(f.n_vars(),
                                       f.leading_coefficient() / f.leading_coefficient());
    auto vf = top_variable(f), vg = top_variable(g);
    std::size_t v = std::max(*vf, *vg);

    Polynomial<K> cf = content_in(f, v);
    Polynomial<K> cg = content_in(g, v);
    Polynomial<K> c = poly_gcd(cf, cg);

    Polynomial<K> a = *exact_divide(f, cf);
    Polynomial<K> b = *exact_divide(g, cg);
    if (a.degree_in(v) < b.degree_in(v)) std::swap(a, b);

    while (true) {
        if (b.is_constant()) return monic(c);  // primitive parts are coprime
        Polynomial<K> r = pseudo_remainder(a, b, v);
        if (r.is_zero()) return monic(c * primitive_part_in(b, v));
        a = b;
        b = primitive_part_in(r, v);
    }
}

}  // namespace pfk
