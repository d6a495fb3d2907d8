#pragma once

#include "pfaffkit/fp.hpp"
#include "pfaffkit/polynomial.hpp"
#include "pfaffkit/rat.hpp"
#include "pfaffkit/rng.hpp"

namespace pfk::testing {

inline Polynomial<Rat> random_rat_poly(Rng& rng, std::size_t n_vars, std::uint32_t max_deg,
                                       std::size_t max_terms) {
    Polynomial<Rat> p(n_vars);
    std::size_t terms = static_cast<std::size_t>(rng.uniform(1, static_cast<long>(max_terms)));
    for (std::size_t t = 0; t < terms; ++t) {
        std::vector<std::uint32_t> e(n_vars, 0);
        std::uint32_t budget = max_deg;
        for (std::size_t i = 0; i < n_vars; ++i) {
            e[i] = static_cast<std::uint32_t>(rng.uniform(0, budget));
            budget -= e[i];
        }
        long num = rng.uniform(-9, 9);
        long den = rng.uniform(1, 4);
        p += Polynomial<Rat>::term(n_vars, Monomial(e), Rat(num, den));
    }
    return p;
}

inline Polynomial<Fp> random_fp_poly(Rng& rng, std::size_t n_vars, std::uint32_t max_deg,
                                     std::size_t max_terms, std::uint64_t p) {
    Polynomial<Fp> f(n_vars);
    std::size_t terms = static_cast<std::size_t>(rng.uniform(1, static_cast<long>(max_terms)));
    for (std::size_t t = 0; t < terms; ++t) {
        std::vector<std::uint32_t> e(n_vars, 0);
        std::uint32_t budget = max_deg;
        for (std::size_t i = 0; i < n_vars; ++i) {
            e[i] = static_cast<std::uint32_t>(rng.uniform(0, budget));
            budget -= e[i];
        }
        f += Polynomial<Fp>::term(n_vars, Monomial(e),
                                  Fp(static_cast<std::uint64_t>(rng.uniform(0, static_cast<long>(p - 1))), p));
    }
    return f;
}

// nonzero variant, for tests that divide
template <class MakePoly>
auto nonzero(MakePoly make) {
    for (int i = 0; i < 64; ++i) {
        auto p = make();
        if (!p.is_zero()) return p;
    }
    throw std::logic_error("could not draw a nonzero polynomial");
}

}  // namespace pfk::testing
