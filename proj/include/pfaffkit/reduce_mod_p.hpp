#pragma once

#include "pfaffkit/fp.hpp"
#include "pfaffkit/polynomial.hpp"
#include "pfaffkit/rat.hpp"

namespace pfk {

// Coefficientwise reduction of a rational polynomial modulo an odd prime p.
// Terms whose coefficient reduces to zero drop out; a denominator divisible
// by p raises bad_prime_error (see Fp::from_rat).
inline Polynomial<Fp> reduce_mod_p(const Polynomial<Rat>& f, std::uint64_t p) {
    require_odd_prime(p);
    typename Polynomial<Fp>::Terms terms;
    for (const auto& [m, c] : f.terms()) {
        Fp r = Fp::from_rat(c, p);
        if (!r.is_zero()) terms.emplace(m, r);
    }
    return Polynomial<Fp>::from_terms(f.n_vars(), std::move(terms));
}

}  // namespace pfk
