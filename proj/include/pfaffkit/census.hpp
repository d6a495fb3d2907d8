#pragma once

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pfaffkit/binomial.hpp"
#include "pfaffkit/foliation.hpp"
#include "pfaffkit/fp.hpp"
#include "pfaffkit/linear_system.hpp"
#include "pfaffkit/reduce_mod_p.hpp"

namespace pfk {

inline VectorField<Fp> reduce_mod_p(const VectorField<Rat>& X, std::uint64_t p) {
    std::vector<Polynomial<Fp>> comp;
    comp.reserve(X.n_vars());
    for (const auto& c : X.components()) comp.push_back(reduce_mod_p(c, p));
    return VectorField<Fp>(std::move(comp));
}

inline Foliation<Fp> reduce_mod_p(const Foliation<Rat>& F, std::uint64_t p) {
    std::vector<VectorField<Fp>> gens;
    gens.reserve(F.rank());
    for (const auto& X : F.generators()) gens.push_back(reduce_mod_p(X, p));
    return Foliation<Fp>(std::move(gens), F.mode());
}

struct CensusEntry {
    Polynomial<Fp> f;
    std::vector<Polynomial<Fp>> cofactors;
};

struct CensusResult {
    std::uint64_t prime = 0;
    std::uint32_t degree = 0;
    std::size_t ambient = 0;
    Mode mode = Mode::affine;
    bool degenerate = false;  // some generator vanishes identically
    std::vector<std::size_t> zero_generators;
    std::vector<CensusEntry> invariants;  // sorted, duplicate-free
    mpz_class candidate_count = 0;
    double wall_seconds = 0.0;
};

namespace detail {

inline bool odometer_advance(std::vector<std::uint64_t>& c, std::uint64_t p) {
    for (std::size_t i = c.size(); i-- > 0;) {
        if (++c[i] < p) return true;
        c[i] = 0;
    }
    return false;
}

}  // namespace detail

// Exhaustive scan of the monic degree-nu polynomials over F_p (leading
// coefficient 1 in the global term order; homogeneous in projective mode),
// keeping every f with X_i(f) divisible by f for all generators. The result
// lists candidates with greater leading monomials first and coefficient
// vectors ascending inside a leading-monomial class, so identical inputs give
// identical output.
inline CensusResult enumerate_invariants_modp(const Foliation<Fp>& F, std::uint32_t nu,
                                              std::uint64_t p,
                                              std::uint64_t cap = 10'000'000) {
    const auto t0 = std::chrono::steady_clock::now();
    require_odd_prime(p);
    if (nu == 0) throw std::invalid_argument("census: hypersurface degree must be positive");
    const std::size_t nv = F.n_vars();

    mpz_class dim = binomial(nu + static_cast<unsigned long>(nv), static_cast<unsigned long>(nv));
    mpz_class space;
    if (!dim.fits_ulong_p()) {
        space = mpz_class(cap) + 1;  // certainly beyond any cap
    } else {
        mpz_ui_pow_ui(space.get_mpz_t(), p, dim.get_ui() - 1);
    }
    if (space > cap)
        throw std::domain_error("census: candidate space " + space.get_str() +
                                " exceeds the cap " + std::to_string(cap) +
                                "; rerun with a cap of at least " + space.get_str());

    CensusResult out;
    out.prime = p;
    out.degree = nu;
    out.ambient = nv;
    out.mode = F.mode();
    for (std::size_t i = 0; i < F.rank(); ++i)
        if (F.generator(i).is_zero()) out.zero_generators.push_back(i);
    out.degenerate = !out.zero_generators.empty();

    // global term order, descending: degree-nu block first, then lower grades
    // (affine mode only), each block in descending lex
    std::vector<Monomial> monos;
    const std::uint32_t lo = F.mode() == Mode::projective ? nu : 0;
    std::size_t top_block = 0;
    for (std::uint32_t g = nu + 1; g-- > lo;) {
        const auto block = LinearSystem<Fp>::monomials(nv, g, Mode::projective, Fp(1, p)).basis();
        if (g == nu) top_block = block.size();
        for (const auto& s : block) monos.push_back(s.leading_monomial());
    }

    for (std::size_t lead = 0; lead < top_block; ++lead) {
        std::vector<std::uint64_t> coef(monos.size() - lead - 1, 0);
        bool more = true;
        while (more) {
            Polynomial<Fp> f = Polynomial<Fp>::term(nv, monos[lead], Fp(1, p));
            for (std::size_t j = 0; j < coef.size(); ++j)
                if (coef[j] != 0)
                    f += Polynomial<Fp>::term(nv, monos[lead + 1 + j], Fp(coef[j], p));
            ++out.candidate_count;

            std::vector<Polynomial<Fp>> cof;
            cof.reserve(F.rank());
            bool invariant = true;
            for (std::size_t i = 0; i < F.rank() && invariant; ++i) {
                auto q = exact_divide(F.generator(i).apply(f), f);
                if (q) cof.push_back(std::move(*q));
                else invariant = false;
            }
            if (invariant) out.invariants.push_back(CensusEntry{std::move(f), std::move(cof)});

            more = !coef.empty() && detail::odometer_advance(coef, p);
        }
    }

    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

inline CensusResult enumerate_invariants_modp(const Foliation<Rat>& F, std::uint32_t nu,
                                              std::uint64_t p,
                                              std::uint64_t cap = 10'000'000) {
    return enumerate_invariants_modp(reduce_mod_p(F, p), nu, p, cap);
}

}  // namespace pfk
