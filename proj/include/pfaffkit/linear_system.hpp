#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pfaffkit/foliation.hpp"
#include "pfaffkit/monomial.hpp"
#include "pfaffkit/polynomial.hpp"
#include "pfaffkit/scalar_linalg.hpp"

namespace pfk {

// A finite-dimensional space of polynomial sections, given by a basis whose
// linear independence is checked at construction (rank of the coefficient
// matrix over the scalar field).
template <class K>
class LinearSystem {
public:
    explicit LinearSystem(std::vector<Polynomial<K>> basis, std::string tag = "")
        : basis_(std::move(basis)), tag_(std::move(tag)) {
        if (basis_.empty()) throw std::invalid_argument("LinearSystem: empty basis");
        n_ = basis_[0].n_vars();
        for (const auto& s : basis_)
            if (s.n_vars() != n_) throw std::invalid_argument("LinearSystem: ring mismatch");

        std::map<std::vector<std::uint32_t>, std::size_t> cols;
        for (const auto& s : basis_)
            for (const auto& [m, c] : s.terms()) cols.emplace(m.exponents(), cols.size());
        if (cols.empty()) throw std::invalid_argument("LinearSystem: zero basis element");
        ScalarMatrix<K> coef(basis_.size(), cols.size());
        for (std::size_t i = 0; i < basis_.size(); ++i)
            for (const auto& [m, c] : basis_[i].terms()) coef.set(i, cols.at(m.exponents()), c);
        if (coef.rank() != basis_.size())
            throw std::invalid_argument("LinearSystem: basis is linearly dependent");

        bool homog = true;
        std::int64_t d0 = basis_[0].degree();
        for (const auto& s : basis_) homog = homog && s.is_homogeneous() && s.degree() == d0;
        if (homog) uniform_ = d0;
    }

    // all monomials of degree nu (projective) or of degree at most nu
    // (affine), grade-ascending, within a grade in descending lex
    static LinearSystem monomials(std::size_t n_vars, std::uint32_t nu, Mode mode,
                                  const K& one = K::one()) {
        if (n_vars == 0) throw std::invalid_argument("LinearSystem: empty ring");
        std::vector<Polynomial<K>> basis;
        std::uint32_t lo = mode == Mode::projective ? nu : 0;
        for (std::uint32_t g = lo; g <= nu; ++g) {
            std::vector<std::uint32_t> e(n_vars, 0);
            emit(basis, e, 0, g, n_vars, one);
        }
        std::string tag = mode == Mode::projective
                              ? "all monomials of degree " + std::to_string(nu)
                              : "all monomials of degree <= " + std::to_string(nu);
        return LinearSystem(std::move(basis), std::move(tag));
    }

    std::size_t n_vars() const { return n_; }
    std::size_t dim() const { return basis_.size(); }
    const std::vector<Polynomial<K>>& basis() const { return basis_; }
    const Polynomial<K>& section(std::size_t j) const { return basis_.at(j); }
    const std::string& tag() const { return tag_; }

    // common homogeneous degree when every basis element has one
    std::optional<std::int64_t> uniform_degree() const { return uniform_; }
    std::int64_t degree() const {
        std::int64_t d = -1;
        for (const auto& s : basis_) d = std::max(d, s.degree());
        return d;
    }

private:
    static void emit(std::vector<Polynomial<K>>& out, std::vector<std::uint32_t>& e,
                     std::size_t pos, std::uint32_t rest, std::size_t n_vars, const K& one) {
        if (pos + 1 == n_vars) {
            e[pos] = rest;
            out.push_back(Polynomial<K>::term(n_vars, Monomial(e), one));
            e[pos] = 0;
            return;
        }
        for (std::uint32_t i = rest + 1; i-- > 0;) {
            e[pos] = i;
            emit(out, e, pos + 1, rest - i, n_vars, one);
        }
        e[pos] = 0;
    }

    std::vector<Polynomial<K>> basis_;
    std::string tag_;
    std::size_t n_ = 0;
    std::optional<std::int64_t> uniform_;
};

}  // namespace pfk
