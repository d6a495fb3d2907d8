#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pfaffkit/polynomial.hpp"
#include "pfaffkit/rational_function.hpp"

namespace pfk {

// Polynomial vector field, one component per variable. Acts on polynomials
// and rational functions as a derivation.
template <class K>
class VectorField {
public:
    explicit VectorField(std::vector<Polynomial<K>> components)
        : comp_(std::move(components)) {
        if (comp_.empty()) throw std::invalid_argument("VectorField: no components");
        for (const auto& c : comp_)
            if (c.n_vars() != comp_.size())
                throw std::invalid_argument("VectorField: component ring mismatch");
    }

    // the radial (Euler) field, x_0 d/dx_0 + ... + x_{n-1} d/dx_{n-1}
    static VectorField radial(std::size_t n_vars) {
        std::vector<Polynomial<K>> c;
        c.reserve(n_vars);
        for (std::size_t i = 0; i < n_vars; ++i)
            c.push_back(Polynomial<K>::variable(n_vars, i, K::one()));
        return VectorField(std::move(c));
    }

    std::size_t n_vars() const { return comp_.size(); }
    const std::vector<Polynomial<K>>& components() const { return comp_; }
    const Polynomial<K>& component(std::size_t i) const { return comp_.at(i); }

    bool is_zero() const {
        for (const auto& c : comp_)
            if (!c.is_zero()) return false;
        return true;
    }

    // max component degree; -1 for the zero field
    std::int64_t degree() const {
        std::int64_t d = -1;
        for (const auto& c : comp_) d = std::max(d, c.degree());
        return d;
    }

    // the common degree when every nonzero component is homogeneous of one
    // degree; nullopt otherwise (zero field has no degree)
    std::optional<std::int64_t> homogeneous_degree() const {
        std::optional<std::int64_t> d;
        for (const auto& c : comp_) {
            if (c.is_zero()) continue;
            if (!c.is_homogeneous()) return std::nullopt;
            if (d && *d != c.degree()) return std::nullopt;
            d = c.degree();
        }
        return d;
    }

    Polynomial<K> apply(const Polynomial<K>& f) const {
        if (f.n_vars() != n_vars()) throw std::invalid_argument("VectorField: ring mismatch");
        Polynomial<K> r(n_vars());
        for (std::size_t i = 0; i < n_vars(); ++i) {
            if (comp_[i].is_zero()) continue;
            r += comp_[i] * f.derivative(i);
        }
        return r;
    }

    RationalFunction<K> apply(const RationalFunction<K>& f) const {
        // quotient rule; canonicalization in the constructor tidies up
        return RationalFunction<K>(apply(f.num()) * f.den() - f.num() * apply(f.den()),
                                   f.den() * f.den());
    }

    bool operator==(const VectorField& o) const { return comp_ == o.comp_; }

    std::string str(const std::vector<std::string>& names) const {
        std::string s = "[";
        for (std::size_t i = 0; i < comp_.size(); ++i) {
            if (i) s += ", ";
            s += comp_[i].str(names);
        }
        return s + "]";
    }
    std::string str() const { return str(Polynomial<K>::default_names(n_vars())); }

private:
    std::vector<Polynomial<K>> comp_;
};

template <class K>
VectorField<K> lie_bracket(const VectorField<K>& a, const VectorField<K>& b) {
    if (a.n_vars() != b.n_vars()) throw std::invalid_argument("lie_bracket: ring mismatch");
    std::vector<Polynomial<K>> c;
    c.reserve(a.n_vars());
    for (std::size_t k = 0; k < a.n_vars(); ++k)
        c.push_back(a.apply(b.component(k)) - b.apply(a.component(k)));
    return VectorField<K>(std::move(c));
}

// Iterated application X_1^{j_1} ... X_r^{j_r} (f): the rightmost factor acts
// first, so X_r is applied j_r times before X_{r-1}, and X_1 acts last.
template <class K>
Polynomial<K> derivation_word(const std::vector<VectorField<K>>& fields,
                              const std::vector<std::uint32_t>& word, Polynomial<K> f) {
    if (fields.size() != word.size())
        throw std::invalid_argument("derivation_word: word length must match field count");
    for (std::size_t i = fields.size(); i-- > 0;)
        for (std::uint32_t k = 0; k < word[i]; ++k) f = fields[i].apply(f);
    return f;
}

}  // namespace pfk
