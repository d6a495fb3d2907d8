#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pfaffkit/differential_form.hpp"
#include "pfaffkit/vector_field.hpp"

namespace pfk {

enum class Mode { affine, projective };

inline std::string mode_string(Mode m) { return m == Mode::affine ? "affine" : "projective"; }

template <class K>
struct InvolutivityWitness {
    std::size_t i = 0, j = 0;         // offending generator pair
    std::vector<std::size_t> component;  // multivector component that survives
    Polynomial<K> value;
};

template <class K>
struct InvolutivityResult {
    bool involutive = true;
    std::optional<InvolutivityWitness<K>> witness;
};

namespace detail {
// a vector field as a 1-multivector, so the wedge algebra applies verbatim
template <class K>
DifferentialForm<K> as_multivector(const VectorField<K>& X) {
    DifferentialForm<K> w(X.n_vars(), 1);
    for (std::size_t k = 0; k < X.n_vars(); ++k) w.add_term({k}, X.component(k));
    return w;
}
}  // namespace detail

// True iff every bracket [X_i, X_j] lies in the pointwise span of the
// generators: [X_i, X_j] ^ X_1 ^ ... ^ X_r vanishes identically for all
// i < j. On failure the first nonzero component of a failing wedge is the
// witness. Note the criterion is span membership over the function field,
// not membership in the module generated by the X_i.
template <class K>
InvolutivityResult<K> involutivity_check(const std::vector<VectorField<K>>& fields) {
    if (fields.empty()) throw std::invalid_argument("involutivity_check: no generators");
    const std::size_t n = fields[0].n_vars();
    for (const auto& X : fields)
        if (X.n_vars() != n) throw std::invalid_argument("involutivity_check: ring mismatch");

    DifferentialForm<K> span = detail::as_multivector(fields[0]);
    for (std::size_t i = 1; i < fields.size(); ++i)
        span = wedge(span, detail::as_multivector(fields[i]));

    for (std::size_t i = 0; i < fields.size(); ++i) {
        for (std::size_t j = i + 1; j < fields.size(); ++j) {
            DifferentialForm<K> w =
                wedge(detail::as_multivector(lie_bracket(fields[i], fields[j])), span);
            if (!w.is_zero()) {
                const auto& [idx, c] = *w.terms().begin();
                return {false, InvolutivityWitness<K>{i, j, idx, c}};
            }
        }
    }
    return {true, std::nullopt};
}

// A distribution presented by generating vector fields. Projective mode works
// in homogeneous coordinates on P^{n_vars-1}: every generator must be
// homogeneous and the rank is capped at n_vars - 1. Involutivity is not
// enforced here; call involutivity() where it matters.
template <class K>
class Foliation {
public:
    Foliation(std::vector<VectorField<K>> generators, Mode mode)
        : gens_(std::move(generators)), mode_(mode) {
        if (gens_.empty()) throw std::invalid_argument("Foliation: no generators");
        const std::size_t n = gens_[0].n_vars();
        for (const auto& X : gens_)
            if (X.n_vars() != n) throw std::invalid_argument("Foliation: generator ring mismatch");
        if (mode_ == Mode::projective) {
            if (gens_.size() > n - 1)
                throw std::invalid_argument("Foliation: too many generators for projective mode");
            for (const auto& X : gens_)
                if (!X.is_zero() && !X.homogeneous_degree())
                    throw std::invalid_argument(
                        "Foliation: projective generators must be homogeneous");
        }
    }

    std::size_t n_vars() const { return gens_[0].n_vars(); }
    std::size_t rank() const { return gens_.size(); }
    Mode mode() const { return mode_; }
    const std::vector<VectorField<K>>& generators() const { return gens_; }
    const VectorField<K>& generator(std::size_t i) const { return gens_.at(i); }

    // per-generator component degree; -1 for a zero generator
    std::vector<std::int64_t> degrees() const {
        std::vector<std::int64_t> d;
        d.reserve(gens_.size());
        for (const auto& X : gens_) d.push_back(X.degree());
        return d;
    }

    InvolutivityResult<K> involutivity() const { return involutivity_check(gens_); }

private:
    std::vector<VectorField<K>> gens_;
    Mode mode_;
};

// A codimension-r distribution presented by a single r-form. Projective mode
// requires homogeneous coefficients of one common degree and vanishing
// contraction with the radial field.
template <class K>
class PfaffSystem {
public:
    PfaffSystem(DifferentialForm<K> omega, Mode mode) : omega_(std::move(omega)), mode_(mode) {
        if (omega_.degree() < 1 || omega_.degree() > omega_.n_vars())
            throw std::invalid_argument("PfaffSystem: form degree out of range");
        if (omega_.is_zero()) throw std::invalid_argument("PfaffSystem: zero form");
        if (mode_ == Mode::projective) {
            if (!omega_.homogeneous_coefficient_degree())
                throw std::invalid_argument(
                    "PfaffSystem: projective form needs homogeneous coefficients of one degree");
            if (!radial_contraction_vanishes(omega_))
                throw std::invalid_argument("PfaffSystem: radial contraction does not vanish");
        }
    }

    const DifferentialForm<K>& form() const { return omega_; }
    Mode mode() const { return mode_; }
    std::size_t rank() const { return omega_.degree(); }
    std::size_t n_vars() const { return omega_.n_vars(); }

private:
    DifferentialForm<K> omega_;
    Mode mode_;
};

}  // namespace pfk
