#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "pfaffkit/differential_form.hpp"
#include "pfaffkit/rng.hpp"
#include "pfaffkit/vector_field.hpp"

namespace pfk {

struct PfaffDegree {
    std::int64_t degree = 0;
    bool cross_checked = false;
};

// Degree of a projective Pfaff r-form: coefficient degree minus one. The
// randomized check pulls the form back along a seeded linear immersion onto
// r+1 coordinates; there every admissible r-form equals h * i_radial(volume)
// for a unique polynomial h, and deg h must reproduce the answer. Draws whose
// pullback degenerates to zero are retried a few times.
template <class K>
PfaffDegree pfaff_degree(const DifferentialForm<K>& omega, std::uint64_t seed = 1) {
    if (omega.degree() < 1) throw std::domain_error("pfaff_degree: need an r-form with r >= 1");
    if (omega.is_zero()) throw std::domain_error("pfaff_degree: zero form");
    auto cd = omega.homogeneous_coefficient_degree();
    if (!cd) throw std::domain_error("pfaff_degree: non-homogeneous coefficients");
    if (!radial_contraction_vanishes(omega))
        throw std::domain_error("pfaff_degree: not a projective Pfaff form");

    PfaffDegree out;
    out.degree = *cd - 1;
    const std::size_t n = omega.n_vars();
    const std::size_t r = omega.degree();
    const std::size_t m = r + 1;
    if (m > n) return out;  // no lower-dimensional subspace to pull back onto

    // beat Fp's unattached constants: derive 1 from an existing coefficient
    const K one_k = [&] {
        const K& c = omega.terms().begin()->second.leading_coefficient();
        return c * c.inv();
    }();

    typename DifferentialForm<K>::Index all(m);
    std::iota(all.begin(), all.end(), std::size_t{0});
    DifferentialForm<K> vol(m, m);
    vol.add_term(all, Polynomial<K>::constant(m, one_k));
    const DifferentialForm<K> gen = vol.contract(VectorField<K>::radial(m));

    Rng rng(Rng::mix(seed, 0x70666166ULL));
    for (int attempt = 0; attempt < 5; ++attempt) {
        std::vector<Polynomial<K>> images;
        images.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            Polynomial<K> li(m);
            for (std::size_t j = 0; j < m; ++j) {
                long long e = rng.uniform(-4, 4);
                if (e == 0) continue;
                li += Polynomial<K>::variable(m, j, one_k.times_int(e));
            }
            images.push_back(std::move(li));
        }
        DifferentialForm<K> eta = pullback(omega, images);
        if (eta.is_zero()) continue;  // degenerate draw

        // every component of gen is +-y_j for the j the tuple omits, so the
        // quotient h falls out of any one component of eta
        const auto& [idx0, c0] = *eta.terms().begin();
        auto h = exact_divide(c0, gen.coefficient(idx0));
        if (!h || gen.times(*h) != eta || !h->is_homogeneous() || h->degree() != out.degree)
            throw std::logic_error("pfaff_degree: immersion cross-check disagrees");
        out.cross_checked = true;
        return out;
    }
    throw std::domain_error("pfaff_degree: no generic immersion found in 5 draws");
}

}  // namespace pfk
