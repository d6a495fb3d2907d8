#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "pfaffkit/binomial.hpp"
#include "pfaffkit/foliation.hpp"
#include "pfaffkit/jet_matrix.hpp"
#include "pfaffkit/linear_system.hpp"
#include "pfaffkit/poly_matrix.hpp"
#include "pfaffkit/rng.hpp"
#include "pfaffkit/vector_field.hpp"

namespace pfk {

// All k x k minors of the order-(k-1) jet matrix, labeled by their sorted row
// subsets. Above kMinorCutoff total minors only a deterministic subset is
// computed: every minor through row 0 (itself sampled down to kRow0Cap when
// necessary) plus kOtherSample seeded-random others; `truncated` records that.
template <class K>
struct ExtacticSystem {
    std::vector<Polynomial<K>> minors;
    std::vector<std::vector<std::size_t>> labels;
    mpz_class total_minors;
    bool truncated = false;
    std::uint64_t sample_seed = 0;
};

inline constexpr std::size_t kMinorCutoff = 200;
inline constexpr std::size_t kRow0Cap = 2000;
inline constexpr std::size_t kOtherSample = 100;

// determinant of the k x k matrix with rows X^0(s), ..., X^{k-1}(s)
template <class K>
Polynomial<K> extactic_single(const VectorField<K>& X, const LinearSystem<K>& V) {
    if (X.n_vars() != V.n_vars())
        throw std::invalid_argument("extactic_single: variable count mismatch");
    const std::size_t k = V.dim();
    PolyMatrix<K> M(k, k, V.n_vars());
    for (std::size_t j = 0; j < k; ++j) M.set(0, j, V.section(j));
    for (std::size_t i = 1; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) M.set(i, j, X.apply(M.at(i - 1, j)));
    return det_fraction_free(M);
}

namespace detail {

// next k-combination of {0,...,n-1} in lexicographic order
inline bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
    std::size_t k = c.size();
    for (std::size_t i = k; i-- > 0;) {
        if (c[i] + (k - i) < n) {
            ++c[i];
            for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
            return true;
        }
    }
    return false;
}

// seeded sample of `want` distinct sorted k-subsets of {lo,...,n-1}
inline std::set<std::vector<std::size_t>> sample_subsets(Rng& rng, std::size_t lo, std::size_t n,
                                                         std::size_t k, std::size_t want) {
    std::set<std::vector<std::size_t>> out;
    while (out.size() < want) {
        std::set<std::size_t> pick;
        while (pick.size() < k)
            pick.insert(static_cast<std::size_t>(
                rng.uniform(static_cast<std::int64_t>(lo), static_cast<std::int64_t>(n) - 1)));
        out.emplace(pick.begin(), pick.end());
    }
    return out;
}

}  // namespace detail

template <class K>
ExtacticSystem<K> extactic_minors(const Foliation<K>& F, const LinearSystem<K>& V) {
    const std::size_t k = V.dim();
    JetMatrix<K> J = build_jet_matrix(F, V, static_cast<std::uint32_t>(k - 1));
    const std::size_t R = J.words.size();

    ExtacticSystem<K> out;
    out.total_minors = binomial(R, k);

    std::vector<std::vector<std::size_t>> labels;
    if (out.total_minors <= kMinorCutoff) {
        std::vector<std::size_t> c(k);
        for (std::size_t i = 0; i < k; ++i) c[i] = i;
        do labels.push_back(c);
        while (detail::next_combination(c, R));
    } else {
        out.truncated = true;
        out.sample_seed = Rng::mix(0x65787461ULL, R * 1000003 + k);
        Rng rng(out.sample_seed);
        mpz_class through0 = binomial(R - 1, k - 1);
        if (through0 <= kRow0Cap) {
            std::vector<std::size_t> c(k - 1);
            for (std::size_t i = 0; i + 1 < k; ++i) c[i] = i + 1;
            bool more = true;
            while (more) {
                std::vector<std::size_t> lab{0};
                lab.insert(lab.end(), c.begin(), c.end());
                labels.push_back(std::move(lab));
                more = k > 1 && detail::next_combination(c, R);
            }
        } else {
            for (auto& s : detail::sample_subsets(rng, 1, R, k - 1, kRow0Cap)) {
                std::vector<std::size_t> lab{0};
                lab.insert(lab.end(), s.begin(), s.end());
                labels.push_back(std::move(lab));
            }
        }
        mpz_class without0 = binomial(R - 1, k);
        std::size_t extra = kOtherSample;
        if (without0 < extra) extra = static_cast<std::size_t>(without0.get_ui());
        for (auto& s : detail::sample_subsets(rng, 1, R, k, extra))
            labels.emplace_back(s.begin(), s.end());
    }

    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

    out.labels = std::move(labels);
    out.minors.reserve(out.labels.size());
    for (const auto& lab : out.labels)
        out.minors.push_back(det_fraction_free(J.matrix.select_rows(lab)));
    return out;
}

struct SieveResult {
    bool divides = false;
    std::uint32_t multiplicity = 0;
    bool all_minors_zero = false;  // vacuous pass: the sieve carries no information
};

// necessary condition for invariance: the candidate must divide every minor;
// the multiplicity is the minimum over the nonzero minors
template <class K>
SieveResult sieve_divisibility(const Polynomial<K>& candidate, const ExtacticSystem<K>& E) {
    if (candidate.is_zero() || candidate.is_constant())
        throw std::invalid_argument("sieve_divisibility: candidate must be nonconstant");
    SieveResult res;
    res.all_minors_zero = true;
    std::uint32_t mult = 0;
    bool first = true;
    for (const auto& m : E.minors) {
        if (m.is_zero()) continue;
        res.all_minors_zero = false;
        std::uint32_t e = divisibility_multiplicity(m, candidate);
        if (e == 0) return res;  // divides=false
        mult = first ? e : std::min(mult, e);
        first = false;
    }
    res.divides = true;
    res.multiplicity = res.all_minors_zero ? 0 : mult;
    return res;
}

// K nu + (d-1) C(K,2) with K = C(nu+n, n): the degree every generic
// homogeneous degree-d field on P^n attains for its extactic with respect to
// the full degree-nu system
inline mpz_class degree_formula_check(unsigned long n, unsigned long nu, unsigned long d) {
    if (n < 1 || nu < 1 || d < 1)
        throw std::invalid_argument("degree_formula_check: n, nu, d must be positive");
    mpz_class Kz = binomial(nu + n, n);
    return Kz * nu + mpz_class(d - 1) * (Kz * (Kz - 1) / 2);
}

}  // namespace pfk
