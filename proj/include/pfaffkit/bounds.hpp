#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pfaffkit/binomial.hpp"
#include "pfaffkit/differential_form.hpp"
#include "pfaffkit/linear_system.hpp"
#include "pfaffkit/rat.hpp"
#include "pfaffkit/scalar_linalg.hpp"

namespace pfk {

namespace detail {

inline void strict_tuples(std::size_t nv, std::size_t p, std::size_t start,
                          std::vector<std::size_t>& cur,
                          std::vector<std::vector<std::size_t>>& out) {
    if (cur.size() == p) {
        out.push_back(cur);
        return;
    }
    for (std::size_t i = start; i + (p - cur.size()) <= nv; ++i) {
        cur.push_back(i);
        strict_tuples(nv, p, i + 1, cur, out);
        cur.pop_back();
    }
}

inline mpz_class rat_floor(const Rat& q) {
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), q.num().get_mpz_t(), q.den().get_mpz_t());
    return r;
}

}  // namespace detail

// dim H^0(P^n, Omega^p(m)) computed from the Euler sequence: polynomial
// p-forms in the n+1 homogeneous coordinates, coefficients homogeneous of
// degree m - p, annihilated by contraction with the radial field. The kernel
// dimension of that contraction map is the answer.
inline mpz_class h0_twisted_forms(int n, int p, int m) {
    if (n < 1) throw std::invalid_argument("h0_twisted_forms: ambient dimension must be positive");
    if (p < 1 || p > n) throw std::invalid_argument("h0_twisted_forms: need 1 <= p <= n");
    if (m < p) return 0;

    const std::size_t nv = static_cast<std::size_t>(n) + 1;
    auto src_coef = LinearSystem<Rat>::monomials(nv, static_cast<std::uint32_t>(m - p),
                                                 Mode::projective)
                        .basis();
    auto tgt_coef = LinearSystem<Rat>::monomials(nv, static_cast<std::uint32_t>(m - p + 1),
                                                 Mode::projective)
                        .basis();
    std::vector<std::vector<std::size_t>> src_tuples, tgt_tuples;
    std::vector<std::size_t> cur;
    detail::strict_tuples(nv, static_cast<std::size_t>(p), 0, cur, src_tuples);
    detail::strict_tuples(nv, static_cast<std::size_t>(p) - 1, 0, cur, tgt_tuples);

    std::map<std::pair<std::vector<std::size_t>, std::vector<std::uint32_t>>, std::size_t> row_of;
    for (const auto& t : tgt_tuples)
        for (const auto& f : tgt_coef) row_of.emplace(std::make_pair(t, f.leading_monomial().exponents()), row_of.size());

    const std::size_t cols = src_tuples.size() * src_coef.size();
    ScalarMatrix<Rat> A(row_of.size(), cols);
    const auto radial = VectorField<Rat>::radial(nv);
    std::size_t col = 0;
    for (const auto& t : src_tuples) {
        for (const auto& f : src_coef) {
            DifferentialForm<Rat> w(nv, static_cast<std::size_t>(p));
            w.add_term(t, f);
            DifferentialForm<Rat> c = w.contract(radial);
            for (const auto& [idx, poly] : c.terms())
                for (const auto& [mn, cf] : poly.terms())
                    A.set(row_of.at(std::make_pair(idx, mn.exponents())), col, cf);
            ++col;
        }
    }
    return mpz_class(cols) - mpz_class(A.rank());
}

enum class BoundFormula { jouanolou, ghys, correa, jpaa, prop11, thm11 };

inline std::string bound_formula_name(BoundFormula f) {
    switch (f) {
        case BoundFormula::jouanolou: return "jouanolou";
        case BoundFormula::ghys: return "ghys";
        case BoundFormula::correa: return "correa";
        case BoundFormula::jpaa: return "jpaa";
        case BoundFormula::prop11: return "prop11";
        case BoundFormula::thm11: return "thm11";
    }
    throw std::logic_error("bound_formula_name: unreachable");
}

struct BoundParams {
    int n = 0;                       // ambient dimension
    int r = 0;                       // system dimension; 0 = not supplied
    int d = -1;                      // system degree; -1 = not supplied
    int nu = 0;                      // hypersurface degree (split tangent bound)
    std::vector<int> split_degrees;  // one degree per split factor
    std::optional<int> h1cl;         // dim H^1 of closed 1-forms
    std::optional<int> h0cl;         // dim H^0 of closed 1-forms
    std::optional<int> picard;
};

struct BoundReport {
    BoundFormula formula;
    BoundParams params;
    mpz_class value;
    Rat exact;  // uncapped rational; differs from value only for prop11
    std::vector<std::string> notes;
};

inline BoundReport compute_bound(BoundFormula formula, BoundParams params) {
    const int n = params.n;
    if (n < 1) throw std::invalid_argument("compute_bound: ambient dimension must be positive");
    std::vector<std::string> notes;
    auto need_degree = [&]() {
        if (params.d < 0) throw std::invalid_argument("compute_bound: degree d is required");
    };
    auto need_rank = [&]() {
        if (params.r < 1)
            throw std::invalid_argument("compute_bound: system dimension r must be positive");
    };
    auto default_h1cl = [&]() {
        if (!params.h1cl) {
            params.h1cl = 1;
            notes.push_back("h1cl defaulted to 1, the projective space value");
        }
        if (*params.h1cl < 0) throw std::invalid_argument("compute_bound: h1cl must be >= 0");
        return *params.h1cl;
    };
    auto projective_h0cl = [&]() {
        if (!params.h0cl) {
            params.h0cl = 0;
            notes.push_back("h0cl defaulted to 0: projective space has no closed 1-forms");
        }
        if (*params.h0cl != 0)
            throw std::invalid_argument(
                "compute_bound: only the projective-space path is implemented, where h0cl = 0");
    };

    mpz_class value;
    switch (formula) {
        case BoundFormula::jpaa: {
            need_rank();
            need_degree();
            value = binomial(static_cast<unsigned long>(params.d - 1 + n),
                             static_cast<unsigned long>(n)) *
                        binomial(static_cast<unsigned long>(n),
                                 static_cast<unsigned long>(params.r + 1)) +
                    params.r + 1;
            break;
        }
        case BoundFormula::prop11: {
            need_rank();
            if (params.nu < 1)
                throw std::invalid_argument("compute_bound: hypersurface degree nu must be positive");
            if (params.split_degrees.empty())
                throw std::invalid_argument("compute_bound: split degrees are required");
            if (params.split_degrees.size() != static_cast<std::size_t>(params.r))
                throw std::invalid_argument("compute_bound: one split degree per factor");
            long sum = 0;
            for (int di : params.split_degrees) {
                if (di < 0) throw std::invalid_argument("compute_bound: split degrees must be >= 0");
                sum += di;
            }
            if (sum < 1) throw std::invalid_argument("compute_bound: total degree must be positive");
            if (params.d >= 0 && params.d != sum)
                throw std::invalid_argument(
                    "compute_bound: split degrees must add up to the system degree");
            params.d = static_cast<int>(sum);
            mpz_class K =
                binomial(static_cast<unsigned long>(params.nu + n), static_cast<unsigned long>(n));
            mpz_class pairs = K * (K - 1) / 2;
            Rat exact = Rat(K) + Rat(sum * pairs, mpz_class(params.nu) * params.r) -
                        Rat(pairs, mpz_class(params.nu));
            BoundReport rep{formula, std::move(params), detail::rat_floor(exact), exact,
                            std::move(notes)};
            if (rep.value < 0) throw std::logic_error("compute_bound: negative bound");
            return rep;
        }
        case BoundFormula::ghys:
        case BoundFormula::thm11: {
            need_rank();
            need_degree();
            if (params.r + 1 > n)
                throw std::invalid_argument(
                    "compute_bound: system dimension must be below the ambient dimension");
            projective_h0cl();
            int h1 = default_h1cl();
            value = h0_twisted_forms(n, params.r + 1, params.d + params.r + 1) + h1 + params.r + 1;
            break;
        }
        case BoundFormula::jouanolou: {
            need_degree();
            if (n < 2)
                throw std::invalid_argument("compute_bound: this bound needs ambient dimension >= 2");
            if (params.r > 1)
                throw std::invalid_argument("compute_bound: this bound is codimension-one only");
            params.r = 1;
            if (!params.picard) {
                params.picard = 1;
                notes.push_back("picard number defaulted to 1, the projective space value");
            }
            if (*params.picard < 1)
                throw std::invalid_argument("compute_bound: picard number must be positive");
            notes.push_back("quotient by wedge with global 1-forms omitted: projective space has none");
            value = h0_twisted_forms(n, 2, params.d + 2) + *params.picard + 1;
            break;
        }
        case BoundFormula::correa: {
            need_degree();
            if (params.r > 1)
                throw std::invalid_argument("compute_bound: this bound is for one-dimensional systems");
            params.r = 1;
            int h1 = default_h1cl();
            notes.push_back(
                "contraction image of closed 1-forms omitted: projective space has none");
            value = binomial(static_cast<unsigned long>(params.d - 1 + n),
                             static_cast<unsigned long>(n)) +
                    h1 + n;
            break;
        }
    }
    BoundReport rep{formula, std::move(params), value, Rat(value), std::move(notes)};
    if (rep.value < 0) throw std::logic_error("compute_bound: negative bound");
    return rep;
}

enum class Verdict { below_bound, at_or_above_bound_first_integral_predicted };

// The split tangent bound caps the count when no factor has a rational first
// integral and is attained by real configurations, so only a strict excess is
// conclusive there; every other formula is a threshold.
inline Verdict verdict(const mpz_class& count, const BoundReport& report) {
    if (count < 0) throw std::invalid_argument("verdict: count must be >= 0");
    bool predicted = report.formula == BoundFormula::prop11 ? count > report.value
                                                            : count >= report.value;
    return predicted ? Verdict::at_or_above_bound_first_integral_predicted : Verdict::below_bound;
}

inline std::string verdict_statement(Verdict v, const mpz_class& count,
                                     const BoundReport& report) {
    std::string name = bound_formula_name(report.formula);
    if (v == Verdict::below_bound)
        return "count " + count.get_str() + " stays below the " + name + " bound " +
               report.value.get_str() + "; no conclusion";
    if (report.formula == BoundFormula::prop11)
        return "count " + count.get_str() + " exceeds the " + name + " bound " +
               report.value.get_str() +
               ": some split factor admits a rational first integral";
    return "count " + count.get_str() + " meets the " + name + " threshold " +
           report.value.get_str() + ": a meromorphic first integral is predicted";
}

}  // namespace pfk
