#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pfaffkit/differential_form.hpp"
#include "pfaffkit/foliation.hpp"
#include "pfaffkit/jet_matrix.hpp"
#include "pfaffkit/linear_system.hpp"
#include "pfaffkit/poly_gcd.hpp"
#include "pfaffkit/poly_matrix.hpp"
#include "pfaffkit/rat.hpp"
#include "pfaffkit/scalar_linalg.hpp"
#include "pfaffkit/vector_field.hpp"

namespace pfk {

enum class CertifyStatus { certified, refused };
enum class CertKind { foliation_cofactors, pfaff_quotient };

// Proof object for the invariance of the hypersurface f = 0: either one
// cofactor per generator with X_i(f) = K_i f, or the quotient form
// Theta = (omega ^ df) / f.
template <class K>
struct InvariantCertificate {
    Polynomial<K> f;
    CertKind kind = CertKind::foliation_cofactors;
    std::vector<Polynomial<K>> cofactors;
    std::optional<DifferentialForm<K>> quotient;
    bool verified = false;
};

template <class K>
struct CertifyResult {
    CertifyStatus status = CertifyStatus::refused;
    std::optional<InvariantCertificate<K>> certificate;
    std::string reason;
};

namespace detail {

template <class K>
void require_candidate(const Polynomial<K>& f, Mode mode) {
    if (f.is_zero() || f.is_constant())
        throw std::invalid_argument("certify_invariant: candidate must be nonconstant");
    if (mode == Mode::projective && !f.is_homogeneous())
        throw std::invalid_argument("certify_invariant: projective candidate must be homogeneous");
}

}  // namespace detail

template <class K>
CertifyResult<K> certify_invariant(const Foliation<K>& F, const Polynomial<K>& f) {
    detail::require_candidate(f, F.mode());
    std::vector<Polynomial<K>> cofactors;
    cofactors.reserve(F.rank());
    for (std::size_t i = 0; i < F.rank(); ++i) {
        Polynomial<K> xf = F.generator(i).apply(f);
        auto q = exact_divide(xf, f);
        if (!q) {
            CertifyResult<K> out;
            out.reason = "generator " + std::to_string(i + 1) + " moves f off its own ideal";
            return out;
        }
        if (F.mode() == Mode::projective && !q->is_zero()) {
            std::int64_t di = F.generator(i).degree();
            if (!q->is_homogeneous() || q->degree() != di - 1)
                throw std::logic_error("certify_invariant: cofactor degree inconsistent");
        }
        cofactors.push_back(std::move(*q));
    }
    for (std::size_t i = 0; i < F.rank(); ++i)
        if (F.generator(i).apply(f) != cofactors[i] * f)
            throw std::logic_error("certify_invariant: cofactor identity re-check failed");
    InvariantCertificate<K> cert{f, CertKind::foliation_cofactors, std::move(cofactors),
                                 std::nullopt, true};
    return CertifyResult<K>{CertifyStatus::certified, std::move(cert), ""};
}

template <class K>
CertifyResult<K> certify_invariant(const PfaffSystem<K>& S, const Polynomial<K>& f) {
    detail::require_candidate(f, S.mode());
    DifferentialForm<K> eta = wedge(S.form(), differential(f));
    auto theta = divide_exact(eta, f);
    if (!theta) {
        for (const auto& [idx, c] : eta.terms())
            if (!exact_divide(c, f)) {
                std::string lab;
                for (auto v : idx) lab += (lab.empty() ? "" : "^") + std::string("d") +
                                          Polynomial<K>::default_names(eta.n_vars())[v];
                CertifyResult<K> out;
                out.reason = "f does not divide the " + lab + " coefficient of omega ^ df";
                return out;
            }
        throw std::logic_error("certify_invariant: division failed without a failing coefficient");
    }
    if (theta->times(f) != eta)
        throw std::logic_error("certify_invariant: quotient identity re-check failed");
    InvariantCertificate<K> cert{f, CertKind::pfaff_quotient, {}, std::move(*theta), true};
    return CertifyResult<K>{CertifyStatus::certified, std::move(cert), ""};
}

template <class K>
bool verify_first_integral(const Foliation<K>& F, const RationalFunction<K>& g) {
    if (g.is_constant())
        throw std::invalid_argument("verify_first_integral: candidate is constant");
    for (std::size_t i = 0; i < F.rank(); ++i) {
        const auto& X = F.generator(i);
        if (!(X.apply(g.num()) * g.den() - g.num() * X.apply(g.den())).is_zero()) return false;
    }
    return true;
}

template <class K>
bool verify_first_integral(const PfaffSystem<K>& S, const RationalFunction<K>& g) {
    if (g.is_constant())
        throw std::invalid_argument("verify_first_integral: candidate is constant");
    DifferentialForm<K> dg =
        differential(g.num()).times(g.den()) - differential(g.den()).times(g.num());
    return wedge(dg, S.form()).is_zero();
}

template <class K>
struct FirstIntegralCandidate {
    RationalFunction<K> value;
    std::string source;  // rank_test | log_certificate | user
    bool verified = false;
};

enum class RankOutcome { full_rank, candidates };

template <class K>
struct RankTestResult {
    RankOutcome outcome = RankOutcome::full_rank;
    std::size_t rank = 0;
    std::size_t order = 0;
    std::vector<RationalFunction<K>> theta;  // stabilized kernel vector, last entry 1
    std::vector<FirstIntegralCandidate<K>> candidates;
};

// Rank test on the order-k jet matrix (k = dim V). Below full rank a
// minimal-support kernel vector is driven to a generator-stable one: applying
// a generator entrywise to a kernel dependency yields another dependency of
// strictly smaller support (the trailing 1 dies), so the loop ends after at
// most dim V steps with every entry annihilated by every generator.
template <class K>
RankTestResult<K> rank_first_integral(const Foliation<K>& F, const LinearSystem<K>& V) {
    using RF = RationalFunction<K>;
    const std::size_t k = V.dim();
    JetMatrix<K> J = build_jet_matrix(F, V, static_cast<std::uint32_t>(k));
    RankTestResult<K> out;
    out.order = k;
    out.rank = rank_ratfunc(J.matrix);
    if (out.rank == k) return out;

    std::vector<RF> v = kernel_min_support(J.matrix).minimal;
    auto normalize = [&](std::vector<RF>& w) {
        std::size_t last = w.size();
        for (std::size_t i = w.size(); i-- > 0;)
            if (!w[i].is_zero()) {
                last = i;
                break;
            }
        RF d = w[last];
        for (auto& x : w)
            if (!x.is_zero()) x = x / d;
    };
    bool moved = true;
    while (moved) {
        moved = false;
        for (std::size_t i = 0; i < F.rank() && !moved; ++i) {
            std::vector<RF> w;
            w.reserve(v.size());
            bool nonzero = false;
            for (const auto& x : v) {
                w.push_back(F.generator(i).apply(x));
                nonzero = nonzero || !w.back().is_zero();
            }
            if (nonzero) {
                normalize(w);
                v = std::move(w);
                moved = true;
            }
        }
    }

    out.outcome = RankOutcome::candidates;
    out.theta = v;
    for (const auto& x : v) {
        if (x.is_zero() || x.is_constant()) continue;
        FirstIntegralCandidate<K> c{x, "rank_test", verify_first_integral(F, x)};
        if (!c.verified)
            throw std::logic_error("rank_first_integral: stabilized entry fails verification");
        out.candidates.push_back(std::move(c));
    }
    if (out.candidates.empty())
        throw std::logic_error(
            "rank_first_integral: rank deficiency produced only constants, "
            "which contradicts the independence of the linear system");
    return out;
}

// lambda certificate: sum_i lambda_i (prod_{j != i} f_j) (omega ^ df_i) = 0
template <class K>
struct LogCertificate {
    std::vector<Polynomial<K>> invariants;
    std::vector<K> lambda;
    std::optional<RationalFunction<K>> candidate;  // prod f_i^{lambda_i} for integer lambda
    bool candidate_verified = false;
};

template <class K>
struct DarbouxResult {
    std::vector<LogCertificate<K>> basis;
    bool first_integral_regime = false;  // lambda-space dimension >= r + 1
};

namespace detail {

// scale a rational vector to coprime integers with positive leading entry;
// other fields only get the leading entry normalized to 1
template <class K>
void normalize_lambda(std::vector<K>& lam) {
    if constexpr (std::is_same_v<K, Rat>) {
        mpz_class g = 0, l = 1;
        for (const auto& c : lam) {
            if (c.is_zero()) continue;
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.num().get_mpz_t());
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.den().get_mpz_t());
        }
        Rat scale(l, g);
        for (const auto& c : lam)
            if (!c.is_zero()) {
                if (k_is_negative(c * scale)) scale = -scale;
                break;
            }
        for (auto& c : lam) c = c * scale;
    } else {
        K lead;
        bool found = false;
        for (const auto& c : lam)
            if (!c.is_zero() && !found) {
                lead = c;
                found = true;
            }
        if (found)
            for (auto& c : lam) c = c * lead.inv();
    }
}

}  // namespace detail

template <class K>
DarbouxResult<K> darboux_log_certificate(const PfaffSystem<K>& S,
                                         const std::vector<InvariantCertificate<K>>& certs) {
    if (certs.empty()) throw std::invalid_argument("darboux_log_certificate: no certificates");
    const std::size_t s = certs.size(), nv = S.n_vars();
    for (const auto& c : certs) {
        if (!c.verified)
            throw std::invalid_argument("darboux_log_certificate: certificate is not verified");
        if (c.f.n_vars() != nv)
            throw std::invalid_argument("darboux_log_certificate: ring mismatch");
        if (!divide_exact(wedge(S.form(), differential(c.f)), c.f))
            throw std::invalid_argument(
                "darboux_log_certificate: certificate does not match this form");
    }
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = i + 1; j < s; ++j)
            if (!poly_gcd(certs[i].f, certs[j].f).is_constant())
                throw std::invalid_argument(
                    "darboux_log_certificate: invariants must be pairwise coprime");

    Polynomial<K> prod = certs[0].f;
    for (std::size_t i = 1; i < s; ++i) prod = prod * certs[i].f;
    std::vector<DifferentialForm<K>> eta;
    eta.reserve(s);
    for (std::size_t i = 0; i < s; ++i)
        eta.push_back(
            wedge(S.form(), differential(certs[i].f)).times(*exact_divide(prod, certs[i].f)));

    // one scalar row per (index tuple, monomial) pair across all eta_i
    std::map<std::pair<typename DifferentialForm<K>::Index, std::vector<std::uint32_t>>,
             std::size_t>
        rows;
    for (const auto& e : eta)
        for (const auto& [idx, c] : e.terms())
            for (const auto& [m, coef] : c.terms()) rows.emplace(std::make_pair(idx, m.exponents()), rows.size());

    DarbouxResult<K> out;
    if (rows.empty()) {
        // every eta_i vanishes; any lambda works, so return the standard basis
        for (std::size_t i = 0; i < s; ++i) {
            std::vector<K> lam(s, K{});
            lam[i] = K::one();
            out.basis.push_back(LogCertificate<K>{{}, std::move(lam), std::nullopt, false});
        }
    } else {
        ScalarMatrix<K> A(rows.size(), s);
        for (std::size_t i = 0; i < s; ++i)
            for (const auto& [idx, c] : eta[i].terms())
                for (const auto& [m, coef] : c.terms())
                    A.set(rows.at(std::make_pair(idx, m.exponents())), i, coef);
        for (auto& lam : A.nullspace())
            out.basis.push_back(LogCertificate<K>{{}, std::move(lam), std::nullopt, false});
    }

    for (auto& cert : out.basis) {
        detail::normalize_lambda(cert.lambda);
        for (const auto& c : certs) cert.invariants.push_back(c.f);
        DifferentialForm<K> residual(nv, S.rank() + 1);
        for (std::size_t i = 0; i < s; ++i) residual += eta[i].scaled(cert.lambda[i]);
        if (!residual.is_zero())
            throw std::logic_error("darboux_log_certificate: residual re-check failed");
        if constexpr (std::is_same_v<K, Rat>) {
            Polynomial<K> num = Polynomial<K>::constant(nv, K::one());
            Polynomial<K> den = num;
            for (std::size_t i = 0; i < s; ++i) {
                const Rat& e = cert.lambda[i];
                long ei = static_cast<long>(e.num().get_si());
                for (long t = 0; t < (ei > 0 ? ei : -ei); ++t) {
                    if (ei > 0) num = num * certs[i].f;
                    else den = den * certs[i].f;
                }
            }
            RationalFunction<K> cand(num, den);
            if (!cand.is_constant()) {
                cert.candidate = cand;
                cert.candidate_verified = verify_first_integral(S, cand);
            }
        }
    }
    out.first_integral_regime = out.basis.size() >= S.rank() + 1;
    return out;
}

template <class K>
struct RatioResult {
    CertifyStatus status = CertifyStatus::refused;
    std::optional<FirstIntegralCandidate<K>> candidate;
    std::string reason;
};

// For a rank-one form proportional to two independent log certificates the
// ratio of the proportionality factors is a first integral.
template <class K>
RatioResult<K> ratio_extraction(const LogCertificate<K>& A, const LogCertificate<K>& B,
                                const PfaffSystem<K>& S) {
    using RF = RationalFunction<K>;
    if (S.rank() != 1)
        throw std::invalid_argument(
            "ratio_extraction: only rank-one forms are handled; use rank_first_integral");
    if (A.lambda.size() != B.lambda.size())
        throw std::invalid_argument("ratio_extraction: certificate sizes differ");
    ScalarMatrix<K> dep(2, A.lambda.size());
    for (std::size_t i = 0; i < A.lambda.size(); ++i) {
        dep.set(0, i, A.lambda[i]);
        dep.set(1, i, B.lambda[i]);
    }
    if (dep.rank() < 2)
        return RatioResult<K>{CertifyStatus::refused, std::nullopt,
                              "need two independent log certificates"};

    const std::size_t nv = S.n_vars();
    auto cleared_form = [&](const LogCertificate<K>& c) {
        Polynomial<K> prod = c.invariants.at(0);
        for (std::size_t i = 1; i < c.invariants.size(); ++i) prod = prod * c.invariants[i];
        DifferentialForm<K> eta(nv, 1);
        for (std::size_t i = 0; i < c.invariants.size(); ++i)
            eta += differential(c.invariants[i])
                       .times(*exact_divide(prod, c.invariants[i]))
                       .scaled(c.lambda[i]);
        return eta;
    };
    auto factor_against = [&](const DifferentialForm<K>& eta,
                              const char* name) -> std::optional<RF> {
        if (eta.is_zero()) return std::nullopt;
        auto it = eta.terms().begin();
        const auto& idx = it->first;
        const Polynomial<K>& ec = it->second;
        const Polynomial<K> oc = S.form().coefficient(idx);
        for (std::size_t i = 0; i < nv; ++i) {
            typename DifferentialForm<K>::Index t{i};
            if (S.form().coefficient(t) * ec != oc * eta.coefficient(t)) return std::nullopt;
        }
        (void)name;
        return RF(oc, ec);
    };
    DifferentialForm<K> etaA = cleared_form(A), etaB = cleared_form(B);
    auto RA = factor_against(etaA, "A");
    if (!RA)
        return RatioResult<K>{CertifyStatus::refused, std::nullopt,
                              "form is not proportional to the first certificate"};
    auto RB = factor_against(etaB, "B");
    if (!RB)
        return RatioResult<K>{CertifyStatus::refused, std::nullopt,
                              "form is not proportional to the second certificate"};
    if (RA->is_zero() || RB->is_zero())
        return RatioResult<K>{CertifyStatus::refused, std::nullopt,
                              "certificate form is orthogonal to omega"};
    RF R = *RA / *RB;
    if (R.is_constant())
        return RatioResult<K>{CertifyStatus::refused, std::nullopt,
                              "certificates yield a constant ratio"};
    FirstIntegralCandidate<K> cand{R, "log_certificate", verify_first_integral(S, R)};
    return RatioResult<K>{CertifyStatus::certified, std::move(cand), ""};
}

}  // namespace pfk
