#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "pfaffkit/fp.hpp"
#include "pfaffkit/polynomial.hpp"
#include "pfaffkit/rat.hpp"
#include "pfaffkit/rational_function.hpp"
#include "pfaffkit/reduce_mod_p.hpp"
#include "pfaffkit/rng.hpp"

namespace pfk {

// Dense matrix of polynomials sharing one ring. Row degree bounds, when set,
// must dominate the actual entry degrees; they steer the determinant
// strategy choice.
template <class K>
class PolyMatrix {
public:
    PolyMatrix(std::size_t rows, std::size_t cols, std::size_t n_vars)
        : rows_(rows), cols_(cols), n_(n_vars),
          a_(rows, std::vector<Polynomial<K>>(cols, Polynomial<K>::zero(n_vars))) {
        if (n_ == 0) throw std::invalid_argument("PolyMatrix: empty ring");
    }

    static PolyMatrix from_rows(std::vector<std::vector<Polynomial<K>>> grid) {
        if (grid.empty() || grid[0].empty())
            throw std::invalid_argument("PolyMatrix: empty grid");
        PolyMatrix m(grid.size(), grid[0].size(), grid[0][0].n_vars());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (grid[i].size() != m.cols_)
                throw std::invalid_argument("PolyMatrix: ragged grid");
            for (std::size_t j = 0; j < m.cols_; ++j) {
                if (grid[i][j].n_vars() != m.n_)
                    throw std::invalid_argument("PolyMatrix: entry ring mismatch");
                m.a_[i][j] = std::move(grid[i][j]);
            }
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t n_vars() const { return n_; }

    const Polynomial<K>& at(std::size_t i, std::size_t j) const { return a_.at(i).at(j); }
    void set(std::size_t i, std::size_t j, Polynomial<K> p) {
        if (p.n_vars() != n_) throw std::invalid_argument("PolyMatrix: entry ring mismatch");
        a_.at(i).at(j) = std::move(p);
    }
    const std::vector<std::vector<Polynomial<K>>>& grid() const { return a_; }

    void set_row_degree_bounds(std::vector<std::int64_t> b) {
        if (b.size() != rows_) throw std::invalid_argument("PolyMatrix: one bound per row");
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (a_[i][j].degree() > b[i])
                    throw std::invalid_argument("PolyMatrix: bound below actual degree");
        bounds_ = std::move(b);
    }

    // provided bound, or the actual max degree of the row (-1 if all zero)
    std::int64_t row_degree_bound(std::size_t i) const {
        if (bounds_) return (*bounds_).at(i);
        std::int64_t d = -1;
        for (std::size_t j = 0; j < cols_; ++j) d = std::max(d, a_.at(i)[j].degree());
        return d;
    }

    PolyMatrix select(const std::vector<std::size_t>& row_idx,
                      const std::vector<std::size_t>& col_idx) const {
        if (row_idx.empty() || col_idx.empty())
            throw std::invalid_argument("PolyMatrix: empty selection");
        PolyMatrix m(row_idx.size(), col_idx.size(), n_);
        for (std::size_t i = 0; i < row_idx.size(); ++i)
            for (std::size_t j = 0; j < col_idx.size(); ++j)
                m.a_[i][j] = a_.at(row_idx[i]).at(col_idx[j]);
        if (bounds_) {
            std::vector<std::int64_t> b;
            for (auto r : row_idx) b.push_back((*bounds_).at(r));
            m.bounds_ = std::move(b);
        }
        return m;
    }

    PolyMatrix select_rows(const std::vector<std::size_t>& row_idx) const {
        std::vector<std::size_t> all(cols_);
        for (std::size_t j = 0; j < cols_; ++j) all[j] = j;
        return select(row_idx, all);
    }

private:
    std::size_t rows_, cols_, n_;
    std::vector<std::vector<Polynomial<K>>> a_;
    std::optional<std::vector<std::int64_t>> bounds_;
};

enum class DetStrategy { automatic, bareiss, modular_crt };

namespace detail {

constexpr std::size_t kNoPivot = static_cast<std::size_t>(-1);

// deterministic pivot: lowest total degree, then grlex-least leading
// monomial, then lowest row index
template <class K>
std::size_t pick_pivot(const std::vector<std::vector<Polynomial<K>>>& a, std::size_t col,
                       std::size_t from_row) {
    std::size_t best = kNoPivot;
    for (std::size_t i = from_row; i < a.size(); ++i) {
        const Polynomial<K>& p = a[i][col];
        if (p.is_zero()) continue;
        if (best == kNoPivot) {
            best = i;
            continue;
        }
        const Polynomial<K>& q = a[best][col];
        if (p.degree() != q.degree()) {
            if (p.degree() < q.degree()) best = i;
        } else if (grlex_compare(p.leading_monomial(), q.leading_monomial()) < 0) {
            best = i;
        }
    }
    return best;
}

template <class K>
Polynomial<K> bareiss_divide(Polynomial<K> t, const Polynomial<K>& prev) {
    auto q = exact_divide(t, prev);
    if (!q) throw std::logic_error("fraction-free elimination: inexact division");
    return std::move(*q);
}

}  // namespace detail

template <class K>
Polynomial<K> det_bareiss(const PolyMatrix<K>& M) {
    if (M.rows() != M.cols()) throw std::invalid_argument("det: square matrix required");
    const std::size_t n = M.rows();
    const std::size_t nv = M.n_vars();
    if (n == 0) return Polynomial<K>::constant(nv, K::one());
    auto A = M.grid();
    bool negate = false;
    Polynomial<K> prev = Polynomial<K>::constant(nv, K::one());
    for (std::size_t k = 0; k + 1 < n; ++k) {
        std::size_t piv = detail::pick_pivot(A, k, k);
        if (piv == detail::kNoPivot) return Polynomial<K>::zero(nv);
        if (piv != k) {
            std::swap(A[piv], A[k]);
            negate = !negate;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j)
                A[i][j] = detail::bareiss_divide(A[k][k] * A[i][j] - A[i][k] * A[k][j], prev);
            A[i][k] = Polynomial<K>::zero(nv);
        }
        prev = A[k][k];
    }
    return negate ? -A[n - 1][n - 1] : A[n - 1][n - 1];
}

namespace detail {

inline Polynomial<Fp> eval_var_fp(const Polynomial<Fp>& f, std::size_t v, const Fp& t) {
    Polynomial<Fp> out(f.n_vars());
    for (const auto& [m, c] : f.terms()) {
        std::uint32_t e = m.exponents()[v];
        Fp c2 = e == 0 ? c : c * k_pow(t, e);
        std::vector<std::uint32_t> ex = m.exponents();
        ex[v] = 0;
        out += Polynomial<Fp>::term(f.n_vars(), Monomial(std::move(ex)), c2);
    }
    return out;
}

inline Fp det_scalar_fp(std::vector<std::vector<Fp>> a, std::uint64_t p) {
    const std::size_t n = a.size();
    Fp det(1, p);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = n;
        for (std::size_t i = k; i < n; ++i)
            if (!a[i][k].is_zero()) {
                piv = i;
                break;
            }
        if (piv == n) return Fp(0, p);
        if (piv != k) {
            std::swap(a[piv], a[k]);
            det = -det;
        }
        det = det * a[k][k];
        Fp inv = a[k][k].inv();
        for (std::size_t i = k + 1; i < n; ++i) {
            Fp f = a[i][k] * inv;
            if (f.is_zero()) continue;
            for (std::size_t j = k; j < n; ++j) a[i][j] = a[i][j] - f * a[k][j];
        }
    }
    return det;
}

// determinant mod p by evaluation/interpolation, one variable at a time; dv
// holds per-variable degree bounds for the determinant
inline Polynomial<Fp> det_mod_p_rec(const std::vector<std::vector<Polynomial<Fp>>>& A,
                                    std::vector<std::int64_t>& dv, std::uint64_t p) {
    const std::size_t nv = dv.size();
    const std::size_t n = A.size();
    std::size_t v = nv;
    for (std::size_t i = nv; i-- > 0;)
        if (dv[i] > 0) {
            v = i;
            break;
        }
    if (v == nv) {
        std::vector<std::vector<Fp>> s(n, std::vector<Fp>(n, Fp(0, p)));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (!A[i][j].is_zero()) s[i][j] = A[i][j].leading_coefficient();
        return Polynomial<Fp>::constant(nv, det_scalar_fp(std::move(s), p));
    }

    const std::int64_t D = dv[v];
    dv[v] = 0;
    std::vector<Fp> ts;
    std::vector<Polynomial<Fp>> vals;
    ts.reserve(D + 1);
    vals.reserve(D + 1);
    for (std::int64_t t = 0; t <= D; ++t) {
        Fp tv(static_cast<std::uint64_t>(t), p);
        std::vector<std::vector<Polynomial<Fp>>> B(n);
        for (std::size_t i = 0; i < n; ++i) {
            B[i].reserve(n);
            for (std::size_t j = 0; j < n; ++j) B[i].push_back(eval_var_fp(A[i][j], v, tv));
        }
        vals.push_back(det_mod_p_rec(B, dv, p));
        ts.push_back(tv);
    }
    dv[v] = D;

    // Newton divided differences, then Horner in x_v
    for (std::int64_t j = 1; j <= D; ++j)
        for (std::int64_t i = D; i >= j; --i)
            vals[i] = (vals[i] - vals[i - 1]).scaled((ts[i] - ts[i - j]).inv());
    Polynomial<Fp> res = vals[D];
    Polynomial<Fp> xv = Polynomial<Fp>::variable(nv, v, Fp(1, p));
    for (std::int64_t i = D - 1; i >= 0; --i)
        res = res * (xv - Polynomial<Fp>::constant(nv, ts[i])) + vals[i];
    return res;
}

}  // namespace detail

// Exact determinant over Q by Chinese remaindering: clear row denominators,
// bound the integer determinant's coefficients rigorously, then combine
// determinants mod seeded 62-bit primes until the product of moduli exceeds
// twice the bound. Residues mod p are exact images of the integer
// determinant, so no prime can give a wrong answer; the seed only affects
// speed, never the result.
inline Polynomial<Rat> det_modular_crt(const PolyMatrix<Rat>& M) {
    if (M.rows() != M.cols()) throw std::invalid_argument("det: square matrix required");
    const std::size_t n = M.rows();
    const std::size_t nv = M.n_vars();
    if (n == 0) return Polynomial<Rat>::constant(nv, Rat(1));

    // scale each row to integer coefficients; det picks up the factor S
    std::vector<std::vector<Polynomial<Rat>>> A = M.grid();
    mpz_class S = 1;
    for (std::size_t i = 0; i < n; ++i) {
        mpz_class L = 1;
        for (std::size_t j = 0; j < n; ++j)
            for (const auto& [m, c] : A[i][j].terms()) {
                mpz_class d = c.den();
                mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), d.get_mpz_t());
            }
        if (L != 1)
            for (std::size_t j = 0; j < n; ++j) A[i][j] = A[i][j].scaled(Rat(L));
        S *= L;
    }

    // per-variable degree bounds and 1-norm coefficient bound
    std::vector<std::int64_t> dv(nv, 0);
    mpz_class B = 1;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t v = 0; v < nv; ++v) {
            std::int64_t mx = 0;
            for (std::size_t j = 0; j < n; ++j)
                mx = std::max<std::int64_t>(mx, A[i][j].degree_in(v));
            dv[v] += mx;
        }
        mpz_class rowsum = 0;
        for (std::size_t j = 0; j < n; ++j)
            for (const auto& [m, c] : A[i][j].terms()) rowsum += abs(c.num());
        if (rowsum == 0) return Polynomial<Rat>::zero(nv);  // zero row
        B *= rowsum;
    }

    Rng rng(0x6372742d646574ULL);  // fixed: prime choice cannot change the value
    mpz_class P = 1;
    std::map<Monomial, mpz_class, GrlexDesc> acc;
    std::vector<std::uint64_t> used;
    while (P <= 2 * B) {
        std::uint64_t cand = (std::uint64_t{1} << 61) | (rng.next() & ((std::uint64_t{1} << 61) - 1)) | 1;
        mpz_class cz(static_cast<unsigned long>(cand));
        if (mpz_probab_prime_p(cz.get_mpz_t(), 32) == 0) continue;
        if (std::find(used.begin(), used.end(), cand) != used.end()) continue;
        used.push_back(cand);

        std::vector<std::vector<Polynomial<Fp>>> Ap(n);
        for (std::size_t i = 0; i < n; ++i) {
            Ap[i].reserve(n);
            for (std::size_t j = 0; j < n; ++j) Ap[i].push_back(reduce_mod_p(A[i][j], cand));
        }
        Polynomial<Fp> dp = detail::det_mod_p_rec(Ap, dv, cand);

        // merge residues monomial by monomial (absent monomial = residue 0)
        mpz_class pz(static_cast<unsigned long>(cand));
        mpz_class pinv;
        if (P != 1) {
            mpz_class pm = P % pz;
            if (mpz_invert(pinv.get_mpz_t(), pm.get_mpz_t(), pz.get_mpz_t()) == 0)
                throw std::logic_error("det_modular_crt: duplicate prime slipped through");
        }
        std::map<Monomial, mpz_class, GrlexDesc> merged;
        auto combine = [&](const Monomial& m, const mpz_class& x_old, const mpz_class& r) {
            if (P == 1) {
                if (r != 0) merged.emplace(m, r);
                return;
            }
            mpz_class t = ((r - x_old % pz) % pz * pinv) % pz;
            if (t < 0) t += pz;
            mpz_class x = x_old + P * t;
            if (x != 0) merged.emplace(m, x);
        };
        for (const auto& [m, x] : acc) {
            auto it = dp.terms().find(m);
            mpz_class r = it == dp.terms().end()
                              ? mpz_class(0)
                              : mpz_class(static_cast<unsigned long>(it->second.value()));
            combine(m, x, r);
        }
        for (const auto& [m, c] : dp.terms())
            if (acc.find(m) == acc.end())
                combine(m, mpz_class(0), mpz_class(static_cast<unsigned long>(c.value())));
        acc = std::move(merged);
        P *= pz;
    }

    // symmetric lift and the 1/S correction
    typename Polynomial<Rat>::Terms terms;
    for (auto& [m, x] : acc) {
        mpz_class v = x;
        if (2 * v > P) v -= P;
        terms.emplace(m, Rat(v, S));
    }
    return Polynomial<Rat>::from_terms(nv, std::move(terms));
}

template <class K>
Polynomial<K> det_fraction_free(const PolyMatrix<K>& M,
                                DetStrategy strategy = DetStrategy::automatic) {
    if constexpr (std::is_same_v<K, Rat>) {
        if (strategy == DetStrategy::bareiss) return det_bareiss(M);
        if (strategy == DetStrategy::modular_crt) return det_modular_crt(M);
        // automatic: switch to CRT when the dense size estimate blows up
        long long prod = 1;
        bool big = false;
        for (std::size_t i = 0; i < M.rows() && !big; ++i) {
            prod *= M.row_degree_bound(i) + 1;
            if (prod > 10000) big = true;
            if (prod <= 0) break;
        }
        return big ? det_modular_crt(M) : det_bareiss(M);
    } else {
        if (strategy == DetStrategy::modular_crt)
            throw std::invalid_argument("det: modular_crt strategy needs rational coefficients");
        return det_bareiss(M);
    }
}

// rank over the rational-function field: fraction-free elimination with
// column skipping, same pivot rule as the determinant
template <class K>
std::size_t rank_ratfunc(const PolyMatrix<K>& M) {
    auto A = M.grid();
    const std::size_t rows = M.rows(), cols = M.cols();
    const std::size_t nv = M.n_vars();
    Polynomial<K> prev = Polynomial<K>::constant(nv, K::one());
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = detail::pick_pivot(A, c, r);
        if (piv == detail::kNoPivot) continue;
        if (piv != r) std::swap(A[piv], A[r]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            for (std::size_t j = c + 1; j < cols; ++j)
                A[i][j] = detail::bareiss_divide(A[r][c] * A[i][j] - A[i][c] * A[r][j], prev);
            A[i][c] = Polynomial<K>::zero(nv);
        }
        prev = A[r][c];
        ++r;
    }
    return r;
}

template <class K>
struct KernelResult {
    std::vector<std::vector<RationalFunction<K>>> basis;  // reduced echelon kernel basis
    std::vector<RationalFunction<K>> minimal;  // smallest support found, last nonzero = 1
    std::size_t support = 0;
    std::size_t combination_cap = 2;
    bool support_exhaustive = true;  // false when basis size exceeds the cap
};

// Right kernel over the rational-function field. Elimination is fraction-free
// Gauss-Jordan on polynomials: every intermediate entry is a minor of M and
// the division by the previous pivot is exact, so gcds only happen when the
// reduced basis is assembled at the end. The minimal vector is found greedily
// on the cleared polynomial vectors: single basis vectors, then pairwise
// combinations chosen to cancel a coordinate; with at most two basis vectors
// this is exhaustive.
template <class K>
KernelResult<K> kernel_min_support(const PolyMatrix<K>& M) {
    using RF = RationalFunction<K>;
    const std::size_t rows = M.rows(), cols = M.cols(), nv = M.n_vars();

    std::vector<std::vector<Polynomial<K>>> A = M.grid();
    std::vector<std::size_t> pivots;
    Polynomial<K> prev = Polynomial<K>::constant(nv, K::one());
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = rows;
        for (std::size_t i = r; i < rows; ++i)
            if (!A[i][c].is_zero()) {
                piv = i;
                break;
            }
        if (piv == rows) continue;
        std::swap(A[piv], A[r]);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r) continue;
            for (std::size_t j = 0; j < cols; ++j) {
                if (j == c) continue;
                A[i][j] = detail::bareiss_divide(A[r][c] * A[i][j] - A[i][c] * A[r][j], prev);
            }
            A[i][c] = Polynomial<K>::zero(nv);
        }
        prev = A[r][c];
        pivots.push_back(c);
        ++r;
    }
    // now every pivot row i reads P * (reduced echelon row i) with P = prev
    for (std::size_t i = 0; i < pivots.size(); ++i)
        if (A[i][pivots[i]] != prev)
            throw std::logic_error("kernel_min_support: elimination invariant broken");

    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivots) is_pivot[c] = true;

    // kernel vectors in cleared form: P at the free column, minors elsewhere
    std::vector<std::vector<Polynomial<K>>> cleared;
    for (std::size_t fc = 0; fc < cols; ++fc) {
        if (is_pivot[fc]) continue;
        std::vector<Polynomial<K>> v(cols, Polynomial<K>::zero(nv));
        v[fc] = prev;
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -A[i][fc];
        cleared.push_back(std::move(v));
    }
    if (cleared.empty()) throw std::domain_error("kernel_min_support: trivial kernel");

    KernelResult<K> out;
    const RF rf_zero = RF::zero(nv);
    for (const auto& v : cleared) {
        std::vector<RF> w(cols, rf_zero);
        for (std::size_t j = 0; j < cols; ++j)
            if (!v[j].is_zero()) w[j] = RF(v[j], prev);
        out.basis.push_back(std::move(w));
    }

    auto support_of = [](const std::vector<Polynomial<K>>& v) {
        std::size_t s = 0;
        for (const auto& x : v)
            if (!x.is_zero()) ++s;
        return s;
    };
    std::vector<Polynomial<K>> best;
    std::size_t best_s = static_cast<std::size_t>(-1);
    auto consider = [&](const std::vector<Polynomial<K>>& v) {
        std::size_t s = support_of(v);
        if (s > 0 && s < best_s) {
            best_s = s;
            best = v;
        }
    };
    for (const auto& v : cleared) consider(v);
    for (std::size_t a = 0; a < cleared.size(); ++a) {
        for (std::size_t b = a + 1; b < cleared.size(); ++b) {
            for (std::size_t i = 0; i < cols; ++i) {
                if (cleared[a][i].is_zero() || cleared[b][i].is_zero()) continue;
                // cancel coordinate i; a unit multiple of v_a - (v_a[i]/v_b[i]) v_b
                std::vector<Polynomial<K>> cand;
                cand.reserve(cols);
                for (std::size_t j = 0; j < cols; ++j)
                    cand.push_back(cleared[a][j] * cleared[b][i] - cleared[a][i] * cleared[b][j]);
                consider(cand);
            }
        }
    }

    std::size_t last = cols;
    for (std::size_t i = cols; i-- > 0;)
        if (!best[i].is_zero()) {
            last = i;
            break;
        }
    out.minimal.assign(cols, rf_zero);
    for (std::size_t j = 0; j < cols; ++j)
        if (!best[j].is_zero()) out.minimal[j] = RF(best[j], best[last]);
    out.support = best_s;
    out.support_exhaustive = out.basis.size() <= out.combination_cap;
    return out;
}

}  // namespace pfk
