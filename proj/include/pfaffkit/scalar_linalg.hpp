#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace pfk {

// Dense matrix over the coefficient field itself; rank and kernel for
// coefficient-level questions (linear independence of sections, residue
// systems, twisted-form counts).
template <class K>
class ScalarMatrix {
public:
    ScalarMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows, std::vector<K>(cols)) {
        if (rows_ == 0 || cols_ == 0) throw std::invalid_argument("ScalarMatrix: empty shape");
    }

    static ScalarMatrix from_rows(std::vector<std::vector<K>> grid) {
        if (grid.empty() || grid[0].empty())
            throw std::invalid_argument("ScalarMatrix: empty grid");
        ScalarMatrix m(grid.size(), grid[0].size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (grid[i].size() != m.cols_) throw std::invalid_argument("ScalarMatrix: ragged grid");
            m.a_[i] = std::move(grid[i]);
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const K& at(std::size_t i, std::size_t j) const { return a_.at(i).at(j); }
    void set(std::size_t i, std::size_t j, K v) { a_.at(i).at(j) = std::move(v); }

    std::size_t rank() const {
        auto [rref, pivots] = reduced_echelon();
        return pivots.size();
    }

    // reduced-echelon kernel basis: one vector per free column
    std::vector<std::vector<K>> nullspace() const {
        auto [rref, pivots] = reduced_echelon();
        std::vector<bool> is_pivot(cols_, false);
        for (auto c : pivots) is_pivot[c] = true;
        std::vector<std::vector<K>> out;
        for (std::size_t fc = 0; fc < cols_; ++fc) {
            if (is_pivot[fc]) continue;
            std::vector<K> v(cols_);
            v[fc] = K::one();
            for (std::size_t i = 0; i < pivots.size(); ++i)
                if (!rref[i][fc].is_zero()) v[pivots[i]] = -rref[i][fc];
            out.push_back(std::move(v));
        }
        return out;
    }

private:
    std::pair<std::vector<std::vector<K>>, std::vector<std::size_t>> reduced_echelon() const {
        auto a = a_;
        std::vector<std::size_t> pivots;
        std::size_t r = 0;
        for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
            std::size_t piv = rows_;
            for (std::size_t i = r; i < rows_; ++i)
                if (!a[i][c].is_zero()) {
                    piv = i;
                    break;
                }
            if (piv == rows_) continue;
            std::swap(a[piv], a[r]);
            K pv = a[r][c];
            for (std::size_t j = 0; j < cols_; ++j) a[r][j] = a[r][j] / pv;
            for (std::size_t i = 0; i < rows_; ++i) {
                if (i == r || a[i][c].is_zero()) continue;
                K f = a[i][c];
                for (std::size_t j = 0; j < cols_; ++j) a[i][j] = a[i][j] - f * a[r][j];
            }
            pivots.push_back(c);
            ++r;
        }
        return {std::move(a), std::move(pivots)};
    }

    std::size_t rows_, cols_;
    std::vector<std::vector<K>> a_;
};

}  // namespace pfk
