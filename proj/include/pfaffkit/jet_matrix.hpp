#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pfaffkit/foliation.hpp"
#include "pfaffkit/linear_system.hpp"
#include "pfaffkit/poly_matrix.hpp"
#include "pfaffkit/vector_field.hpp"

namespace pfk {

// all words (i_1,...,i_r) with |i| <= order, grade-ascending and within a
// grade in descending lex, so (1,0) comes before (0,1)
inline std::vector<std::vector<std::uint32_t>> jet_words(std::size_t r, std::uint32_t order) {
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::uint32_t> w(r, 0);
    auto emit = [&](auto&& self, std::size_t pos, std::uint32_t rest) -> void {
        if (pos + 1 == r) {
            w[pos] = rest;
            out.push_back(w);
            w[pos] = 0;
            return;
        }
        for (std::uint32_t i = rest + 1; i-- > 0;) {
            w[pos] = i;
            self(self, pos + 1, rest - i);
        }
        w[pos] = 0;
    };
    for (std::uint32_t g = 0; g <= order; ++g) emit(emit, 0, g);
    return out;
}

// Matrix of all derivation words of the generators applied to the sections:
// row J, column j holds X^J(s_j). Rows follow jet_words order; entries are
// filled by stripping the outermost factor of each word, so every row is one
// application of a single generator to an earlier row.
template <class K>
struct JetMatrix {
    PolyMatrix<K> matrix;
    std::vector<std::vector<std::uint32_t>> words;
    Foliation<K> foliation;
    LinearSystem<K> system;
};

template <class K>
JetMatrix<K> build_jet_matrix(const Foliation<K>& F, const LinearSystem<K>& V,
                              std::uint32_t order) {
    if (F.n_vars() != V.n_vars())
        throw std::invalid_argument("build_jet_matrix: variable count mismatch");
    const std::size_t r = F.rank(), k = V.dim();
    auto words = jet_words(r, order);

    std::map<std::vector<std::uint32_t>, std::size_t> row_of;
    for (std::size_t i = 0; i < words.size(); ++i) row_of.emplace(words[i], i);

    PolyMatrix<K> M(words.size(), k, V.n_vars());
    for (std::size_t j = 0; j < k; ++j) M.set(0, j, V.section(j));
    for (std::size_t i = 1; i < words.size(); ++i) {
        std::size_t t = 0;
        while (words[i][t] == 0) ++t;  // outermost generator of the word
        std::vector<std::uint32_t> parent = words[i];
        --parent[t];
        std::size_t pi = row_of.at(parent);
        for (std::size_t j = 0; j < k; ++j) M.set(i, j, F.generator(t).apply(M.at(pi, j)));
    }
    return JetMatrix<K>{std::move(M), std::move(words), F, V};
}

}  // namespace pfk
