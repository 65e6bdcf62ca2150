#include "novbar/svd.hpp"

#include <algorithm>
#include <numeric>

namespace novbar {

namespace {

struct pivot_candidate {
    bool found = false;
    rational value;
    std::size_t row = 0, col = 0;

    void offer(const rational& v, std::size_t i, std::size_t j) {
        if (!found || v > value || (v == value && std::pair(i, j) < std::pair(row, col))) {
            found = true;
            value = v;
            row = i;
            col = j;
        }
    }
};

} // namespace

std::pair<std::size_t, std::size_t> optimal_pair(const filtered_map& map) {
    pivot_candidate best;
    for (std::size_t j = 0; j < map.columns().size(); ++j) {
        const rational& dom_level = map.domain().filtrations[j];
        for (const auto& [i, coeff] : map.column(j).entries)
            best.offer(map.codomain().filtrations[i] - coeff.valuation().finite() - dom_level, i, j);
    }
    if (!best.found) throw domain_error("optimal_pair: zero map");
    return {best.row, best.col};
}

svd_result svd(const filtered_map& map, bool extend_codomain) {
    const filtered_space& dom = map.domain();
    const filtered_space& cod = map.codomain();
    const std::size_t n = dom.dim();
    const novikov_scalar one = dom.one_scalar();

    for (const auto& col : map.columns())
        for (const auto& [i, v] : col.entries)
            if (!v.is_exact())
                throw precondition_error("svd: entries must be exact (no truncation orders)");

    // Working state: tracked domain vectors and their images.
    std::vector<sparse_vec> v(n), w(map.columns());
    std::vector<rational> v_level(n);
    std::vector<bool> alive(n, true);
    for (std::size_t j = 0; j < n; ++j) {
        v[j] = sparse_vec::unit(j, one);
        v_level[j] = dom.filtrations[j];
    }

    struct pivot_data {
        sparse_vec y, x;
        rational y_level, x_level;
    };
    std::vector<pivot_data> selected;
    svd_result result;

    while (true) {
        pivot_candidate best;
        for (std::size_t j = 0; j < n; ++j) {
            if (!alive[j]) continue;
            for (const auto& [i, coeff] : w[j].entries)
                best.offer(cod.filtrations[i] - coeff.valuation().finite() - v_level[j], i, j);
        }
        if (!best.found) break;

        const std::size_t i0 = best.row, j0 = best.col;
        result.pivots.emplace_back(i0, j0);
        alive[j0] = false;
        const novikov_scalar b = *w[j0].find(i0);
        const bool monomial_pivot = b.is_monomial();
        const novikov_scalar b_inv = monomial_pivot ? b.invert() : one;

        for (std::size_t j = 0; j < n; ++j) {
            if (!alive[j]) continue;
            const novikov_scalar* a = w[j].find(i0);
            if (!a) continue;
            if (monomial_pivot) {
                const novikov_scalar c = -(*a) * b_inv;
                v[j] = combine(one, v[j], c, v[j0]);
                w[j] = combine(one, w[j], c, w[j0]);
            } else {
                v[j] = combine(b, v[j], -(*a), v[j0]);
                w[j] = combine(b, w[j], -(*a), w[j0]);
            }
            v_level[j] = filtration_of(dom, v[j]).finite();
        }

        pivot_data pd;
        pd.y = std::move(v[j0]);
        pd.x = std::move(w[j0]);
        pd.y_level = v_level[j0];
        pd.x_level = filtration_of(cod, pd.x).finite();
        selected.push_back(std::move(pd));
    }

    // Pivot order produced the smallest shift first; Definition-style output
    // wants shifts non-increasing.  Stable sort keeps ties deterministic.
    std::vector<std::size_t> order(selected.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b2) {
        return selected[a].y_level - selected[a].x_level > selected[b2].y_level - selected[b2].x_level;
    });

    result.rank = selected.size();
    for (std::size_t idx : order) {
        auto& pd = selected[idx];
        result.domain_basis.push_back(std::move(pd.y));
        result.domain_levels.push_back(pd.y_level);
        result.codomain_basis.push_back(std::move(pd.x));
        result.codomain_levels.push_back(pd.x_level);
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (!alive[j]) continue;
        if (!w[j].is_zero()) throw verify_error("svd: surviving column has a nonzero image");
        result.domain_basis.push_back(std::move(v[j]));
        result.domain_levels.push_back(v_level[j]);
    }

    if (extend_codomain) {
        // Extend x_1..x_r to an orthogonal basis of the codomain by greedily
        // adding defining basis vectors whose zero-level reductions stay
        // independent (Steinitz exchange on the reduced K-columns).
        k_echelon ech;
        for (std::size_t i = 0; i < result.rank; ++i)
            ech.try_add(reduce_vector_to_zero_level(cod, result.codomain_basis[i]));
        for (std::size_t k = 0; k < cod.dim(); ++k) {
            if (result.codomain_basis.size() == cod.dim()) break;
            kvec unit(cod.dim(), cyclotomic(cod.prime));
            unit[k] = cyclotomic::from_long(cod.prime, 1);
            if (ech.try_add(std::move(unit))) {
                result.codomain_basis.push_back(sparse_vec::unit(k, one));
                result.codomain_levels.push_back(cod.filtrations[k]);
            }
        }
        if (result.codomain_basis.size() != cod.dim())
            throw verify_error("svd: codomain extension fell short");
    }
    return result;
}

void verify_svd(const filtered_map& map, const svd_result& result, bool extended) {
    const filtered_space& dom = map.domain();
    const filtered_space& cod = map.codomain();
    const std::size_t n = dom.dim();
    const std::size_t r = result.rank;

    if (result.domain_basis.size() != n) throw verify_error("svd check: domain basis size");
    if (extended && result.codomain_basis.size() != cod.dim())
        throw verify_error("svd check: codomain basis size");

    if (unfiltered_rank(map) != r) throw verify_error("svd check: rank vs elimination oracle");
    if (n > 0 && unfiltered_rank(result.domain_basis) != n)
        throw verify_error("svd check: domain basis not a basis");

    for (std::size_t i = 0; i < n; ++i) {
        sparse_vec image = map.apply(result.domain_basis[i]);
        if (i < r) {
            if (!(image == result.codomain_basis[i]))
                throw verify_error("svd check: A(y_i) != x_i");
        } else if (!image.is_zero()) {
            throw verify_error("svd check: kernel vector not in kernel");
        }
    }
    for (std::size_t i = 0; i + 1 < r; ++i)
        if (result.shift(i) < result.shift(i + 1))
            throw verify_error("svd check: shifts not sorted");
    if (n > 0 && !is_orthogonal(dom, result.domain_basis))
        throw verify_error("svd check: domain basis not orthogonal");
    if (!result.codomain_basis.empty() && !is_orthogonal(cod, result.codomain_basis))
        throw verify_error("svd check: codomain basis not orthogonal");
    for (std::size_t i = 0; i < result.domain_basis.size(); ++i)
        if (filtration_of(dom, result.domain_basis[i]) != ext_rational(result.domain_levels[i]))
            throw verify_error("svd check: stale domain level");
    for (std::size_t i = 0; i < result.codomain_basis.size(); ++i)
        if (filtration_of(cod, result.codomain_basis[i]) != ext_rational(result.codomain_levels[i]))
            throw verify_error("svd check: stale codomain level");
}

} // namespace novbar
