#pragma once

#include <map>
#include <string>
#include <vector>

#include "novbar/barcode.hpp"
#include "novbar/complex.hpp"
#include "novbar/eggbeater.hpp"
#include "novbar/rng.hpp"

namespace novbar::testing {

inline cyclotomic rand_cyclo(rng& gen, unsigned p, bool nonzero = false) {
    std::vector<rational> coords(p - 1, rational(0));
    for (auto& c : coords)
        if (gen.chance(1, 2)) c = make_rational(gen.range(-3, 3), gen.range(1, 3));
    cyclotomic z(p, std::move(coords));
    if (nonzero && z.is_zero()) return cyclotomic::from_long(p, gen.range(1, 3));
    return z;
}

inline novikov_scalar rand_scalar(rng& gen, unsigned p, const exponent_group& gamma,
                                  bool nonzero = false) {
    if (gamma.trivial()) {
        cyclotomic c = rand_cyclo(gen, p, nonzero);
        return novikov_scalar::constant(c, gamma);
    }
    std::vector<novikov_scalar::term> terms;
    const long count = gen.range(nonzero ? 1 : 0, 3);
    for (long t = 0; t < count; ++t)
        terms.push_back({gamma.step() * gen.range(-2, 4), rand_cyclo(gen, p, true)});
    novikov_scalar s = novikov_scalar::from_terms(p, gamma, std::move(terms));
    if (nonzero && s.is_zero())
        return novikov_scalar::monomial(gamma.step(), cyclotomic::from_long(p, 1), gamma);
    return s;
}

inline filtered_space rand_space(rng& gen, unsigned p, const exponent_group& gamma,
                                 std::size_t dim, const std::string& prefix) {
    filtered_space sp;
    sp.prime = p;
    sp.gamma = gamma;
    for (std::size_t i = 0; i < dim; ++i) {
        sp.labels.push_back(prefix + std::to_string(i));
        sp.filtrations.push_back(make_rational(gen.range(-6, 6), gen.range(1, 3)));
    }
    return sp;
}

inline filtered_map rand_map(rng& gen, const filtered_space& dom, const filtered_space& cod) {
    filtered_map m(dom, cod);
    for (std::size_t j = 0; j < dom.dim(); ++j)
        for (std::size_t i = 0; i < cod.dim(); ++i)
            if (gen.chance(2, 5)) {
                novikov_scalar s = rand_scalar(gen, dom.prime, dom.gamma);
                if (!s.is_zero()) m.set_entry(i, j, s);
            }
    return m;
}

// Random filtered chain complex built from elementary pairs and singletons,
// then disguised by filtered basis changes.  The elementary data is the
// independent barcode oracle: each pair gives a finite bar, each singleton
// an infinite one.
struct oracle_complex {
    filtered_chain_complex complex;
    barcode expected; // verbose, all degrees
};

inline oracle_complex rand_complex(rng& gen, unsigned p, const exponent_group& gamma,
                                   int min_degree, int max_degree, std::size_t max_dim,
                                   std::size_t moves = 12) {
    filtered_chain_complex cx(p, gamma, 0);
    barcode expected;
    expected.kind = barcode_kind::verbose;
    expected.gamma = gamma;

    std::map<int, std::size_t> dims;
    for (int k = min_degree; k <= max_degree; ++k)
        dims[k] = static_cast<std::size_t>(gen.range(1, static_cast<long>(max_dim)));

    // In each degree indices [0, sources[k]) map down by a pair; indices
    // [sources[k], sources[k] + sources[k+1]) receive one.
    std::map<int, std::size_t> sources;
    sources[min_degree] = 0;
    for (int k = min_degree + 1; k <= max_degree; ++k) {
        const std::size_t room = dims[k - 1] - sources[k - 1];
        const std::size_t avail = std::min(dims[k], room);
        sources[k] = avail == 0 ? 0 : static_cast<std::size_t>(gen.below(avail + 1));
    }

    std::map<int, std::vector<rational>> levels;
    for (int k = min_degree; k <= max_degree; ++k) {
        auto& lv = levels[k];
        for (std::size_t i = 0; i < dims[k]; ++i)
            lv.push_back(rational(gen.range(0, 12)) + make_rational(gen.range(0, 3), 4));
    }
    // Pair coefficients (monomials) and level raising so boundaries strictly
    // lower filtration.
    std::map<int, std::vector<rational>> pair_exponent;
    for (int k = min_degree + 1; k <= max_degree; ++k) {
        const std::size_t off = sources[k - 1];
        auto& exps = pair_exponent[k];
        for (std::size_t i = 0; i < sources[k]; ++i) {
            rational g(0);
            if (!gamma.trivial() && gen.chance(1, 3)) g = gamma.step() * gen.range(0, 2);
            exps.push_back(g);
            const rational target_level = levels[k - 1][off + i] - g;
            if (levels[k][i] <= target_level)
                levels[k][i] = target_level + make_rational(gen.range(1, 8), 2);
        }
    }

    for (int k = min_degree; k <= max_degree; ++k) {
        filtered_space sp;
        sp.prime = p;
        sp.gamma = gamma;
        for (std::size_t i = 0; i < dims[k]; ++i) {
            sp.labels.push_back("d" + std::to_string(k) + "g" + std::to_string(i));
            sp.filtrations.push_back(levels[k][i]);
        }
        cx.set_space(k, std::move(sp));
    }
    const novikov_scalar one = cx.one_scalar();
    for (int k = min_degree + 1; k <= max_degree; ++k) {
        filtered_map bd(cx.space(k), cx.space(k - 1));
        const std::size_t off = sources[k - 1];
        for (std::size_t i = 0; i < sources[k]; ++i) {
            const rational g = pair_exponent[k][i];
            novikov_scalar coeff =
                novikov_scalar::monomial(g, cyclotomic::from_long(p, 1), gamma);
            bd.set_entry(off + i, i, coeff);
            const rational endpoint = levels[k - 1][off + i] - g;
            expected.bars.push_back({gamma.reduce_mod(endpoint),
                                     ext_rational(levels[k][i] - endpoint), k - 1});
        }
        cx.set_boundary(k, std::move(bd));
    }
    for (int k = min_degree; k <= max_degree; ++k) {
        const std::size_t s = sources[k];
        const std::size_t t = k + 1 <= max_degree ? sources[k + 1] : 0;
        for (std::size_t i = s + t; i < dims[k]; ++i)
            expected.bars.push_back(
                {gamma.reduce_mod(levels[k][i]), ext_rational::infinity(), k});
    }

    // Disguise with filtered elementary moves e_j += c e_i (strictly lower
    // contribution), adjusting the boundaries on both sides of the degree.
    for (std::size_t mv = 0; mv < moves; ++mv) {
        const int k = static_cast<int>(gen.range(min_degree, max_degree));
        const std::size_t n = cx.dim(k);
        if (n < 2) continue;
        const std::size_t i = static_cast<std::size_t>(gen.below(n));
        const std::size_t j = static_cast<std::size_t>(gen.below(n));
        if (i == j) continue;
        const filtered_space sp = cx.space(k);
        rational val(0);
        if (!gamma.trivial()) val = gamma.step() * gen.range(0, 3);
        if (!(sp.filtrations[i] - val < sp.filtrations[j])) continue;
        novikov_scalar c = novikov_scalar::monomial(
            val,
            cyclotomic::zeta(p, gen.range(0, static_cast<long>(p) - 1)) *
                rational(gen.range(1, 2)),
            gamma);
        filtered_map dk = cx.boundary(k);
        std::vector<sparse_vec> cols = dk.columns();
        if (!cols.empty()) {
            cols[j] = combine(one, cols[j], c, cols[i]);
            cx.set_boundary(k, filtered_map(dk.domain(), dk.codomain(), std::move(cols)));
        }
        if (k + 1 <= max_degree && cx.dim(k + 1) > 0) {
            filtered_map dk1 = cx.boundary(k + 1);
            std::vector<sparse_vec> cols1 = dk1.columns();
            for (auto& col : cols1) {
                const novikov_scalar* at_j = col.find(j);
                if (!at_j) continue;
                sparse_vec adj;
                adj.entries.emplace_back(i, -(c * (*at_j)));
                col = add(col, adj);
            }
            cx.set_boundary(k + 1, filtered_map(dk1.domain(), dk1.codomain(), std::move(cols1)));
        }
    }
    complex_report rep = verify_complex(cx);
    for (const auto& v : rep.violations)
        if (v.what == "d o d != 0") throw verify_error("rand_complex: bad generator");
    return {std::move(cx), std::move(expected)};
}

// Random 0-shift chain endomorphism: a scalar plus a homotopy-exact part.
inline graded_map rand_chain_endo(rng& gen, const filtered_chain_complex& cx,
                                  std::uint64_t homotopy_seed) {
    cyclotomic c = rand_cyclo(gen, cx.prime(), true);
    graded_map t;
    for (int k = cx.min_degree(); k <= cx.max_degree(); ++k)
        if (cx.dim(k) > 0)
            t.emplace(k, filtered_map::identity(cx.space(k))
                             .scaled(novikov_scalar::constant(c, cx.gamma())));
    graded_map n = random_strict_lower_homotopy(cx, homotopy_seed);
    return graded_add(t, n);
}

} // namespace novbar::testing
