#include "novbar/eggbeater.hpp"

#include <algorithm>
#include <numeric>

#include "novbar/rng.hpp"

namespace novbar {

sign_sequence sign_sequence::from_mask(unsigned p, std::uint32_t mask) {
    sign_sequence s;
    s.entries.resize(2 * p);
    for (unsigned i = 0; i < 2 * p; ++i) s.entries[i] = (mask >> i) & 1u ? 1 : -1;
    return s;
}

std::uint32_t sign_sequence::mask() const {
    std::uint32_t m = 0;
    for (std::size_t i = 0; i < entries.size(); ++i)
        if (entries[i] > 0) m |= (1u << i);
    return m;
}

std::string sign_sequence::str() const {
    std::string s;
    for (int e : entries) s += (e > 0 ? '+' : '-');
    return s;
}

int cz_index(const sign_sequence& seq) {
    int sum = 0;
    for (int e : seq.entries) {
        if (e != 1 && e != -1) throw precondition_error("cz_index: entries must be +-1");
        sum += e;
    }
    return 1 + sum / 2;
}

namespace {

int popcount(std::uint32_t m) { return __builtin_popcount(m); }

std::string generator_label(std::uint32_t mask, unsigned p, unsigned j) {
    return sign_sequence::from_mask(p, mask).str() + "|" + std::to_string(j);
}

} // namespace

eggbeater_model build_model(unsigned p, const rational& lambda, std::uint64_t seed) {
    if (lambda <= 0) throw precondition_error("build_model: lambda must be positive");
    {
        cyclotomic probe(p); // validates primality
        (void)probe;
    }
    const unsigned n = 2 * p;
    const exponent_group gamma; // trivial
    rng gen(seed);

    // Per degree: the masks with popcount = k+p-1, ordered ascending; each
    // mask carries p orbit copies.  Jitter is orbit-constant, distinct within
    // a degree, and bounded by min(1, lambda)/2 so consecutive degrees stay
    // separated by at least lambda/2.
    const rational jitter_cap = std::min(rational(1), lambda) / 2;
    std::map<int, std::vector<std::uint32_t>> masks_by_degree;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask)
        masks_by_degree[1 + popcount(mask) - static_cast<int>(p)].push_back(mask);

    filtered_chain_complex cx(p, gamma, 0);
    std::map<int, std::vector<rational>> levels;
    for (auto& [k, masks] : masks_by_degree) {
        std::sort(masks.begin(), masks.end());
        // Seeded distinct jitters: a shuffled ranking scaled into (0, cap).
        std::vector<std::size_t> ranks(masks.size());
        std::iota(ranks.begin(), ranks.end(), std::size_t{1});
        for (std::size_t i = ranks.size(); i > 1; --i)
            std::swap(ranks[i - 1], ranks[gen.below(i)]);
        filtered_space sp;
        sp.prime = p;
        sp.gamma = gamma;
        auto& lv = levels[k];
        for (std::size_t mi = 0; mi < masks.size(); ++mi) {
            const rational jitter =
                jitter_cap * make_rational(static_cast<long>(ranks[mi]),
                                           static_cast<long>(masks.size()) + 1);
            const rational action = lambda * rational(k + static_cast<int>(p) - 1) + jitter;
            lv.push_back(action);
            for (unsigned j = 0; j < p; ++j) {
                sp.labels.push_back(generator_label(masks[mi], p, j));
                sp.filtrations.push_back(action);
            }
        }
        cx.set_space(k, std::move(sp));
    }

    // Index of (mask, j) inside its degree.
    auto index_of = [&](int k, std::uint32_t mask, unsigned j) {
        const auto& masks = masks_by_degree.at(k);
        auto it = std::lower_bound(masks.begin(), masks.end(), mask);
        return static_cast<std::size_t>(it - masks.begin()) * p + j;
    };

    const novikov_scalar one = novikov_scalar::one(p, gamma);
    for (auto it = masks_by_degree.begin(); it != masks_by_degree.end(); ++it) {
        const int k = it->first;
        if (!masks_by_degree.count(k - 1)) continue;
        filtered_map bd(cx.space(k), cx.space(k - 1));
        for (const std::uint32_t mask : it->second) {
            // Koszul contraction with the all-ones covector: remove one set
            // bit, sign by the number of set bits below it.
            int below = 0;
            for (unsigned bit = 0; bit < n; ++bit) {
                if (!((mask >> bit) & 1u)) continue;
                const std::uint32_t child = mask & ~(1u << bit);
                const novikov_scalar coeff = (below % 2 == 0) ? one : -one;
                for (unsigned j = 0; j < p; ++j)
                    bd.set_entry(index_of(k - 1, child, j), index_of(k, mask, j), coeff);
                ++below;
            }
        }
        cx.set_boundary(k, std::move(bd));
    }

    // Strictness: the smallest action drop across one boundary step.
    rational strict;
    bool have_strict = false;
    for (auto it = std::next(levels.begin()); it != levels.end(); ++it) {
        auto prev = std::prev(it);
        const rational gap = *std::min_element(it->second.begin(), it->second.end()) -
                             *std::max_element(prev->second.begin(), prev->second.end());
        if (!have_strict || gap < strict) {
            strict = gap;
            have_strict = true;
        }
    }
    if (have_strict) {
        if (strict <= 0) throw verify_error("build_model: degree actions not monotone");
        cx.set_strictness(strict);
    }

    eggbeater_model model(p, lambda, seed, std::move(cx));
    for (const auto& [k, masks] : masks_by_degree) {
        std::vector<std::size_t> perm(masks.size() * p);
        std::vector<std::size_t> orbit(masks.size() * p);
        for (std::size_t mi = 0; mi < masks.size(); ++mi)
            for (unsigned j = 0; j < p; ++j) {
                perm[mi * p + j] = mi * p + (j + 1) % p;
                orbit[mi * p + j] = mi;
            }
        model.rotation_perm.emplace(k, std::move(perm));
        model.orbit_group.emplace(k, std::move(orbit));
        model.masks.emplace(k, masks);
    }
    for (const auto& [k, perm] : model.rotation_perm) {
        filtered_map r(model.complex.space(k), model.complex.space(k));
        for (std::size_t j = 0; j < perm.size(); ++j) r.set_entry(perm[j], j, one);
        model.rotation.emplace(k, std::move(r));
    }
    if (!commutes_with_boundary(model.complex, model.rotation))
        throw verify_error("build_model: rotation is not a chain map");
    complex_report rep = verify_complex(model.complex);
    if (!rep.ok()) throw verify_error("build_model: complex invariants failed");
    return model;
}

graded_map random_strict_lower_up_map(const filtered_chain_complex& c, std::uint64_t seed) {
    rng gen(seed);
    graded_map m;
    for (int k = c.min_degree(); k < c.max_degree(); ++k) {
        if (c.dim(k) == 0 || c.dim(k + 1) == 0) continue;
        const filtered_space from = c.space(k), to = c.space(k + 1);
        filtered_map mk(from, to);
        for (std::size_t j = 0; j < from.dim(); ++j)
            for (std::size_t i = 0; i < to.dim(); ++i) {
                if (to.filtrations[i] >= from.filtrations[j]) continue;
                if (!gen.chance(1, 4)) continue;
                const long num = gen.range(-2, 2);
                if (num == 0) continue;
                mk.set_entry(i, j,
                             novikov_scalar::constant(
                                 cyclotomic::zeta(c.prime(),
                                                  gen.range(0, static_cast<long>(c.prime()) - 1)) *
                                     rational(num),
                                 c.gamma()));
            }
        m.emplace(k, std::move(mk));
    }
    return m;
}

graded_map homotopy_exact_part(const filtered_chain_complex& c, const graded_map& m) {
    graded_map n;
    for (int k = c.min_degree(); k <= c.max_degree(); ++k) {
        if (c.dim(k) == 0) continue;
        filtered_map nk = filtered_map::zero(c.space(k), c.space(k));
        if (m.count(k - 1)) nk = nk + m.at(k - 1) * c.boundary(k);
        if (m.count(k)) nk = nk + c.boundary(k + 1) * m.at(k);
        n.emplace(k, std::move(nk));
    }
    return n;
}

graded_map random_strict_lower_homotopy(const filtered_chain_complex& c, std::uint64_t seed) {
    return homotopy_exact_part(c, random_strict_lower_up_map(c, seed));
}

egg_report egg_cone_report(const eggbeater_model& model, unsigned xi_power,
                           std::optional<std::uint64_t> perturb_seed) {
    if (xi_power == 0 || xi_power >= model.p)
        throw precondition_error("egg_cone_report: xi power must be primitive (1..p-1)");
    graded_map t = model.rotation;
    bool perturbed = false;
    if (perturb_seed) {
        graded_map n = random_strict_lower_homotopy(model.complex, *perturb_seed);
        graded_map tn = graded_compose(t, n);
        t = graded_add(t, tn);
        perturbed = !graded_shift_bound(n).is_neg_infinity();
    }
    cone_complex cone =
        build_cone(model.complex, t, cyclotomic::zeta(model.p, static_cast<long>(xi_power)));

    egg_report report;
    report.p = model.p;
    report.xi_power = xi_power;
    report.lambda = model.lambda;
    report.seed = model.seed;
    report.perturbed = perturbed;
    report.bars.kind = barcode_kind::verbose;
    report.bars.gamma = model.complex.gamma();

    const int lo = -static_cast<int>(model.p) + 1;
    const int hi = static_cast<int>(model.p) + 1;
    for (int k = lo; k <= hi; ++k) {
        barcode part = barcode_of(cone.complex, k, codomain_mode::image);
        egg_degree_row row;
        row.degree = k;
        row.verbose = part.bars.size();
        for (const auto& b : part.bars) {
            if (b.length == ext_rational(rational(0))) {
                ++row.zero_length;
            } else {
                ++row.concise;
                const rational len = b.length.finite();
                if (!row.min_positive_length || len < *row.min_positive_length)
                    row.min_positive_length = len;
            }
        }
        report.verbose_total += row.verbose;
        report.concise_total += row.concise;
        report.zero_length_total += row.zero_length;
        if (row.min_positive_length &&
            (!report.min_positive_length || *row.min_positive_length < *report.min_positive_length))
            report.min_positive_length = row.min_positive_length;
        if (row.concise % model.p != 0) report.nondivisible_degrees.push_back(k);
        report.per_degree.push_back(std::move(row));
        report.bars.bars.insert(report.bars.bars.end(), part.bars.begin(), part.bars.end());
    }
    report.bars.sort_canonical();
    return report;
}

filtered_map q_matrix(unsigned p) {
    filtered_space sp;
    sp.prime = p;
    sp.gamma = exponent_group();
    for (unsigned i = 0; i < p; ++i) {
        sp.labels.push_back("z" + std::to_string(i));
        sp.filtrations.push_back(rational(0));
    }
    filtered_map q(sp, sp);
    const novikov_scalar minus_xi =
        novikov_scalar::constant(-cyclotomic::zeta(p, 1), sp.gamma);
    const novikov_scalar one = sp.one_scalar();
    for (unsigned j = 0; j < p; ++j) {
        q.set_entry(j, j, minus_xi);
        q.set_entry((j + 1) % p, j, one);
    }
    return q;
}

sparse_vec q_kernel_vector(unsigned p) {
    const exponent_group gamma;
    sparse_vec v;
    for (unsigned i = 0; i < p; ++i)
        v.entries.emplace_back(
            i, novikov_scalar::constant(
                   cyclotomic::zeta(p, static_cast<long>(p - 1 - i)), gamma));
    return v;
}

long quantum_betti(const std::vector<long>& betti, unsigned chern_number, int k) {
    auto b = [&betti](long idx) {
        return idx >= 0 && idx < static_cast<long>(betti.size()) ? betti[idx] : 0L;
    };
    if (chern_number == 0) return b(k);
    // The shifts k + 2Ns hit exactly the in-range indices congruent to k.
    const long step = 2L * chern_number;
    long total = 0;
    for (long idx = ((k % step) + step) % step; idx < static_cast<long>(betti.size()); idx += step)
        total += betti[idx];
    return total;
}

product_multiplicity_result product_multiplicity(unsigned p, const std::vector<long>& betti,
                                                 unsigned chern_number) {
    {
        cyclotomic probe(p); // validates primality
        (void)probe;
    }
    product_multiplicity_result out;
    out.m1 = 0;
    const int ip = static_cast<int>(p);
    for (int k = -ip + 1; k <= ip + 1; ++k) {
        bigint binom;
        mpz_bin_uiui(binom.get_mpz_t(), 2 * p, static_cast<unsigned long>(k + ip - 1));
        out.m1 += binom * quantum_betti(betti, chern_number, 1 - k);
    }
    const long a = quantum_betti(betti, chern_number, ip) +
                   2 * quantum_betti(betti, chern_number, 0) +
                   quantum_betti(betti, chern_number, -ip);
    out.residue = static_cast<unsigned>(((a % ip) + ip) % ip);
    out.divisible = mpz_divisible_ui_p(out.m1.get_mpz_t(), p) != 0;
    return out;
}

crosscheck_result product_cone_crosscheck(const eggbeater_model& model, unsigned xi_power,
                                          const std::vector<long>& ranks) {
    crosscheck_result out;
    const exponent_group gamma = model.complex.gamma();

    // D: zero boundary, filtration 0, the given rank in each degree.
    filtered_chain_complex d(model.p, gamma, 0);
    for (std::size_t j = 0; j < ranks.size(); ++j) {
        filtered_space sp;
        sp.prime = model.p;
        sp.gamma = gamma;
        for (long i = 0; i < ranks[j]; ++i) {
            sp.labels.push_back("m" + std::to_string(j) + "_" + std::to_string(i));
            sp.filtrations.push_back(rational(0));
        }
        d.set_space(static_cast<int>(j), std::move(sp));
    }

    // Direct route: cone of (T tensor I) - xi I over the tensor complex.
    tensor_complex cd = tensor_product(model.complex, d);
    graded_map s = tensor_map_with_identity(cd, model.rotation);
    cone_complex cone =
        build_cone(cd.complex, s, cyclotomic::zeta(model.p, static_cast<long>(xi_power)));
    barcode direct = barcode_of(cone.complex, 1, codomain_mode::image);
    for (const auto& b : direct.bars) {
        if (!(b.length > ext_rational(rational(0)))) continue;
        ++out.direct_m1;
        if (!out.direct_min_length || b.length.finite() < *out.direct_min_length)
            out.direct_min_length = b.length.finite();
    }

    // Tensor-rule route: pair the egg cone barcode with the all-infinite
    // barcode of D.
    egg_report egg = egg_cone_report(model, xi_power);
    barcode d_bars;
    d_bars.kind = barcode_kind::verbose;
    d_bars.gamma = gamma;
    for (std::size_t j = 0; j < ranks.size(); ++j)
        for (long i = 0; i < ranks[j]; ++i)
            d_bars.bars.push_back({rational(0), ext_rational::infinity(), static_cast<int>(j)});
    barcode paired = tensor_barcode(egg.bars, d_bars);
    for (const auto& b : paired.bars)
        if (b.degree == 1 && b.length.is_finite() && b.length.finite() > 0) ++out.tensor_rule_m1;

    out.formula_m1 = product_multiplicity(model.p, ranks, 0).m1;

    // Smallest positive egg length over the degrees the factor reaches.
    for (const auto& row : egg.per_degree) {
        bool hit = false;
        for (std::size_t j = 0; j < ranks.size(); ++j)
            if (ranks[j] > 0 && row.degree == 1 - static_cast<int>(j)) hit = true;
        if (hit && row.min_positive_length &&
            (!out.egg_min_length || *row.min_positive_length < *out.egg_min_length))
            out.egg_min_length = row.min_positive_length;
    }

    out.agree = out.direct_m1 == out.tensor_rule_m1 &&
                bigint(static_cast<unsigned long>(out.direct_m1)) == out.formula_m1 &&
                out.direct_min_length == out.egg_min_length;
    if (!out.agree) out.mismatched_degrees.push_back(1);
    return out;
}

} // namespace novbar
