#include "novbar/barcode.hpp"

#include <algorithm>

#include "novbar/rng.hpp"

namespace novbar {

bool operator==(const bar& a, const bar& b) {
    return a.degree == b.degree && a.endpoint == b.endpoint && a.length == b.length;
}

barcode barcode::concise() const {
    barcode out;
    out.kind = barcode_kind::concise;
    out.gamma = gamma;
    for (const auto& b : bars)
        if (b.length > ext_rational(rational(0))) out.bars.push_back(b);
    return out;
}

std::size_t barcode::multiplicity(int degree) const {
    std::size_t n = 0;
    for (const auto& b : bars)
        if (b.degree == degree) ++n;
    return n;
}

std::vector<rational> barcode::finite_lengths(int degree) const {
    std::vector<rational> lengths;
    for (const auto& b : bars)
        if (b.degree == degree && b.length.is_finite()) lengths.push_back(b.length.finite());
    std::sort(lengths.begin(), lengths.end(), std::greater<rational>());
    return lengths;
}

std::size_t barcode::infinite_count(int degree) const {
    std::size_t n = 0;
    for (const auto& b : bars)
        if (b.degree == degree && b.length.is_pos_infinity()) ++n;
    return n;
}

void barcode::sort_canonical() {
    std::sort(bars.begin(), bars.end(), [](const bar& a, const bar& b) {
        if (a.degree != b.degree) return a.degree < b.degree;
        if (a.length != b.length) return a.length > b.length;
        return a.endpoint < b.endpoint;
    });
}

bool same_barcode(const barcode& a, const barcode& b) {
    if (a.bars.size() != b.bars.size()) return false;
    barcode sa = a, sb = b;
    sa.sort_canonical();
    sb.sort_canonical();
    for (std::size_t i = 0; i < sa.bars.size(); ++i)
        if (!(sa.bars[i] == sb.bars[i])) return false;
    return true;
}

barcode barcode_of(const filtered_chain_complex& c, int degree, codomain_mode mode) {
    barcode out;
    out.kind = barcode_kind::verbose;
    out.gamma = c.gamma();

    const filtered_map d_in = c.boundary(degree + 1);  // C_{k+1} -> C_k
    const filtered_space& cod = d_in.codomain();
    svd_result in_svd = svd(d_in, /*extend_codomain=*/false);

    if (mode == codomain_mode::image) {
        if (homology_rank(c, degree) != 0)
            throw precondition_error("barcode_of: image mode needs vanishing homology at degree " +
                                     std::to_string(degree));
    }

    for (std::size_t i = 0; i < in_svd.rank; ++i)
        out.bars.push_back(
            {c.gamma().reduce_mod(in_svd.codomain_levels[i]),
             ext_rational(in_svd.domain_levels[i] - in_svd.codomain_levels[i]), degree});

    if (mode == codomain_mode::kernel) {
        // Extend the images x_1..x_r to an orthogonal basis of ker d_k by
        // greedy selection from a kernel basis; the leftovers are the
        // infinite bars.
        svd_result out_svd = svd(c.boundary(degree), /*extend_codomain=*/false);
        const std::size_t ker_dim = c.dim(degree) - out_svd.rank;
        k_echelon ech;
        for (std::size_t i = 0; i < in_svd.rank; ++i)
            ech.try_add(reduce_vector_to_zero_level(cod, in_svd.codomain_basis[i]));
        std::size_t added = 0;
        for (std::size_t i = out_svd.rank; i < out_svd.domain_basis.size(); ++i) {
            const sparse_vec& kv = out_svd.domain_basis[i];
            if (!ech.try_add(reduce_vector_to_zero_level(cod, kv))) continue;
            out.bars.push_back({c.gamma().reduce_mod(filtration_of(cod, kv).finite()),
                                ext_rational::infinity(), degree});
            ++added;
        }
        if (in_svd.rank + added != ker_dim)
            throw verify_error("barcode_of: kernel extension count mismatch");
    }
    return out;
}

barcode barcode_all(const filtered_chain_complex& c, codomain_mode mode) {
    barcode out;
    out.kind = barcode_kind::verbose;
    out.gamma = c.gamma();
    if (c.empty()) return out;
    for (int k = c.min_degree(); k <= c.max_degree(); ++k) {
        barcode part = barcode_of(c, k, mode);
        out.bars.insert(out.bars.end(), part.bars.begin(), part.bars.end());
    }
    return out;
}

barcode tensor_barcode(const barcode& bc_c, const barcode& bc_d) {
    if (!(bc_c.gamma == bc_d.gamma)) throw config_error("tensor_barcode: mixed exponent groups");
    barcode out;
    out.kind = (bc_c.kind == barcode_kind::concise || bc_d.kind == barcode_kind::concise)
                   ? barcode_kind::concise
                   : barcode_kind::verbose;
    out.gamma = bc_c.gamma;
    const auto& gamma = bc_c.gamma;
    for (const auto& a : bc_c.bars) {
        for (const auto& b : bc_d.bars) {
            const int deg = a.degree + b.degree;
            const rational base = a.endpoint + b.endpoint;
            if (a.length.is_pos_infinity() && b.length.is_pos_infinity()) {
                out.bars.push_back({gamma.reduce_mod(base), ext_rational::infinity(), deg});
            } else if (!a.length.is_pos_infinity() && b.length.is_pos_infinity()) {
                out.bars.push_back({gamma.reduce_mod(base), a.length, deg});
            } else if (a.length.is_pos_infinity() && !b.length.is_pos_infinity()) {
                out.bars.push_back({gamma.reduce_mod(base), b.length, deg});
            } else {
                // Two finite bars tensor into two finite bars of the minimal
                // length: one a degree up, ending at the taller top, and one
                // at the product degree, ending at the sum of endpoints.
                const rational la = a.length.finite(), lb = b.length.finite();
                const rational min_len = std::min(la, lb);
                out.bars.push_back({gamma.reduce_mod(base + std::max(la, lb)),
                                    ext_rational(min_len), deg + 1});
                out.bars.push_back({gamma.reduce_mod(base), ext_rational(min_len), deg});
            }
        }
    }
    return out;
}

rational compare_barcodes(const barcode& a, const barcode& b, int degree) {
    std::vector<rational> la = a.finite_lengths(degree);
    std::vector<rational> lb = b.finite_lengths(degree);
    const std::size_t n = std::max(la.size(), lb.size());
    la.resize(n, rational(0));
    lb.resize(n, rational(0));
    rational worst(0);
    for (std::size_t i = 0; i < n; ++i) {
        rational d = la[i] - lb[i];
        if (d < 0) d = -d;
        if (d > worst) worst = d;
    }
    return worst;
}

namespace {

bool monotone_boundaries(const filtered_chain_complex& c) {
    for (int k = c.min_degree(); k <= c.max_degree(); ++k) {
        const filtered_map d = c.boundary(k);
        if (d.shift_bound() > ext_rational(rational(0))) return false;
    }
    return true;
}

} // namespace

stability_report stability_probe(const filtered_chain_complex& c, const rational& delta,
                                 const std::vector<std::uint64_t>& seeds,
                                 const std::map<int, std::vector<std::size_t>>* groups) {
    stability_report report;
    report.bound = 4 * delta;
    if (c.empty()) return report;

    barcode reference = barcode_all(c, codomain_mode::kernel);

    for (std::uint64_t seed : seeds) {
        rng gen(seed);
        // One draw per group; singleton groups by default.
        std::map<std::pair<int, std::size_t>, rational> eps;
        filtered_chain_complex perturbed(c.prime(), c.gamma(), 0);
        std::map<std::size_t, rational> group_eps;
        for (int k = c.min_degree(); k <= c.max_degree(); ++k) {
            filtered_space sp = c.space(k);
            for (std::size_t i = 0; i < sp.dim(); ++i) {
                rational e;
                if (groups && groups->count(k)) {
                    std::size_t gid = groups->at(k).at(i);
                    auto it = group_eps.find(gid);
                    if (it == group_eps.end())
                        it = group_eps.emplace(gid, gen.symmetric(delta)).first;
                    e = it->second;
                } else {
                    e = gen.symmetric(delta);
                }
                sp.filtrations[i] += e;
            }
            perturbed.set_space(k, std::move(sp));
        }
        for (int k = c.min_degree(); k <= c.max_degree(); ++k) {
            filtered_map d = c.boundary(k);
            if (d.domain().dim() == 0) continue;
            perturbed.set_boundary(
                k, filtered_map(perturbed.space(k), perturbed.space(k - 1), d.columns()));
        }
        if (!monotone_boundaries(perturbed)) {
            ++report.seeds_skipped;
            continue;
        }
        ++report.seeds_run;
        barcode probed = barcode_all(perturbed, codomain_mode::kernel);
        for (int k = c.min_degree(); k <= c.max_degree(); ++k) {
            rational dev = compare_barcodes(reference, probed, k);
            if (dev > report.max_deviation) report.max_deviation = dev;
        }
    }
    report.within_bound = report.max_deviation <= report.bound;
    return report;
}

} // namespace novbar
