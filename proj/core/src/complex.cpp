#include "novbar/complex.hpp"

#include <algorithm>

namespace novbar {

filtered_chain_complex::filtered_chain_complex(unsigned prime, exponent_group gamma,
                                               rational strictness)
    : prime_(prime), gamma_(std::move(gamma)), strictness_(std::move(strictness)) {
    if (strictness_ < 0) throw config_error("filtered_chain_complex: strictness must be >= 0");
}

void filtered_chain_complex::set_space(int degree, filtered_space space) {
    if (space.prime != prime_ || space.gamma != gamma_)
        throw config_error("filtered_chain_complex: space context mismatch");
    space.validate();
    spaces_.insert_or_assign(degree, std::move(space));
}

void filtered_chain_complex::set_boundary(int degree, filtered_map map) {
    if (!same_space(map.domain(), space(degree)) || !same_space(map.codomain(), space(degree - 1)))
        throw config_error("filtered_chain_complex: boundary shape mismatch at degree " +
                           std::to_string(degree));
    boundaries_.insert_or_assign(degree, std::move(map));
}

int filtered_chain_complex::min_degree() const {
    if (spaces_.empty()) throw domain_error("filtered_chain_complex: empty complex");
    return spaces_.begin()->first;
}

int filtered_chain_complex::max_degree() const {
    if (spaces_.empty()) throw domain_error("filtered_chain_complex: empty complex");
    return spaces_.rbegin()->first;
}

filtered_space filtered_chain_complex::space(int degree) const {
    auto it = spaces_.find(degree);
    if (it != spaces_.end()) return it->second;
    filtered_space empty;
    empty.prime = prime_;
    empty.gamma = gamma_;
    return empty;
}

filtered_map filtered_chain_complex::boundary(int degree) const {
    auto it = boundaries_.find(degree);
    if (it != boundaries_.end()) return it->second;
    return filtered_map::zero(space(degree), space(degree - 1));
}

std::size_t filtered_chain_complex::dim(int degree) const {
    auto it = spaces_.find(degree);
    return it == spaces_.end() ? 0 : it->second.dim();
}

complex_report verify_complex(const filtered_chain_complex& c) {
    complex_report report;
    if (c.empty()) return report;
    for (int k = c.min_degree(); k <= c.max_degree() + 1; ++k) {
        filtered_map dk = c.boundary(k);
        filtered_map dd = c.boundary(k - 1) * dk;
        for (std::size_t j = 0; j < dd.columns().size(); ++j)
            if (!dd.column(j).is_zero())
                report.violations.push_back({k, j, "d o d != 0"});
        for (std::size_t j = 0; j < dk.columns().size(); ++j) {
            ext_rational lv = filtration_of(dk.codomain(), dk.column(j));
            if (!lv.is_finite()) continue;
            if (lv.finite() > dk.domain().filtrations[j] - c.strictness())
                report.violations.push_back({k, j, "boundary not delta-strict"});
        }
    }
    return report;
}

std::size_t homology_rank(const filtered_chain_complex& c, int degree) {
    std::size_t n = c.dim(degree);
    std::size_t rank_out = unfiltered_rank(c.boundary(degree));
    std::size_t rank_in = unfiltered_rank(c.boundary(degree + 1));
    return n - rank_out - rank_in;
}

bool is_acyclic(const filtered_chain_complex& c) {
    if (c.empty()) return true;
    for (int k = c.min_degree(); k <= c.max_degree(); ++k)
        if (homology_rank(c, k) != 0) return false;
    return true;
}

graded_map graded_identity(const filtered_chain_complex& c) {
    graded_map m;
    for (int k = c.min_degree(); k <= c.max_degree(); ++k)
        if (c.dim(k) > 0) m.emplace(k, filtered_map::identity(c.space(k)));
    return m;
}

namespace {

graded_map graded_zip(const graded_map& a, const graded_map& b,
                      filtered_map (*op)(const filtered_map&, const filtered_map&)) {
    graded_map r;
    for (const auto& [k, ma] : a) {
        auto it = b.find(k);
        if (it == b.end()) r.emplace(k, ma);
        else r.emplace(k, op(ma, it->second));
    }
    for (const auto& [k, mb] : b)
        if (!a.count(k)) r.emplace(k, mb);
    return r;
}

} // namespace

graded_map graded_add(const graded_map& a, const graded_map& b) {
    return graded_zip(a, b, +[](const filtered_map& x, const filtered_map& y) { return x + y; });
}

graded_map graded_sub(const graded_map& a, const graded_map& b) {
    graded_map r;
    for (const auto& [k, ma] : a) {
        auto it = b.find(k);
        r.emplace(k, it == b.end() ? ma : ma - it->second);
    }
    for (const auto& [k, mb] : b)
        if (!a.count(k)) r.emplace(k, mb.scaled(-mb.domain().one_scalar()));
    return r;
}

graded_map graded_compose(const graded_map& a, const graded_map& b) {
    graded_map r;
    for (const auto& [k, mb] : b) {
        auto it = a.find(k);
        if (it != a.end()) r.emplace(k, it->second * mb);
    }
    return r;
}

graded_map graded_pow(const graded_map& a, unsigned exponent, const filtered_chain_complex& c) {
    graded_map result = graded_identity(c);
    if (exponent == 0) return result;
    graded_map base = a;
    unsigned e = exponent;
    while (e > 0) {
        if (e & 1u) result = graded_compose(result, base);
        e >>= 1u;
        if (e) base = graded_compose(base, base);
    }
    return result;
}

bool commutes_with_boundary(const filtered_chain_complex& c, const graded_map& m) {
    if (c.empty()) return true;
    for (int k = c.min_degree(); k <= c.max_degree(); ++k) {
        if (c.dim(k) == 0) continue;
        auto mk = m.find(k);
        if (mk == m.end()) throw config_error("commutes_with_boundary: map missing degree");
        filtered_map dk = c.boundary(k);
        filtered_map lhs = dk * mk->second;
        filtered_map rhs = c.dim(k - 1) > 0 && m.count(k - 1)
                               ? m.at(k - 1) * dk
                               : filtered_map::zero(dk.domain(), dk.codomain());
        for (std::size_t j = 0; j < lhs.columns().size(); ++j)
            if (!(lhs.column(j) == rhs.column(j))) return false;
    }
    return true;
}

ext_rational graded_shift_bound(const graded_map& m) {
    ext_rational bound = ext_rational::neg_infinity();
    for (const auto& [k, map] : m) {
        ext_rational b = map.shift_bound();
        if (b > bound) bound = b;
    }
    return bound;
}

bool graded_equal(const graded_map& a, const graded_map& b) {
    auto nonzero_degrees = [](const graded_map& m) {
        std::vector<int> ks;
        for (const auto& [k, map] : m)
            if (!map.is_zero()) ks.push_back(k);
        return ks;
    };
    if (nonzero_degrees(a) != nonzero_degrees(b)) return false;
    for (const auto& [k, ma] : a) {
        auto it = b.find(k);
        if (it == b.end()) {
            if (!ma.is_zero()) return false;
            continue;
        }
        for (std::size_t j = 0; j < ma.columns().size(); ++j)
            if (!(ma.column(j) == it->second.column(j))) return false;
    }
    return true;
}

cone_complex build_cone(const filtered_chain_complex& c, const graded_map& t,
                        const cyclotomic& scalar_shift) {
    if (c.empty()) throw precondition_error("build_cone: empty complex");
    if (!commutes_with_boundary(c, t)) throw precondition_error("build_cone: [T, d] != 0");
    if (graded_shift_bound(t) > ext_rational(rational(0)))
        throw precondition_error("build_cone: T raises filtration");

    const novikov_scalar shift_scalar =
        novikov_scalar::constant(scalar_shift, c.gamma());

    // cone_map = T - shift*I per degree
    graded_map cm;
    for (int k = c.min_degree(); k <= c.max_degree(); ++k) {
        if (c.dim(k) == 0) continue;
        auto it = t.find(k);
        if (it == t.end()) throw config_error("build_cone: T missing degree " + std::to_string(k));
        cm.emplace(k, it->second - filtered_map::identity(c.space(k)).scaled(shift_scalar));
    }

    filtered_chain_complex cone_cx(c.prime(), c.gamma(), 0);
    const int lo = c.min_degree(), hi = c.max_degree() + 1;
    for (int k = lo; k <= hi; ++k) {
        filtered_space sp;
        sp.prime = c.prime();
        sp.gamma = c.gamma();
        const filtered_space left = c.space(k), right = c.space(k - 1);
        for (std::size_t i = 0; i < left.dim(); ++i) {
            sp.labels.push_back("L:" + left.labels[i]);
            sp.filtrations.push_back(left.filtrations[i]);
        }
        for (std::size_t i = 0; i < right.dim(); ++i) {
            sp.labels.push_back("R:" + right.labels[i]);
            sp.filtrations.push_back(right.filtrations[i]);
        }
        cone_cx.set_space(k, std::move(sp));
    }
    const novikov_scalar one = c.one_scalar();
    for (int k = lo + 1; k <= hi; ++k) {
        filtered_map bd(cone_cx.space(k), cone_cx.space(k - 1));
        const filtered_map dk = c.boundary(k);
        const filtered_map dk1 = c.boundary(k - 1);
        const std::size_t lcols = c.dim(k), loff = c.dim(k - 1);
        // Left columns: d into the left block.
        for (std::size_t j = 0; j < lcols; ++j)
            for (const auto& [i, val] : dk.column(j).entries) bd.set_entry(i, j, val);
        // Right columns: -(T - shift*I) into the left block, -d into the right.
        auto cmit = cm.find(k - 1);
        for (std::size_t j = 0; j < c.dim(k - 1); ++j) {
            if (cmit != cm.end())
                for (const auto& [i, val] : cmit->second.column(j).entries)
                    bd.set_entry(i, lcols + j, -val);
            for (const auto& [i, val] : dk1.column(j).entries)
                bd.set_entry(loff + i, lcols + j, -val);
        }
        cone_cx.set_boundary(k, std::move(bd));
    }

    cone_complex cone(std::move(cone_cx), c, std::move(cm), scalar_shift);
    complex_report rep = verify_complex(cone.complex);
    if (!rep.ok()) throw verify_error("build_cone: cone failed d^2 = 0 re-check");
    return cone;
}

graded_map double_map(const cone_complex& cone, const graded_map& a) {
    const filtered_chain_complex& src = cone.source;
    if (!commutes_with_boundary(src, a)) throw precondition_error("double_map: [A, d] != 0");
    // [A, T] = 0, phrased against the stored cone map T - shift*I.
    graded_map at = graded_compose(a, cone.cone_map);
    graded_map ta = graded_compose(cone.cone_map, a);
    if (!graded_equal(at, ta)) throw precondition_error("double_map: [A, T] != 0");

    graded_map d;
    for (int k = cone.complex.min_degree(); k <= cone.complex.max_degree(); ++k) {
        if (cone.complex.dim(k) == 0) continue;
        filtered_map m(cone.complex.space(k), cone.complex.space(k));
        const std::size_t lcols = cone.left_dim(k);
        if (auto it = a.find(k); it != a.end())
            for (std::size_t j = 0; j < cone.left_dim(k); ++j)
                for (const auto& [i, val] : it->second.column(j).entries) m.set_entry(i, j, val);
        if (auto it = a.find(k - 1); it != a.end())
            for (std::size_t j = 0; j < cone.right_dim(k); ++j)
                for (const auto& [i, val] : it->second.column(j).entries)
                    m.set_entry(lcols + i, lcols + j, val);
        d.emplace(k, std::move(m));
    }
    if (!commutes_with_boundary(cone.complex, d))
        throw verify_error("double_map: block action does not commute with d_co");
    return d;
}

std::size_t tensor_complex::index_of(int m, int k, std::size_t i, std::size_t j) const {
    std::size_t offset = 0;
    for (const auto& [kc, nc] : dims_left) {
        if (kc >= k) break;
        auto it = dims_right.find(m - kc);
        if (it != dims_right.end()) offset += nc * it->second;
    }
    auto it = dims_right.find(m - k);
    if (it == dims_right.end()) throw config_error("tensor index: empty factor degree");
    return offset + i * it->second + j;
}

tensor_complex tensor_product(const filtered_chain_complex& c, const filtered_chain_complex& d) {
    if (c.prime() != d.prime() || !(c.gamma() == d.gamma()))
        throw config_error("tensor_product: context mismatch");
    tensor_complex t{filtered_chain_complex(c.prime(), c.gamma(),
                                            std::min(c.strictness(), d.strictness())),
                     {},
                     {}};
    for (int k = c.min_degree(); k <= c.max_degree(); ++k)
        if (c.dim(k)) t.dims_left[k] = c.dim(k);
    for (int k = d.min_degree(); k <= d.max_degree(); ++k)
        if (d.dim(k)) t.dims_right[k] = d.dim(k);

    const int lo = c.min_degree() + d.min_degree();
    const int hi = c.max_degree() + d.max_degree();
    for (int m = lo; m <= hi; ++m) {
        filtered_space sp;
        sp.prime = c.prime();
        sp.gamma = c.gamma();
        for (const auto& [k, nc] : t.dims_left) {
            auto it = t.dims_right.find(m - k);
            if (it == t.dims_right.end()) continue;
            const filtered_space sc = c.space(k), sd = d.space(m - k);
            for (std::size_t i = 0; i < nc; ++i)
                for (std::size_t j = 0; j < it->second; ++j) {
                    sp.labels.push_back(sc.labels[i] + "(x)" + sd.labels[j]);
                    sp.filtrations.push_back(sc.filtrations[i] + sd.filtrations[j]);
                }
        }
        t.complex.set_space(m, std::move(sp));
    }

    for (int m = lo + 1; m <= hi; ++m) {
        filtered_map bd(t.complex.space(m), t.complex.space(m - 1));
        if (bd.domain().dim() == 0 || bd.codomain().dim() == 0) {
            t.complex.set_boundary(m, std::move(bd));
            continue;
        }
        for (const auto& [k, nc] : t.dims_left) {
            auto itr = t.dims_right.find(m - k);
            if (itr == t.dims_right.end()) continue;
            const filtered_map dc = c.boundary(k);
            const filtered_map dd = d.boundary(m - k);
            const bool left_lands = t.dims_left.count(k - 1) && t.dims_right.count(m - k);
            const bool right_lands = t.dims_left.count(k) && t.dims_right.count(m - 1 - k);
            const bool odd = (k % 2) != 0;
            for (std::size_t i = 0; i < nc; ++i) {
                for (std::size_t j = 0; j < itr->second; ++j) {
                    const std::size_t col = t.index_of(m, k, i, j);
                    if (left_lands)
                        for (const auto& [i2, val] : dc.column(i).entries)
                            bd.set_entry(t.index_of(m - 1, k - 1, i2, j), col, val);
                    if (right_lands)
                        for (const auto& [j2, val] : dd.column(j).entries)
                            bd.set_entry(t.index_of(m - 1, k, i, j2), col, odd ? -val : val);
                }
            }
        }
        t.complex.set_boundary(m, std::move(bd));
    }

    complex_report rep = verify_complex(t.complex);
    for (const auto& v : rep.violations)
        if (v.what == "d o d != 0") throw verify_error("tensor_product: d^2 != 0");
    return t;
}

graded_map tensor_map_with_identity(const tensor_complex& t, const graded_map& s) {
    graded_map out;
    const filtered_chain_complex& cx = t.complex;
    for (int m = cx.min_degree(); m <= cx.max_degree(); ++m) {
        if (cx.dim(m) == 0) continue;
        filtered_map f(cx.space(m), cx.space(m));
        for (const auto& [k, nc] : t.dims_left) {
            auto itr = t.dims_right.find(m - k);
            if (itr == t.dims_right.end()) continue;
            auto its = s.find(k);
            if (its == s.end()) throw config_error("tensor_map_with_identity: S missing degree");
            for (std::size_t i = 0; i < nc; ++i)
                for (std::size_t j = 0; j < itr->second; ++j) {
                    const std::size_t col = t.index_of(m, k, i, j);
                    for (const auto& [i2, val] : its->second.column(i).entries)
                        f.set_entry(t.index_of(m, k, i2, j), col, val);
                }
        }
        out.emplace(m, std::move(f));
    }
    return out;
}

bool cone_tensor_iso_check(const filtered_chain_complex& c, const graded_map& t,
                           const filtered_chain_complex& d) {
    const cyclotomic zero_shift(c.prime());
    cone_complex cone_c = build_cone(c, t, zero_shift);
    tensor_complex cd = tensor_product(c, d);
    cone_complex lhs = build_cone(cd.complex, tensor_map_with_identity(cd, t), zero_shift);
    tensor_complex rhs = tensor_product(cone_c.complex, d);

    // Basis correspondence: L:(x_i in C_k)(x)(y_j in D_{m-k})  <->  (L:x_i)(x)y_j
    //                       R:(x_i in C_k)(x)(y_j in D_{m-1-k}) <->  (R:x_i)(x)y_j
    // where the right side sits in cone degree k resp. k+1.
    auto permutation = [&](int m) {
        std::vector<std::size_t> perm(lhs.complex.dim(m));
        const std::size_t lcols = lhs.left_dim(m);
        for (const auto& [k, nc] : cd.dims_left) {
            auto itr = cd.dims_right.find(m - k);
            if (itr != cd.dims_right.end()) {
                for (std::size_t i = 0; i < nc; ++i)
                    for (std::size_t j = 0; j < itr->second; ++j) {
                        // Cone_C(T)_k basis: left block first, so L:x_i is at i.
                        perm[cd.index_of(m, k, i, j)] = rhs.index_of(m, k, i, j);
                    }
            }
            auto itr2 = cd.dims_right.find(m - 1 - k);
            if (itr2 != cd.dims_right.end()) {
                for (std::size_t i = 0; i < nc; ++i)
                    for (std::size_t j = 0; j < itr2->second; ++j) {
                        const std::size_t cone_deg_dim_left = cone_c.left_dim(k + 1);
                        perm[lcols + cd.index_of(m - 1, k, i, j)] =
                            rhs.index_of(m, k + 1, cone_deg_dim_left + i, j);
                    }
            }
        }
        return perm;
    };

    if (lhs.complex.min_degree() != rhs.complex.min_degree() ||
        lhs.complex.max_degree() != rhs.complex.max_degree())
        return false;
    for (int m = lhs.complex.min_degree(); m <= lhs.complex.max_degree(); ++m) {
        if (lhs.complex.dim(m) != rhs.complex.dim(m)) return false;
        const auto perm = permutation(m);
        const filtered_space sl = lhs.complex.space(m), sr = rhs.complex.space(m);
        for (std::size_t i = 0; i < perm.size(); ++i)
            if (sl.filtrations[i] != sr.filtrations[perm[i]]) return false;
    }
    for (int m = lhs.complex.min_degree() + 1; m <= lhs.complex.max_degree(); ++m) {
        const auto pdom = permutation(m);
        const auto pcod = permutation(m - 1);
        const filtered_map bl = lhs.complex.boundary(m);
        const filtered_map br = rhs.complex.boundary(m);
        for (std::size_t j = 0; j < pdom.size(); ++j) {
            sparse_vec mapped;
            for (const auto& [i, val] : bl.column(j).entries)
                mapped.entries.emplace_back(pcod[i], val);
            std::sort(mapped.entries.begin(), mapped.entries.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            if (!(mapped == br.column(pdom[j]))) return false;
        }
    }
    return true;
}

cone_homotopy_iso_result cone_homotopy_iso(const filtered_chain_complex& c, const graded_map& phi,
                                           const graded_map& psi, const graded_map& k_homotopy) {
    if (graded_shift_bound(k_homotopy) > ext_rational(rational(0)))
        throw precondition_error("cone_homotopy_iso: K raises filtration");
    // Phi - Psi = K d + d K, degree by degree.
    for (int k = c.min_degree(); k <= c.max_degree(); ++k) {
        if (c.dim(k) == 0) continue;
        filtered_map lhs = phi.at(k) - psi.at(k);
        filtered_map dk = c.boundary(k);
        filtered_map dk1 = c.boundary(k + 1);
        filtered_map rhs = filtered_map::zero(c.space(k), c.space(k));
        if (c.dim(k - 1) > 0 && k_homotopy.count(k - 1)) rhs = rhs + k_homotopy.at(k - 1) * dk;
        if (c.dim(k + 1) > 0 && k_homotopy.count(k)) rhs = rhs + dk1 * k_homotopy.at(k);
        for (std::size_t j = 0; j < lhs.columns().size(); ++j)
            if (!(lhs.column(j) == rhs.column(j)))
                throw precondition_error("cone_homotopy_iso: homotopy identity fails");
    }

    const cyclotomic zero_shift(c.prime());
    cone_homotopy_iso_result result{build_cone(c, phi, zero_shift), build_cone(c, psi, zero_shift),
                                    {}, {}};
    const novikov_scalar one = c.one_scalar();
    for (int k = result.cone_phi.complex.min_degree(); k <= result.cone_phi.complex.max_degree();
         ++k) {
        if (result.cone_phi.complex.dim(k) == 0) continue;
        filtered_map fwd = filtered_map::identity(result.cone_phi.complex.space(k));
        filtered_map inv = fwd;
        const std::size_t lcols = result.cone_phi.left_dim(k);
        if (auto it = k_homotopy.find(k - 1); it != k_homotopy.end()) {
            for (std::size_t j = 0; j < result.cone_phi.right_dim(k); ++j)
                for (const auto& [i, val] : it->second.column(j).entries) {
                    fwd.set_entry(i, lcols + j, -val);
                    inv.set_entry(i, lcols + j, val);
                }
        }
        result.forward.emplace(k, std::move(fwd));
        result.inverse.emplace(k, std::move(inv));
    }

    // F is a filtered chain map with explicit inverse; re-check everything.
    for (int k = result.cone_phi.complex.min_degree() + 1;
         k <= result.cone_phi.complex.max_degree(); ++k) {
        if (result.cone_phi.complex.dim(k) == 0) continue;
        filtered_map lhs = result.forward.at(k - 1) * result.cone_phi.complex.boundary(k);
        filtered_map rhs = result.cone_psi.complex.boundary(k) * result.forward.at(k);
        for (std::size_t j = 0; j < lhs.columns().size(); ++j)
            if (!(lhs.column(j) == rhs.column(j)))
                throw verify_error("cone_homotopy_iso: F is not a chain map");
    }
    for (const auto& [k, f] : result.forward) {
        if (f.shift_bound() > ext_rational(rational(0)))
            throw verify_error("cone_homotopy_iso: F raises filtration");
        filtered_map round = result.inverse.at(k) * f;
        filtered_map id = filtered_map::identity(f.domain());
        for (std::size_t j = 0; j < round.columns().size(); ++j)
            if (!(round.column(j) == id.column(j)))
                throw verify_error("cone_homotopy_iso: F^-1 F != I");
    }
    return result;
}

} // namespace novbar
