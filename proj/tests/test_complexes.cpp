#include <doctest.h>

#include "novbar/barcode.hpp"
#include "test_support.hpp"

using namespace novbar;
using namespace novbar::testing;

TEST_CASE("verify_complex flags broken boundaries and strictness") {
    const exponent_group g;
    filtered_chain_complex cx(2, g, 0);
    // Three-degree chain with identity boundaries: d o d != 0.
    filtered_space c0, c1, c2;
    c0.prime = c1.prime = c2.prime = 2;
    c0.labels = {"x"};
    c0.filtrations = {rational(0)};
    c1.labels = {"y"};
    c1.filtrations = {rational(1)};
    c2.labels = {"z"};
    c2.filtrations = {rational(2)};
    cx.set_space(0, c0);
    cx.set_space(1, c1);
    cx.set_space(2, c2);
    filtered_map d1(c1, c0), d2(c2, c1);
    d1.set_entry(0, 0, cx.one_scalar());
    d2.set_entry(0, 0, cx.one_scalar());
    cx.set_boundary(1, d1);
    cx.set_boundary(2, d2);
    complex_report rep = verify_complex(cx);
    REQUIRE(!rep.ok());
    CHECK(rep.violations[0].what == "d o d != 0");

    // Strictness violation: a boundary that keeps the level.
    filtered_chain_complex strict(2, g, rational(1));
    filtered_space e0 = c0, e1 = c1;
    e1.filtrations = {rational(1, 2)}; // drop of 1/2 < required 1
    strict.set_space(0, e0);
    strict.set_space(1, e1);
    filtered_map db(e1, e0);
    db.set_entry(0, 0, strict.one_scalar());
    strict.set_boundary(1, db);
    complex_report rep2 = verify_complex(strict);
    REQUIRE(!rep2.ok());
    CHECK(rep2.violations[0].what == "boundary not delta-strict");
}

TEST_CASE("random oracle complexes verify and match their elementary barcode") {
    rng gen(13);
    for (int trial = 0; trial < 40; ++trial) {
        const unsigned p = gen.chance(1, 2) ? 2 : 3;
        const exponent_group g =
            gen.chance(1, 2) ? exponent_group({rational(1, 2)}) : exponent_group();
        oracle_complex oc = rand_complex(gen, p, g, 0, 2, 4);
        CHECK(verify_complex(oc.complex).ok());
        barcode computed = barcode_all(oc.complex, codomain_mode::kernel);
        CHECK(same_barcode(computed, oc.expected));
    }
}

TEST_CASE("build_cone: identity with shift 1 doubles the barcode") {
    rng gen(17);
    oracle_complex oc = rand_complex(gen, 2, exponent_group(), 0, 2, 3);
    // T - 1*I = 0: the cone splits as C (+) C[1].
    cone_complex cone =
        build_cone(oc.complex, graded_identity(oc.complex), cyclotomic::from_long(2, 1));
    CHECK(verify_complex(cone.complex).ok());
    barcode direct = barcode_all(cone.complex, codomain_mode::kernel);
    barcode expect = oc.expected;
    for (bar b : oc.expected.bars) {
        b.degree += 1;
        expect.bars.push_back(b);
    }
    CHECK(same_barcode(direct, expect));
}

TEST_CASE("build_cone rejects non-chain maps and verifies d^2 on fuzz") {
    rng gen(19);
    for (int trial = 0; trial < 25; ++trial) {
        const unsigned p = gen.chance(1, 2) ? 2 : 3;
        oracle_complex oc = rand_complex(gen, p, exponent_group(), 0, 2, 4);
        graded_map t = rand_chain_endo(gen, oc.complex, gen.next());
        cone_complex cone = build_cone(oc.complex, t, cyclotomic::zeta(p, 1));
        CHECK(verify_complex(cone.complex).ok());
        // Left/right labels tag the two summands.
        CHECK(cone.complex.space(1).labels[0].substr(0, 2) == "L:");
    }
    // A map that is not a chain map must be rejected.
    oracle_complex oc = rand_complex(gen, 2, exponent_group(), 0, 1, 3, 0);
    if (!oc.complex.boundary(1).is_zero()) {
        graded_map bad;
        for (int k = 0; k <= 1; ++k) {
            filtered_map m = filtered_map::zero(oc.complex.space(k), oc.complex.space(k));
            if (k == 0 && oc.complex.dim(0) > 0) m.set_entry(0, 0, oc.complex.one_scalar());
            bad.emplace(k, std::move(m));
        }
        CHECK_THROWS_AS(build_cone(oc.complex, bad, cyclotomic::from_long(2, 1)),
                        precondition_error);
    }
}

TEST_CASE("double_map: identity, block power, commutator guards") {
    rng gen(29);
    oracle_complex oc = rand_complex(gen, 3, exponent_group(), 0, 2, 3);
    graded_map t = rand_chain_endo(gen, oc.complex, 4242);
    cone_complex cone = build_cone(oc.complex, t, cyclotomic::zeta(3, 1));

    graded_map d_id = double_map(cone, graded_identity(oc.complex));
    CHECK(graded_equal(d_id, graded_identity(cone.complex)));

    // D_T itself is a chain map on the cone and D_T^p = D_{T^p}.
    graded_map d_t = double_map(cone, t);
    CHECK(commutes_with_boundary(cone.complex, d_t));
    graded_map d_t3 = graded_pow(d_t, 3, cone.complex);
    graded_map t3 = graded_pow(t, 3, oc.complex);
    CHECK(graded_equal(d_t3, double_map(cone, t3)));
}

TEST_CASE("tensor_product: unit factor, Koszul signs, Kunneth ranks") {
    const exponent_group g;
    rng gen(31);
    oracle_complex oc = rand_complex(gen, 2, g, 0, 2, 3);

    filtered_chain_complex unit(2, g, 0);
    filtered_space pt;
    pt.prime = 2;
    pt.labels = {"pt"};
    pt.filtrations = {rational(0)};
    unit.set_space(0, pt);
    tensor_complex tc = tensor_product(oc.complex, unit);
    for (int k = oc.complex.min_degree(); k <= oc.complex.max_degree(); ++k) {
        CHECK(tc.complex.dim(k) == oc.complex.dim(k));
        CHECK(tc.complex.space(k).filtrations == oc.complex.space(k).filtrations);
        for (std::size_t j = 0; j < oc.complex.dim(k); ++j)
            CHECK(tc.complex.boundary(k).column(j) == oc.complex.boundary(k).column(j));
    }

    // Smallest Koszul sign case: two two-term complexes.
    filtered_chain_complex a(2, g, 0), b(2, g, 0);
    for (auto* cxp : {&a, &b}) {
        filtered_space s0, s1;
        s0.prime = s1.prime = 2;
        s0.labels = {cxp == &a ? "x" : "z"};
        s0.filtrations = {rational(0)};
        s1.labels = {cxp == &a ? "y" : "w"};
        s1.filtrations = {rational(1)};
        cxp->set_space(0, s0);
        cxp->set_space(1, s1);
        filtered_map d(s1, s0);
        d.set_entry(0, 0, cxp->one_scalar());
        cxp->set_boundary(1, d);
    }
    tensor_complex ab = tensor_product(a, b);
    CHECK(ab.complex.dim(0) == 1);
    CHECK(ab.complex.dim(1) == 2);
    CHECK(ab.complex.dim(2) == 1);
    // d(y(x)w) = x(x)w - y(x)dw with the sign from |y| = 1.
    filtered_map d2 = ab.complex.boundary(2);
    const novikov_scalar one = ab.complex.one_scalar();
    CHECK(d2.entry(ab.index_of(1, 0, 0, 0), 0) == one);  // x (x) w
    CHECK(d2.entry(ab.index_of(1, 1, 0, 0), 0) == -one); // y (x) z gets the minus
    CHECK(verify_complex(ab.complex).ok());

    // Kunneth over a field: homology ranks multiply.
    for (int trial = 0; trial < 10; ++trial) {
        oracle_complex c1 = rand_complex(gen, 2, g, 0, 2, 3);
        oracle_complex c2 = rand_complex(gen, 2, g, 0, 1, 3);
        tensor_complex prod = tensor_product(c1.complex, c2.complex);
        for (int m = prod.complex.min_degree(); m <= prod.complex.max_degree(); ++m) {
            std::size_t expect = 0;
            for (int k = c1.complex.min_degree(); k <= c1.complex.max_degree(); ++k) {
                const int j = m - k;
                if (j < c2.complex.min_degree() || j > c2.complex.max_degree()) continue;
                expect += homology_rank(c1.complex, k) * homology_rank(c2.complex, j);
            }
            CHECK(homology_rank(prod.complex, m) == expect);
        }
    }
}

TEST_CASE("cone_tensor_iso_check: unit factor and fuzz") {
    rng gen(37);
    const exponent_group g;
    // D = unit complex: the cones agree on the nose.
    oracle_complex oc = rand_complex(gen, 2, g, 0, 2, 3);
    graded_map t = rand_chain_endo(gen, oc.complex, 999);
    filtered_chain_complex unit(2, g, 0);
    filtered_space pt;
    pt.prime = 2;
    pt.labels = {"pt"};
    pt.filtrations = {rational(0)};
    unit.set_space(0, pt);
    CHECK(cone_tensor_iso_check(oc.complex, t, unit));

    for (int trial = 0; trial < 100; ++trial) {
        const unsigned p = gen.chance(1, 2) ? 2 : 3;
        oracle_complex c = rand_complex(gen, p, g, 0, gen.chance(1, 2) ? 1 : 2, 4);
        oracle_complex d = rand_complex(gen, p, g, 0, 1, 4);
        graded_map s = rand_chain_endo(gen, c.complex, gen.next());
        CHECK(cone_tensor_iso_check(c.complex, s, d.complex));
    }
}

TEST_CASE("cone_homotopy_iso: trivial homotopy, random homotopies, barcode match") {
    rng gen(41);
    // K = 0, Phi = Psi: F is the identity.
    oracle_complex oc = rand_complex(gen, 2, exponent_group(), 0, 2, 3);
    graded_map phi = rand_chain_endo(gen, oc.complex, 512);
    graded_map zero_k;
    cone_homotopy_iso_result triv = cone_homotopy_iso(oc.complex, phi, phi, zero_k);
    CHECK(graded_equal(triv.forward, graded_identity(triv.cone_phi.complex)));

    for (int trial = 0; trial < 15; ++trial) {
        const unsigned p = gen.chance(1, 2) ? 2 : 3;
        oracle_complex c = rand_complex(gen, p, exponent_group(), 0, 2, 4);
        graded_map base = rand_chain_endo(gen, c.complex, gen.next());
        graded_map k_map = random_strict_lower_up_map(c.complex, gen.next());
        graded_map psi = graded_sub(base, homotopy_exact_part(c.complex, k_map));
        // Phi - Psi = dK + Kd; the construction re-verifies everything.
        cone_homotopy_iso_result iso = cone_homotopy_iso(c.complex, base, psi, k_map);
        barcode phi_bars = barcode_all(iso.cone_phi.complex, codomain_mode::kernel);
        barcode psi_bars = barcode_all(iso.cone_psi.complex, codomain_mode::kernel);
        CHECK(same_barcode(phi_bars, psi_bars));
    }
}
