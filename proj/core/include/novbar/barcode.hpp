#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "novbar/complex.hpp"

namespace novbar {

// One bar: endpoint class l(x) mod Gamma (canonical representative),
// length l(y) - l(x) >= 0 or +inf, and the degree it was computed at.
struct bar {
    rational endpoint;
    ext_rational length;
    int degree = 0;
};

bool operator==(const bar& a, const bar& b);

enum class barcode_kind { verbose, concise };

struct barcode {
    std::vector<bar> bars;
    barcode_kind kind = barcode_kind::verbose;
    exponent_group gamma;

    barcode concise() const;
    std::size_t multiplicity(int degree) const;
    // Finite bar lengths at a degree, sorted descending.
    std::vector<rational> finite_lengths(int degree) const;
    std::size_t infinite_count(int degree) const;
    // Canonical report order: degree asc, then length desc (inf first),
    // then endpoint asc.
    void sort_canonical();
};

// True on multiset equality of (endpoint, length, degree).
bool same_barcode(const barcode& a, const barcode& b);

enum class codomain_mode { kernel, image };

// Degree-k verbose barcode: bars of the boundary restricted to
// d_{k+1}: C_{k+1} -> ker d_k.  Image mode restricts the codomain to
// Im d_{k+1} instead (no infinite bars) and requires vanishing homology at
// the degree, which it verifies first.
barcode barcode_of(const filtered_chain_complex& c, int degree, codomain_mode mode);
// All degrees of the complex at once.
barcode barcode_all(const filtered_chain_complex& c, codomain_mode mode);

// Barcode of a tensor product from the factor barcodes, by the elementary
// complex pairing rules.  Degree data must be present on every bar.
barcode tensor_barcode(const barcode& bc_c, const barcode& bc_d);

// max_i |beta_i(a) - beta_i(b)| over length-sorted finite bars at the
// degree, padding the shorter list with zeros.
rational compare_barcodes(const barcode& a, const barcode& b, int degree);

struct stability_report {
    rational bound;              // the 4*delta gate
    rational max_deviation = 0;  // largest observed bar-length deviation
    std::size_t seeds_run = 0;
    std::size_t seeds_skipped = 0; // perturbations that broke monotonicity
    bool within_bound = true;
};

// Perturbs generator filtrations by independent amounts <= delta (optionally
// tied together by groups: same group id moves as one), recomputes barcodes
// and reports the largest bar-length deviation against the 4*delta bound.
// Perturbed complexes that violate boundary monotonicity are skipped and
// counted.
stability_report stability_probe(const filtered_chain_complex& c, const rational& delta,
                                 const std::vector<std::uint64_t>& seeds,
                                 const std::map<int, std::vector<std::size_t>>* groups = nullptr);

} // namespace novbar
