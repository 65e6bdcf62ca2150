#pragma once

#include <optional>
#include <string>
#include <vector>

#include "novbar/cyclotomic.hpp"
#include "novbar/exponent_group.hpp"
#include "novbar/rational.hpp"

namespace novbar {

// Element of the Novikov field Lambda^{K,Gamma} with K = Q(xi_p): a finite
// formal sum of terms a_g t^g with g in Gamma and a_g in K, sorted by
// strictly increasing exponent, no zero coefficients stored.
//
// A scalar may carry a truncation order: coefficients at exponents >= the
// order are unknown.  Every arithmetic operation propagates the tightest
// bound implied by its inputs, so exactness is never silently overstated.
class novikov_scalar {
  public:
    struct term {
        rational exponent;
        cyclotomic coeff;
    };

    novikov_scalar(unsigned prime, exponent_group gamma);

    static novikov_scalar zero(unsigned prime, const exponent_group& gamma) {
        return novikov_scalar(prime, gamma);
    }
    static novikov_scalar constant(const cyclotomic& c, const exponent_group& gamma);
    static novikov_scalar one(unsigned prime, const exponent_group& gamma) {
        return constant(cyclotomic::from_long(prime, 1), gamma);
    }
    static novikov_scalar monomial(const rational& exponent, const cyclotomic& coeff,
                                   const exponent_group& gamma);
    static novikov_scalar from_terms(unsigned prime, const exponent_group& gamma,
                                     std::vector<term> terms,
                                     std::optional<rational> truncation = std::nullopt);

    unsigned prime() const { return prime_; }
    const exponent_group& gamma() const { return gamma_; }
    const std::vector<term>& terms() const { return terms_; }
    const std::optional<rational>& truncation() const { return trunc_; }
    bool is_exact() const { return !trunc_.has_value(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_monomial() const { return terms_.size() == 1; }
    // A plain element of K sitting at exponent 0 (or zero).
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent == 0);
    }

    // nu: exponent of the first term; +inf for (the known part of) zero.
    ext_rational valuation() const;
    const cyclotomic& leading_coeff() const;
    // Coefficient at a given exponent (zero element of K when absent).
    cyclotomic coeff_at(const rational& exponent) const;
    cyclotomic constant_coeff() const { return coeff_at(rational(0)); }

    novikov_scalar operator-() const;
    novikov_scalar& operator+=(const novikov_scalar& rhs);
    novikov_scalar& operator-=(const novikov_scalar& rhs);
    novikov_scalar& operator*=(const novikov_scalar& rhs);
    friend novikov_scalar operator+(novikov_scalar a, const novikov_scalar& b) { return a += b; }
    friend novikov_scalar operator-(novikov_scalar a, const novikov_scalar& b) { return a -= b; }
    friend novikov_scalar operator*(novikov_scalar a, const novikov_scalar& b) { return a *= b; }

    novikov_scalar& operator*=(const cyclotomic& c);
    novikov_scalar& operator*=(const rational& s);
    friend novikov_scalar operator*(novikov_scalar a, const cyclotomic& c) { return a *= c; }
    friend novikov_scalar operator*(novikov_scalar a, const rational& s) { return a *= s; }

    // Equality of stored data (terms and truncation).
    friend bool operator==(const novikov_scalar& a, const novikov_scalar& b) {
        return a.prime_ == b.prime_ && a.gamma_ == b.gamma_ && a.trunc_ == b.trunc_ &&
               a.terms_same(b);
    }
    friend bool operator!=(const novikov_scalar& a, const novikov_scalar& b) { return !(a == b); }

    novikov_scalar pow(unsigned exponent) const;

    // Multiplicative inverse.  Exact (no order needed) for monomials; for a
    // genuine series the geometric-series expansion runs up to `order`.
    novikov_scalar invert(std::optional<rational> order = std::nullopt) const;

    // Drops terms at exponents >= order and records the bound.
    novikov_scalar& truncate_at(const rational& order);

    std::string str() const;

  private:
    void check_compatible(const novikov_scalar& rhs) const;
    void normalize();
    bool terms_same(const novikov_scalar& rhs) const;

    unsigned prime_;
    exponent_group gamma_;
    std::vector<term> terms_;
    std::optional<rational> trunc_;
};

// Polynomial over the Novikov field, coefficient of x^i at index i.
using novikov_poly = std::vector<novikov_scalar>;

// Solves x^p = xi_p^q + h(x) for h with strictly-positive-valuation
// coefficients and deg h < p, by the exponent-by-exponent induction that
// the irreducible condition licenses.  Returns nullopt when p does not
// divide q (no solution exists in Lambda).  `root_choice` selects the
// branch: the zero-level value of the root is xi_p^root_choice.
std::optional<novikov_scalar> solve_perturbed_unity_root(const novikov_poly& h, unsigned prime,
                                                         long target_power,
                                                         const exponent_group& gamma,
                                                         const std::optional<rational>& order,
                                                         long root_choice = 0);

} // namespace novbar
