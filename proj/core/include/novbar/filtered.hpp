#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "novbar/kfield.hpp"
#include "novbar/novikov.hpp"

namespace novbar {

// Sparse coordinate vector over the Novikov field; entries sorted by index,
// zero coefficients never stored.
struct sparse_vec {
    std::vector<std::pair<std::size_t, novikov_scalar>> entries;

    bool is_zero() const { return entries.empty(); }
    static sparse_vec unit(std::size_t index, const novikov_scalar& one);
    const novikov_scalar* find(std::size_t index) const;
};

bool operator==(const sparse_vec& a, const sparse_vec& b);

// ca*a + cb*b
sparse_vec combine(const novikov_scalar& ca, const sparse_vec& a, const novikov_scalar& cb,
                   const sparse_vec& b);
sparse_vec add(const sparse_vec& a, const sparse_vec& b);
sparse_vec sub(const sparse_vec& a, const sparse_vec& b);
sparse_vec scale(const novikov_scalar& c, const sparse_vec& a);

// Filtered vector space over Lambda^{K,Gamma}: a distinguished orthogonal
// basis with a filtration level per basis element.  The level of any
// combination is max_i(l(e_i) - nu(lambda_i)).
struct filtered_space {
    unsigned prime = 2;
    exponent_group gamma;
    std::vector<std::string> labels;
    std::vector<rational> filtrations;

    std::size_t dim() const { return labels.size(); }
    void validate();
    novikov_scalar zero_scalar() const { return novikov_scalar::zero(prime, gamma); }
    novikov_scalar one_scalar() const { return novikov_scalar::one(prime, gamma); }
};

bool same_space(const filtered_space& a, const filtered_space& b);

// l(v) via the orthogonality max rule; -inf for the zero vector.
ext_rational filtration_of(const filtered_space& space, const sparse_vec& v);

// Rescales each vector to level 0 and keeps, per basis direction, the
// K-coefficient sitting exactly at the top level; strictly lower terms
// drop to zero.  Each input must be nonzero.
kmatrix reduce_to_zero_level(const filtered_space& space, const std::vector<sparse_vec>& vectors);
kvec reduce_vector_to_zero_level(const filtered_space& space, const sparse_vec& v);

// True iff the zero-level reductions are K-linearly independent.
bool is_orthogonal(const filtered_space& space, const std::vector<sparse_vec>& vectors);

// Linear map between filtered spaces, stored column-wise and sparse.
class filtered_map {
  public:
    filtered_map(filtered_space domain, filtered_space codomain);
    filtered_map(filtered_space domain, filtered_space codomain, std::vector<sparse_vec> columns);

    static filtered_map identity(const filtered_space& space);
    static filtered_map zero(const filtered_space& domain, const filtered_space& codomain) {
        return filtered_map(domain, codomain);
    }

    const filtered_space& domain() const { return domain_; }
    const filtered_space& codomain() const { return codomain_; }
    const std::vector<sparse_vec>& columns() const { return cols_; }
    const sparse_vec& column(std::size_t j) const { return cols_.at(j); }
    void set_entry(std::size_t row, std::size_t col, const novikov_scalar& value);
    novikov_scalar entry(std::size_t row, std::size_t col) const;

    bool is_zero() const;
    sparse_vec apply(const sparse_vec& v) const;

    filtered_map operator+(const filtered_map& rhs) const;
    filtered_map operator-(const filtered_map& rhs) const;
    filtered_map operator*(const filtered_map& rhs) const; // composition: this after rhs
    filtered_map scaled(const novikov_scalar& c) const;
    filtered_map pow(unsigned exponent) const; // endomorphisms only

    // Largest column filtration shift l_cod(A e_j) - l_dom(e_j);
    // -inf for the zero map.  A map is delta-shift-bounded iff this <= delta.
    ext_rational shift_bound() const;
    bool commutes_with(const filtered_map& other) const;

  private:
    filtered_space domain_, codomain_;
    std::vector<sparse_vec> cols_;
};

// Rank by plain Gaussian elimination over the field, ignoring filtrations:
// the independent oracle the filtered SVD is checked against.
std::size_t unfiltered_rank(const std::vector<sparse_vec>& columns);
std::size_t unfiltered_rank(const filtered_map& map);

// Solves A x = b exactly by elimination.  Divisions only ever happen by
// monomial scalars; with a non-monomial pivot and no way around it this
// throws (exact solving beyond that regime needs a truncation order, which
// no current caller requires).  Returns nullopt when b is outside the span.
std::optional<sparse_vec> lambda_solve(const std::vector<sparse_vec>& columns, const sparse_vec& b,
                                       const novikov_scalar& one);

// Inverse of a square invertible matrix given by columns; same division
// caveat as lambda_solve.
std::vector<sparse_vec> lambda_invert(const std::vector<sparse_vec>& columns,
                                      const novikov_scalar& one);

} // namespace novbar
