#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "novbar/svd.hpp"

namespace novbar {

// Filtered chain complex: one filtered space per degree on a contiguous
// range, boundary maps C_k -> C_{k-1}, and a strictness margin delta with
// l(d c) <= l(c) - delta on every basis element.
class filtered_chain_complex {
  public:
    filtered_chain_complex(unsigned prime, exponent_group gamma, rational strictness = 0);

    unsigned prime() const { return prime_; }
    const exponent_group& gamma() const { return gamma_; }
    const rational& strictness() const { return strictness_; }
    void set_strictness(rational s) { strictness_ = std::move(s); }

    void set_space(int degree, filtered_space space);
    void set_boundary(int degree, filtered_map map); // C_degree -> C_{degree-1}

    bool empty() const { return spaces_.empty(); }
    int min_degree() const;
    int max_degree() const;
    // Zero-dimensional space outside the stored range.
    filtered_space space(int degree) const;
    // Zero map of the right shape when absent.
    filtered_map boundary(int degree) const;
    std::size_t dim(int degree) const;

    novikov_scalar zero_scalar() const { return novikov_scalar::zero(prime_, gamma_); }
    novikov_scalar one_scalar() const { return novikov_scalar::one(prime_, gamma_); }

  private:
    unsigned prime_;
    exponent_group gamma_;
    rational strictness_;
    std::map<int, filtered_space> spaces_;
    std::map<int, filtered_map> boundaries_;
};

struct complex_violation {
    int degree;
    std::size_t column;
    std::string what;
};

struct complex_report {
    std::vector<complex_violation> violations;
    bool ok() const { return violations.empty(); }
};

// Checks d o d = 0 and the delta-strictness of every boundary column.
complex_report verify_complex(const filtered_chain_complex& c);

// dim ker(d_k) - rank(d_{k+1}), computed by unfiltered elimination --
// deliberately independent of the filtered SVD path.
std::size_t homology_rank(const filtered_chain_complex& c, int degree);
bool is_acyclic(const filtered_chain_complex& c);

// Degree-preserving endomorphism given per degree.
using graded_map = std::map<int, filtered_map>;

graded_map graded_identity(const filtered_chain_complex& c);
graded_map graded_add(const graded_map& a, const graded_map& b);
graded_map graded_sub(const graded_map& a, const graded_map& b);
graded_map graded_compose(const graded_map& a, const graded_map& b);
graded_map graded_pow(const graded_map& a, unsigned exponent,
                      const filtered_chain_complex& c);
// True iff [m, d] = 0 on every degree.
bool commutes_with_boundary(const filtered_chain_complex& c, const graded_map& m);
// Max over degrees of the per-column filtration shift; -inf for zero.
ext_rational graded_shift_bound(const graded_map& m);
bool graded_equal(const graded_map& a, const graded_map& b);

// Self-mapping cone of (T - shift*I): degree k is C_k (+) C_{k-1} with
// labels "L:..." / "R:...", boundary [[d, -(T - shift*I)], [0, -d]] and the
// max filtration.
struct cone_complex {
    filtered_chain_complex complex;
    filtered_chain_complex source;
    graded_map cone_map; // the map (T - shift*I) the cone was taken of
    cyclotomic scalar_shift;

    cone_complex(filtered_chain_complex cx, filtered_chain_complex src, graded_map cm,
                 cyclotomic shift)
        : complex(std::move(cx)), source(std::move(src)), cone_map(std::move(cm)),
          scalar_shift(std::move(shift)) {}

    std::size_t left_dim(int degree) const { return source.dim(degree); }
    std::size_t right_dim(int degree) const { return source.dim(degree - 1); }
};

// T must be a 0-shift chain map on C; both checked.
cone_complex build_cone(const filtered_chain_complex& c, const graded_map& t,
                        const cyclotomic& scalar_shift);

// Block-diagonal action (A x1, A x2) on the cone; requires [A, d] = 0 and
// [A, T] = 0 and re-verifies the chain-map property against d_co.
graded_map double_map(const cone_complex& cone, const graded_map& a);

// Koszul-signed tensor product with the sum filtration.
struct tensor_complex {
    filtered_chain_complex complex;
    std::map<int, std::size_t> dims_left, dims_right;

    // Position of (x_i in C_k) tensor (y_j in D_{m-k}) within degree m.
    std::size_t index_of(int m, int k, std::size_t i, std::size_t j) const;
};

tensor_complex tensor_product(const filtered_chain_complex& c, const filtered_chain_complex& d);

// (S tensor I) on the tensor complex, degree by degree.
graded_map tensor_map_with_identity(const tensor_complex& t, const graded_map& s);

// Entrywise check of the canonical chain isomorphism between
// Cone_{C(x)D}(T (x) I) and the tensor of Cone_C(T) with D.
bool cone_tensor_iso_check(const filtered_chain_complex& c, const graded_map& t,
                           const filtered_chain_complex& d);

// Filtered isomorphism [[I, -K], [0, I]] between cones of homotopic maps.
struct cone_homotopy_iso_result {
    cone_complex cone_phi;
    cone_complex cone_psi;
    graded_map forward; // Cone(Phi) -> Cone(Psi)
    graded_map inverse;
};

cone_homotopy_iso_result cone_homotopy_iso(const filtered_chain_complex& c, const graded_map& phi,
                                           const graded_map& psi, const graded_map& k_homotopy);

} // namespace novbar
