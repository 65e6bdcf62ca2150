#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "novbar/barcode.hpp"
#include "novbar/complex.hpp"

namespace novbar {

// A self-mapping cone carrying a perturbed p-cyclic action:
//   rotation  R: free basis permutation of order p, filtration-exact;
//   t_action  T = R(I+N) with N strictly filtration-lowering, [T, d_co] = 0;
//   optionally a root action S with S^p = T whose permutation part
//   root_rotation has order p^2 (the Power_p situation).
struct cyclic_action_data {
    unsigned p = 2;
    cone_complex cone;
    std::map<int, std::vector<std::size_t>> rotation;
    graded_map t_action;
    std::optional<std::map<int, std::vector<std::size_t>>> root_rotation;
    std::optional<graded_map> s_action;
    rational hbar = 1; // strict lowering margin of the perturbations

    cyclic_action_data(unsigned p_, cone_complex cone_) : p(p_), cone(std::move(cone_)) {}

    // The permutation parts as filtered maps.
    graded_map rotation_map() const;
    graded_map root_rotation_map() const;
    // N = R^{-1} T - I per degree.
    graded_map perturbation() const;
};

// Re-checks every invariant of the data; throws verify_error on failure.
void verify_action_data(const cyclic_action_data& data);

struct repaired_actions {
    graded_map t_prime;                // exact order p, [T', d_co] = 0
    std::optional<graded_map> s_prime; // (S')^p = T' when S was present
};

// Removes the strictly-lower perturbation from T (and S): T' = T(I + X)^{1/p}
// with X = T^{-p}(I - T^p), via the binomial series, which terminates for a
// trivial exponent group (strictly-lower operators are nilpotent there) and
// is truncated at `order` otherwise.
repaired_actions repair_to_group_action(const cyclic_action_data& data,
                                        std::optional<rational> order = std::nullopt);

// Inverse of A with A^n = I - Q, Q strictly lowering: A^{n-1}(I + Q + Q^2 + ...).
filtered_map invert_perturbed(const filtered_map& a, unsigned n,
                              std::optional<rational> order = std::nullopt);

// Sum_{k>=0} coeffs(k) X^k for a strictly filtration-lowering X; exact when
// the series terminates (trivial Gamma), truncated at `order` otherwise.
filtered_map lower_shift_series(const filtered_map& x,
                                const std::function<rational(unsigned)>& coeffs,
                                std::optional<rational> order);

// Orthogonal T-invariant complement of an invariant subspace, built from the
// averaged projector ker((1/p) sum_g g pi g^{-1}).  Returns an orthogonal
// basis of the complement.
std::vector<sparse_vec> maschke_complement(const filtered_space& space,
                                           const filtered_map& action, unsigned p,
                                           const std::vector<sparse_vec>& invariant_subspace);

// The p eigenspaces of an exact order-p action, via the group-algebra
// idempotents pi_i = (1/p) sum_j xi^{-ij} T^j.  Entry i holds an orthogonal
// basis of the xi_p^i-eigenspace (possibly empty).
std::vector<std::vector<sparse_vec>> eigenspace_decomposition(const filtered_space& space,
                                                              const filtered_map& action,
                                                              unsigned p);
filtered_map eigen_projector(const filtered_space& space, const filtered_map& action, unsigned p,
                             unsigned index);

// Singular value decomposition of d_co: Cone_{k+1} -> Im(d_co) whose bases
// come grouped in size-p blocks generated by the root action S'.
struct p_tuple_block {
    unsigned eigen_index = 0;       // which xi_p^i sector the block lives in
    bool kernel = false;            // kernel block vs pivot block
    bool zero_length = false;       // pivot block contributing 0-length bars
    std::vector<std::size_t> members; // indices into the domain basis
};

struct p_tuple_svd {
    svd_result decomposition;
    std::vector<p_tuple_block> blocks;
    int degree = 0; // barcode degree k (map taken at k+1)
    unsigned p = 2;

    barcode to_barcode(const exponent_group& gamma) const;
};

// Requires the repaired root action; degree k means the boundary
// (d_co)_{k+1} restricted onto its image (homology must vanish at k).
p_tuple_svd p_cyclic_svd(const cyclic_action_data& data, const repaired_actions& repaired,
                         int degree);

// True iff every distinct (endpoint class, length) concise bar at every
// degree has multiplicity divisible by p.
bool verify_p_tuple_multiplicity(const barcode& bc, unsigned p);

// Degree-k divisibility-sensitive invariant: max_s (beta_{sp+1} - beta_{(s+1)p})
// over descending concise bar lengths, beta_j = 0 past the end.  Without a
// degree, the max over all degrees present.
rational divisibility_invariant(const barcode& bc, unsigned p,
                                std::optional<int> degree = std::nullopt);

// Seeded Power_p test fixture: a two-degree acyclic source complex carrying
// a free Z_{p^2} permutation, S = sigma(I + N) with N = dM + Md for a random
// strictly-lower M, T = S^p, coned over (T - xi_p I).
cyclic_action_data generate_power_p_fixture(unsigned p, std::size_t size, std::uint64_t seed);

} // namespace novbar
