#pragma once

#include <cstdint>
#include <optional>

#include "novbar/barcode.hpp"
#include "novbar/complex.hpp"

namespace novbar {

// Sign data of a fixed point: 2p entries in {+1, -1}, entry 2j carrying
// sign(x_{2j}) and entry 2j+1 carrying -sign(y_{2j}).
struct sign_sequence {
    std::vector<int> entries;

    unsigned pairs() const { return static_cast<unsigned>(entries.size() / 2); }
    static sign_sequence from_mask(unsigned p, std::uint32_t mask); // bit set => +1
    std::uint32_t mask() const;
    std::string str() const; // e.g. "+-++-+"
};

// 1 + (1/2) sum (sign(x_{2j}) - sign(y_{2j})); lands in [-p+1, p+1].
int cz_index(const sign_sequence& seq);

// Combinatorial model of the degree-graded fixed-point complex of the p-th
// power flow: p copies (a free rotation orbit) of the exterior Koszul
// complex on 2p generators, graded by the sign-sequence index, with actions
// lambda * (k+p-1) + an orbit-constant seeded jitter below lambda/2.
struct eggbeater_model {
    unsigned p = 2;
    rational lambda;
    std::uint64_t seed = 0;
    filtered_chain_complex complex;
    graded_map rotation;                                 // the free Z_p chain map
    std::map<int, std::vector<std::size_t>> rotation_perm;
    std::map<int, std::vector<std::size_t>> orbit_group; // orbit id per generator
    std::map<int, std::vector<std::uint32_t>> masks;     // sign mask per generator

    eggbeater_model(unsigned p_, rational lambda_, std::uint64_t seed_,
                    filtered_chain_complex cx)
        : p(p_), lambda(std::move(lambda_)), seed(seed_), complex(std::move(cx)) {}
};

eggbeater_model build_model(unsigned p, const rational& lambda, std::uint64_t seed);

// Seeded degree-(+1) map with strictly filtration-lowering entries; entries
// are drawn only where the filtration genuinely drops, so a complex without
// such room (the egg-beater model's degree-monotone actions) yields zero.
graded_map random_strict_lower_up_map(const filtered_chain_complex& c, std::uint64_t seed);
// dM + Md for a degree-(+1) map M.
graded_map homotopy_exact_part(const filtered_chain_complex& c, const graded_map& m);
// Their composition: a homotopy-exact strictly-lower perturbation.
graded_map random_strict_lower_homotopy(const filtered_chain_complex& c, std::uint64_t seed);

struct egg_degree_row {
    int degree = 0;
    std::size_t verbose = 0;
    std::size_t concise = 0;
    std::size_t zero_length = 0;
    std::optional<rational> min_positive_length;
};

struct egg_report {
    unsigned p = 2;
    unsigned xi_power = 1;
    rational lambda;
    std::uint64_t seed = 0;
    bool perturbed = false;
    std::vector<egg_degree_row> per_degree;
    std::size_t verbose_total = 0;
    std::size_t concise_total = 0;
    std::size_t zero_length_total = 0;
    std::optional<rational> min_positive_length;
    std::vector<int> nondivisible_degrees; // degrees with p not dividing concise m_k
    barcode bars;                          // full verbose barcode of the cone
};

// Builds Cone(T - xi_p^q I) over the model (T = rotation, optionally
// composed with a homotopy perturbation) and reports all degree barcodes in
// image mode.
egg_report egg_cone_report(const eggbeater_model& model, unsigned xi_power,
                           std::optional<std::uint64_t> perturb_seed = std::nullopt);

// The circulant matrix of (R_p - xi_p I) on one free orbit: -xi_p diagonal,
// unit subdiagonal, unit corner.  Rank p-1.
filtered_map q_matrix(unsigned p);
// Spanning vector of its kernel: (xi^{p-1}, xi^{p-2}, ..., 1).
sparse_vec q_kernel_vector(unsigned p);

// qb_k = sum_s b_{k+2Ns}; chern_number == 0 encodes "minimal Chern number
// effectively infinite" (qb_k = b_k).
long quantum_betti(const std::vector<long>& betti, unsigned chern_number, int k);

struct product_multiplicity_result {
    bigint m1;           // sum_{k=-p+1}^{p+1} C(2p, k+p-1) * qb_{1-k}
    unsigned residue;    // (qb_p + 2 qb_0 + qb_{-p}) mod p
    bool divisible;      // p | m1
};

product_multiplicity_result product_multiplicity(unsigned p, const std::vector<long>& betti,
                                                 unsigned chern_number);

struct crosscheck_result {
    bool agree = false;
    std::size_t direct_m1 = 0;      // degree-1 concise count of the tensor cone
    std::size_t tensor_rule_m1 = 0; // same count via the barcode pairing rules
    bigint formula_m1;              // product_multiplicity
    std::optional<rational> direct_min_length;
    std::optional<rational> egg_min_length; // over the degrees the factor hits
    std::vector<int> mismatched_degrees;
};

// Degree-1 concise multiplicity of Cone((T tensor I) - xi I) over
// model (x) D, computed by direct decomposition and by the tensor rules on
// the factor barcodes, checked against the closed formula.  D is the
// zero-boundary stand-in with the given degree ranks (filtration 0).
crosscheck_result product_cone_crosscheck(const eggbeater_model& model, unsigned xi_power,
                                          const std::vector<long>& ranks);

} // namespace novbar
