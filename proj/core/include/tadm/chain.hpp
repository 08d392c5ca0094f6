#pragma once

#include "tadm/tensor.hpp"

#include <vector>

namespace tadm::chain {

/*! Open-boundary tensor chains.
 *
 * Sites   : rank-3 tensors [bond_left, phys, bond_right]; vectorized
 *           operators, states and double MPS all use this layout.
 * OpSites : rank-4 tensors [bond_left, phys_out, phys_in, bond_right];
 *           anything that acts on a Sites chain (Hamiltonian MPO on
 *           states, commutator superoperator on vectorized operators).
 *
 * Outer bonds have extent 1. Adjacent bond extents must match.
 */
using Sites = std::vector<Tensor>;
using OpSites = std::vector<Tensor>;

void validate(const Sites &a);
void validate_op(const OpSites &w);

long nsites(const Sites &a);
std::vector<long> bond_dims(const Sites &a);     // n+1 entries incl. outer bonds
std::vector<long> bond_dims_op(const OpSites &w);
long max_bond(const Sites &a);
long max_bond_op(const OpSites &w);
std::vector<long> phys_dims(const Sites &a);

Sites conj(const Sites &a);
Sites scale(Sites a, cplx factor); // folded into site 0
Sites zeros_like(const Sites &a);

/*! <a|b> = sum conj(a) b with matching site structure. */
cplx inner(const Sites &a, const Sites &b);
double norm(const Sites &a);

/*! <a|w|b> three-layer transfer contraction. */
cplx inner_op(const Sites &a, const OpSites &w, const Sites &b);

/*! w|b> without compression; bond extents multiply. */
Sites apply_op(const OpSites &w, const Sites &b);

/*! w2 . w1 as one operator chain; bond extents multiply. */
OpSites compose(const OpSites &w2, const OpSites &w1);

OpSites adjoint_op(const OpSites &w); // conj + swap of phys_out/phys_in

/*! ca*a + cb*b by bond-wise direct sum. */
Sites add(const Sites &a, const Sites &b, cplx ca, cplx cb);
OpSites add_op(const OpSites &a, const OpSites &b, cplx ca, cplx cb);

struct CompressReport {
    double input_norm = 0.0;
    double discarded_norm2 = 0.0; // sum of discarded squared singular values
    long max_bond = 0;            // largest bond after truncation
    bool bond_capped = false;     // true if max_bond limited the truncation
    double residual() const;      // relative Frobenius residual estimate
};

/*! SVD truncation sweep, in place.
 *
 * tol is a relative Frobenius residual target; max_bond < 1 means
 * unbounded. The chain is right-canonicalized first, then truncated left
 * to right, which makes discarded_norm2 an exact error accounting.
 * Result is left-canonical up to the last site.
 */
CompressReport compress(Sites &a, long max_bond, double tol);
CompressReport compress_op(OpSites &w, long max_bond, double tol);

void left_canonicalize(Sites &a);  // QR sweep; norm collects in the last site
void right_canonicalize(Sites &a); // RQ sweep; norm collects in the first site

/*! Singular values across cut c (between sites c-1 and c, c in [1, n-1]). */
std::vector<double> schmidt_values(Sites a, long cut);

/*! Materialize as a rank-n tensor [p_1, ..., p_n]; exponential, small n only. */
Tensor dense(const Sites &a);

/*! Successive-SVD factorization of a dense [p_1, ..., p_n] tensor. */
Sites from_dense(const Tensor &t, double tol, long max_bond);

// rank-3 <-> rank-4 views for operator chains with square physical legs
OpSites sites_to_op(const Sites &a, const std::vector<long> &phys_out);
Sites op_to_sites(const OpSites &w);

OpSites identity_op(const std::vector<long> &phys);

/*! Chain reversal: site order flipped, bonds swapped. */
Sites reverse(const Sites &a);
OpSites reverse_op(const OpSites &w);

/*! Physical transpose of every site (phys_out <-> phys_in), no conj. */
OpSites transpose_op(const OpSites &w);

/*! Concatenation of two chains into one over n1+n2 sites (outer product). */
Sites concat(const Sites &a, const Sites &b);
OpSites concat_op(const OpSites &a, const OpSites &b);

} // namespace tadm::chain
