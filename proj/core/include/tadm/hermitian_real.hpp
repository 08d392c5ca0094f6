#pragma once

#include "tadm/chain.hpp"
#include "tadm/mpo.hpp"
#include "tadm/solver.hpp"

#include <Eigen/Dense>

namespace tadm {

/*! Per-site unitary that maps vectorized Hermitian 2x2 blocks to real
 * vectors: diagonal entries pass through, the off-diagonal pair (j>k) is
 * replaced by its symmetric and i-weighted antisymmetric combinations.
 *
 * Basis order is the fused sigma = s*2 + s' index. Pinned values:
 * U . vec(sigma_y) = (0, 0, sqrt(2), 0).
 */
Eigen::Matrix4cd local_u_map();

/*! 1e-10 relative: entries below it count as real. */
constexpr double kRealifyTol = 1e-10;

struct RealifyReport {
    double max_rel_imag_before = 0.0; // largest residual imaginary part seen
    double max_rel_imag_after = 0.0;
    std::vector<long> bond_dims;
};

/*! Rotate the complex tensors of a chain that represents a real object into
 * real tensors via the constructive gauge-matrix procedure (left-canonical
 * form, per-site W = Q Q^dag, O from its eigenvectors, V carried along).
 *
 * Requires a maximally compressed chain: vanishing Schmidt values make the
 * gauge matrices non-unique in a way the construction cannot absorb, so a
 * rank-deficient bond raises InputError. Materialization is unchanged.
 */
RealifyReport realify_tensors(chain::Sites &sites);

/*! Mpo wrapper of realify_tensors. */
RealifyReport realify_tensors(Mpo &m);

/*! (rho0, C) -> real formulation: rho_real = U rho0, c_real = U (iC) U^dag,
 * both realified; bond dimensions are preserved. */
std::pair<Mpo, SuperMpo> to_real(const Mpo &rho0, const SuperMpo &c_super);

Mpo to_real_operator(const Mpo &op);

/*! Map a real-formulation operator back: M = U^dag M_real. */
Mpo from_real(const Mpo &m_real);

/*! Solve in the real formulation and map back; same contracts as solve().
 * The real commutator is antisymmetric rather than self-adjoint, which the
 * chain problem accounts for. */
SolveResult solve_real(const Mpo &rho0, const SuperMpo &c_super, const SolverConfig &cfg);

} // namespace tadm
