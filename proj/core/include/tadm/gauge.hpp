#pragma once

#include "tadm/chain.hpp"
#include "tadm/tensor.hpp"

namespace tadm {

/*! Invertible bond (or physical-leg) transformation with its inverse. */
struct GaugePair {
    Tensor a;     // applied on the outgoing leg of the trailing tensor
    Tensor a_inv; // applied on the incoming leg of the leading tensor
    double condition = 1.0;
    long floored = 0;    // singular values lifted to the regularization floor
    bool skipped = false; // more than half the spectrum floored
    double gram_dist_before = 0.0; // normalized Frobenius distance of the
    double gram_dist_after = 0.0;  // bond Gram matrix from the identity
};

constexpr double kGaugeRegFloor = 1e-8; // relative, on singular values

/*! Environment blocks of the sweep networks around one site.
 *
 * norm network <M|N|M>:    blocks [m_bar, n, m]
 * overlap network <M|y>:   blocks [m_bar, y]
 *
 * lnorm[j] covers sites < j (lnorm[0] is the trivial boundary), rnorm[j]
 * covers sites >= j (rnorm[n] is the boundary); same for lov/rov. Site k
 * is exposed by lnorm[k] and rnorm[k+1].
 */
struct EnvironmentBlocks {
    std::vector<Tensor> lnorm, rnorm;
    std::vector<Tensor> lov, rov;

    static Tensor boundary_norm() { return Tensor::scalar(1.0).reshape({1, 1, 1}); }
    static Tensor boundary_ov() { return Tensor::scalar(1.0).reshape({1, 1}); }
};

Tensor absorb_norm_left(const Tensor &block, const Tensor &n_site, const Tensor &m_site);
Tensor absorb_norm_right(const Tensor &block, const Tensor &n_site, const Tensor &m_site);
Tensor absorb_ov_left(const Tensor &block, const Tensor &y_site, const Tensor &m_site);
Tensor absorb_ov_right(const Tensor &block, const Tensor &y_site, const Tensor &m_site);

/*! Gauge for the bond on the given side of site k, from a successive
 * QR/SVD decomposition of (L, N_k, R) along that bond.
 *
 * side = -1: bond between k-1 and k (a multiplies M[k-1] from the right,
 *            a_inv multiplies M[k] from the left).
 * side = +1: bond between k and k+1 (a multiplies M[k] from the right,
 *            a_inv multiplies M[k+1] from the left).
 */
GaugePair bond_gauge_from_parts(const Tensor &lnorm, const Tensor &n_site, const Tensor &rnorm,
                                int side, double eps_reg = kGaugeRegFloor);

/*! Basis change b on the ket physical leg of site k that conditions the
 * effective weighted norm; the overlap network has to be transformed with
 * the same pair. Returned as {b, b_inv} in GaugePair form. */
GaugePair physical_gauge_from_parts(const Tensor &lnorm, const Tensor &n_site,
                                    const Tensor &rnorm, double eps_reg = kGaugeRegFloor);

/*! Plain canonical form with the orthogonality center at `center`;
 * materialization unchanged. A cheap pre-gauge before the weighted one. */
void canonical_pregauge(chain::Sites &m, long center);

} // namespace tadm
