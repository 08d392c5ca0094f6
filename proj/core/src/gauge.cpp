#include "tadm/gauge.hpp"
#include "tadm/errors.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace tadm {

Tensor absorb_norm_left(const Tensor &block, const Tensor &n_site, const Tensor &m_site) {
    // block [m_bar, n, m] ; n_site [nl, po, pi, nr] ; m_site [ml, p, mr]
    Tensor t = contract(block, m_site, {{2, 0}});          // [m_bar, n, p, mr]
    t = contract(t, n_site, {{1, 0}, {2, 2}});             // [m_bar, mr, po, nr]
    Tensor out = contract(m_site.conj(), t, {{0, 0}, {1, 2}}); // [mr_bar, mr, nr]
    return out.permute({0, 2, 1});                          // [m_bar, n, m]
}

Tensor absorb_norm_right(const Tensor &block, const Tensor &n_site, const Tensor &m_site) {
    Tensor t = contract(m_site, block, {{2, 2}});          // [ml, p, m_bar, n]
    t = contract(n_site, t, {{2, 1}, {3, 3}});             // [nl, po, ml, m_bar]
    Tensor out = contract(t, m_site.conj(), {{1, 1}, {3, 2}}); // [nl, ml, ml_bar]
    return out.permute({2, 0, 1});                          // [m_bar, n, m]
}

Tensor absorb_ov_left(const Tensor &block, const Tensor &y_site, const Tensor &m_site) {
    // block [m_bar, y] ; y_site [yl, p, yr] ; m_site [ml, p, mr]
    Tensor t = contract(block, y_site, {{1, 0}});          // [m_bar, p, yr]
    return contract(m_site.conj(), t, {{0, 0}, {1, 1}});   // [mr_bar, yr]
}

Tensor absorb_ov_right(const Tensor &block, const Tensor &y_site, const Tensor &m_site) {
    Tensor t = contract(y_site, block, {{2, 1}});          // [yl, p, m_bar]
    return contract(m_site.conj(), t, {{1, 1}, {2, 2}});   // [ml_bar, yl]
}

namespace {

struct RootPair {
    Tensor a, a_inv;
    double condition;
    long floored;
    double dist_before, dist_after;
};

// a = V^dag D^(-1/2) V and a_inv = V^dag D^(1/2) V from the SVD of mat over
// its column index; D regularized from below before inversion.
RootPair inverse_root_pair(const Tensor &mat2d, double eps_reg) {
    const long rows = mat2d.dim(0), cols = mat2d.dim(1);
    SvdResult svd = svd_split(mat2d, {0});
    (void)rows;
    const long k = static_cast<long>(svd.s.size());
    const double smax = svd.s.empty() ? 0.0 : svd.s.front();
    const double floor = eps_reg * std::max(smax, 1e-300);

    Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(cols, cols);
    for (long r = 0; r < k; ++r)
        for (long c = 0; c < cols; ++c) v(r, c) = svd.v({r, c});
    if (k < cols) {
        // complete V to a unitary so the pair stays invertible
        Eigen::MatrixXcd vt = v.topRows(k).adjoint();
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(vt);
        Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(cols, cols);
        v = q.adjoint();
        for (long r = 0; r < k; ++r)
            for (long c = 0; c < cols; ++c) v(r, c) = svd.v({r, c});
    }

    Eigen::VectorXd d = Eigen::VectorXd::Zero(cols), dreg(cols);
    long floored = 0;
    for (long j = 0; j < cols; ++j) {
        double s = (j < k) ? svd.s[static_cast<size_t>(j)] : 0.0;
        d(j) = s;
        dreg(j) = std::max(s, floor);
        if (s < floor) ++floored;
    }

    double dist_b = 0.0, dist_a = 0.0, tr_b = 0.0, tr_a = 0.0;
    for (long j = 0; j < cols; ++j) {
        tr_b += d(j) * d(j);
        tr_a += d(j) * d(j) / dreg(j);
    }
    for (long j = 0; j < cols; ++j) {
        double gb = d(j) * d(j) / std::max(tr_b / cols, 1e-300);
        double ga = (d(j) * d(j) / dreg(j)) / std::max(tr_a / cols, 1e-300);
        dist_b += (gb - 1.0) * (gb - 1.0);
        dist_a += (ga - 1.0) * (ga - 1.0);
    }

    Eigen::MatrixXcd am =
        v.adjoint() * dreg.cwiseInverse().cwiseSqrt().asDiagonal().toDenseMatrix().cast<cplx>() * v;
    Eigen::MatrixXcd ainvm =
        v.adjoint() * dreg.cwiseSqrt().asDiagonal().toDenseMatrix().cast<cplx>() * v;

    Tensor at({cols, cols}), ait({cols, cols});
    for (long r = 0; r < cols; ++r)
        for (long c = 0; c < cols; ++c) {
            at({r, c}) = am(r, c);
            ait({r, c}) = ainvm(r, c);
        }
    return {std::move(at), std::move(ait), dreg(0) / dreg(cols - 1), floored,
            std::sqrt(dist_b), std::sqrt(dist_a)};
}

// swap_pair: the inverse square root belongs to whichever tensor feeds the
// decomposed block (the left one for side < 0, the right one for side > 0).
GaugePair pair_from(const RootPair &rp, long dim, bool swap_pair) {
    GaugePair g;
    g.condition = rp.condition;
    g.floored = rp.floored;
    g.gram_dist_before = rp.dist_before;
    g.gram_dist_after = rp.dist_after;
    if (2 * rp.floored > dim) {
        g.skipped = true;
        Tensor id({dim, dim});
        for (long j = 0; j < dim; ++j) id({j, j}) = 1.0;
        g.a = id;
        g.a_inv = std::move(id);
        return g;
    }
    g.a = swap_pair ? rp.a_inv : rp.a;
    g.a_inv = swap_pair ? rp.a : rp.a_inv;
    return g;
}

} // namespace

GaugePair bond_gauge_from_parts(const Tensor &lnorm, const Tensor &n_site, const Tensor &rnorm,
                                int side, double eps_reg) {
    Tensor tilde;
    long bond_dim;
    double scale;
    if (side < 0) {
        // bond left of the site: decompose R, then N, then take the SVD of L
        Tensor rm = rnorm.permute({0, 2, 1}); // [m_bar, m, n]
        QrResult qr_r = qr_split(rm.reshape({rm.dim(0) * rm.dim(1), rm.dim(2)}), {0});
        Tensor ct = contract(n_site, qr_r.r, {{3, 1}});      // [nl, po, pi, eta]
        QrResult qr_c = qr_split(ct, {1, 2, 3});             // r: [eta2, nl]
        Tensor lt = contract(lnorm, qr_c.r, {{1, 1}});       // [m_bar, m, eta2]
        tilde = lt.permute({0, 2, 1});                       // [m_bar, eta2, m]
        bond_dim = lnorm.dim(2);
        scale = qr_c.r.norm();
    } else {
        Tensor lm = lnorm.permute({0, 2, 1});
        QrResult qr_l = qr_split(lm.reshape({lm.dim(0) * lm.dim(1), lm.dim(2)}), {0});
        Tensor ct = contract(qr_l.r, n_site, {{1, 0}});      // [eta, po, pi, nr]
        QrResult qr_c = qr_split(ct, {0, 1, 2});             // r: [eta2, nr]
        Tensor rt = contract(rnorm, qr_c.r, {{1, 1}});       // [m_bar, m, eta2]
        tilde = rt.permute({0, 2, 1});
        bond_dim = rnorm.dim(2);
        scale = qr_c.r.norm();
    }
    // divide out the magnitude of the folded-in parts: the trivial norm
    // network then reduces exactly to the canonical-form gauge, and repeated
    // gauging cannot drift the tensor scales
    if (scale > 0) tilde *= cplx(1.0 / scale, 0.0);
    RootPair rp =
        inverse_root_pair(tilde.reshape({tilde.dim(0) * tilde.dim(1), tilde.dim(2)}), eps_reg);
    return pair_from(rp, bond_dim, side > 0);
}

GaugePair physical_gauge_from_parts(const Tensor &lnorm, const Tensor &n_site,
                                    const Tensor &rnorm, double eps_reg) {
    Tensor lm = lnorm.permute({0, 2, 1});
    QrResult qr_l = qr_split(lm.reshape({lm.dim(0) * lm.dim(1), lm.dim(2)}), {0});
    Tensor rm = rnorm.permute({0, 2, 1});
    QrResult qr_r = qr_split(rm.reshape({rm.dim(0) * rm.dim(1), rm.dim(2)}), {0});
    Tensor ct = contract(qr_l.r, n_site, {{1, 0}}); // [etaL, po, pi, nr]
    ct = contract(ct, qr_r.r, {{3, 1}});            // [etaL, po, pi, etaR]
    Tensor tilde = ct.permute({0, 1, 3, 2});        // [etaL, po, etaR, pi]
    const long p = n_site.dim(2);
    double scale = qr_l.r.norm() * qr_r.r.norm();
    if (scale > 0) tilde *= cplx(1.0 / scale, 0.0);
    RootPair rp = inverse_root_pair(tilde.reshape({tilde.size() / p, p}), eps_reg);
    return pair_from(rp, p, false);
}

void canonical_pregauge(chain::Sites &m, long center) {
    const long n = chain::nsites(m);
    if (center < 0 || center >= n) throw DimensionError("canonical_pregauge: center out of range");
    for (long j = 0; j < center; ++j) {
        QrResult qr = qr_split(m[static_cast<size_t>(j)], {0, 1});
        m[static_cast<size_t>(j)] = qr.q;
        m[static_cast<size_t>(j + 1)] = contract(qr.r, m[static_cast<size_t>(j + 1)], {{1, 0}});
    }
    for (long j = n - 1; j > center; --j) {
        RqResult rq = rq_split(m[static_cast<size_t>(j)], {0});
        m[static_cast<size_t>(j)] = rq.q;
        m[static_cast<size_t>(j - 1)] = contract(m[static_cast<size_t>(j - 1)], rq.r, {{2, 0}});
    }
}

} // namespace tadm
