#include "tadm/hermitian_real.hpp"
#include "tadm/errors.hpp"

#include <cmath>

namespace tadm {

Eigen::Matrix4cd local_u_map() {
    const double r = 1.0 / std::sqrt(2.0);
    Eigen::Matrix4cd u = Eigen::Matrix4cd::Zero();
    u(0, 0) = 1.0;                       // |00><00|
    u(3, 3) = 1.0;                       // |11><11|
    u(1, 1) = r;                         // symmetric combination on |01>
    u(1, 2) = r;
    u(2, 1) = cplx(0.0, r);              // i-weighted antisymmetric on |10>
    u(2, 2) = cplx(0.0, -r);
    return u;
}

namespace {

Tensor u_tensor(bool dagger) {
    Eigen::Matrix4cd u = local_u_map();
    if (dagger) u = u.adjoint().eval();
    Tensor t({4, 4});
    for (long r = 0; r < 4; ++r)
        for (long c = 0; c < 4; ++c) t({r, c}) = u(r, c);
    return t;
}

// apply a 4x4 map on the fused physical leg of a rank-3 site
Tensor map_site(const Tensor &u, const Tensor &site) {
    return contract(u, site, {{1, 1}}).permute({1, 0, 2});
}

} // namespace

RealifyReport realify_tensors(chain::Sites &sites) {
    chain::validate(sites);
    RealifyReport rep;
    const long n = chain::nsites(sites);

    chain::left_canonicalize(sites);
    // maximal compression check: every bond must have full Schmidt rank
    for (long c = 1; c < n; ++c) {
        std::vector<double> s = chain::schmidt_values(sites, c);
        long bond = sites[static_cast<size_t>(c - 1)].dim(2);
        long rank = 0;
        double smax = s.empty() ? 0.0 : s.front();
        for (double v : s)
            if (v > 1e-13 * smax) ++rank;
        if (rank < bond)
            throw InputError("realify_tensors: bond " + std::to_string(c) +
                             " carries vanishing singular values; compress first");
    }

    Tensor v_prev; // V_[j-1], [old_bond, new_bond]
    for (long j = 0; j < n; ++j) {
        Tensor &u = sites[static_cast<size_t>(j)];
        Tensor q = (j == 0) ? u : contract(v_prev.conj(), u, {{0, 0}});
        // q: [beta(prev new bond), p, gamma]; fuse (beta, p) as the W row index
        Tensor qm = q.reshape({q.dim(0) * q.dim(1), q.dim(2)});
        Tensor w = contract(qm, qm.conj(), {{1, 1}}); // [S, S']

        double wnorm = w.norm();
        double wimag = w.max_abs_imag();
        rep.max_rel_imag_before = std::max(rep.max_rel_imag_before, wimag / std::max(wnorm, 1e-300));
        if (wimag > 1e-8 * wnorm)
            throw InputError("realify_tensors: W matrix is materially complex; "
                             "the chain does not represent a real object");

        const long rows = w.dim(0);
        const long bond = q.dim(2);
        Eigen::MatrixXd wr(rows, rows);
        for (long a = 0; a < rows; ++a)
            for (long b = 0; b < rows; ++b) wr(a, b) = w({a, b}).real();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (wr + wr.transpose()));
        // eigenvalue-1 subspace = column space of O; take the top `bond` ones
        Tensor o({rows, bond});
        for (long c = 0; c < bond; ++c) {
            long col = rows - 1 - c; // eigenvalues ascending
            if (es.eigenvalues()(col) < 0.5)
                throw DecompositionError("realify_tensors: rank of W below the bond dimension");
            for (long a = 0; a < rows; ++a) o({a, c}) = cplx(es.eigenvectors()(a, col), 0.0);
        }

        if (j + 1 < n) {
            // V* = O^T Q  (real O), carried to the next site
            Tensor vconj = contract(o, qm, {{0, 0}}); // [new_bond, gamma]  = V^{* T}
            v_prev = vconj.conj().permute({1, 0});    // V_[j]: [gamma, new_bond]
            sites[static_cast<size_t>(j)] = o.reshape({q.dim(0), q.dim(1), bond});
        } else {
            // last site: P = V*_{n-1} R, i.e. q itself must already be real
            double qi = q.max_abs_imag();
            rep.max_rel_imag_after = std::max(rep.max_rel_imag_after, qi / std::max(q.norm(), 1e-300));
            if (qi > 1e-8 * q.norm())
                throw InputError("realify_tensors: residual imaginary part on the last site");
            Tensor real_q = q;
            real_q.zero_imag();
            sites[static_cast<size_t>(j)] = std::move(real_q);
            break;
        }

        // check and zero the residual imaginary parts of the accepted tensor
        Tensor &site_now = sites[static_cast<size_t>(j)];
        double si = site_now.max_abs_imag();
        rep.max_rel_imag_after = std::max(rep.max_rel_imag_after, si / std::max(site_now.norm(), 1e-300));
        site_now.zero_imag();
    }
    for (long b : chain::bond_dims(sites)) rep.bond_dims.push_back(b);
    return rep;
}

RealifyReport realify_tensors(Mpo &m) {
    chain::Sites s = m.vec();
    std::vector<long> po;
    for (long k = 0; k < m.nsites(); ++k) po.push_back(m.phys_dim(k));
    RealifyReport rep = realify_tensors(s);
    m = Mpo::from_vec(s, po);
    return rep;
}

Mpo to_real_operator(const Mpo &op) {
    Tensor u = u_tensor(false);
    chain::Sites s = op.vec();
    for (Tensor &t : s) t = map_site(u, t);
    std::vector<long> po;
    for (long k = 0; k < op.nsites(); ++k) po.push_back(op.phys_dim(k));
    Mpo out = Mpo::from_vec(s, po);
    compress(out, 0, 1e-12);
    realify_tensors(out);
    return out;
}

std::pair<Mpo, SuperMpo> to_real(const Mpo &rho0, const SuperMpo &c_super) {
    if (rho0.nsites() != c_super.nsites()) throw DimensionError("to_real: site count mismatch");
    Mpo rho_real = to_real_operator(rho0);

    // c_real = U (i C) U^dag, i distributed to the first site
    Tensor u = u_tensor(false), ud = u_tensor(true);
    chain::OpSites c = c_super.op();
    for (size_t j = 0; j < c.size(); ++j) {
        Tensor t = contract(u, c[j], {{1, 1}});          // [so', bl, si, br]
        t = contract(t, ud, {{2, 0}});                   // [so', bl, br, si']
        c[j] = t.permute({1, 0, 3, 2});                  // [bl, so', si', br]
    }
    c[0] *= cplx(0.0, 1.0);
    chain::compress_op(c, 0, 1e-12);
    chain::Sites cs = chain::op_to_sites(c);
    realify_tensors(cs);
    chain::OpSites creal = chain::sites_to_op(cs, std::vector<long>(c.size(), 4));
    return {rho_real, SuperMpo::from_op(creal, 2)};
}

Mpo from_real(const Mpo &m_real) {
    Tensor ud = u_tensor(true);
    chain::Sites s = m_real.vec();
    for (Tensor &t : s) t = map_site(ud, t);
    std::vector<long> po;
    for (long k = 0; k < m_real.nsites(); ++k) po.push_back(m_real.phys_dim(k));
    return Mpo::from_vec(s, po);
}

SolveResult solve_real(const Mpo &rho0, const SuperMpo &c_super, const SolverConfig &cfg) {
    auto [rho_real, c_real] = to_real(rho0, c_super);
    ChainProblem p = make_chain_problem(rho_real.vec(), c_real.op(), cfg.method, cfg, true);
    ChainSolveResult r = solve_chain(p, cfg);

    SolveResult res;
    res.report = std::move(r.report);
    std::vector<long> po;
    for (long k = 0; k < rho0.nsites(); ++k) po.push_back(rho0.phys_dim(k));

    double cn2 = std::real(chain::inner_op(r.m_bar, p.N, r.m_bar));
    double cn = std::sqrt(std::max(0.0, cn2));
    if (cn < cfg.breakdown_tol) {
        chain::Sites zero;
        for (const Tensor &t : p.rho) zero.emplace_back(Shape{1, t.dim(1), 1});
        res.M = from_real(Mpo::from_vec(zero, po));
        res.c = 0.0;
        return res;
    }
    chain::Sites m = chain::scale(r.m_bar, 1.0 / cn);
    cplx overlap = chain::inner(m, p.y);
    cplx phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : cplx(1.0);
    m = chain::scale(std::move(m), phase);
    res.c = std::abs(overlap);
    // rho_bar = rho0 - c U^dag C_real M_real = rho0 - c C (i U^dag M_real):
    // fold the i in so the returned pair matches the complex-route contract.
    Mpo back = from_real(Mpo::from_vec(m, po));
    chain::Sites bs = chain::scale(back.vec(), cplx(0.0, 1.0));
    res.M = Mpo::from_vec(bs, po);
    return res;
}

} // namespace tadm
