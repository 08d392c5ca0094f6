#include "tadm/double_mps.hpp"
#include "tadm/errors.hpp"

#include <cmath>

namespace tadm {

DoubleMps::DoubleMps(chain::Sites tensors) : t_(std::move(tensors)) {
    chain::validate(t_);
    if (chain::nsites(t_) % 2 != 0) throw DimensionError("double MPS needs an even chain length");
}

DoubleMps DoubleMps::from_pure_state(const Mps &psi_in) {
    Mps psi = psi_in;
    psi.normalize();
    const long L = psi.nsites();
    chain::Sites t;
    for (long j = 0; j < L; ++j) t.push_back(psi.site(j));
    // bra half: conjugated tensors in reversed order with swapped bonds
    for (long j = L - 1; j >= 0; --j) t.push_back(psi.site(j).conj().permute({2, 1, 0}));
    return DoubleMps(std::move(t));
}

std::vector<long> DoubleMps::site_map() const {
    const long L = nsites_physical();
    std::vector<long> map;
    for (long j = 0; j < L; ++j) map.push_back(j);
    for (long j = L - 1; j >= 0; --j) map.push_back(j);
    return map;
}

Mpo DoubleMps::fold(long max_bond, double tol) const {
    const long L = nsites_physical();
    const long n = 2 * L;
    std::vector<Tensor> out(static_cast<size_t>(L));
    // contract the center bond into the last physical site, keep the others open
    for (long j = 0; j < L; ++j) {
        const Tensor &ket = t_[static_cast<size_t>(j)];
        const Tensor &bra = t_[static_cast<size_t>(n - 1 - j)];
        if (j == L - 1) {
            // shared center bond contracted; the leftover bra bond belongs to
            // the left MPO bond, paired as (ket_left, bra_right)
            Tensor m = contract(ket, bra, {{2, 0}});       // [kl, s, s', br]
            m = m.permute({0, 3, 1, 2});                   // [kl, br, s, s']
            out[static_cast<size_t>(j)] =
                m.reshape({ket.dim(0) * bra.dim(2), ket.dim(1), bra.dim(1), 1});
        } else {
            // [kl, s, kr] x [brl, s', brr] -> [(kl brr), s, s', (kr brl)]
            Tensor m({ket.dim(0) * bra.dim(2), ket.dim(1), bra.dim(1), ket.dim(2) * bra.dim(0)});
            for (long kl = 0; kl < ket.dim(0); ++kl)
                for (long s = 0; s < ket.dim(1); ++s)
                    for (long kr = 0; kr < ket.dim(2); ++kr)
                        for (long bl = 0; bl < bra.dim(0); ++bl)
                            for (long sp = 0; sp < bra.dim(1); ++sp)
                                for (long br = 0; br < bra.dim(2); ++br)
                                    m({kl * bra.dim(2) + br, s, sp, kr * bra.dim(0) + bl}) =
                                        ket({kl, s, kr}) * bra({bl, sp, br});
            out[static_cast<size_t>(j)] = std::move(m);
        }
    }
    Mpo folded{std::move(out)};
    compress(folded, max_bond, tol);
    return folded;
}

Eigen::MatrixXcd DoubleMps::dense() const { return fold().dense(); }

cplx DoubleMps::trace() const { return fold().trace(); }

std::vector<double> DoubleMps::center_schmidt() const {
    return chain::schmidt_values(t_, nsites_physical());
}

chain::OpSites double_commutator(const Mpo &h) {
    const long L = h.nsites();
    chain::OpSites hop = h.tensors();
    chain::OpSites id = chain::identity_op(std::vector<long>(static_cast<size_t>(L), 2));
    // bra half acts with H^T on the reversed site order
    chain::OpSites h_rev_t = chain::reverse_op(chain::transpose_op(hop));
    chain::OpSites left = chain::concat_op(hop, id);
    chain::OpSites right = chain::concat_op(id, h_rev_t);
    return chain::add_op(left, right, 1.0, -1.0);
}

DoubleMps double_adjoint(const DoubleMps &m) {
    // the adjoint swaps ket and bra roles: reverse the chain and conjugate
    return DoubleMps(chain::conj(chain::reverse(m.tensors())));
}

DoubleMps hermitize(const DoubleMps &m, long max_bond, double tol) {
    DoubleMps adj = double_adjoint(m);
    chain::Sites sum = chain::add(m.tensors(), adj.tensors(), 0.5, 0.5);
    chain::compress(sum, max_bond, tol);
    return DoubleMps(std::move(sum));
}

DoubleSolveResult solve_double(const DoubleMps &rho0, const Mpo &h, const SolverConfig &cfg) {
    chain::OpSites c = double_commutator(h);
    ChainProblem p = make_chain_problem(rho0.tensors(), c, cfg.method, cfg, false);
    ChainSolveResult r = solve_chain(p, cfg);

    DoubleSolveResult res;
    res.report = std::move(r.report);
    double cn2 = std::real(chain::inner_op(r.m_bar, p.N, r.m_bar));
    double cn = std::sqrt(std::max(0.0, cn2));
    if (cn < cfg.breakdown_tol) {
        chain::Sites zero;
        for (const Tensor &t : p.rho) zero.emplace_back(Shape{1, t.dim(1), 1});
        res.M = DoubleMps(std::move(zero));
        res.c = 0.0;
        return res;
    }
    chain::Sites m = chain::scale(r.m_bar, 1.0 / cn);
    cplx overlap = chain::inner(m, p.y);
    cplx phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : cplx(1.0);
    m = chain::scale(std::move(m), phase);
    res.c = std::abs(overlap);
    res.M = DoubleMps(std::move(m));
    return res;
}

DoubleMps assemble_tadm_double(const DoubleMps &rho0, const DoubleMps &m, const Mpo &h, double c) {
    chain::OpSites cop = double_commutator(h);
    chain::Sites cm = chain::apply_op(cop, m.tensors());
    chain::compress(cm, 0, 1e-13);
    if (chain::norm(cm) < 1e-13) return rho0;
    if (c < 0) c = std::real(chain::inner(cm, rho0.tensors()));
    chain::Sites out = chain::add(rho0.tensors(), cm, 1.0, -c);
    chain::compress(out, 0, 1e-14);
    return DoubleMps(std::move(out));
}

} // namespace tadm
