#include "tadm/errors.hpp"
#include "tadm/mpo.hpp"

#include <cmath>
#include <random>

namespace tadm {

namespace {

// env layout: [psi_bar, w, psi]
Tensor absorb_left(const Tensor &env, const Tensor &w, const Tensor &site) {
    Tensor t = contract(env, site, {{2, 0}});           // [pbar, w, p, br]
    t = contract(t, w, {{1, 0}, {2, 2}});               // [pbar, br, po, wr]
    Tensor out = contract(site.conj(), t, {{0, 0}, {1, 2}}); // [pbar_r, br, wr]
    return out.permute({0, 2, 1});
}

Tensor absorb_right(const Tensor &env, const Tensor &w, const Tensor &site) {
    Tensor t = contract(site, env, {{2, 2}});           // [bl, p, pbar, w]
    t = contract(w, t, {{2, 1}, {3, 3}});               // [wl, po, bl, pbar]
    Tensor out = contract(t, site.conj(), {{1, 1}, {3, 2}}); // [wl, bl, pbar_l]
    return out.permute({2, 0, 1});
}

struct TwoSiteProblem {
    const Tensor *lenv;
    const Tensor *renv;
    const Tensor *w1;
    const Tensor *w2;

    Tensor apply(const Tensor &x) const {
        // x: [bl, s1, s2, br]
        Tensor t = contract(*lenv, x, {{2, 0}});        // [pbar, w, s1, s2, br]
        t = contract(t, *w1, {{1, 0}, {2, 2}});         // [pbar, s2, br, so1, wr]
        t = contract(t, *w2, {{4, 0}, {1, 2}});         // [pbar, br, so1, so2, wr]
        t = contract(t, *renv, {{1, 2}, {4, 1}});       // [pbar, so1, so2, pbar_r]
        return t;
    }
};

// Lanczos with full reorthogonalization on the flattened tensor space.
std::pair<double, Tensor> lanczos_ground(const TwoSiteProblem &prob, const Tensor &guess, int iters) {
    std::vector<Tensor> basis;
    std::vector<double> alpha, beta;

    Tensor q = guess;
    double n0 = q.norm();
    if (n0 == 0.0) throw DecompositionError("lanczos: zero start vector");
    q *= cplx(1.0 / n0, 0.0);
    basis.push_back(q);

    for (int it = 0; it < iters; ++it) {
        Tensor hq = prob.apply(basis.back());
        cplx a = conjdot(basis.back(), hq);
        alpha.push_back(a.real());
        Tensor r = hq;
        for (size_t j = 0; j < basis.size(); ++j) {
            cplx ov = conjdot(basis[j], r);
            Tensor sub = basis[j];
            sub *= ov;
            r = tensor_add(r, sub, 1.0, -1.0);
        }
        double nb = r.norm();
        if (nb < 1e-12 || it == iters - 1) break;
        beta.push_back(nb);
        r *= cplx(1.0 / nb, 0.0);
        basis.push_back(r);
    }

    const long m = static_cast<long>(alpha.size());
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
    for (long j = 0; j < m; ++j) {
        tri(j, j) = alpha[static_cast<size_t>(j)];
        if (j + 1 < m) {
            tri(j, j + 1) = beta[static_cast<size_t>(j)];
            tri(j + 1, j) = beta[static_cast<size_t>(j)];
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    Eigen::VectorXd gvec = es.eigenvectors().col(0);

    Tensor out(guess.shape());
    for (long j = 0; j < m; ++j) {
        Tensor term = basis[static_cast<size_t>(j)];
        term *= cplx(gvec(j), 0.0);
        out += term;
    }
    double n = out.norm();
    out *= cplx(1.0 / n, 0.0);
    return {es.eigenvalues()(0), out};
}

Mps random_product_guess(int L, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<Eigen::Vector2cd> sites;
    for (int j = 0; j < L; ++j) {
        Eigen::Vector2cd v(cplx(1.0 + 0.1 * dist(rng), 0.0), cplx(0.3 + 0.1 * dist(rng), 0.0));
        v.normalize();
        sites.push_back(v);
    }
    return Mps::product_state(sites);
}

} // namespace

GroundStateResult ground_state_mps(const SpinChainModel &model, long max_bond, int sweeps) {
    GroundStateOptions opts;
    opts.max_bond = max_bond;
    opts.sweeps = sweeps;
    return ground_state_mps(model, opts);
}

GroundStateResult ground_state_mps(const SpinChainModel &model, const GroundStateOptions &opts) {
    model.validate();
    const int L = model.length;
    Mpo h = hamiltonian_mpo(model);
    chain::OpSites w = h.tensors();

    Mps psi = random_product_guess(L, 7);
    chain::Sites &m = psi.tensors();
    chain::right_canonicalize(m);
    m = chain::scale(std::move(m), 1.0 / m.front().norm());

    // right environments: renv[j] covers sites [j, L)
    std::vector<Tensor> renv(static_cast<size_t>(L) + 1);
    renv[static_cast<size_t>(L)] = Tensor::scalar(1.0).reshape({1, 1, 1});
    for (long j = L - 1; j >= 1; --j)
        renv[static_cast<size_t>(j)] =
            absorb_right(renv[static_cast<size_t>(j + 1)], w[static_cast<size_t>(j)], m[static_cast<size_t>(j)]);
    std::vector<Tensor> lenv(static_cast<size_t>(L) + 1);
    lenv[0] = Tensor::scalar(1.0).reshape({1, 1, 1});

    GroundStateResult res;
    double last_energy = 0.0;
    for (int sweep = 0; sweep < opts.sweeps; ++sweep) {
        double energy = 0.0;
        // left-to-right
        for (long k = 0; k + 1 < L; ++k) {
            TwoSiteProblem prob{&lenv[static_cast<size_t>(k)], &renv[static_cast<size_t>(k + 2)],
                                &w[static_cast<size_t>(k)], &w[static_cast<size_t>(k + 1)]};
            Tensor theta = contract(m[static_cast<size_t>(k)], m[static_cast<size_t>(k + 1)], {{2, 0}});
            auto [e, opt] = lanczos_ground(prob, theta, opts.lanczos_iters);
            energy = e;

            SvdResult svd = svd_split(opt, {0, 1});
            long keep = std::min<long>(svd.rank, opts.max_bond);
            if (keep == 0) keep = 1;
            double tail = 0.0;
            for (long i = keep; i < static_cast<long>(svd.s.size()); ++i)
                tail += svd.s[static_cast<size_t>(i)] * svd.s[static_cast<size_t>(i)];
            while (keep > 1) {
                double s2 = svd.s[static_cast<size_t>(keep - 1)] * svd.s[static_cast<size_t>(keep - 1)];
                if (tail + s2 > opts.trunc_tol * opts.trunc_tol) break;
                tail += s2;
                --keep;
            }
            Tensor u({opt.dim(0), opt.dim(1), keep});
            for (long x = 0; x < opt.dim(0); ++x)
                for (long y = 0; y < opt.dim(1); ++y)
                    for (long z = 0; z < keep; ++z) u({x, y, z}) = svd.u({x, y, z});
            Tensor sv({keep, svd.v.dim(1), svd.v.dim(2)});
            for (long x = 0; x < keep; ++x)
                for (long y = 0; y < svd.v.dim(1); ++y)
                    for (long z = 0; z < svd.v.dim(2); ++z)
                        sv({x, y, z}) = svd.s[static_cast<size_t>(x)] * svd.v({x, y, z});
            double nrm = sv.norm();
            sv *= cplx(1.0 / nrm, 0.0);
            m[static_cast<size_t>(k)] = std::move(u);
            m[static_cast<size_t>(k + 1)] = std::move(sv);
            lenv[static_cast<size_t>(k + 1)] =
                absorb_left(lenv[static_cast<size_t>(k)], w[static_cast<size_t>(k)], m[static_cast<size_t>(k)]);
        }
        // right-to-left
        for (long k = L - 2; k >= 0; --k) {
            TwoSiteProblem prob{&lenv[static_cast<size_t>(k)], &renv[static_cast<size_t>(k + 2)],
                                &w[static_cast<size_t>(k)], &w[static_cast<size_t>(k + 1)]};
            Tensor theta = contract(m[static_cast<size_t>(k)], m[static_cast<size_t>(k + 1)], {{2, 0}});
            auto [e, opt] = lanczos_ground(prob, theta, opts.lanczos_iters);
            energy = e;

            SvdResult svd = svd_split(opt, {0, 1});
            long keep = std::min<long>(svd.rank, opts.max_bond);
            if (keep == 0) keep = 1;
            double tail = 0.0;
            for (long i = keep; i < static_cast<long>(svd.s.size()); ++i)
                tail += svd.s[static_cast<size_t>(i)] * svd.s[static_cast<size_t>(i)];
            while (keep > 1) {
                double s2 = svd.s[static_cast<size_t>(keep - 1)] * svd.s[static_cast<size_t>(keep - 1)];
                if (tail + s2 > opts.trunc_tol * opts.trunc_tol) break;
                tail += s2;
                --keep;
            }
            Tensor us({svd.u.dim(0), svd.u.dim(1), keep});
            for (long x = 0; x < svd.u.dim(0); ++x)
                for (long y = 0; y < svd.u.dim(1); ++y)
                    for (long z = 0; z < keep; ++z) us({x, y, z}) = svd.u({x, y, z}) * svd.s[static_cast<size_t>(z)];
            Tensor v({keep, svd.v.dim(1), svd.v.dim(2)});
            for (long x = 0; x < keep; ++x)
                for (long y = 0; y < svd.v.dim(1); ++y)
                    for (long z = 0; z < svd.v.dim(2); ++z) v({x, y, z}) = svd.v({x, y, z});
            double nrm = us.norm();
            us *= cplx(1.0 / nrm, 0.0);
            m[static_cast<size_t>(k)] = std::move(us);
            m[static_cast<size_t>(k + 1)] = std::move(v);
            renv[static_cast<size_t>(k + 1)] = absorb_right(renv[static_cast<size_t>(k + 2)],
                                                            w[static_cast<size_t>(k + 1)],
                                                            m[static_cast<size_t>(k + 1)]);
        }
        res.sweep_energies.push_back(energy);
        if (sweep > 0 && std::abs(energy - last_energy) < opts.energy_tol) {
            last_energy = energy;
            break;
        }
        last_energy = energy;
    }
    res.energy = last_energy;
    res.psi = psi;
    return res;
}

} // namespace tadm
