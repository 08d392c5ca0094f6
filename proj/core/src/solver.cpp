#include "tadm/solver.hpp"
#include "tadm/errors.hpp"

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <random>

namespace tadm {

std::string to_string(Method m) { return m == Method::TMinus ? "t_minus" : "t_plus"; }

// ---- local basis -------------------------------------------------------------

double local_objective(const LocalProblem &lp, const Tensor &x) {
    Tensor ax = lp.apply_n(x);
    return std::real(conjdot(x, ax)) - 2.0 * std::real(conjdot(x, lp.v));
}

namespace {

// Orthonormalize candidate z under the A-metric against the listed basis
// entries; returns false on breakdown. w = apply_n(z) is kept in sync.
bool a_orthonormalize(const LocalProblem &lp, KrylovWorkspace &ws, Tensor &z, Tensor &w,
                      const std::vector<size_t> &against) {
    for (int pass = 0; pass < 2; ++pass) {
        for (size_t j : against) {
            cplx ov = conjdot(ws.basis[j], w);
            if (std::abs(ov) == 0.0) continue;
            Tensor bz = ws.basis[j];
            bz *= ov;
            z = tensor_add(z, bz, 1.0, -1.0);
            Tensor bw = ws.normed[j];
            bw *= ov;
            w = tensor_add(w, bw, 1.0, -1.0);
        }
        if (pass == 0 && !ws.full_reortho) break; // single pass in the short mode
    }
    double n2 = std::real(conjdot(z, w));
    if (n2 <= 0.0 || std::sqrt(n2) < lp.breakdown_tol) return false;
    double inv = 1.0 / std::sqrt(n2);
    z *= cplx(inv, 0.0);
    w *= cplx(inv, 0.0);
    return true;
}

std::vector<size_t> reortho_targets(const KrylovWorkspace &ws) {
    std::vector<size_t> idx;
    if (ws.full_reortho) {
        for (size_t j = 0; j < ws.basis.size(); ++j) idx.push_back(j);
    } else if (!ws.basis.empty()) {
        // first candidate and the immediately preceding one suffice
        idx.push_back(0);
        if (ws.basis.size() > 1) idx.push_back(ws.basis.size() - 1);
    }
    return idx;
}

bool accept_candidate(const LocalProblem &lp, KrylovWorkspace &ws, Tensor z) {
    Tensor w = lp.apply_n(z);
    if (!a_orthonormalize(lp, ws, z, w, reortho_targets(ws))) {
        ++ws.skipped;
        return false;
    }
    cplx alpha = conjdot(z, lp.v);
    ws.basis.push_back(std::move(z));
    ws.normed.push_back(std::move(w));
    ws.alphas.push_back(alpha);
    return true;
}

} // namespace

void build_local_basis(const LocalProblem &lp, KrylovWorkspace &ws, int n_basis) {
    if (ws.old_tensor && ws.old_tensor->norm() > 0.0) accept_candidate(lp, ws, *ws.old_tensor);
    if (ws.overarching && ws.last_tensor && ws.last_tensor->norm() > 0.0)
        accept_candidate(lp, ws, *ws.last_tensor);

    while (static_cast<int>(ws.basis.size()) < n_basis) {
        // projected Krylov continuation: v - sum_p alpha_p N z_p
        Tensor z = lp.v;
        for (size_t p = 0; p < ws.basis.size(); ++p) {
            Tensor t = ws.normed[p];
            t *= ws.alphas[p];
            z = tensor_add(z, t, 1.0, -1.0);
        }
        if (!accept_candidate(lp, ws, std::move(z))) break; // exhausted the local space
    }
}

Tensor assemble_update(const KrylovWorkspace &ws) {
    if (ws.basis.empty()) throw InputError("assemble_update on an empty basis");
    Tensor out(ws.basis.front().shape());
    for (size_t l = 0; l < ws.basis.size(); ++l) {
        Tensor t = ws.basis[l];
        t *= ws.alphas[l];
        out += t;
    }
    return out;
}

// ---- problem construction -----------------------------------------------------

ChainProblem make_chain_problem(const chain::Sites &rho, const chain::OpSites &c_chain,
                                Method method, const SolverConfig &cfg, bool anti_adjoint) {
    ChainProblem p;
    p.rho = rho;
    p.C = c_chain;

    const double sign = anti_adjoint ? -1.0 : 1.0;
    chain::Sites y = chain::apply_op(c_chain, rho); // C rho
    chain::compress(y, 0, cfg.compress_tol);
    chain::Sites y_adj = chain::scale(y, sign); // C^dag rho

    chain::OpSites n = chain::compose(c_chain, c_chain);
    if (sign < 0) n[0] *= cplx(-1.0, 0.0);
    chain::compress_op(n, 0, cfg.compress_tol);

    p.c_rho_norm2 = std::max(0.0, std::real(chain::inner(y_adj, y_adj)));
    chain::Sites w3 = chain::apply_op(n, y_adj);
    chain::compress(w3, 0, cfg.compress_tol);
    p.w3 = w3;
    chain::OpSites c4 = chain::compose(n, n);
    chain::compress_op(c4, 0, cfg.compress_tol);
    p.C4 = c4;
    p.has_q_context = true;

    if (method == Method::TMinus) {
        p.y = y_adj;
        p.N = n;
    } else {
        p.y = w3; // (C^2)^dag C rho
        p.N = c4; // (C^2)^dag C^2
    }
    return p;
}

namespace {

struct QEval {
    double q;
    double residual_norm2;
};

QEval eval_q(const ChainProblem &p, const chain::Sites &m_bar) {
    double cross = std::real(chain::inner(m_bar, p.w3));
    double quart = std::real(chain::inner_op(m_bar, p.C4, m_bar));
    double res2 = std::max(0.0, p.c_rho_norm2 - 2.0 * cross + quart);
    double q = res2 > 0 ? std::sqrt(p.c_rho_norm2 / res2) : std::numeric_limits<double>::infinity();
    return {q, res2};
}

chain::Sites zero_chain_like(const chain::Sites &rho) {
    chain::Sites out;
    for (const Tensor &t : rho) out.emplace_back(Shape{1, t.dim(1), 1});
    return out;
}

chain::Sites random_chain_bond(const std::vector<long> &phys, long bond, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    chain::Sites s;
    const long n = static_cast<long>(phys.size());
    long bl = 1;
    long left_total = 1;
    for (long j = 0; j < n; ++j) {
        left_total *= phys[static_cast<size_t>(j)];
        long right_total = 1;
        for (long i = j + 1; i < n; ++i) right_total *= phys[static_cast<size_t>(i)];
        long br = (j + 1 == n) ? 1 : std::min({bond, left_total, right_total});
        Tensor t({bl, phys[static_cast<size_t>(j)], br});
        for (long i = 0; i < t.size(); ++i) t.flat(i) = cplx(dist(rng), 0.0);
        s.push_back(std::move(t));
        bl = br;
    }
    return s;
}

// Galerkin warm start in the first few weighted-Krylov directions, truncated
// to the requested bond. One-site updates cannot enlarge bonds, so the bond
// budget has to be populated here.
chain::Sites krylov_warm_start(const ChainProblem &p, const SolverConfig &cfg) {
    std::vector<chain::Sites> k_dirs;
    chain::Sites cur = p.y;
    chain::compress(cur, cfg.max_bond, cfg.compress_tol);
    k_dirs.push_back(cur);
    const int max_terms = 4;
    for (int j = 1; j < max_terms; ++j) {
        if (chain::max_bond(k_dirs.back()) >= cfg.max_bond && j >= 2) break;
        chain::Sites next = chain::apply_op(p.N, k_dirs.back());
        chain::compress(next, cfg.max_bond, cfg.compress_tol);
        k_dirs.push_back(next);
    }

    const long m = static_cast<long>(k_dirs.size());
    Eigen::MatrixXcd g(m, m);
    Eigen::VectorXcd b(m);
    for (long i = 0; i < m; ++i) {
        b(i) = chain::inner(k_dirs[static_cast<size_t>(i)], p.y);
        for (long j = 0; j < m; ++j)
            g(i, j) = chain::inner_op(k_dirs[static_cast<size_t>(i)], p.N, k_dirs[static_cast<size_t>(j)]);
    }
    // pseudo-solve with a spectral cutoff; the directions overlap after compression
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (g + g.adjoint()));
    Eigen::VectorXcd coeff = Eigen::VectorXcd::Zero(m);
    double lmax = es.eigenvalues().maxCoeff();
    for (long j = 0; j < m; ++j) {
        double lam = es.eigenvalues()(j);
        if (lam > 1e-12 * lmax && lam > 0)
            coeff += es.eigenvectors().col(j) * (es.eigenvectors().col(j).adjoint() * b)(0) / lam;
    }

    chain::Sites acc = chain::scale(k_dirs[0], coeff(0));
    for (long j = 1; j < m; ++j)
        acc = chain::add(acc, k_dirs[static_cast<size_t>(j)], 1.0, coeff(j));
    chain::compress(acc, cfg.max_bond, cfg.compress_tol);
    return acc;
}

class SweepEngine {
  public:
    SweepEngine(const ChainProblem &p, const SolverConfig &cfg, chain::Sites m0)
        : p_(p), cfg_(cfg), m_(std::move(m0)), n_(chain::nsites(p.rho)) {
        last_.resize(static_cast<size_t>(n_));
        lnorm_.resize(static_cast<size_t>(n_) + 1);
        rnorm_.resize(static_cast<size_t>(n_) + 1);
        lov_.resize(static_cast<size_t>(n_) + 1);
        rov_.resize(static_cast<size_t>(n_) + 1);
    }

    const chain::Sites &m() const { return m_; }
    SolveReport &report() { return report_; }

    void run() {
        report_.method = cfg_.method;
        report_.max_bond = chain::max_bond(m_);
        if (cfg_.method == Method::TPlus) report_.q_reliability_cap = 1e4;

        int stable = 0;
        double prev_q = -1.0;
        for (int sweep = 0; sweep < cfg_.max_sweeps; ++sweep) {
            auto t0 = std::chrono::steady_clock::now();
            SweepStats st;
            st.sweep = sweep;
            st.overarching = overarch_active_;
            bool ascending = (sweep % 2 == 0);
            sweep_once(ascending, st);
            auto t1 = std::chrono::steady_clock::now();
            st.wall_s = std::chrono::duration<double>(t1 - t0).count();

            QEval qe = eval_q(p_, m_);
            st.q = qe.q;
            double cn2 = std::real(chain::inner_op(m_, p_.N, m_));
            st.c_norm = std::sqrt(std::max(0.0, cn2));
            st.c = st.c_norm > 0 ? chain::inner(m_, p_.y) / st.c_norm : cplx(0.0);
            report_.sweeps.push_back(st);

            if (cfg_.overarching && st.max_tensor_change < cfg_.overarch_threshold)
                overarch_active_ = true;

            if (prev_q > 0 && std::abs(st.q - prev_q) < cfg_.stop_rel_q * prev_q) {
                if (++stable >= cfg_.stop_window) {
                    report_.termination = "q_converged";
                    break;
                }
            } else {
                stable = 0;
            }
            prev_q = st.q;
        }
        if (report_.termination.empty()) report_.termination = "sweep_limit";
        report_.final_q = report_.sweeps.empty() ? 0.0 : report_.sweeps.back().q;
        report_.max_bond = chain::max_bond(m_);
    }

  private:
    void rebuild_blocks(bool ascending) {
        lnorm_[0] = EnvironmentBlocks::boundary_norm();
        lov_[0] = EnvironmentBlocks::boundary_ov();
        rnorm_[static_cast<size_t>(n_)] = EnvironmentBlocks::boundary_norm();
        rov_[static_cast<size_t>(n_)] = EnvironmentBlocks::boundary_ov();
        if (ascending) {
            for (long j = n_ - 1; j >= 1; --j) {
                rnorm_[static_cast<size_t>(j)] = absorb_norm_right(
                    rnorm_[static_cast<size_t>(j + 1)], p_.N[static_cast<size_t>(j)], m_[static_cast<size_t>(j)]);
                rov_[static_cast<size_t>(j)] = absorb_ov_right(
                    rov_[static_cast<size_t>(j + 1)], p_.y[static_cast<size_t>(j)], m_[static_cast<size_t>(j)]);
            }
        } else {
            for (long j = 0; j + 1 < n_; ++j) {
                lnorm_[static_cast<size_t>(j + 1)] = absorb_norm_left(
                    lnorm_[static_cast<size_t>(j)], p_.N[static_cast<size_t>(j)], m_[static_cast<size_t>(j)]);
                lov_[static_cast<size_t>(j + 1)] = absorb_ov_left(
                    lov_[static_cast<size_t>(j)], p_.y[static_cast<size_t>(j)], m_[static_cast<size_t>(j)]);
            }
        }
    }

    void apply_bond_gauge(long k, bool ascending, SweepStats &st) {
        // trailing bond of the sweep: (k-1, k) when ascending, (k, k+1) when
        // descending; both use the environment parts around site k.
        GaugePair g = bond_gauge_from_parts(lnorm_[static_cast<size_t>(k)],
                                            p_.N[static_cast<size_t>(k)],
                                            rnorm_[static_cast<size_t>(k + 1)],
                                            ascending ? -1 : +1, cfg_.gauge_reg);
        if (g.skipped || !std::isfinite(g.a.max_abs()) || !std::isfinite(g.a_inv.max_abs())) {
            ++st.gauge_skips;
            return;
        }
        report_.gram_dist_logged = g.gram_dist_before > 0 ? g.gram_dist_after / g.gram_dist_before : 0.0;
        long lt = ascending ? k - 1 : k;
        long rt = lt + 1;
        m_[static_cast<size_t>(lt)] = contract(m_[static_cast<size_t>(lt)], g.a, {{2, 0}});
        m_[static_cast<size_t>(rt)] = contract(g.a_inv, m_[static_cast<size_t>(rt)], {{1, 0}});
        if (last_[static_cast<size_t>(lt)] && last_[static_cast<size_t>(lt)]->dim(2) == g.a.dim(0))
            last_[static_cast<size_t>(lt)] = contract(*last_[static_cast<size_t>(lt)], g.a, {{2, 0}});
        else
            last_[static_cast<size_t>(lt)].reset();
        if (last_[static_cast<size_t>(rt)] && last_[static_cast<size_t>(rt)]->dim(0) == g.a_inv.dim(1))
            last_[static_cast<size_t>(rt)] = contract(g.a_inv, *last_[static_cast<size_t>(rt)], {{1, 0}});
        else
            last_[static_cast<size_t>(rt)].reset();

        // refresh the blocks touching the regauged tensors
        if (ascending) {
            lnorm_[static_cast<size_t>(k)] = absorb_norm_left(
                lnorm_[static_cast<size_t>(k - 1)], p_.N[static_cast<size_t>(k - 1)], m_[static_cast<size_t>(k - 1)]);
            lov_[static_cast<size_t>(k)] = absorb_ov_left(
                lov_[static_cast<size_t>(k - 1)], p_.y[static_cast<size_t>(k - 1)], m_[static_cast<size_t>(k - 1)]);
        } else {
            rnorm_[static_cast<size_t>(k + 1)] = absorb_norm_right(
                rnorm_[static_cast<size_t>(k + 2)], p_.N[static_cast<size_t>(k + 1)], m_[static_cast<size_t>(k + 1)]);
            rov_[static_cast<size_t>(k + 1)] = absorb_ov_right(
                rov_[static_cast<size_t>(k + 2)], p_.y[static_cast<size_t>(k + 1)], m_[static_cast<size_t>(k + 1)]);
        }
    }

    void optimize_site(long k, SweepStats &st) {
        const Tensor &lo = lov_[static_cast<size_t>(k)];
        const Tensor &ro = rov_[static_cast<size_t>(k + 1)];
        const Tensor &ln = lnorm_[static_cast<size_t>(k)];
        const Tensor &rn = rnorm_[static_cast<size_t>(k + 1)];
        const Tensor &nk = p_.N[static_cast<size_t>(k)];
        const Tensor &yk = p_.y[static_cast<size_t>(k)];

        Tensor v = contract(contract(lo, yk, {{1, 0}}), ro, {{2, 1}}); // [m_bar_l, p, m_bar_r]
        auto apply_n = [&](const Tensor &x) {
            Tensor t = contract(ln, x, {{2, 0}});        // [m_bar, n, p, mr]
            t = contract(t, nk, {{1, 0}, {2, 2}});       // [m_bar, mr, po, nr]
            return contract(t, rn, {{1, 2}, {3, 1}});    // [m_bar, po, m_bar_r]
        };

        LocalProblem lp;
        lp.breakdown_tol = cfg_.breakdown_tol;
        lp.tol_ortho = cfg_.tol_ortho;

        GaugePair pg;
        bool phys = cfg_.use_physical_gauge;
        if (phys) {
            pg = physical_gauge_from_parts(ln, nk, rn, cfg_.gauge_reg);
            if (pg.skipped) phys = false;
        }
        auto to_tilde = [&](const Tensor &x) { return contract(x, pg.a_inv, {{1, 0}}).permute({0, 2, 1}); };
        auto from_tilde = [&](const Tensor &x) { return contract(x, pg.a, {{1, 0}}).permute({0, 2, 1}); };
        auto conj_out = [&](const Tensor &x) {
            return contract(x, pg.a.conj(), {{1, 1}}).permute({0, 2, 1});
        };

        if (phys) {
            lp.v = conj_out(v);
            lp.apply_n = [&, apply_n](const Tensor &x) { return conj_out(apply_n(from_tilde(x))); };
        } else {
            lp.v = v;
            lp.apply_n = apply_n;
        }

        KrylovWorkspace ws;
        ws.full_reortho = cfg_.full_reortho;
        ws.overarching = overarch_active_;
        Tensor old_frame = phys ? to_tilde(m_[static_cast<size_t>(k)]) : m_[static_cast<size_t>(k)];
        ws.old_tensor = old_frame;
        if (overarch_active_ && last_[static_cast<size_t>(k)] &&
            last_[static_cast<size_t>(k)]->shape() == m_[static_cast<size_t>(k)].shape())
            ws.last_tensor = phys ? to_tilde(*last_[static_cast<size_t>(k)]) : *last_[static_cast<size_t>(k)];

        build_local_basis(lp, ws, cfg_.local_basis_size);
        st.basis_breakdowns += ws.skipped;
        if (ws.basis.empty()) return; // local space exhausted, keep the tensor

        Tensor candidate = assemble_update(ws);
        if (!std::isfinite(candidate.max_abs())) return; // poisoned local problem: keep old
        if (cfg_.track_objective) {
            double j_old = local_objective(lp, old_frame);
            double j_new = local_objective(lp, candidate);
            if (!std::isfinite(j_new)) return;
            double scale = std::abs(j_old) + std::abs(j_new) + 1e-30;
            if (j_new > j_old + 1e-9 * scale) return; // numerically regressive update: keep old
            report_.update_objectives.push_back(j_new);
        }

        // remember the freshest Krylov candidate for the overarching carryover
        size_t first_fresh = (ws.old_tensor ? 1u : 0u);
        if (ws.basis.size() > first_fresh) {
            Tensor carried = ws.basis.back();
            last_[static_cast<size_t>(k)] = phys ? from_tilde(carried) : carried;
        }

        Tensor updated = phys ? from_tilde(candidate) : candidate;
        double change = tensor_add(updated, m_[static_cast<size_t>(k)], 1.0, -1.0).norm();
        double ref = std::max({updated.norm(), m_[static_cast<size_t>(k)].norm(), 1e-300});
        st.max_tensor_change = std::max(st.max_tensor_change, change / ref);
        m_[static_cast<size_t>(k)] = std::move(updated);
    }

    void sweep_once(bool ascending, SweepStats &st) {
        rebuild_blocks(ascending);
        if (ascending) {
            for (long k = 0; k < n_; ++k) {
                if (k > 0 && cfg_.use_bond_gauge) apply_bond_gauge(k, true, st);
                optimize_site(k, st);
                if (k + 1 < n_) {
                    lnorm_[static_cast<size_t>(k + 1)] = absorb_norm_left(
                        lnorm_[static_cast<size_t>(k)], p_.N[static_cast<size_t>(k)], m_[static_cast<size_t>(k)]);
                    lov_[static_cast<size_t>(k + 1)] = absorb_ov_left(
                        lov_[static_cast<size_t>(k)], p_.y[static_cast<size_t>(k)], m_[static_cast<size_t>(k)]);
                }
            }
        } else {
            for (long k = n_ - 1; k >= 0; --k) {
                if (k + 1 < n_ && cfg_.use_bond_gauge) apply_bond_gauge(k, false, st);
                optimize_site(k, st);
                if (k > 0) {
                    rnorm_[static_cast<size_t>(k)] = absorb_norm_right(
                        rnorm_[static_cast<size_t>(k + 1)], p_.N[static_cast<size_t>(k)], m_[static_cast<size_t>(k)]);
                    rov_[static_cast<size_t>(k)] = absorb_ov_right(
                        rov_[static_cast<size_t>(k + 1)], p_.y[static_cast<size_t>(k)], m_[static_cast<size_t>(k)]);
                }
            }
        }
    }

    const ChainProblem &p_;
    const SolverConfig &cfg_;
    chain::Sites m_;
    long n_;
    bool overarch_active_ = false;
    std::vector<std::optional<Tensor>> last_;
    std::vector<Tensor> lnorm_, rnorm_, lov_, rov_;
    SolveReport report_;
};

} // namespace

ChainSolveResult solve_chain(const ChainProblem &problem, const SolverConfig &cfg) {
    ChainSolveResult out;
    double ynorm = chain::norm(problem.y);
    if (ynorm < cfg.breakdown_tol) {
        out.m_bar = zero_chain_like(problem.rho);
        out.report.breakdown = true;
        out.report.termination = "commuting_input";
        out.report.method = cfg.method;
        return out;
    }

    chain::Sites m0;
    if (cfg.init == InitMode::KrylovWarmStart) {
        m0 = krylov_warm_start(problem, cfg);
    } else {
        m0 = random_chain_bond(chain::phys_dims(problem.rho), cfg.max_bond, cfg.seed);
        chain::left_canonicalize(m0);
        double cn = std::sqrt(std::abs(std::real(chain::inner_op(m0, problem.N, m0))));
        if (cn > 0) m0 = chain::scale(std::move(m0), 0.01 * chain::norm(problem.rho) / cn);
    }

    SweepEngine engine(problem, cfg, std::move(m0));
    engine.run();
    out.m_bar = engine.m();
    out.report = std::move(engine.report());
    return out;
}

namespace {

SolveResult solve_mpo_impl(const Mpo &rho0, const SuperMpo &c_super, const SolverConfig &cfg,
                           Method method) {
    SolverConfig c = cfg;
    c.method = method;
    ChainProblem p = make_chain_problem(rho0.vec(), c_super.op(), method, c, false);
    ChainSolveResult r = solve_chain(p, c);

    SolveResult res;
    res.report = std::move(r.report);
    std::vector<long> po;
    for (long k = 0; k < rho0.nsites(); ++k) po.push_back(rho0.phys_dim(k));

    double cn2 = std::real(chain::inner_op(r.m_bar, p.N, r.m_bar));
    double cn = std::sqrt(std::max(0.0, cn2));
    if (cn < c.breakdown_tol) {
        res.M = Mpo::from_vec(zero_chain_like(p.rho), po);
        res.c = 0.0;
        return res;
    }
    chain::Sites m = chain::scale(r.m_bar, 1.0 / cn);
    cplx overlap = chain::inner(m, p.y);
    cplx phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : cplx(1.0);
    m = chain::scale(std::move(m), phase); // absorb the phase so c is real >= 0
    res.M = Mpo::from_vec(m, po);
    res.c = std::abs(overlap);
    return res;
}

} // namespace

SolveResult solve(const Mpo &rho0, const SuperMpo &c_super, const SolverConfig &cfg) {
    return solve_mpo_impl(rho0, c_super, cfg, Method::TMinus);
}

SolveResult solve_tplus(const Mpo &rho0, const SuperMpo &c_super, const SolverConfig &cfg) {
    return solve_mpo_impl(rho0, c_super, cfg, Method::TPlus);
}

Mpo assemble_tadm(const Mpo &rho0, const Mpo &m, const SuperMpo &c_super, double c) {
    Mpo cm = apply_super(c_super, m);
    double cm_norm = mpo_norm(cm);
    if (cm_norm < 1e-13) return rho0; // M (effectively) zero
    if (c < 0) {
        cplx overlap = inner(cm, rho0);
        c = overlap.real();
    }
    Mpo out = mpo_add(rho0, cm, 1.0, -c);
    compress(out, 0, 1e-14);
    return out;
}

} // namespace tadm
