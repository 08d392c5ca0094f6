#pragma once

#include "tadm/chain.hpp"
#include "tadm/gauge.hpp"
#include "tadm/mpo.hpp"
#include "tadm/tensor.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace tadm {

enum class Method { TMinus, TPlus };
enum class InitMode { KrylovWarmStart, RandomInit };

std::string to_string(Method m);

struct SolverConfig {
    long max_bond = 32;         // D of the ansatz M
    int local_basis_size = 4;   // candidates per tensor optimization
    int max_sweeps = 40;
    Method method = Method::TMinus;
    InitMode init = InitMode::KrylovWarmStart;
    double overarch_threshold = 1e-3; // max relative tensor change that arms overarching
    bool overarching = true;
    double tol_ortho = 1e-8;
    double breakdown_tol = 1e-13; // absolute, weighted norm
    bool full_reortho = true;     // orthonormalize candidates against all accepted ones
    bool use_bond_gauge = true;
    bool use_physical_gauge = false;
    double gauge_reg = kGaugeRegFloor;
    double compress_tol = 1e-12; // for derived chains (C^2, warm start, ...)
    uint64_t seed = 1;
    double stop_rel_q = 1e-3; // stop when q improves by less than this ...
    int stop_window = 3;      // ... over this many consecutive sweeps
    bool track_objective = true;
};

struct SweepStats {
    int sweep = 0;
    double q = 0.0;
    double c_norm = 0.0; // |C M_bar|
    cplx c{0.0, 0.0};    // <C M | rho0> for the normalized M
    double max_tensor_change = 0.0;
    double wall_s = 0.0;
    bool overarching = false;
    int basis_breakdowns = 0;
    int gauge_skips = 0;
};

struct SolveReport {
    std::vector<SweepStats> sweeps;
    std::string termination;
    bool breakdown = false; // ||C rho0|| below floor: rho0 commutes with H
    Method method = Method::TMinus;
    long max_bond = 0;
    double final_q = 0.0;
    double q_reliability_cap = 0.0;       // nonzero for T+: noise-floor warning level
    std::vector<double> update_objectives; // per accepted tensor update, non-increasing
    double gram_dist_logged = 0.0;         // last bond-gauge distance after/before ratio
};

/*! Representation-neutral problem for the sweep engine.
 *
 * The engine minimizes |target - Cobj M|^2, which unfolds into the overlap
 * chain y = Cobj^dag target and the weighted-norm operator N = Cobj^dag Cobj.
 * The q context is always built from the plain commutator, independent of
 * the objective (T+ swaps Cobj for C^2, nothing else).
 */
struct ChainProblem {
    chain::Sites rho;   // vectorized rho0 (or O0)
    chain::OpSites C;   // commutator chain: rho_bar = rho - C M_bar
    chain::Sites y;     // objective overlap target
    chain::OpSites N;   // objective weighted-norm operator
    // q context
    double c_rho_norm2 = 0.0; // ||C rho||^2
    chain::Sites w3;          // C^dag C C^dag rho  (= C^3 rho in the complex case)
    chain::OpSites C4;        // (C^dag C)^2 compressed
    bool has_q_context = false;
};

struct ChainSolveResult {
    chain::Sites m_bar; // scaled solution: rho_bar = rho - C m_bar
    SolveReport report;
};

ChainSolveResult solve_chain(const ChainProblem &problem, const SolverConfig &cfg);

// ---- local tensor optimization (exposed for tests and reuse) ---------------

/*! One-site optimization problem in the environment frame. */
struct LocalProblem {
    Tensor v;                                      // E^dag y, shape of the site tensor
    std::function<Tensor(const Tensor &)> apply_n; // effective weighted-norm operator
    double breakdown_tol = 1e-13;
    double tol_ortho = 1e-8;
};

/*! Per-site Krylov workspace: accepted candidates are orthonormal under the
 * weighted product; alphas are their overlaps with the target. */
struct KrylovWorkspace {
    std::vector<Tensor> basis;
    std::vector<Tensor> normed; // apply_n(basis[l]) cached
    std::vector<cplx> alphas;
    std::optional<Tensor> old_tensor;
    std::optional<Tensor> last_tensor; // carried across sweeps (overarching)
    bool overarching = false;
    bool full_reortho = true;
    int skipped = 0;
};

/*! Generate and accept up to n_basis candidates:
 * 1: the normalized old tensor, 2: the carried last tensor (overarching),
 * then the projected Krylov continuation v - sum alpha_p N z_p. */
void build_local_basis(const LocalProblem &lp, KrylovWorkspace &ws, int n_basis);

/*! sum_l alpha_l z_l over the accepted basis. */
Tensor assemble_update(const KrylovWorkspace &ws);

/*! Local objective |target|^2-offset value: <x|N x> - 2 Re <x|v>. */
double local_objective(const LocalProblem &lp, const Tensor &x);

// ---- MPO-level API ----------------------------------------------------------

struct SolveResult {
    Mpo M;      // normalized: |C M| = 1 (zero MPO on breakdown)
    double c;   // real >= 0; rho_bar = rho0 - c * C M
    SolveReport report;
};

/*! T- solve: minimize |rho0 - C M|, M an MPO of bond <= cfg.max_bond. */
SolveResult solve(const Mpo &rho0, const SuperMpo &c_super, const SolverConfig &cfg);

/*! T+ solve: minimize |C (rho0 - C M)| (maximal q, noisier observables). */
SolveResult solve_tplus(const Mpo &rho0, const SuperMpo &c_super, const SolverConfig &cfg);

/*! rho_bar = rho0 - <C M|rho0> C M for a normalized M (pass c < 0 to
 * recompute the coefficient from the inputs). */
Mpo assemble_tadm(const Mpo &rho0, const Mpo &m, const SuperMpo &c_super, double c = -1.0);

// chain-level problem builders shared by the MPO / real / double-MPS paths
ChainProblem make_chain_problem(const chain::Sites &rho, const chain::OpSites &c_chain,
                                Method method, const SolverConfig &cfg, bool anti_adjoint);

} // namespace tadm
