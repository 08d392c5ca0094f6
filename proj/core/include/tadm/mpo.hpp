#pragma once

#include "tadm/chain.hpp"
#include "tadm/dense.hpp"
#include "tadm/tensor.hpp"

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace tadm {

class Mpo;

/*! Matrix product state, rank-3 tensors [bond_left, s, bond_right]. */
class Mps {
  public:
    Mps() = default;
    explicit Mps(chain::Sites tensors);

    static Mps product_state(const std::vector<Eigen::Vector2cd> &site_states);
    static Mps all_up(int L);
    static Mps all_plus(int L);

    long nsites() const { return chain::nsites(t_); }
    const chain::Sites &tensors() const { return t_; }
    chain::Sites &tensors() { return t_; }
    const Tensor &site(long k) const { return t_[static_cast<size_t>(k)]; }
    std::vector<long> bond_dims() const { return chain::bond_dims(t_); }

    double norm() const { return chain::norm(t_); }
    void normalize();
    Eigen::VectorXcd dense_vector() const;

    /*! Apply a single-site operator in place. */
    void apply_site_operator(const Eigen::Matrix2cd &op, long site);

  private:
    chain::Sites t_;
};

/*! Matrix product operator, rank-4 tensors [bond_left, s_out, s_in, bond_right].
 * s_out indexes the ket (row) leg, s_in the bra (column) leg. The fused
 * physical index is sigma = s_out * d + s_in (row-major reshape).
 */
class Mpo {
  public:
    Mpo() = default;
    explicit Mpo(std::vector<Tensor> tensors);

    static Mpo identity(int L, long phys_dim = 2);
    static Mpo from_vec(const chain::Sites &sites, const std::vector<long> &phys_out);

    long nsites() const { return static_cast<long>(t_.size()); }
    const std::vector<Tensor> &tensors() const { return t_; }
    std::vector<Tensor> &tensors() { return t_; }
    const Tensor &site(long k) const { return t_[static_cast<size_t>(k)]; }
    long phys_dim(long k) const { return t_[static_cast<size_t>(k)].dim(1); }
    std::vector<long> bond_dims() const;
    long max_bond() const;

    /*! Fused view [bond_left, s_out*s_in, bond_right]; reshape only. */
    chain::Sites vec() const;

    Eigen::MatrixXcd dense() const;
    Mpo adjoint() const;
    cplx trace() const;

  private:
    std::vector<Tensor> t_;
};

/*! Superoperator chain, rank-6 tensors
 * [bond_left, s_out, s'_out, s_in, s'_in, bond_right]; acts on vectorized
 * operators whose fused physical index is sigma = s*d + s'.
 */
class SuperMpo {
  public:
    SuperMpo() = default;
    explicit SuperMpo(std::vector<Tensor> tensors);

    static SuperMpo identity(int L, long phys_dim = 2);
    static SuperMpo from_op(const chain::OpSites &op, long phys_dim = 2);

    long nsites() const { return static_cast<long>(t_.size()); }
    const std::vector<Tensor> &tensors() const { return t_; }
    long phys_dim(long k) const { return t_[static_cast<size_t>(k)].dim(1); }
    std::vector<long> bond_dims() const;
    long max_bond() const;

    /*! Fused view [bond_left, sigma_out, sigma_in, bond_right]. */
    chain::OpSites op() const;

    Mpo apply(const Mpo &m) const;
    Eigen::MatrixXcd dense() const; // d^(2L) x d^(2L); tiny L only

  private:
    std::vector<Tensor> t_;
};

// ---- builders ------------------------------------------------------------

/*! Nearest-neighbor Ising MPO, bond dimension 3. */
Mpo hamiltonian_mpo(const SpinChainModel &model);

/*! H (x) 1 + 1 (x) H over 2L sites: same chain with the seam coupling cut. */
Mpo hamiltonian_mpo_doubled(const SpinChainModel &model);

/*! H - lambda 1 as an MPO (compressed back). */
Mpo mpo_shift(const Mpo &h, cplx lambda);

/*! Shift so that tr(H rho0) = 0; commutators are unchanged. */
Mpo shift_traceless_mpo(const Mpo &h, const Mpo &rho0);

/*! Commutator superoperator C = H (x) 1 - 1 (x) H^T on vectorized operators. */
SuperMpo commutator_mpo(const Mpo &h);

struct SuperSquareResult {
    SuperMpo c2;
    chain::CompressReport compression;
};

/*! C . C compressed; throws ToleranceNotMetError if max_bond forces a
 * residual above tol. max_bond < 1 means unbounded. */
SuperSquareResult super_square(const SuperMpo &c, long max_bond, double tol);

Mpo mpo_add(const Mpo &a, const Mpo &b, cplx coeff_a, cplx coeff_b);
Mpo apply_super(const SuperMpo &c, const Mpo &m);
cplx inner(const Mpo &a, const Mpo &b);
double mpo_norm(const Mpo &a);

struct MpoCompressReport {
    double residual = 0.0;
    long max_bond = 0;
    bool bond_capped = false;
};
MpoCompressReport compress(Mpo &m, long max_bond, double tol);

/*! rho0 = |psi><psi| as an MPO (bond = chi^2, then compressed). */
Mpo outer_product(const Mps &psi, long max_bond = 0, double tol = 1e-13);

/*! TT-SVD of a dense operator on L spin-1/2 sites. */
Mpo mpo_from_dense(const Eigen::MatrixXcd &op, int L, double tol, long max_bond = 0);

Eigen::MatrixXcd mps_outer_dense(const Mps &psi);

// named initial states of the experiments
enum class InitialState { PsiPlus, PsiUp, CentralFlip, OuterFlip };

std::string to_string(InitialState s);

struct GroundStateOptions {
    long max_bond = 32;
    int sweeps = 12;
    double trunc_tol = 1e-12;
    double energy_tol = 1e-11;
    int lanczos_iters = 40;
};

struct GroundStateResult {
    Mps psi;
    double energy = 0.0;
    std::vector<double> sweep_energies; // non-increasing
};

/*! Two-site variational ground-state search over the model's MPO. */
GroundStateResult ground_state_mps(const SpinChainModel &model, long max_bond, int sweeps);
GroundStateResult ground_state_mps(const SpinChainModel &model, const GroundStateOptions &opts);

/*! MPS for one of the named initial states (flip states run the ground-state
 * search internally). */
Mps initial_state_mps(InitialState which, const SpinChainModel &model, long max_bond = 32);

/*! rho0 = |psi><psi| for a named initial state or a caller-supplied MPS. */
Mpo initial_mpo(InitialState which, const SpinChainModel &model, long max_bond = 32);
Mpo initial_mpo(const Mps &psi, long max_bond = 0);

// measurement operators of the experiments
Mpo single_site_mpo(const Eigen::Matrix2cd &op, int site, int L);
Mpo sum_site_mpo(const Eigen::Matrix2cd &op, int L, double prefactor = 1.0);
Mpo sigma_field_central_mpo(int L); // (sx + sz)/sqrt(2) on site ceil(L/2)
Mpo s_field_mpo(int L);             // sum_j (sx + sz)/(sqrt(2) L)
Mpo s_x_total_mpo(int L);           // sum_j sx
Mpo o_tensor_o(const Mpo &o);       // O (x) O over 2L sites

} // namespace tadm
