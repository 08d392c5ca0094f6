#pragma once

#include "tadm/chain.hpp"
#include "tadm/mpo.hpp"
#include "tadm/solver.hpp"

namespace tadm {

/*! Operator encoded as an MPS over 2L sites: positions 1..L carry the ket
 * legs in site order, positions L+1..2L the bra legs in reversed site
 * order. Folding the two halves together reproduces the operator.
 */
class DoubleMps {
  public:
    DoubleMps() = default;
    explicit DoubleMps(chain::Sites tensors);

    /*! |psi><psi| with a trivial center bond. */
    static DoubleMps from_pure_state(const Mps &psi);

    long nsites_physical() const { return chain::nsites(t_) / 2; }
    long nsites_chain() const { return chain::nsites(t_); }
    const chain::Sites &tensors() const { return t_; }
    chain::Sites &tensors() { return t_; }
    std::vector<long> bond_dims() const { return chain::bond_dims(t_); }
    /*! chain position -> physical site (1..L, L..1), 0-based sites. */
    std::vector<long> site_map() const;

    /*! Contract the two halves into an MPO over L sites (bond chi_j chi_{2L-j}). */
    Mpo fold(long max_bond = 0, double tol = 1e-13) const;
    Eigen::MatrixXcd dense() const;
    cplx trace() const;

    /*! Schmidt spectrum at the center bond (the lambda matrix of the
     * |u_i> lambda_ij <v_j| decomposition, for canonicalized chains). */
    std::vector<double> center_schmidt() const;

  private:
    chain::Sites t_;
};

/*! C = H (x) 1 - 1 (x) H as one operator chain over the 2L unfolded sites;
 * the bra half carries the reversed, transposed Hamiltonian chain. */
chain::OpSites double_commutator(const Mpo &h);

/*! M -> (M + M^dag)/2 on the folded operator; bond at most doubled. */
DoubleMps hermitize(const DoubleMps &m, long max_bond = 0, double tol = 1e-12);

DoubleMps double_adjoint(const DoubleMps &m);

struct DoubleSolveResult {
    DoubleMps M; // normalized, |C M| = 1
    double c = 0.0;
    SolveReport report;
};

/*! Same sweep solver on the double-MPS representation; the Hermitian-to-real
 * mapping does not apply here, chains stay complex. */
DoubleSolveResult solve_double(const DoubleMps &rho0, const Mpo &h, const SolverConfig &cfg);

/*! rho_bar = rho0 - c C M as a double MPS. */
DoubleMps assemble_tadm_double(const DoubleMps &rho0, const DoubleMps &m, const Mpo &h,
                               double c = -1.0);

} // namespace tadm
