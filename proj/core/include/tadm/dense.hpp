#pragma once

#include "tadm/tensor.hpp"

#include <Eigen/Dense>
#include <optional>
#include <vector>

namespace tadm {

/*! Open Ising chain H = zz sum sz.sz + fx sum sx + fz sum sz.
 * The two models studied here carry zz = -1 with either a pure transverse
 * field (free-fermion solvable) or a tilted field (non-integrable).
 */
struct SpinChainModel {
    int length = 2;
    double zz_coupling = -1.0;
    double field_x = -1.0;
    double field_z = 0.0;

    static SpinChainModel integrable(int L) { return {L, -1.0, -1.0, 0.0}; }
    static SpinChainModel non_integrable(int L) {
        const double f = -1.0 / std::sqrt(2.0);
        return {L, -1.0, f, f};
    }
    void validate() const;
};

constexpr int kDenseLengthCap = 14;

struct DenseOperator {
    Eigen::MatrixXcd m;
    bool hermitian_hint = false;

    long dim() const { return m.rows(); }
};

struct Spectrum {
    Eigen::VectorXd eigenvalues;  // ascending
    Eigen::MatrixXcd eigenvectors; // columns
    double range() const { return eigenvalues(eigenvalues.size() - 1) - eigenvalues(0); }
};

/*! Eigenindex blocks of near-degenerate energies; chained near-degeneracies
 * merge (equivalence closure on the sorted spectrum). */
struct DegeneracyPartition {
    std::vector<long> block_of;            // eigenindex -> block id
    std::vector<std::vector<long>> blocks; // block id -> eigenindices
    double tol_used = 0.0;

    bool all_singleton() const;
};

// Pauli matrices and small kron helpers
Eigen::Matrix2cd pauli_x();
Eigen::Matrix2cd pauli_y();
Eigen::Matrix2cd pauli_z();
Eigen::MatrixXcd kron(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b);
Eigen::MatrixXcd site_operator(const Eigen::Matrix2cd &op, int site, int L);

Eigen::MatrixXcd build_hamiltonian(const SpinChainModel &model);

/*! H - tr(H rho0) 1; leaves every commutator unchanged. */
Eigen::MatrixXcd shift_traceless(const Eigen::MatrixXcd &h, const Eigen::MatrixXcd &rho0);
double traceless_shift_constant(const Eigen::MatrixXcd &h, const Eigen::MatrixXcd &rho0);

Spectrum diagonalize(const Eigen::MatrixXcd &h);

/*! tol < 0 picks the default 1e-9 * spectral range. */
DegeneracyPartition degeneracy_partition(const Spectrum &spec, double tol = -1.0);

/*! Block-diagonal part of a in the energy eigenbasis. */
Eigen::MatrixXcd block_diagonal_part(const Eigen::MatrixXcd &a, const Spectrum &spec,
                                     const DegeneracyPartition &part);

/*! Exact time average of a density matrix; requires unit trace. */
Eigen::MatrixXcd exact_tadm(const Eigen::MatrixXcd &rho0, const Spectrum &spec,
                            const DegeneracyPartition &part);

Eigen::MatrixXcd commutator_apply(const Eigen::MatrixXcd &h, const Eigen::MatrixXcd &a);

struct DenseKrylovOptions {
    int n_iter = 10;
    bool full_reortho = true;     // orthonormalize against all previous basis matrices
    double breakdown_tol = 1e-13; // absolute, on the weighted norm
    bool keep_basis = false;      // retain the basis matrices (for diagnostics)
};

struct DenseKrylovResult {
    Eigen::MatrixXcd M;       // weighted sum of basis matrices
    Eigen::MatrixXcd rho_bar; // rho0 - [H, M]
    Eigen::VectorXcd alphas;
    bool breakdown = false;
    int iterations_done = 0;
    std::vector<Eigen::MatrixXcd> basis;           // only if keep_basis
    std::vector<Eigen::MatrixXcd> raw_candidates;  // pre-orthonormalization, only if keep_basis
    std::vector<double> residual_commutator_norms; // ||[H, rho_bar_n]|| per iteration (not monotone)
    std::vector<double> objective_norms;           // ||rho_bar_n|| per iteration, non-increasing
};

/*! Weighted-Krylov construction of M with <C M_j | C M_k> = delta_jk:
 * first guess C rho0, continuation by C^2, Gram-Schmidt under the weighted
 * inner product, alpha_k = <C M_k | rho0>. */
DenseKrylovResult dense_krylov_solve(const Eigen::MatrixXcd &h, const Eigen::MatrixXcd &rho0,
                                     const DenseKrylovOptions &opts);

/*! Uhlmann fidelity with negative eigenvalues clipped before the roots. */
double fidelity(const Eigen::MatrixXcd &rho_exact, const Eigen::MatrixXcd &rho_approx);

/*! sigma^2 = sum_{j != k} |p_jk o_kj|^2; requires an all-singleton partition. */
double exact_variance(const Eigen::MatrixXcd &rho0, const Eigen::MatrixXcd &obs,
                      const Spectrum &spec, const DegeneracyPartition &part);

/*! Time-sampling estimate of Var <O>(t) on a uniform grid over [0, t_max]. */
double variance_time_sampled(const Eigen::MatrixXcd &rho0, const Eigen::MatrixXcd &obs,
                             const Spectrum &spec, double t_max, long n_samples);

/*! <O>(t) on the same grid; used by the sampling oracle and tests. */
std::vector<double> expectation_time_series(const Eigen::MatrixXcd &rho0,
                                            const Eigen::MatrixXcd &obs, const Spectrum &spec,
                                            double t_max, long n_samples);

} // namespace tadm
