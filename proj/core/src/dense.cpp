#include "tadm/dense.hpp"
#include "tadm/errors.hpp"

#include <cmath>

namespace tadm {

namespace {

cplx hs_inner(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b) {
    return (a.adjoint() * b).trace();
}

double hs_norm(const Eigen::MatrixXcd &a) { return a.norm(); }

} // namespace

void SpinChainModel::validate() const {
    if (length < 2) throw InputError("spin chain needs length >= 2");
    if (!std::isfinite(zz_coupling) || !std::isfinite(field_x) || !std::isfinite(field_z))
        throw InputError("spin chain coefficients must be finite");
}

bool DegeneracyPartition::all_singleton() const {
    for (const auto &b : blocks)
        if (b.size() > 1) return false;
    return true;
}

Eigen::Matrix2cd pauli_x() {
    Eigen::Matrix2cd m;
    m << 0, 1, 1, 0;
    return m;
}

Eigen::Matrix2cd pauli_y() {
    Eigen::Matrix2cd m;
    m << 0, cplx(0, -1), cplx(0, 1), 0;
    return m;
}

Eigen::Matrix2cd pauli_z() {
    Eigen::Matrix2cd m;
    m << 1, 0, 0, -1;
    return m;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (long i = 0; i < a.rows(); ++i)
        for (long j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Eigen::MatrixXcd site_operator(const Eigen::Matrix2cd &op, int site, int L) {
    if (site < 0 || site >= L) throw InputError("site index out of range");
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
    for (int j = 0; j < L; ++j) {
        if (j == site)
            out = kron(out, op);
        else
            out = kron(out, Eigen::Matrix2cd::Identity());
    }
    return out;
}

Eigen::MatrixXcd build_hamiltonian(const SpinChainModel &model) {
    model.validate();
    if (model.length > kDenseLengthCap)
        throw CapacityError("dense Hamiltonian capped at L <= " + std::to_string(kDenseLengthCap));
    const int L = model.length;
    const long dim = 1L << L;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    const Eigen::Matrix2cd sx = pauli_x(), sz = pauli_z();
    for (int j = 0; j + 1 < L; ++j) {
        Eigen::MatrixXcd zz = site_operator(sz, j, L) * site_operator(sz, j + 1, L);
        h += model.zz_coupling * zz;
    }
    for (int j = 0; j < L; ++j) {
        if (model.field_x != 0.0) h += model.field_x * site_operator(sx, j, L);
        if (model.field_z != 0.0) h += model.field_z * site_operator(sz, j, L);
    }
    return h;
}

double traceless_shift_constant(const Eigen::MatrixXcd &h, const Eigen::MatrixXcd &rho0) {
    cplx t = (h * rho0).trace();
    return t.real();
}

Eigen::MatrixXcd shift_traceless(const Eigen::MatrixXcd &h, const Eigen::MatrixXcd &rho0) {
    cplx tr = rho0.trace();
    if (std::abs(tr - cplx(1.0)) > 1e-8) throw InputError("shift_traceless expects tr(rho0) = 1");
    double lambda = traceless_shift_constant(h, rho0);
    return h - lambda * Eigen::MatrixXcd::Identity(h.rows(), h.cols());
}

Spectrum diagonalize(const Eigen::MatrixXcd &h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    if (es.info() != Eigen::Success) throw DecompositionError("eigendecomposition failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

DegeneracyPartition degeneracy_partition(const Spectrum &spec, double tol) {
    const long n = spec.eigenvalues.size();
    if (tol < 0) tol = 1e-9 * std::max(spec.range(), 1e-300);
    DegeneracyPartition part;
    part.tol_used = tol;
    part.block_of.assign(static_cast<size_t>(n), 0);
    long block = -1;
    for (long j = 0; j < n; ++j) {
        if (j == 0 || spec.eigenvalues(j) - spec.eigenvalues(j - 1) > tol) {
            ++block;
            part.blocks.emplace_back();
        }
        part.block_of[static_cast<size_t>(j)] = block;
        part.blocks.back().push_back(j);
    }
    return part;
}

Eigen::MatrixXcd block_diagonal_part(const Eigen::MatrixXcd &a, const Spectrum &spec,
                                     const DegeneracyPartition &part) {
    Eigen::MatrixXcd in_basis = spec.eigenvectors.adjoint() * a * spec.eigenvectors;
    const long n = in_basis.rows();
    for (long j = 0; j < n; ++j)
        for (long k = 0; k < n; ++k)
            if (part.block_of[static_cast<size_t>(j)] != part.block_of[static_cast<size_t>(k)])
                in_basis(j, k) = 0.0;
    return spec.eigenvectors * in_basis * spec.eigenvectors.adjoint();
}

Eigen::MatrixXcd exact_tadm(const Eigen::MatrixXcd &rho0, const Spectrum &spec,
                            const DegeneracyPartition &part) {
    if (std::abs(rho0.trace() - cplx(1.0)) > 1e-8) throw InputError("exact_tadm expects tr(rho0) = 1");
    return block_diagonal_part(rho0, spec, part);
}

Eigen::MatrixXcd commutator_apply(const Eigen::MatrixXcd &h, const Eigen::MatrixXcd &a) {
    if (h.rows() != a.rows() || h.cols() != a.cols()) throw DimensionError("commutator shape mismatch");
    return h * a - a * h;
}

DenseKrylovResult dense_krylov_solve(const Eigen::MatrixXcd &h, const Eigen::MatrixXcd &rho0,
                                     const DenseKrylovOptions &opts) {
    if (opts.n_iter < 1) throw InputError("dense_krylov_solve needs n_iter >= 1");
    const long dim = rho0.rows();
    DenseKrylovResult res;
    res.M = Eigen::MatrixXcd::Zero(dim, dim);

    std::vector<Eigen::MatrixXcd> basis;     // M_j
    std::vector<Eigen::MatrixXcd> commuted;  // C M_j
    std::vector<cplx> alphas;

    Eigen::MatrixXcd candidate = commutator_apply(h, rho0); // first guess C rho0
    for (int n = 0; n < opts.n_iter; ++n) {
        if (opts.keep_basis) res.raw_candidates.push_back(candidate);
        Eigen::MatrixXcd z = candidate;
        Eigen::MatrixXcd cz = commutator_apply(h, z);

        // weighted Gram-Schmidt: the commutators build the orthonormal system
        const size_t lo = opts.full_reortho ? 0 : (basis.size() >= 2 ? basis.size() - 2 : 0);
        const int passes = opts.full_reortho ? 2 : 1; // second pass holds orthogonality over long runs
        for (int pass = 0; pass < passes; ++pass)
            for (size_t j = lo; j < basis.size(); ++j) {
                cplx ov = hs_inner(commuted[j], cz);
                z -= ov * basis[j];
                cz -= ov * commuted[j];
            }
        double wnorm = hs_norm(cz);
        if (wnorm < opts.breakdown_tol) {
            res.breakdown = true;
            break;
        }
        z /= wnorm;
        cz /= wnorm;

        cplx alpha = hs_inner(cz, rho0);
        basis.push_back(z);
        commuted.push_back(cz);
        alphas.push_back(alpha);
        res.M += alpha * z;
        res.iterations_done = n + 1;
        Eigen::MatrixXcd rho_bar_n = rho0 - commutator_apply(h, res.M);
        res.residual_commutator_norms.push_back(hs_norm(commutator_apply(h, rho_bar_n)));
        res.objective_norms.push_back(hs_norm(rho_bar_n));

        candidate = commutator_apply(h, cz); // C^2 M_n as next raw candidate
    }

    res.rho_bar = rho0 - commutator_apply(h, res.M);
    res.alphas.resize(static_cast<long>(alphas.size()));
    for (size_t j = 0; j < alphas.size(); ++j) res.alphas(static_cast<long>(j)) = alphas[j];
    if (opts.keep_basis) res.basis = basis;
    return res;
}

double fidelity(const Eigen::MatrixXcd &rho_exact, const Eigen::MatrixXcd &rho_approx) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho_exact);
    if (es.info() != Eigen::Success) throw DecompositionError("fidelity: eigendecomposition failed");
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    Eigen::MatrixXcd sqrt_rho = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();

    Eigen::MatrixXcd inner = sqrt_rho * rho_approx * sqrt_rho;
    inner = 0.5 * (inner + inner.adjoint().eval()); // clean the Hermitian residue
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es2(inner);
    if (es2.info() != Eigen::Success) throw DecompositionError("fidelity: inner eigendecomposition failed");
    double f = 0.0;
    for (long j = 0; j < es2.eigenvalues().size(); ++j)
        f += std::sqrt(std::max(0.0, es2.eigenvalues()(j)));
    return f;
}

double exact_variance(const Eigen::MatrixXcd &rho0, const Eigen::MatrixXcd &obs,
                      const Spectrum &spec, const DegeneracyPartition &part) {
    if (!part.all_singleton())
        throw UnsupportedConfigError(
            "exact_variance requires a non-degenerate spectrum; use the doubled-system route");
    Eigen::MatrixXcd p = spec.eigenvectors.adjoint() * rho0 * spec.eigenvectors;
    Eigen::MatrixXcd o = spec.eigenvectors.adjoint() * obs * spec.eigenvectors;
    const long n = p.rows();
    double var = 0.0;
    for (long j = 0; j < n; ++j)
        for (long k = 0; k < n; ++k)
            if (j != k) var += std::norm(p(j, k) * o(k, j));
    return var;
}

std::vector<double> expectation_time_series(const Eigen::MatrixXcd &rho0,
                                            const Eigen::MatrixXcd &obs, const Spectrum &spec,
                                            double t_max, long n_samples) {
    // <O>(t) = sum_jk exp(-i (E_j - E_k) t) p_jk o_kj  (hbar = 1)
    Eigen::MatrixXcd p = spec.eigenvectors.adjoint() * rho0 * spec.eigenvectors;
    Eigen::MatrixXcd o = spec.eigenvectors.adjoint() * obs * spec.eigenvectors;
    const long n = p.rows();
    Eigen::MatrixXcd weight(n, n); // weight(j,k) = p_jk o_kj
    for (long j = 0; j < n; ++j)
        for (long k = 0; k < n; ++k) weight(j, k) = p(j, k) * o(k, j);

    // val(t) = a(t)^T W b(t) with a_j = exp(-i E_j t), b_k = exp(+i E_k t)
    std::vector<double> series;
    series.reserve(static_cast<size_t>(n_samples));
    Eigen::VectorXcd a(n), b(n);
    for (long s = 0; s < n_samples; ++s) {
        double t = (n_samples == 1) ? 0.0 : t_max * static_cast<double>(s) / static_cast<double>(n_samples - 1);
        for (long j = 0; j < n; ++j) {
            a(j) = std::polar(1.0, -spec.eigenvalues(j) * t);
            b(j) = std::conj(a(j));
        }
        cplx val = a.transpose() * (weight * b);
        series.push_back(val.real());
    }
    return series;
}

double variance_time_sampled(const Eigen::MatrixXcd &rho0, const Eigen::MatrixXcd &obs,
                             const Spectrum &spec, double t_max, long n_samples) {
    std::vector<double> series = expectation_time_series(rho0, obs, spec, t_max, n_samples);
    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= static_cast<double>(series.size());
    double var = 0.0;
    for (double v : series) var += (v - mean) * (v - mean);
    return var / static_cast<double>(series.size());
}

} // namespace tadm
