#include "tadm/mpo.hpp"
#include "tadm/errors.hpp"

#include <cmath>

namespace tadm {

// ---- Mps -------------------------------------------------------------------

Mps::Mps(chain::Sites tensors) : t_(std::move(tensors)) { chain::validate(t_); }

Mps Mps::product_state(const std::vector<Eigen::Vector2cd> &site_states) {
    chain::Sites t;
    for (const auto &v : site_states) {
        Tensor s({1, 2, 1});
        s({0, 0, 0}) = v(0);
        s({0, 1, 0}) = v(1);
        t.push_back(std::move(s));
    }
    return Mps(std::move(t));
}

Mps Mps::all_up(int L) {
    return product_state(std::vector<Eigen::Vector2cd>(static_cast<size_t>(L), Eigen::Vector2cd(1.0, 0.0)));
}

Mps Mps::all_plus(int L) {
    const double r = 1.0 / std::sqrt(2.0);
    return product_state(std::vector<Eigen::Vector2cd>(static_cast<size_t>(L), Eigen::Vector2cd(r, r)));
}

void Mps::normalize() {
    double n = norm();
    if (n == 0.0) throw InputError("cannot normalize the zero state");
    t_ = chain::scale(std::move(t_), 1.0 / n);
}

Eigen::VectorXcd Mps::dense_vector() const {
    Tensor d = chain::dense(t_);
    Eigen::VectorXcd v(d.size());
    for (long i = 0; i < d.size(); ++i) v(i) = d.flat(i);
    return v;
}

void Mps::apply_site_operator(const Eigen::Matrix2cd &op, long site) {
    Tensor o({2, 2});
    for (long i = 0; i < 2; ++i)
        for (long j = 0; j < 2; ++j) o({i, j}) = op(i, j);
    Tensor &s = t_[static_cast<size_t>(site)];
    s = contract(o, s, {{1, 1}}).permute({1, 0, 2});
}

// ---- Mpo -------------------------------------------------------------------

Mpo::Mpo(std::vector<Tensor> tensors) : t_(std::move(tensors)) { chain::validate_op(t_); }

Mpo Mpo::identity(int L, long phys_dim) {
    std::vector<Tensor> t;
    for (int j = 0; j < L; ++j) {
        Tensor s({1, phys_dim, phys_dim, 1});
        for (long p = 0; p < phys_dim; ++p) s({0, p, p, 0}) = 1.0;
        t.push_back(std::move(s));
    }
    return Mpo(std::move(t));
}

Mpo Mpo::from_vec(const chain::Sites &sites, const std::vector<long> &phys_out) {
    std::vector<Tensor> t;
    for (size_t j = 0; j < sites.size(); ++j) {
        long po = phys_out[j];
        long pi = sites[j].dim(1) / po;
        if (po * pi != sites[j].dim(1)) throw DimensionError("from_vec: physical extent not divisible");
        t.push_back(sites[j].reshape({sites[j].dim(0), po, pi, sites[j].dim(2)}));
    }
    return Mpo(std::move(t));
}

std::vector<long> Mpo::bond_dims() const { return chain::bond_dims_op(t_); }

long Mpo::max_bond() const { return chain::max_bond_op(t_); }

chain::Sites Mpo::vec() const { return chain::op_to_sites(t_); }

Eigen::MatrixXcd Mpo::dense() const {
    Tensor full = chain::dense(vec()); // [sigma_1, ..., sigma_L]
    const long n = nsites();
    long rows = 1, cols = 1;
    for (long k = 0; k < n; ++k) {
        rows *= t_[static_cast<size_t>(k)].dim(1);
        cols *= t_[static_cast<size_t>(k)].dim(2);
    }
    // split every sigma_j = (s_j, s'_j), then collect kets before bras
    Shape split;
    std::vector<int> perm;
    for (long k = 0; k < n; ++k) {
        split.push_back(t_[static_cast<size_t>(k)].dim(1));
        split.push_back(t_[static_cast<size_t>(k)].dim(2));
    }
    for (long k = 0; k < n; ++k) perm.push_back(static_cast<int>(2 * k));
    for (long k = 0; k < n; ++k) perm.push_back(static_cast<int>(2 * k + 1));
    Tensor arranged = full.reshape(split).permute(perm);
    Eigen::MatrixXcd m(rows, cols);
    for (long r = 0; r < rows; ++r)
        for (long c = 0; c < cols; ++c) m(r, c) = arranged.flat(r * cols + c);
    return m;
}

Mpo Mpo::adjoint() const {
    std::vector<Tensor> t;
    t.reserve(t_.size());
    for (const Tensor &s : t_) t.push_back(s.conj().permute({0, 2, 1, 3}));
    return Mpo(std::move(t));
}

cplx Mpo::trace() const {
    Tensor env = Tensor::scalar(1.0);
    for (const Tensor &s : t_) {
        Tensor traced({s.dim(0), s.dim(3)});
        for (long a = 0; a < s.dim(0); ++a)
            for (long b = 0; b < s.dim(3); ++b) {
                cplx acc = 0.0;
                for (long p = 0; p < s.dim(1); ++p) acc += s({a, p, p, b});
                traced({a, b}) = acc;
            }
        env = contract(env.reshape({1, env.dim(env.rank() - 1)}), traced, {{1, 0}});
    }
    return env.flat(0);
}

// ---- SuperMpo ---------------------------------------------------------------

SuperMpo::SuperMpo(std::vector<Tensor> tensors) : t_(std::move(tensors)) {
    for (const Tensor &s : t_)
        if (s.rank() != 6) throw DimensionError("SuperMpo tensors must be rank 6");
}

SuperMpo SuperMpo::identity(int L, long d) {
    std::vector<Tensor> t;
    for (int j = 0; j < L; ++j) {
        Tensor s({1, d, d, d, d, 1});
        for (long a = 0; a < d; ++a)
            for (long b = 0; b < d; ++b) s({0, a, b, a, b, 0}) = 1.0;
        t.push_back(std::move(s));
    }
    return SuperMpo(std::move(t));
}

SuperMpo SuperMpo::from_op(const chain::OpSites &op, long d) {
    std::vector<Tensor> t;
    for (const Tensor &s : op)
        t.push_back(s.reshape({s.dim(0), d, d, d, d, s.dim(3)}));
    return SuperMpo(std::move(t));
}

std::vector<long> SuperMpo::bond_dims() const {
    std::vector<long> b;
    b.push_back(t_.front().dim(0));
    for (const Tensor &s : t_) b.push_back(s.dim(5));
    return b;
}

long SuperMpo::max_bond() const {
    long m = 0;
    for (long d : bond_dims()) m = std::max(m, d);
    return m;
}

chain::OpSites SuperMpo::op() const {
    chain::OpSites out;
    for (const Tensor &s : t_)
        out.push_back(s.reshape({s.dim(0), s.dim(1) * s.dim(2), s.dim(3) * s.dim(4), s.dim(5)}));
    return out;
}

Mpo SuperMpo::apply(const Mpo &m) const {
    if (nsites() != m.nsites()) throw DimensionError("apply: site count mismatch");
    chain::Sites applied = chain::apply_op(op(), m.vec());
    std::vector<long> po;
    for (long k = 0; k < nsites(); ++k) po.push_back(t_[static_cast<size_t>(k)].dim(1));
    return Mpo::from_vec(applied, po);
}

Eigen::MatrixXcd SuperMpo::dense() const {
    chain::OpSites w = op();
    // materialize as matrix over the fused sigma multi-indices
    long dim = 1;
    for (const Tensor &s : w) dim *= s.dim(1);
    Tensor env = Tensor::scalar(1.0).reshape({1, 1, 1}); // [rows, cols, bond]
    long rows = 1, cols = 1;
    for (const Tensor &s : w) {
        Tensor t = contract(env, s, {{2, 0}}); // [rows, cols, po, pi, br]
        t = t.permute({0, 2, 1, 3, 4});
        rows *= s.dim(1);
        cols *= s.dim(2);
        env = std::move(t).reshape({rows, cols, s.dim(3)});
    }
    Eigen::MatrixXcd m(dim, dim);
    for (long r = 0; r < dim; ++r)
        for (long c = 0; c < dim; ++c) m(r, c) = env.flat((r * dim + c));
    return m;
}

// ---- builders ----------------------------------------------------------------

namespace {

Tensor ising_site_tensor(const SpinChainModel &model, bool emit_coupling) {
    // W = [[I, sz, h], [0, 0, c*sz], [0, 0, I]] with h the local field term.
    const Eigen::Matrix2cd sx = pauli_x(), sz = pauli_z();
    Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    Eigen::Matrix2cd h = model.field_x * sx + model.field_z * sz;
    Tensor w({3, 2, 2, 3});
    auto put = [&](long r, long c, const Eigen::Matrix2cd &m) {
        for (long a = 0; a < 2; ++a)
            for (long b = 0; b < 2; ++b) w({r, a, b, c}) = m(a, b);
    };
    put(0, 0, id);
    if (emit_coupling) put(0, 1, sz);
    put(0, 2, h);
    put(1, 2, model.zz_coupling * sz);
    put(2, 2, id);
    return w;
}

Tensor row_slice(const Tensor &w, long row) {
    Tensor out({1, w.dim(1), w.dim(2), w.dim(3)});
    for (long a = 0; a < w.dim(1); ++a)
        for (long b = 0; b < w.dim(2); ++b)
            for (long c = 0; c < w.dim(3); ++c) out({0, a, b, c}) = w({row, a, b, c});
    return out;
}

Tensor col_slice(const Tensor &w, long col) {
    Tensor out({w.dim(0), w.dim(1), w.dim(2), 1});
    for (long r = 0; r < w.dim(0); ++r)
        for (long a = 0; a < w.dim(1); ++a)
            for (long b = 0; b < w.dim(2); ++b) out({r, a, b, 0}) = w({r, a, b, col});
    return out;
}

Mpo ising_mpo(const SpinChainModel &model, const std::vector<bool> &emit_coupling) {
    const int L = static_cast<int>(emit_coupling.size());
    std::vector<Tensor> t;
    for (int j = 0; j < L; ++j) {
        Tensor w = ising_site_tensor(model, emit_coupling[static_cast<size_t>(j)]);
        if (j == 0) w = row_slice(w, 0);
        if (j == L - 1) w = col_slice(w, 2);
        t.push_back(std::move(w));
    }
    return Mpo(std::move(t));
}

} // namespace

Mpo hamiltonian_mpo(const SpinChainModel &model) {
    model.validate();
    std::vector<bool> emit(static_cast<size_t>(model.length), true);
    emit.back() = false; // open boundary: L-1 coupling terms
    return ising_mpo(model, emit);
}

Mpo hamiltonian_mpo_doubled(const SpinChainModel &model) {
    model.validate();
    const int L = model.length;
    std::vector<bool> emit(static_cast<size_t>(2 * L), true);
    emit[static_cast<size_t>(L - 1)] = false; // no coupling across the seam
    emit.back() = false;
    SpinChainModel doubled = model;
    doubled.length = 2 * L;
    return ising_mpo(doubled, emit);
}

Mpo mpo_shift(const Mpo &h, cplx lambda) {
    Mpo out = mpo_add(h, Mpo::identity(static_cast<int>(h.nsites()), h.phys_dim(0)), 1.0, -lambda);
    compress(out, 0, 1e-14);
    return out;
}

Mpo shift_traceless_mpo(const Mpo &h, const Mpo &rho0) {
    cplx lambda = inner(rho0.adjoint(), h); // tr(rho0 H), rho0 Hermitian
    return mpo_shift(h, lambda.real());
}

SuperMpo commutator_mpo(const Mpo &h) {
    // C = H (x) 1 acting on the ket leg minus 1 (x) H^T acting on the bra leg.
    const long n = h.nsites();
    chain::OpSites left, right;
    for (long k = 0; k < n; ++k) {
        const Tensor &w = h.site(k);
        long d = w.dim(1), bl = w.dim(0), br = w.dim(3);
        Tensor lt({bl, d, d, d, d, br});
        Tensor rt({bl, d, d, d, d, br});
        for (long a = 0; a < bl; ++a)
            for (long so = 0; so < d; ++so)
                for (long si = 0; si < d; ++si)
                    for (long p = 0; p < d; ++p)
                        for (long b = 0; b < br; ++b) {
                            lt({a, so, p, si, p, b}) += w({a, so, si, b});
                            rt({a, p, so, p, si, b}) += w({a, si, so, b}); // H^T on the bra leg
                        }
        left.push_back(lt.reshape({bl, d * d, d * d, br}));
        right.push_back(rt.reshape({bl, d * d, d * d, br}));
    }
    chain::OpSites sum = chain::add_op(left, right, 1.0, -1.0);
    return SuperMpo::from_op(sum, h.phys_dim(0));
}

SuperSquareResult super_square(const SuperMpo &c, long max_bond, double tol) {
    chain::OpSites sq = chain::compose(c.op(), c.op());
    chain::CompressReport rep = chain::compress_op(sq, max_bond, tol);
    if (rep.bond_capped && rep.residual() > tol)
        throw ToleranceNotMetError("super_square: bond cap prevents the requested tolerance",
                                   rep.residual());
    SuperSquareResult out{SuperMpo::from_op(sq, c.phys_dim(0)), rep};
    return out;
}

Mpo mpo_add(const Mpo &a, const Mpo &b, cplx ca, cplx cb) {
    if (a.nsites() != b.nsites()) throw DimensionError("mpo_add: site count mismatch");
    chain::Sites sum = chain::add(a.vec(), b.vec(), ca, cb);
    std::vector<long> po;
    for (long k = 0; k < a.nsites(); ++k) po.push_back(a.phys_dim(k));
    return Mpo::from_vec(sum, po);
}

Mpo apply_super(const SuperMpo &c, const Mpo &m) { return c.apply(m); }

cplx inner(const Mpo &a, const Mpo &b) { return chain::inner(a.vec(), b.vec()); }

double mpo_norm(const Mpo &a) { return chain::norm(a.vec()); }

MpoCompressReport compress(Mpo &m, long max_bond, double tol) {
    chain::Sites s = m.vec();
    std::vector<long> po;
    for (long k = 0; k < m.nsites(); ++k) po.push_back(m.phys_dim(k));
    chain::CompressReport rep = chain::compress(s, max_bond, tol);
    m = Mpo::from_vec(s, po);
    return {rep.residual(), rep.max_bond, rep.bond_capped};
}

Mpo outer_product(const Mps &psi, long max_bond, double tol) {
    std::vector<Tensor> t;
    for (long k = 0; k < psi.nsites(); ++k) {
        const Tensor &a = psi.site(k);
        Tensor b = a.conj();
        // [al, s, ar] x [bl, s', br] -> [al, bl, s, s', ar, br]
        Tensor o({a.dim(0) * b.dim(0), a.dim(1), b.dim(1), a.dim(2) * b.dim(2)});
        for (long al = 0; al < a.dim(0); ++al)
            for (long bl = 0; bl < b.dim(0); ++bl)
                for (long s = 0; s < a.dim(1); ++s)
                    for (long sp = 0; sp < b.dim(1); ++sp)
                        for (long ar = 0; ar < a.dim(2); ++ar)
                            for (long br = 0; br < b.dim(2); ++br)
                                o({al * b.dim(0) + bl, s, sp, ar * b.dim(2) + br}) =
                                    a({al, s, ar}) * b({bl, sp, br});
        t.push_back(std::move(o));
    }
    Mpo rho{std::move(t)};
    compress(rho, max_bond, tol);
    return rho;
}

Mpo mpo_from_dense(const Eigen::MatrixXcd &op, int L, double tol, long max_bond) {
    const long dim = 1L << L;
    if (op.rows() != dim || op.cols() != dim) throw DimensionError("mpo_from_dense: size mismatch");
    // interleave ket and bra indices per site, then TT-SVD over sigma_j
    Shape split(static_cast<size_t>(2 * L), 2);
    Tensor t(split);
    for (long r = 0; r < dim; ++r)
        for (long c = 0; c < dim; ++c) {
            long idx = 0;
            for (int k = 0; k < L; ++k) {
                long s = (r >> (L - 1 - k)) & 1;
                long sp = (c >> (L - 1 - k)) & 1;
                idx = idx * 4 + s * 2 + sp;
            }
            t.flat(idx) = op(r, c);
        }
    Shape fused(static_cast<size_t>(L), 4);
    chain::Sites s = chain::from_dense(t.reshape(fused), tol, max_bond);
    return Mpo::from_vec(s, std::vector<long>(static_cast<size_t>(L), 2));
}

Eigen::MatrixXcd mps_outer_dense(const Mps &psi) {
    Eigen::VectorXcd v = psi.dense_vector();
    return v * v.adjoint();
}

std::string to_string(InitialState s) {
    switch (s) {
        case InitialState::PsiPlus: return "psi_plus";
        case InitialState::PsiUp: return "psi_up";
        case InitialState::CentralFlip: return "central_flip";
        case InitialState::OuterFlip: return "outer_flip";
    }
    return "?";
}

Mps initial_state_mps(InitialState which, const SpinChainModel &model, long max_bond) {
    const int L = model.length;
    switch (which) {
        case InitialState::PsiUp: return Mps::all_up(L);
        case InitialState::PsiPlus: return Mps::all_plus(L);
        case InitialState::CentralFlip: {
            GroundStateResult gs = ground_state_mps(model, max_bond, 14);
            Mps psi = gs.psi;
            long c = (L + 1) / 2; // 1-based ceil(L/2)
            psi.apply_site_operator(pauli_x(), c - 1);
            psi.normalize();
            return psi;
        }
        case InitialState::OuterFlip: {
            GroundStateResult gs = ground_state_mps(model, max_bond, 14);
            Mps psi = gs.psi;
            psi.apply_site_operator(pauli_x(), 0);
            psi.apply_site_operator(pauli_x(), L - 1);
            psi.normalize();
            return psi;
        }
    }
    throw InputError("unknown initial state");
}

Mpo initial_mpo(InitialState which, const SpinChainModel &model, long max_bond) {
    Mps psi = initial_state_mps(which, model, max_bond);
    return initial_mpo(psi, 0);
}

Mpo initial_mpo(const Mps &psi_in, long max_bond) {
    Mps psi = psi_in;
    psi.normalize();
    return outer_product(psi, max_bond, 1e-13);
}

Mpo single_site_mpo(const Eigen::Matrix2cd &op, int site, int L) {
    if (site < 0 || site >= L) throw InputError("single_site_mpo: site out of range");
    std::vector<Tensor> t;
    for (int j = 0; j < L; ++j) {
        Tensor s({1, 2, 2, 1});
        for (long a = 0; a < 2; ++a)
            for (long b = 0; b < 2; ++b)
                s({0, a, b, 0}) = (j == site) ? cplx(op(a, b)) : cplx(a == b ? 1.0 : 0.0);
        t.push_back(std::move(s));
    }
    return Mpo(std::move(t));
}

Mpo sum_site_mpo(const Eigen::Matrix2cd &op, int L, double prefactor) {
    // bond-2 chain: [[I, c*op], [0, I]]
    std::vector<Tensor> t;
    Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    for (int j = 0; j < L; ++j) {
        Tensor w({2, 2, 2, 2});
        for (long a = 0; a < 2; ++a)
            for (long b = 0; b < 2; ++b) {
                w({0, a, b, 0}) = id(a, b);
                w({0, a, b, 1}) = prefactor * op(a, b);
                w({1, a, b, 1}) = id(a, b);
            }
        if (j == 0) w = row_slice(w, 0);
        if (j == L - 1) w = col_slice(w, 1);
        t.push_back(std::move(w));
    }
    return Mpo(std::move(t));
}

Mpo sigma_field_central_mpo(int L) {
    Eigen::Matrix2cd op = (pauli_x() + pauli_z()) / std::sqrt(2.0);
    int c = (L + 1) / 2; // 1-based
    return single_site_mpo(op, c - 1, L);
}

Mpo s_field_mpo(int L) {
    Eigen::Matrix2cd op = (pauli_x() + pauli_z()) / std::sqrt(2.0);
    return sum_site_mpo(op, L, 1.0 / static_cast<double>(L));
}

Mpo s_x_total_mpo(int L) { return sum_site_mpo(pauli_x(), L, 1.0); }

Mpo o_tensor_o(const Mpo &o) {
    std::vector<Tensor> t = o.tensors();
    std::vector<Tensor> d = t;
    d.insert(d.end(), t.begin(), t.end());
    return Mpo(std::move(d));
}

} // namespace tadm
