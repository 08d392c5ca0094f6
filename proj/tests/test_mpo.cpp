#include "test_util.hpp"

#include <tadm/errors.hpp>
#include <tadm/mpo.hpp>

#include <doctest.h>

using namespace tadm;

namespace {

Mpo random_product_mpo(int L, std::mt19937_64 &rng) {
    std::vector<Tensor> t;
    for (int j = 0; j < L; ++j) t.push_back(test::random_tensor({1, 2, 2, 1}, rng));
    return Mpo(std::move(t));
}

Mpo random_mpo(int L, long bond, std::mt19937_64 &rng) {
    std::vector<Tensor> t;
    long bl = 1;
    for (int j = 0; j < L; ++j) {
        long br = (j + 1 == L) ? 1 : bond;
        t.push_back(test::random_tensor({bl, 2, 2, br}, rng));
        bl = br;
    }
    return Mpo(std::move(t));
}

} // namespace

TEST_CASE("hamiltonian_mpo materializes the dense Hamiltonian") {
    for (int L : {2, 4, 6}) {
        for (auto model : {SpinChainModel::integrable(L), SpinChainModel::non_integrable(L)}) {
            Mpo h = hamiltonian_mpo(model);
            Eigen::MatrixXcd hd = build_hamiltonian(model);
            CHECK((h.dense() - hd).norm() < 1e-12 * hd.norm());
        }
    }
    Mpo h = hamiltonian_mpo(SpinChainModel::integrable(5));
    CHECK(h.bond_dims() == std::vector<long>{1, 3, 3, 3, 3, 1});
}

TEST_CASE("L=2 integrable MPO equals the explicit three-term sum") {
    Mpo h = hamiltonian_mpo(SpinChainModel::integrable(2));
    Eigen::MatrixXcd sx = pauli_x(), sz = pauli_z(), id = Eigen::Matrix2cd::Identity();
    Eigen::MatrixXcd ref = -kron(sz, sz) - kron(sx, id) - kron(id, sx);
    CHECK((h.dense() - ref).norm() < 1e-13);
}

TEST_CASE("shifted Hamiltonian MPO is rho0-traceless") {
    SpinChainModel model = SpinChainModel::non_integrable(4);
    Mpo h = hamiltonian_mpo(model);
    Mpo rho = initial_mpo(InitialState::PsiUp, model);
    Mpo hs = shift_traceless_mpo(h, rho);
    cplx tr = inner(rho.adjoint(), hs);
    CHECK(std::abs(tr) < 1e-12);
}

TEST_CASE("commutator superoperator annihilates identity and H, matches dense") {
    SpinChainModel model = SpinChainModel::non_integrable(4);
    Mpo h = hamiltonian_mpo(model);
    SuperMpo c = commutator_mpo(h);
    CHECK(c.max_bond() == 6);

    // zero up to transfer-contraction cancellation of the two H-copies
    Mpo id = Mpo::identity(4);
    CHECK(mpo_norm(apply_super(c, id)) < 1e-9 * mpo_norm(h));
    CHECK(mpo_norm(apply_super(c, h)) < 1e-6 * mpo_norm(h));

    std::mt19937_64 rng(31);
    Mpo a = random_product_mpo(4, rng);
    Eigen::MatrixXcd lhs = apply_super(c, a).dense();
    Eigen::MatrixXcd rhs = commutator_apply(h.dense(), a.dense());
    CHECK((lhs - rhs).norm() < 1e-11 * rhs.norm());
}

TEST_CASE("commutator superoperator is self-adjoint on random MPO pairs") {
    std::mt19937_64 rng(32);
    SpinChainModel model = SpinChainModel::non_integrable(4);
    SuperMpo c = commutator_mpo(hamiltonian_mpo(model));
    for (int rep = 0; rep < 3; ++rep) {
        Mpo a = random_mpo(4, 3, rng);
        Mpo b = random_mpo(4, 2, rng);
        cplx lhs = inner(apply_super(c, a), b);
        cplx rhs = inner(a, apply_super(c, b));
        CHECK(std::abs(lhs - rhs) < 1e-11 * (std::abs(lhs) + 1.0));
    }
}

TEST_CASE("super_square squares the commutator") {
    SpinChainModel model = SpinChainModel::non_integrable(4);
    Mpo h = hamiltonian_mpo(model);
    SuperMpo c = commutator_mpo(h);
    SuperSquareResult sq = super_square(c, 0, 1e-12);

    std::mt19937_64 rng(33);
    Mpo a = random_mpo(4, 3, rng);
    double lhs = std::real(inner(a, sq.c2.apply(a)));
    double rhs = std::pow(commutator_apply(h.dense(), a.dense()).norm(), 2);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));

    SuperMpo c6 = commutator_mpo(hamiltonian_mpo(SpinChainModel::integrable(6)));
    chain::OpSites raw = chain::compose(c6.op(), c6.op());
    CHECK(chain::max_bond_op(raw) <= 36);

    // squared zero is zero
    SuperMpo zero = commutator_mpo(hamiltonian_mpo(SpinChainModel{4, 0.0, 0.0, 0.0}));
    SuperSquareResult zsq = super_square(zero, 0, 1e-12);
    CHECK(mpo_norm(zsq.c2.apply(a)) < 1e-12);
}

TEST_CASE("mpo_add and inner basics") {
    std::mt19937_64 rng(34);
    const int L = 4;
    Mpo id = Mpo::identity(L);
    CHECK(std::real(inner(id, id)) == doctest::Approx(std::pow(2.0, L)));

    Mpo a = random_mpo(L, 3, rng);
    CHECK(mpo_norm(mpo_add(a, a, 1.0, -1.0)) < 1e-7 * mpo_norm(a));

    // inner(rho0, C M) vs dense trace identity
    SpinChainModel model = SpinChainModel::non_integrable(L);
    Mpo h = hamiltonian_mpo(model);
    SuperMpo c = commutator_mpo(h);
    Mpo rho = initial_mpo(InitialState::PsiPlus, model);
    Mpo m = random_mpo(L, 2, rng);
    cplx lhs = inner(rho, apply_super(c, m));
    cplx rhs = (rho.dense().adjoint() * commutator_apply(h.dense(), m.dense())).trace();
    CHECK(std::abs(lhs - rhs) < 1e-11 * (std::abs(rhs) + 1.0));
}

TEST_CASE("compress caps bonds and reports the Schmidt tail") {
    std::mt19937_64 rng(35);
    Mpo a = random_mpo(6, 8, rng);
    Eigen::MatrixXcd ad = a.dense();
    Mpo c = a;
    MpoCompressReport rep = compress(c, 4, 0.0);
    CHECK(c.max_bond() <= 4);
    double err = (c.dense() - ad).norm() / ad.norm();
    CHECK(err == doctest::Approx(rep.residual).epsilon(1e-6));

    // exact-rank recompression changes nothing
    Mpo c2 = c;
    MpoCompressReport rep2 = compress(c2, 4, 0.0);
    CHECK(rep2.residual < 1e-12);
    CHECK((c2.dense() - c.dense()).norm() < 1e-12 * c.dense().norm());

    // rank-1 product operator at max_bond = 1: no loss
    Mpo p = random_product_mpo(4, rng);
    MpoCompressReport rep3 = compress(p, 1, 0.0);
    CHECK(rep3.residual == doctest::Approx(0.0));
}

TEST_CASE("gauge invariance: inserting a a^-1 on a bond keeps the operator") {
    std::mt19937_64 rng(36);
    Mpo a = random_mpo(4, 3, rng);
    Eigen::MatrixXcd ref = a.dense();
    Eigen::MatrixXcd g = test::random_matrix(3, 3, rng);
    g += 3.0 * Eigen::MatrixXcd::Identity(3, 3); // keep it well-conditioned
    Eigen::MatrixXcd gi = g.inverse();
    Tensor gt = test::matrix_as_tensor(g), git = test::matrix_as_tensor(gi);

    std::vector<Tensor> t = a.tensors();
    t[1] = contract(t[1], gt, {{3, 0}});
    t[2] = contract(git, t[2], {{1, 0}});
    Mpo gauged{std::move(t)};
    CHECK((gauged.dense() - ref).norm() < 1e-11 * ref.norm());
}

TEST_CASE("initial states: product cases and purity") {
    SpinChainModel m3 = SpinChainModel::non_integrable(3);
    Mpo up = initial_mpo(InitialState::PsiUp, m3);
    CHECK(up.max_bond() == 1);
    Eigen::MatrixXcd upd = up.dense();
    CHECK(std::abs(upd(0, 0) - cplx(1.0)) < 1e-13);
    CHECK(upd.norm() == doctest::Approx(1.0));

    Mpo plus = initial_mpo(InitialState::PsiPlus, m3);
    Eigen::MatrixXcd pd = plus.dense();
    for (long r = 0; r < 8; ++r)
        for (long c = 0; c < 8; ++c) CHECK(std::abs(pd(r, c) - cplx(1.0 / 8.0)) < 1e-13);

    SpinChainModel m8 = SpinChainModel::non_integrable(8);
    Mpo of = initial_mpo(InitialState::OuterFlip, m8);
    CHECK(std::abs(of.trace() - cplx(1.0)) < 1e-10);
    double purity = std::real(inner(of, of)); // tr(rho^2) for Hermitian rho
    CHECK(purity == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("ground state search") {
    // L=2 integrable vs dense diagonalization
    SpinChainModel m2 = SpinChainModel::integrable(2);
    GroundStateResult gs2 = ground_state_mps(m2, 4, 6);
    Spectrum s2 = diagonalize(build_hamiltonian(m2));
    CHECK(gs2.energy == doctest::Approx(s2.eigenvalues(0)).epsilon(1e-10));

    // decoupled sites: product ground state at bond 1
    SpinChainModel free{4, 0.0, -1.0, 0.0};
    GroundStateResult gsf = ground_state_mps(free, 4, 6);
    CHECK(gsf.energy == doctest::Approx(-4.0).epsilon(1e-10));
    long maxb = 0;
    for (long b : gsf.psi.bond_dims()) maxb = std::max(maxb, b);
    CHECK(maxb == 1);

    // sweep energies never increase
    SpinChainModel m6 = SpinChainModel::non_integrable(6);
    GroundStateResult gs6 = ground_state_mps(m6, 12, 10);
    for (size_t j = 1; j < gs6.sweep_energies.size(); ++j)
        CHECK(gs6.sweep_energies[j] <= gs6.sweep_energies[j - 1] + 1e-9);
    Spectrum s6 = diagonalize(build_hamiltonian(m6));
    CHECK(gs6.energy == doctest::Approx(s6.eigenvalues(0)).epsilon(1e-9));
}

namespace {

// independent oracle: plain Lanczos on the dense Hamiltonian
double lanczos_lowest(const Eigen::MatrixXcd &h, int iters) {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> dist(0.0, 1.0);
    Eigen::VectorXcd q(h.rows());
    for (long i = 0; i < h.rows(); ++i) q(i) = cplx(dist(rng), dist(rng));
    q.normalize();
    std::vector<Eigen::VectorXcd> basis{q};
    std::vector<double> alpha, beta;
    for (int it = 0; it < iters; ++it) {
        Eigen::VectorXcd hq = h * basis.back();
        alpha.push_back((basis.back().adjoint() * hq)(0).real());
        Eigen::VectorXcd r = hq;
        for (const auto &b : basis) r -= (b.adjoint() * r)(0) * b;
        for (const auto &b : basis) r -= (b.adjoint() * r)(0) * b;
        double nb = r.norm();
        if (nb < 1e-12) break;
        beta.push_back(nb);
        basis.push_back(r / nb);
    }
    long m = static_cast<long>(alpha.size());
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
    for (long j = 0; j < m; ++j) {
        tri(j, j) = alpha[static_cast<size_t>(j)];
        if (j + 1 < m) tri(j, j + 1) = tri(j + 1, j) = beta[static_cast<size_t>(j)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    return es.eigenvalues()(0);
}

} // namespace

TEST_CASE("ground state at L=12 matches dense to 1e-8") {
    SpinChainModel m = SpinChainModel::non_integrable(12);
    GroundStateResult gs = ground_state_mps(m, 24, 12);
    double e0 = lanczos_lowest(build_hamiltonian(m), 120);
    CHECK(std::abs(gs.energy - e0) < 1e-8);
}

TEST_CASE("mpo_from_dense round trips operators") {
    std::mt19937_64 rng(37);
    const int L = 3;
    Eigen::MatrixXcd op = test::random_matrix(8, 8, rng);
    Mpo m = mpo_from_dense(op, L, 0.0, 0);
    CHECK((m.dense() - op).norm() < 1e-12 * op.norm());
}

TEST_CASE("measurement operator builders") {
    const int L = 5;
    Eigen::Matrix2cd field_op = (pauli_x() + pauli_z()) / std::sqrt(2.0);
    Eigen::MatrixXcd want = site_operator(field_op, 2, L); // site ceil(5/2) = 3 (1-based)
    CHECK((sigma_field_central_mpo(L).dense() - want).norm() < 1e-12);

    Eigen::MatrixXcd sf = Eigen::MatrixXcd::Zero(1 << L, 1 << L);
    for (int j = 0; j < L; ++j) sf += site_operator(field_op, j, L) / static_cast<double>(L);
    CHECK((s_field_mpo(L).dense() - sf).norm() < 1e-12);

    Eigen::MatrixXcd sx = Eigen::MatrixXcd::Zero(1 << L, 1 << L);
    for (int j = 0; j < L; ++j) sx += site_operator(pauli_x(), j, L);
    CHECK((s_x_total_mpo(L).dense() - sx).norm() < 1e-12);
}

TEST_CASE("doubled Hamiltonian is H x 1 + 1 x H") {
    SpinChainModel m = SpinChainModel::non_integrable(3);
    Mpo hd = hamiltonian_mpo_doubled(m);
    Eigen::MatrixXcd h = build_hamiltonian(m);
    Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(8, 8);
    Eigen::MatrixXcd want = kron(h, id) + kron(id, h);
    CHECK((hd.dense() - want).norm() < 1e-12 * want.norm());
}
