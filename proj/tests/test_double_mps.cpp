#include "test_util.hpp"

#include <tadm/dense.hpp>
#include <tadm/double_mps.hpp>
#include <tadm/observables.hpp>

#include <doctest.h>

using namespace tadm;

TEST_CASE("from_pure_state: product state, Bell state, trace") {
    // |000>: all bonds 1
    Mps up = Mps::all_up(3);
    DoubleMps d = DoubleMps::from_pure_state(up);
    for (long b : d.bond_dims()) CHECK(b == 1);
    Eigen::MatrixXcd dd = d.dense();
    CHECK(std::abs(dd(0, 0) - cplx(1.0)) < 1e-13);
    CHECK(dd.norm() == doctest::Approx(1.0));

    // Bell-like L=2 MPS
    chain::Sites bell;
    Tensor a({1, 2, 2});
    a({0, 0, 0}) = 1.0;
    a({0, 1, 1}) = 1.0;
    Tensor b({2, 2, 1});
    b({0, 0, 0}) = 1.0;
    b({1, 1, 0}) = 1.0;
    bell.push_back(a);
    bell.push_back(b);
    Mps psi{std::move(bell)};
    psi.normalize();
    DoubleMps db = DoubleMps::from_pure_state(psi);
    Eigen::MatrixXcd want = mps_outer_dense(psi);
    CHECK((db.dense() - want).norm() < 1e-12);

    // trace via folding = 1 for random states
    std::mt19937_64 rng(71);
    chain::Sites r;
    r.push_back(test::random_tensor({1, 2, 3}, rng));
    r.push_back(test::random_tensor({3, 2, 3}, rng));
    r.push_back(test::random_tensor({3, 2, 1}, rng));
    Mps pr{std::move(r)};
    pr.normalize();
    DoubleMps dr = DoubleMps::from_pure_state(pr);
    CHECK(std::abs(dr.trace() - cplx(1.0)) < 1e-12);

    // center-bond Schmidt vector of a pure state is (1, 0, ...)
    std::vector<double> s = dr.center_schmidt();
    CHECK(s[0] == doctest::Approx(1.0).epsilon(1e-10));
    for (size_t j = 1; j < s.size(); ++j) CHECK(s[j] < 1e-10);
}

TEST_CASE("fold/unfold bookkeeping is the identity on the operator") {
    std::mt19937_64 rng(72);
    chain::Sites r;
    r.push_back(test::random_tensor({1, 2, 2}, rng));
    r.push_back(test::random_tensor({2, 2, 2}, rng));
    r.push_back(test::random_tensor({2, 2, 1}, rng));
    Mps pr{std::move(r)};
    pr.normalize();
    DoubleMps d = DoubleMps::from_pure_state(pr);
    Mpo folded = d.fold();
    CHECK((folded.dense() - mps_outer_dense(pr)).norm() < 1e-12);
    CHECK(d.site_map() == std::vector<long>{0, 1, 2, 2, 1, 0});
}

TEST_CASE("double commutator annihilates eigenprojectors and the identity") {
    SpinChainModel model = SpinChainModel::non_integrable(3);
    Mpo h = hamiltonian_mpo(model);
    chain::OpSites c = double_commutator(h);

    // ground-state projector: [H, |E0><E0|] = 0
    GroundStateResult gs = ground_state_mps(model, 8, 10);
    DoubleMps rho = DoubleMps::from_pure_state(gs.psi);
    chain::Sites crho = chain::apply_op(c, rho.tensors());
    CHECK(chain::norm(crho) < 1e-6);

    // identity operator as double MPS: positions carry (s1 s2 s3 s'3 s'2 s'1),
    // so correlating s_j with s'_j needs the full unfolded tensor
    Tensor id_unfold({2, 2, 2, 2, 2, 2});
    for (long s1 = 0; s1 < 2; ++s1)
        for (long s2 = 0; s2 < 2; ++s2)
            for (long s3 = 0; s3 < 2; ++s3) id_unfold({s1, s2, s3, s3, s2, s1}) = 1.0;
    DoubleMps id_dbl{chain::from_dense(id_unfold, 0.0, 0)};
    CHECK((id_dbl.dense() - Eigen::MatrixXcd::Identity(8, 8)).norm() < 1e-12);
    CHECK(chain::norm(chain::apply_op(c, id_dbl.tensors())) < 1e-10);

    // dense comparison against [H, A] at L=3
    std::mt19937_64 rng(73);
    chain::Sites rnd;
    rnd.push_back(test::random_tensor({1, 2, 2}, rng));
    rnd.push_back(test::random_tensor({2, 2, 2}, rng));
    rnd.push_back(test::random_tensor({2, 2, 2}, rng));
    rnd.push_back(test::random_tensor({2, 2, 2}, rng));
    rnd.push_back(test::random_tensor({2, 2, 2}, rng));
    rnd.push_back(test::random_tensor({2, 2, 1}, rng));
    DoubleMps a{rnd};
    DoubleMps ca{chain::apply_op(c, a.tensors())};
    Eigen::MatrixXcd want = commutator_apply(h.dense(), a.dense());
    CHECK((ca.dense() - want).norm() < 1e-11 * want.norm());
}

TEST_CASE("double commutator is self-adjoint on random double MPS") {
    SpinChainModel model = SpinChainModel::non_integrable(3);
    chain::OpSites c = double_commutator(hamiltonian_mpo(model));
    std::mt19937_64 rng(74);
    auto rnd_dbl = [&] {
        chain::Sites s;
        long bl = 1;
        for (int j = 0; j < 6; ++j) {
            long br = (j == 5) ? 1 : 2;
            s.push_back(test::random_tensor({bl, 2, br}, rng));
            bl = br;
        }
        return s;
    };
    for (int rep = 0; rep < 3; ++rep) {
        chain::Sites a = rnd_dbl(), b = rnd_dbl();
        cplx lhs = chain::inner(chain::apply_op(c, a), b);
        cplx rhs = chain::inner(a, chain::apply_op(c, b));
        CHECK(std::abs(lhs - rhs) < 1e-11 * (std::abs(lhs) + 1.0));
    }
}

TEST_CASE("hermitize") {
    std::mt19937_64 rng(75);
    // Hermitian input is unchanged
    Mps psi = Mps::all_plus(3);
    DoubleMps herm = DoubleMps::from_pure_state(psi);
    DoubleMps h2 = hermitize(herm);
    CHECK((h2.dense() - herm.dense()).norm() < 1e-11);

    // random input -> (A + A^dag)/2
    chain::Sites rnd;
    long bl = 1;
    for (int j = 0; j < 6; ++j) {
        long br = (j == 5) ? 1 : 2;
        rnd.push_back(test::random_tensor({bl, 2, br}, rng));
        bl = br;
    }
    DoubleMps a{rnd};
    Eigen::MatrixXcd ad = a.dense();
    DoubleMps h3 = hermitize(a);
    CHECK((h3.dense() - 0.5 * (ad + ad.adjoint())).norm() < 1e-11 * ad.norm());

    // anti-Hermitian input collapses to zero
    Eigen::MatrixXcd anti = 0.5 * (ad - ad.adjoint());
    chain::Sites half_pos = a.tensors();
    DoubleMps adj = double_adjoint(a);
    chain::Sites anti_chain = chain::add(a.tensors(), adj.tensors(), 0.5, -0.5);
    DoubleMps anti_dbl{anti_chain};
    CHECK((anti_dbl.dense() - anti).norm() < 1e-11 * (anti.norm() + 1e-30));
    DoubleMps hz = hermitize(anti_dbl);
    CHECK(hz.dense().norm() < 1e-10 * ad.norm());
    (void)half_pos;
}

TEST_CASE("solve_double: commuting input breaks down; L=5 reaches the dense TADM") {
    SpinChainModel model = SpinChainModel::non_integrable(5);
    Mpo h = hamiltonian_mpo(model);
    Mps psi = initial_state_mps(InitialState::PsiUp, model);
    Mpo rho_mpo = initial_mpo(psi);
    Mpo hs = shift_traceless_mpo(h, rho_mpo);

    // ground state (eigenprojector): solver reports breakdown
    GroundStateResult gs = ground_state_mps(model, 10, 10);
    DoubleMps rho_gs = DoubleMps::from_pure_state(gs.psi);
    SolverConfig cfg;
    cfg.max_bond = 8;
    cfg.max_sweeps = 10;
    cfg.breakdown_tol = 1e-5; // the DMRG state is an eigenstate to ~1e-6
    DoubleSolveResult rb = solve_double(rho_gs, hs, cfg);
    CHECK(rb.report.breakdown);

    // psi_up at L=5; D=32 covers the full center rank
    DoubleMps rho = DoubleMps::from_pure_state(psi);
    SolverConfig cfg2;
    cfg2.max_bond = 32;
    cfg2.max_sweeps = 30;
    cfg2.stop_rel_q = 1e-6;
    DoubleSolveResult r = solve_double(rho, hs, cfg2);
    DoubleMps bar = assemble_tadm_double(rho, r.M, hs, r.c);

    Spectrum spec = diagonalize(hs.dense());
    DegeneracyPartition part = degeneracy_partition(spec);
    Eigen::MatrixXcd exact = exact_tadm(rho_mpo.dense(), spec, part);
    CHECK(fidelity(exact, bar.dense()) > 0.999);

    // diagonal exactness carries over to the double-MPS route
    Eigen::MatrixXcd din = spec.eigenvectors.adjoint() * rho_mpo.dense() * spec.eigenvectors;
    Eigen::MatrixXcd dout = spec.eigenvectors.adjoint() * bar.dense() * spec.eigenvectors;
    for (long j = 0; j < din.rows(); ++j) CHECK(std::abs(din(j, j) - dout(j, j)) < 1e-9);
}
