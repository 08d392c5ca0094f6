#include "test_util.hpp"

#include <tadm/errors.hpp>
#include <tadm/io.hpp>

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

using namespace tadm;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("tadm_io_test_" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string &name) const { return (path / name).string(); }
};

} // namespace

TEST_CASE("mpo container round trip, complex and real payloads") {
    TempDir tmp;
    std::mt19937_64 rng(91);
    std::vector<Tensor> t;
    t.push_back(test::random_tensor({1, 2, 2, 3}, rng));
    t.push_back(test::random_tensor({3, 2, 2, 2}, rng));
    t.push_back(test::random_tensor({2, 2, 2, 1}, rng));
    Mpo m{t};
    io::save_mpo(tmp.file("complex"), m);
    Mpo loaded = io::load_mpo(tmp.file("complex"));
    CHECK((loaded.dense() - m.dense()).norm() == doctest::Approx(0.0)); // bit-exact payload

    // real payload variant kicks in automatically
    std::vector<Tensor> tr;
    tr.push_back(test::random_tensor({1, 2, 2, 2}, rng, true));
    tr.push_back(test::random_tensor({2, 2, 2, 1}, rng, true));
    Mpo mr{tr};
    io::save_mpo(tmp.file("real"), mr);
    std::ifstream manifest(tmp.file("real") + ".json");
    std::string mtext((std::istreambuf_iterator<char>(manifest)), std::istreambuf_iterator<char>());
    CHECK(mtext.find("float64") != std::string::npos);
    Mpo lr = io::load_mpo(tmp.file("real"));
    CHECK((lr.dense() - mr.dense()).norm() == doctest::Approx(0.0));
}

TEST_CASE("double MPS container keeps the site map and the is_double flag") {
    TempDir tmp;
    Mps psi = Mps::all_plus(3);
    DoubleMps d = DoubleMps::from_pure_state(psi);
    io::save_double_mps(tmp.file("dbl"), d);
    DoubleMps loaded = io::load_double_mps(tmp.file("dbl"));
    CHECK((loaded.dense() - d.dense()).norm() == doctest::Approx(0.0));
    CHECK(loaded.site_map() == d.site_map());
    CHECK_THROWS_AS(io::load_mpo(tmp.file("dbl")), IoError);
}

TEST_CASE("dense golden artifacts round trip with their sidecar") {
    TempDir tmp;
    std::mt19937_64 rng(92);
    Eigen::MatrixXcd m = test::random_matrix(8, 8, rng);
    io::GoldenMeta meta;
    meta.model = "non_integrable";
    meta.length = 3;
    meta.quantity = "rho_bar";
    meta.tolerance = 1e-10;
    io::save_dense_golden(tmp.file("golden"), m, meta);
    io::GoldenMeta back;
    Eigen::MatrixXcd loaded = io::load_dense_golden(tmp.file("golden"), &back);
    CHECK((loaded - m).norm() == doctest::Approx(0.0));
    CHECK(back.model == "non_integrable");
    CHECK(back.length == 3);
    CHECK(back.tolerance == 1e-10);
}

TEST_CASE("checkpoint round trip carries the report history") {
    TempDir tmp;
    std::mt19937_64 rng(93);
    std::vector<Tensor> t;
    t.push_back(test::random_tensor({1, 2, 2, 2}, rng));
    t.push_back(test::random_tensor({2, 2, 2, 1}, rng));
    io::Checkpoint cp;
    cp.m = Mpo{t};
    cp.sweeps_done = 7;
    SweepStats st;
    st.sweep = 6;
    st.q = 12.5;
    st.c_norm = 0.25;
    st.max_tensor_change = 1e-4;
    cp.report.sweeps.push_back(st);
    cp.report.termination = "q_converged";
    cp.report.final_q = 12.5;
    io::save_checkpoint(tmp.file("ck"), cp);
    io::Checkpoint back = io::load_checkpoint(tmp.file("ck"));
    CHECK(back.sweeps_done == 7);
    CHECK(back.report.termination == "q_converged");
    REQUIRE(back.report.sweeps.size() == 1);
    CHECK(back.report.sweeps[0].q == 12.5);
    CHECK((back.m.dense() - cp.m.dense()).norm() == doctest::Approx(0.0));
}

TEST_CASE("format_double is locale-free shortest round trip") {
    CHECK(io::format_double(0.5) == "0.5");
    CHECK(io::format_double(1.0 / 3.0) == "0.3333333333333333");
    double v = 1.2345678901234567e-7;
    CHECK(std::stod(io::format_double(v)) == v);
}
