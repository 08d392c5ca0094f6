#include "tadm/io.hpp"
#include "tadm/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <cstring>
#include <fstream>

namespace tadm::io {

using nlohmann::json;

namespace {

constexpr uint32_t kFormatVersion = 1;
constexpr char kMagic[8] = {'T', 'N', 'B', 'C', 'H', 'N', '0', '1'};

void write_exact(std::ofstream &os, const void *data, size_t bytes) {
    os.write(static_cast<const char *>(data), static_cast<std::streamsize>(bytes));
    if (!os) throw IoError("write failure");
}

void read_exact(std::ifstream &is, void *data, size_t bytes) {
    is.read(static_cast<char *>(data), static_cast<std::streamsize>(bytes));
    if (!is) throw IoError("read failure (truncated container?)");
}

void save_chain(const std::string &path, const chain::Sites &sites, const json &extra) {
    std::ofstream os(path + ".tnb", std::ios::binary);
    if (!os) throw IoError("cannot open " + path + ".tnb for writing");
    write_exact(os, kMagic, sizeof(kMagic));
    uint64_t n = sites.size();
    write_exact(os, &n, sizeof(n));

    bool all_real = true;
    for (const Tensor &t : sites)
        if (!t.is_real(0.0)) {
            all_real = false;
            break;
        }

    for (const Tensor &t : sites) {
        uint64_t rank = static_cast<uint64_t>(t.rank());
        write_exact(os, &rank, sizeof(rank));
        for (long d : t.shape()) {
            uint64_t dd = static_cast<uint64_t>(d);
            write_exact(os, &dd, sizeof(dd));
        }
        uint8_t dtype = all_real ? 1 : 0; // 0 complex128, 1 float64
        write_exact(os, &dtype, sizeof(dtype));
        if (all_real) {
            std::vector<double> buf(static_cast<size_t>(t.size()));
            for (long i = 0; i < t.size(); ++i) buf[static_cast<size_t>(i)] = t.flat(i).real();
            write_exact(os, buf.data(), buf.size() * sizeof(double));
        } else {
            write_exact(os, t.data().data(), t.data().size() * sizeof(cplx));
        }
    }

    json manifest = extra;
    manifest["format_version"] = kFormatVersion;
    manifest["sites"] = sites.size();
    manifest["dtype"] = all_real ? "float64" : "complex128";
    std::vector<long> bonds = chain::bond_dims(sites);
    manifest["bond_dims"] = bonds;
    std::vector<long> phys = chain::phys_dims(sites);
    manifest["phys_dims"] = phys;
    std::ofstream mj(path + ".json");
    if (!mj) throw IoError("cannot open " + path + ".json for writing");
    mj << manifest.dump(2) << "\n";
}

chain::Sites load_chain(const std::string &path, json *manifest_out) {
    std::ifstream mj(path + ".json");
    if (!mj) throw IoError("cannot open manifest " + path + ".json");
    json manifest = json::parse(mj);
    if (manifest_out) *manifest_out = manifest;
    if (manifest.at("format_version").get<uint32_t>() > kFormatVersion)
        throw IoError("container format newer than this build");

    std::ifstream is(path + ".tnb", std::ios::binary);
    if (!is) throw IoError("cannot open " + path + ".tnb");
    char magic[8];
    read_exact(is, magic, sizeof(magic));
    if (std::memcmp(magic, kMagic, sizeof(magic)) != 0) throw IoError("bad container magic");
    uint64_t n = 0;
    read_exact(is, &n, sizeof(n));

    chain::Sites sites;
    for (uint64_t j = 0; j < n; ++j) {
        uint64_t rank = 0;
        read_exact(is, &rank, sizeof(rank));
        Shape shape;
        for (uint64_t r = 0; r < rank; ++r) {
            uint64_t d = 0;
            read_exact(is, &d, sizeof(d));
            shape.push_back(static_cast<long>(d));
        }
        uint8_t dtype = 0;
        read_exact(is, &dtype, sizeof(dtype));
        Tensor t(shape);
        if (dtype == 1) {
            std::vector<double> buf(static_cast<size_t>(t.size()));
            read_exact(is, buf.data(), buf.size() * sizeof(double));
            for (long i = 0; i < t.size(); ++i) t.flat(i) = cplx(buf[static_cast<size_t>(i)], 0.0);
        } else {
            read_exact(is, t.data().data(), t.data().size() * sizeof(cplx));
        }
        sites.push_back(std::move(t));
    }
    return sites;
}

} // namespace

void save_mpo(const std::string &path, const Mpo &m) {
    json extra;
    extra["is_double"] = false;
    std::vector<long> po;
    for (long k = 0; k < m.nsites(); ++k) po.push_back(m.phys_dim(k));
    extra["phys_out"] = po;
    save_chain(path, m.vec(), extra);
}

Mpo load_mpo(const std::string &path) {
    json manifest;
    chain::Sites s = load_chain(path, &manifest);
    if (manifest.value("is_double", false)) throw IoError(path + " holds a double MPS, not an MPO");
    std::vector<long> po = manifest.at("phys_out").get<std::vector<long>>();
    return Mpo::from_vec(s, po);
}

void save_double_mps(const std::string &path, const DoubleMps &m) {
    json extra;
    extra["is_double"] = true;
    extra["site_map"] = m.site_map();
    save_chain(path, m.tensors(), extra);
}

DoubleMps load_double_mps(const std::string &path) {
    json manifest;
    chain::Sites s = load_chain(path, &manifest);
    if (!manifest.value("is_double", false)) throw IoError(path + " does not hold a double MPS");
    return DoubleMps(std::move(s));
}

void save_dense_golden(const std::string &path, const Eigen::MatrixXcd &m, const GoldenMeta &meta) {
    std::ofstream os(path + ".bin", std::ios::binary);
    if (!os) throw IoError("cannot open " + path + ".bin");
    // row-major complex128 payload
    std::vector<cplx> buf(static_cast<size_t>(m.rows() * m.cols()));
    for (long r = 0; r < m.rows(); ++r)
        for (long c = 0; c < m.cols(); ++c) buf[static_cast<size_t>(r * m.cols() + c)] = m(r, c);
    write_exact(os, buf.data(), buf.size() * sizeof(cplx));

    json sidecar;
    sidecar["shape"] = {m.rows(), m.cols()};
    sidecar["dtype"] = "complex128";
    sidecar["byte_order"] = "little";
    sidecar["model"] = meta.model;
    sidecar["length"] = meta.length;
    sidecar["quantity"] = meta.quantity;
    sidecar["tolerance"] = meta.tolerance;
    std::ofstream sj(path + ".json");
    sj << sidecar.dump(2) << "\n";
}

Eigen::MatrixXcd load_dense_golden(const std::string &path, GoldenMeta *meta) {
    std::ifstream sj(path + ".json");
    if (!sj) throw IoError("cannot open sidecar " + path + ".json");
    json sidecar = json::parse(sj);
    long rows = sidecar.at("shape")[0].get<long>();
    long cols = sidecar.at("shape")[1].get<long>();
    if (meta) {
        meta->model = sidecar.value("model", "");
        meta->length = sidecar.value("length", 0);
        meta->quantity = sidecar.value("quantity", "");
        meta->tolerance = sidecar.value("tolerance", 0.0);
    }
    std::ifstream is(path + ".bin", std::ios::binary);
    if (!is) throw IoError("cannot open " + path + ".bin");
    std::vector<cplx> buf(static_cast<size_t>(rows * cols));
    read_exact(is, buf.data(), buf.size() * sizeof(cplx));
    Eigen::MatrixXcd m(rows, cols);
    for (long r = 0; r < rows; ++r)
        for (long c = 0; c < cols; ++c) m(r, c) = buf[static_cast<size_t>(r * cols + c)];
    return m;
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v); // shortest round-trip form
    return std::string(buf, res.ptr);
}

std::string report_to_json(const SolveReport &r) {
    json j;
    j["termination"] = r.termination;
    j["breakdown"] = r.breakdown;
    j["method"] = to_string(r.method);
    j["max_bond"] = r.max_bond;
    j["final_q"] = r.final_q;
    j["q_reliability_cap"] = r.q_reliability_cap;
    j["gram_dist_ratio"] = r.gram_dist_logged;
    j["update_objectives"] = r.update_objectives;
    j["sweeps"] = json::array();
    for (const SweepStats &s : r.sweeps) {
        json e;
        e["sweep"] = s.sweep;
        e["q"] = s.q;
        e["c_norm"] = s.c_norm;
        e["c_re"] = s.c.real();
        e["c_im"] = s.c.imag();
        e["max_tensor_change"] = s.max_tensor_change;
        e["wall_s"] = s.wall_s;
        e["overarching"] = s.overarching;
        e["basis_breakdowns"] = s.basis_breakdowns;
        e["gauge_skips"] = s.gauge_skips;
        j["sweeps"].push_back(e);
    }
    return j.dump(2);
}

SolveReport report_from_json(const std::string &json_text) {
    json j = json::parse(json_text);
    SolveReport r;
    r.termination = j.value("termination", "");
    r.breakdown = j.value("breakdown", false);
    r.method = j.value("method", "t_minus") == "t_plus" ? Method::TPlus : Method::TMinus;
    r.max_bond = j.value("max_bond", 0L);
    r.final_q = j.value("final_q", 0.0);
    r.q_reliability_cap = j.value("q_reliability_cap", 0.0);
    r.gram_dist_logged = j.value("gram_dist_ratio", 0.0);
    if (j.contains("update_objectives"))
        r.update_objectives = j["update_objectives"].get<std::vector<double>>();
    for (const auto &e : j.value("sweeps", json::array())) {
        SweepStats s;
        s.sweep = e.value("sweep", 0);
        s.q = e.value("q", 0.0);
        s.c_norm = e.value("c_norm", 0.0);
        s.c = cplx(e.value("c_re", 0.0), e.value("c_im", 0.0));
        s.max_tensor_change = e.value("max_tensor_change", 0.0);
        s.wall_s = e.value("wall_s", 0.0);
        s.overarching = e.value("overarching", false);
        s.basis_breakdowns = e.value("basis_breakdowns", 0);
        s.gauge_skips = e.value("gauge_skips", 0);
        r.sweeps.push_back(s);
    }
    return r;
}

void save_checkpoint(const std::string &path, const Checkpoint &cp) {
    save_mpo(path + ".m", cp.m);
    json j;
    j["sweeps_done"] = cp.sweeps_done;
    j["report"] = json::parse(report_to_json(cp.report));
    std::ofstream os(path + ".state.json");
    if (!os) throw IoError("cannot open checkpoint state " + path);
    os << j.dump(2) << "\n";
}

Checkpoint load_checkpoint(const std::string &path) {
    Checkpoint cp;
    cp.m = load_mpo(path + ".m");
    std::ifstream is(path + ".state.json");
    if (!is) throw IoError("cannot open checkpoint state " + path);
    json j = json::parse(is);
    cp.sweeps_done = j.value("sweeps_done", 0);
    cp.report = report_from_json(j.at("report").dump());
    return cp;
}

} // namespace tadm::io
