#pragma once

#include "tadm/double_mps.hpp"
#include "tadm/mpo.hpp"
#include "tadm/solver.hpp"

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace tadm::io {

/*! Tensor chain container: "<path>.tnb" holds per-tensor shape headers and
 * raw little-endian payloads (complex128, or float64 when every entry is
 * real); "<path>.json" carries the manifest (sites, bond dims, dtype,
 * is_double, site_map, format version).
 */
void save_mpo(const std::string &path, const Mpo &m);
Mpo load_mpo(const std::string &path);

void save_double_mps(const std::string &path, const DoubleMps &m);
DoubleMps load_double_mps(const std::string &path);

/*! Golden dense operators: raw little-endian complex128 row-major payload
 * with a JSON sidecar (shape, model, tolerances). */
struct GoldenMeta {
    std::string model;
    int length = 0;
    std::string quantity;
    double tolerance = 0.0;
};
void save_dense_golden(const std::string &path, const Eigen::MatrixXcd &m, const GoldenMeta &meta);
Eigen::MatrixXcd load_dense_golden(const std::string &path, GoldenMeta *meta = nullptr);

/*! Solver checkpoint: the MPO container plus a JSON solver state
 * (sweep index, report history) for resuming. */
struct Checkpoint {
    Mpo m;
    SolveReport report;
    int sweeps_done = 0;
};
void save_checkpoint(const std::string &path, const Checkpoint &cp);
Checkpoint load_checkpoint(const std::string &path);

/*! Deterministic float formatting: shortest round-trip decimal, C locale. */
std::string format_double(double v);

std::string report_to_json(const SolveReport &r);
SolveReport report_from_json(const std::string &json_text);

} // namespace tadm::io
