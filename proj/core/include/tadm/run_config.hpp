#pragma once

#include "tadm/dense.hpp"
#include "tadm/mpo.hpp"
#include "tadm/solver.hpp"

#include <string>
#include <vector>

namespace tadm {

enum class TargetKind { State, Operator, Doubled };
enum class Representation { Mpo, DoubleMps, Dense };

std::string to_string(TargetKind t);
std::string to_string(Representation r);

enum class OperatorKind { SField, SigmaFieldCentral, SigmaXSite, SXTotal, SigmaZSite };

std::string to_string(OperatorKind o);
Mpo build_operator(OperatorKind kind, int L, int site);

/*! One experiment: a (model, target, representation, method) tuple executed
 * over a list of bond dimensions. */
struct RunConfig {
    int schema_version = 1;
    std::string experiment_id;

    SpinChainModel model;
    bool model_integrable = false;

    TargetKind target = TargetKind::State;
    InitialState state = InitialState::PsiUp; // for State / Doubled targets
    OperatorKind op = OperatorKind::SField;   // for Operator targets
    int op_site = -1;                         // -1: center

    Representation representation = Representation::Mpo;
    Method method = Method::TMinus;
    std::vector<long> bond_dims;

    SolverConfig solver;
    bool use_real_map = true; // MPO representation only

    std::vector<std::string> observables; // q, osee, expectation, variance_sites, fidelity
    OperatorKind expectation_op = OperatorKind::SField;
    int expectation_site = -1;

    std::string output_dir = "out";
    uint64_t seed = 1;

    void validate() const; // throws ConfigError with a field path
};

/*! Parse + validate; parse errors carry the line number. */
RunConfig parse_run_config(const std::string &json_text, const std::string &filename = "<config>");
RunConfig load_run_config(const std::string &path);

std::string config_hash_hex(const std::string &raw_bytes); // FNV-1a 64

extern const char *kCodeVersion;

} // namespace tadm
