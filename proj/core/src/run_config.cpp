#include "tadm/run_config.hpp"
#include "tadm/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace tadm {

using nlohmann::json;

const char *kCodeVersion = "0.1.0";

std::string to_string(TargetKind t) {
    switch (t) {
        case TargetKind::State: return "state";
        case TargetKind::Operator: return "operator";
        case TargetKind::Doubled: return "doubled";
    }
    return "?";
}

std::string to_string(Representation r) {
    switch (r) {
        case Representation::Mpo: return "mpo";
        case Representation::DoubleMps: return "double_mps";
        case Representation::Dense: return "dense";
    }
    return "?";
}

std::string to_string(OperatorKind o) {
    switch (o) {
        case OperatorKind::SField: return "s_field";
        case OperatorKind::SigmaFieldCentral: return "sigma_field_central";
        case OperatorKind::SigmaXSite: return "sigma_x_site";
        case OperatorKind::SXTotal: return "s_x_total";
        case OperatorKind::SigmaZSite: return "sigma_z_site";
    }
    return "?";
}

Mpo build_operator(OperatorKind kind, int L, int site) {
    if (site < 0) site = (L + 1) / 2 - 1; // center, 0-based
    switch (kind) {
        case OperatorKind::SField: return s_field_mpo(L);
        case OperatorKind::SigmaFieldCentral: return sigma_field_central_mpo(L);
        case OperatorKind::SigmaXSite: return single_site_mpo(pauli_x(), site, L);
        case OperatorKind::SXTotal: return s_x_total_mpo(L);
        case OperatorKind::SigmaZSite: return single_site_mpo(pauli_z(), site, L);
    }
    throw ConfigError("unknown operator kind");
}

namespace {

long line_of_offset(const std::string &text, size_t byte) {
    long line = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

template <typename T>
T get_or(const json &j, const char *key, T fallback) {
    return j.contains(key) ? j.at(key).get<T>() : fallback;
}

InitialState parse_state(const std::string &s) {
    if (s == "psi_up") return InitialState::PsiUp;
    if (s == "psi_plus") return InitialState::PsiPlus;
    if (s == "central_flip") return InitialState::CentralFlip;
    if (s == "outer_flip") return InitialState::OuterFlip;
    throw ConfigError("unknown state '" + s + "'");
}

OperatorKind parse_operator(const std::string &s) {
    if (s == "s_field") return OperatorKind::SField;
    if (s == "sigma_field_central") return OperatorKind::SigmaFieldCentral;
    if (s == "sigma_x_site") return OperatorKind::SigmaXSite;
    if (s == "s_x_total") return OperatorKind::SXTotal;
    if (s == "sigma_z_site") return OperatorKind::SigmaZSite;
    throw ConfigError("unknown operator '" + s + "'");
}

} // namespace

void RunConfig::validate() const {
    if (schema_version != 1) throw ConfigError("schema_version: only version 1 is supported");
    model.validate();
    if (bond_dims.empty() && representation != Representation::Dense)
        throw ConfigError("bond_dims: at least one entry required");
    for (long d : bond_dims)
        if (d < 1) throw ConfigError("bond_dims: entries must be >= 1");
    if (representation == Representation::Dense && model.length > kDenseLengthCap)
        throw ConfigError("model.length: dense representation is capped at L <= " +
                          std::to_string(kDenseLengthCap));
    if (target == TargetKind::Doubled && representation == Representation::Dense &&
        2 * model.length > kDenseLengthCap)
        throw ConfigError("model.length: dense doubled target is capped at 2L <= " +
                          std::to_string(kDenseLengthCap));
    if (representation == Representation::DoubleMps && target == TargetKind::Operator)
        throw ConfigError("representation: the double-MPS ansatz is not suited to operator targets");
    if (output_dir.empty()) throw ConfigError("output_dir: must not be empty");
    for (const std::string &obs : observables)
        if (obs != "q" && obs != "osee" && obs != "expectation" && obs != "variance_sites" &&
            obs != "fidelity")
            throw ConfigError("observables: unknown entry '" + obs + "'");
    if (std::find(observables.begin(), observables.end(), "fidelity") != observables.end() &&
        model.length > kDenseLengthCap)
        throw ConfigError("observables: fidelity needs the dense oracle (L <= " +
                          std::to_string(kDenseLengthCap) + ")");
}

RunConfig parse_run_config(const std::string &text, const std::string &filename) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ConfigError(filename + ":" + std::to_string(line_of_offset(text, e.byte)) +
                          ": " + e.what());
    }

    RunConfig c;
    try {
        c.schema_version = get_or(j, "schema_version", 1);
        c.experiment_id = get_or<std::string>(j, "experiment_id", "");

        const json &jm = j.at("model");
        std::string kind = jm.at("kind").get<std::string>();
        int L = jm.at("length").get<int>();
        if (kind == "integrable") {
            c.model = SpinChainModel::integrable(L);
            c.model_integrable = true;
        } else if (kind == "non_integrable") {
            c.model = SpinChainModel::non_integrable(L);
        } else if (kind == "custom") {
            c.model = SpinChainModel{L, jm.at("zz_coupling").get<double>(),
                                     jm.at("field_x").get<double>(), jm.at("field_z").get<double>()};
        } else {
            throw ConfigError("model.kind: expected integrable | non_integrable | custom");
        }

        const json &jt = j.at("target");
        std::string tk = jt.at("kind").get<std::string>();
        if (tk == "state") {
            c.target = TargetKind::State;
            c.state = parse_state(jt.at("state").get<std::string>());
        } else if (tk == "operator") {
            c.target = TargetKind::Operator;
            c.op = parse_operator(jt.at("operator").get<std::string>());
            c.op_site = get_or(jt, "site", -1);
        } else if (tk == "doubled") {
            c.target = TargetKind::Doubled;
            c.state = parse_state(jt.at("state").get<std::string>());
        } else {
            throw ConfigError("target.kind: expected state | operator | doubled");
        }

        std::string rep = get_or<std::string>(j, "representation", "mpo");
        if (rep == "mpo")
            c.representation = Representation::Mpo;
        else if (rep == "double_mps")
            c.representation = Representation::DoubleMps;
        else if (rep == "dense")
            c.representation = Representation::Dense;
        else
            throw ConfigError("representation: expected mpo | double_mps | dense");

        std::string method = get_or<std::string>(j, "method", "t_minus");
        if (method == "t_minus")
            c.method = Method::TMinus;
        else if (method == "t_plus")
            c.method = Method::TPlus;
        else
            throw ConfigError("method: expected t_minus | t_plus");

        c.bond_dims = get_or(j, "bond_dims", std::vector<long>{});
        c.seed = get_or<uint64_t>(j, "seed", 1);

        if (j.contains("solver")) {
            const json &js = j["solver"];
            c.solver.max_sweeps = get_or(js, "sweeps", c.solver.max_sweeps);
            c.solver.local_basis_size = get_or(js, "local_basis_size", c.solver.local_basis_size);
            c.solver.overarch_threshold = get_or(js, "overarch_threshold", c.solver.overarch_threshold);
            c.solver.overarching = get_or(js, "overarching", c.solver.overarching);
            c.solver.tol_ortho = get_or(js, "tol_ortho", c.solver.tol_ortho);
            c.solver.full_reortho = get_or(js, "full_reortho", c.solver.full_reortho);
            c.solver.use_bond_gauge = get_or(js, "use_bond_gauge", c.solver.use_bond_gauge);
            c.solver.use_physical_gauge = get_or(js, "use_physical_gauge", c.solver.use_physical_gauge);
            c.solver.stop_rel_q = get_or(js, "stop_rel_q", c.solver.stop_rel_q);
            c.solver.stop_window = get_or(js, "stop_window", c.solver.stop_window);
            c.use_real_map = get_or(js, "use_real_map", true);
            std::string init = get_or<std::string>(js, "init", "krylov");
            if (init == "krylov")
                c.solver.init = InitMode::KrylovWarmStart;
            else if (init == "random")
                c.solver.init = InitMode::RandomInit;
            else
                throw ConfigError("solver.init: expected krylov | random");
        }
        c.solver.method = c.method;
        c.solver.seed = c.seed;

        c.observables = get_or(j, "observables", std::vector<std::string>{"q"});
        if (j.contains("expectation_operator"))
            c.expectation_op = parse_operator(j["expectation_operator"].get<std::string>());
        c.expectation_site = get_or(j, "expectation_site", -1);
        c.output_dir = get_or<std::string>(j, "output_dir", "out");

        if (c.experiment_id.empty()) {
            std::ostringstream id;
            id << (c.model_integrable ? "ising_int" : "ising_ni") << "_L" << c.model.length << "_";
            if (c.target == TargetKind::State)
                id << to_string(c.state);
            else if (c.target == TargetKind::Operator)
                id << to_string(c.op);
            else
                id << "doubled_" << to_string(c.state);
            id << "_" << to_string(c.representation) << "_" << to_string(c.method);
            c.experiment_id = id.str();
        }
    } catch (const json::exception &e) {
        throw ConfigError(filename + ": " + e.what());
    }

    c.validate();
    return c;
}

RunConfig load_run_config(const std::string &path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_run_config(ss.str(), path);
}

std::string config_hash_hex(const std::string &raw) {
    uint64_t h = 1469598103934665603ull; // FNV-1a 64
    for (unsigned char c : raw) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

} // namespace tadm
