#include "tadm/runner.hpp"

#include "tadm/errors.hpp"
#include "tadm/hermitian_real.hpp"
#include "tadm/io.hpp"
#include "tadm/observables.hpp"

#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace tadm::runner {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CsvWriter {
    std::ofstream os;
    explicit CsvWriter(const std::string &path) : os(path) {
        if (!os) throw IoError("cannot open " + path);
        os << "experiment_id,quantity,cut_or_site,value,D,method,representation,config_hash,"
              "code_version\n";
    }
    void row(const std::string &exp, const std::string &quantity, long cut_or_site, double value,
             long d, const std::string &method, const std::string &rep, const std::string &hash) {
        os << exp << ',' << quantity << ',' << cut_or_site << ',' << io::format_double(value) << ','
           << d << ',' << method << ',' << rep << ',' << hash << ',' << kCodeVersion << "\n";
    }
};

struct DenseOracle {
    Eigen::MatrixXcd h;
    Spectrum spec;
    DegeneracyPartition part;
    Eigen::MatrixXcd rho0;
    Eigen::MatrixXcd rho_bar;
    bool ready = false;
};

Mps build_state(const RunConfig &c) { return initial_state_mps(c.state, c.model, 32); }

// exact reference for fidelity rows; shifted so the MPO and dense sides agree
DenseOracle make_oracle(const RunConfig &c, const Mpo &rho0_mpo) {
    DenseOracle o;
    o.h = build_hamiltonian(c.model);
    o.rho0 = rho0_mpo.dense();
    o.h = shift_traceless(o.h, o.rho0);
    o.spec = diagonalize(o.h);
    o.part = degeneracy_partition(o.spec);
    o.rho_bar = exact_tadm(o.rho0, o.spec, o.part);
    o.ready = true;
    return o;
}

bool wants(const RunConfig &c, const std::string &obs) {
    return std::find(c.observables.begin(), c.observables.end(), obs) != c.observables.end();
}

std::string cell_tag(long d) { return "D" + std::to_string(d); }

void write_text(const std::string &path, const std::string &text) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open " + path);
    os << text;
}

} // namespace

std::string run(const RunConfig &c, const std::string &raw_config_text) {
    c.validate();
    fs::create_directories(c.output_dir);
    const std::string hash = config_hash_hex(raw_config_text);
    const std::string rep_name = to_string(c.representation);
    const std::string method_name = to_string(c.method);

    CsvWriter csv(c.output_dir + "/observables.csv");
    json summary;
    summary["experiment_id"] = c.experiment_id;
    summary["config_hash"] = hash;
    summary["code_version"] = kCodeVersion;
    summary["schema_version"] = 1;
    summary["model"] = {{"kind", c.model_integrable ? "integrable" : "non_integrable"},
                        {"length", c.model.length},
                        {"zz_coupling", c.model.zz_coupling},
                        {"field_x", c.model.field_x},
                        {"field_z", c.model.field_z}};
    summary["target"] = to_string(c.target);
    summary["target_name"] = c.target == TargetKind::Operator ? to_string(c.op) : to_string(c.state);
    summary["representation"] = rep_name;
    summary["method"] = method_name;
    summary["seed"] = c.seed;
    summary["cells"] = json::array();

    const int L = c.model.length;
    Mpo h = hamiltonian_mpo(c.model);

    // ---- target construction -------------------------------------------------
    Mpo target_mpo;       // rho0 or O0 over L sites (or P0 over 2L for doubled)
    Mps psi;              // pure state behind rho0, when there is one
    bool have_psi = false;
    if (c.target == TargetKind::State) {
        psi = build_state(c);
        have_psi = true;
        target_mpo = initial_mpo(psi);
    } else if (c.target == TargetKind::Operator) {
        target_mpo = build_operator(c.op, L, c.op_site);
    } else {
        psi = build_state(c);
        have_psi = true;
        DoubledSystem ds = build_doubled(psi, c.model);
        target_mpo = ds.p0;
    }

    // shift so tr(H rho0) = 0 before building the commutator
    Mpo h_solver = h;
    if (c.target != TargetKind::Operator) {
        Mpo rho_for_shift =
            (c.target == TargetKind::Doubled) ? initial_mpo(psi) : target_mpo;
        h_solver = shift_traceless_mpo(h, rho_for_shift);
    }
    Mpo h_doubled_solver;
    if (c.target == TargetKind::Doubled) {
        SpinChainModel m2 = c.model;
        Mpo hd = hamiltonian_mpo_doubled(m2);
        cplx lambda = inner(target_mpo.adjoint(), hd);
        h_doubled_solver = mpo_shift(hd, lambda.real());
    }

    DenseOracle oracle;
    const bool need_oracle = wants(c, "fidelity") || c.representation == Representation::Dense;
    if (need_oracle && c.target != TargetKind::Doubled) {
        Mpo rho_ref = (c.target == TargetKind::Operator) ? target_mpo
                      : have_psi                          ? initial_mpo(psi)
                                                          : target_mpo;
        if (c.target == TargetKind::Operator) {
            // time-averaged operator: reuse the machinery without trace checks
            oracle.h = build_hamiltonian(c.model);
            oracle.rho0 = rho_ref.dense();
            oracle.spec = diagonalize(oracle.h);
            oracle.part = degeneracy_partition(oracle.spec);
            oracle.rho_bar = block_diagonal_part(oracle.rho0, oracle.spec, oracle.part);
            oracle.ready = true;
        } else {
            oracle = make_oracle(c, rho_ref);
        }
    }

    // ---- dense representation: golden artifacts, no sweep solver -------------
    if (c.representation == Representation::Dense) {
        io::GoldenMeta meta;
        meta.model = c.model_integrable ? "integrable" : "non_integrable";
        meta.length = L;
        meta.quantity = "rho_bar";
        meta.tolerance = 1e-10;
        io::save_dense_golden(c.output_dir + "/golden_rho_bar", oracle.rho_bar, meta);

        csv.row(c.experiment_id, "q", 0, std::numeric_limits<double>::infinity(), 0, "exact",
                rep_name, hash);
        if (wants(c, "expectation")) {
            Mpo obs = build_operator(c.expectation_op, L, c.expectation_site);
            double e = std::real((oracle.rho_bar.adjoint() * obs.dense()).trace());
            csv.row(c.experiment_id, "expectation", 0, e, 0, "exact", rep_name, hash);
        }
        if (wants(c, "variance_sites")) {
            if (!oracle.part.all_singleton())
                throw UnsupportedConfigError(
                    "variance_sites: degenerate spectrum, use the doubled-system route");
            for (int jsite = 0; jsite < L; ++jsite) {
                Eigen::MatrixXcd obs = site_operator(pauli_z(), jsite, L);
                double var = exact_variance(oracle.rho0, obs, oracle.spec, oracle.part);
                csv.row(c.experiment_id, "variance", jsite, var, 0, "exact", rep_name, hash);
            }
        }
        json cell;
        cell["D"] = 0;
        cell["kind"] = "dense_golden";
        summary["cells"].push_back(cell);
    } else {
        SuperMpo c_super = (c.target == TargetKind::Doubled) ? commutator_mpo(h_doubled_solver)
                                                             : commutator_mpo(h_solver);
        // doubled variance needs the plain rho_bar at the same D
        SuperMpo c_super_single = commutator_mpo(h_solver);

        for (long d : c.bond_dims) {
            SolverConfig scfg = c.solver;
            scfg.max_bond = d;
            json cell;
            cell["D"] = d;
            cell["method"] = method_name;

            Mpo rho_bar_mpo;         // over L sites (mpo / double fold)
            Mpo p_bar_mpo;           // over 2L sites for doubled targets
            double q_val = 0.0;
            bool q_at_floor = false;

            if (c.representation == Representation::Mpo) {
                SolveResult sr = c.use_real_map ? solve_real(target_mpo, c_super, scfg)
                                 : (c.method == Method::TPlus)
                                     ? solve_tplus(target_mpo, c_super, scfg)
                                     : solve(target_mpo, c_super, scfg);
                Mpo assembled = assemble_tadm(target_mpo, sr.M, c_super, sr.c);
                write_text(c.output_dir + "/report_" + cell_tag(d) + ".json",
                           io::report_to_json(sr.report));
                io::Checkpoint cp{sr.M, sr.report, static_cast<int>(sr.report.sweeps.size())};
                io::save_checkpoint(c.output_dir + "/checkpoint_" + cell_tag(d), cp);

                if (c.target == TargetKind::Doubled) {
                    p_bar_mpo = assembled;
                    // companion single-chain solve for the mean value
                    Mpo rho_single = initial_mpo(psi);
                    SolveResult sr1 = c.use_real_map ? solve_real(rho_single, c_super_single, scfg)
                                      : (c.method == Method::TPlus)
                                          ? solve_tplus(rho_single, c_super_single, scfg)
                                          : solve(rho_single, c_super_single, scfg);
                    rho_bar_mpo = assemble_tadm(rho_single, sr1.M, c_super_single, sr1.c);
                } else {
                    rho_bar_mpo = assembled;
                }
                q_val = sr.report.final_q;
                q_at_floor = std::isinf(q_val);
            } else { // double MPS
                DoubleMps rho_dd = DoubleMps::from_pure_state(psi);
                DoubleSolveResult sr = solve_double(rho_dd, h_solver, scfg);
                DoubleMps assembled = assemble_tadm_double(rho_dd, sr.M, h_solver, sr.c);
                write_text(c.output_dir + "/report_" + cell_tag(d) + ".json",
                           io::report_to_json(sr.report));
                io::save_double_mps(c.output_dir + "/checkpoint_" + cell_tag(d) + ".m", sr.M);
                q_val = sr.report.final_q;
                q_at_floor = std::isinf(q_val);
                rho_bar_mpo = assembled.fold(0, 1e-12);
            }

            cell["q"] = q_val;
            cell["q_at_floor"] = q_at_floor;
            if (wants(c, "q"))
                csv.row(c.experiment_id, "q", 0, q_val, d, method_name, rep_name, hash);

            if (wants(c, "osee")) {
                const Mpo &prof_target = (c.target == TargetKind::Doubled) ? p_bar_mpo : rho_bar_mpo;
                OseeProfile prof = osee_profile(prof_target, false);
                for (size_t i = 0; i < prof.cuts.size(); ++i)
                    csv.row(c.experiment_id, "osee", prof.cut_labels[i], prof.entropy[i], d,
                            method_name, rep_name, hash);
            }

            if (wants(c, "expectation") && c.target != TargetKind::Doubled) {
                Mpo obs = build_operator(c.expectation_op, L, c.expectation_site);
                ExpectationOperands ops;
                double e;
                if (c.target == TargetKind::Operator) {
                    ops.rho0 = initial_mpo(InitialState::PsiUp, c.model);
                    ops.o_bar = rho_bar_mpo;
                    e = tadm_expectation(ExpectationRoute::OBar, ops);
                } else {
                    ops.rho_bar = rho_bar_mpo;
                    ops.o0 = obs;
                    e = tadm_expectation(ExpectationRoute::RhoBar, ops);
                }
                csv.row(c.experiment_id, "expectation", 0, e, d, method_name, rep_name, hash);
            }

            if (wants(c, "variance_sites") && c.target == TargetKind::Doubled) {
                for (int jsite = 0; jsite < L; ++jsite) {
                    Mpo obs = single_site_mpo(pauli_z(), jsite, L);
                    VarianceValue var = variance_from_doubled(p_bar_mpo, rho_bar_mpo, obs);
                    csv.row(c.experiment_id, "variance", jsite, var.value, d, method_name,
                            rep_name, hash);
                }
                csv.row(c.experiment_id, "equilibration_osee", 0,
                        equilibration_entanglement(p_bar_mpo), d, method_name, rep_name, hash);
            }

            if (wants(c, "fidelity") && oracle.ready && c.target != TargetKind::Doubled) {
                double f = fidelity(oracle.rho_bar, rho_bar_mpo.dense());
                cell["fidelity"] = f;
                csv.row(c.experiment_id, "fidelity", 0, f, d, method_name, rep_name, hash);
            }

            summary["cells"].push_back(cell);
        }
    }

    auto now = std::chrono::system_clock::now();
    summary["timestamp_unix"] =
        std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
    std::string summary_path = c.output_dir + "/summary.json";
    write_text(summary_path, summary.dump(2) + "\n");
    return summary_path;
}

namespace {

struct LoadedRun {
    json summary;
    // quantity -> (D -> (cut_or_site -> value))
    std::map<std::string, std::map<long, std::map<long, double>>> table;
    std::string dir;
};

LoadedRun load_run(const std::string &dir) {
    LoadedRun run;
    run.dir = dir;
    std::ifstream sj(dir + "/summary.json");
    if (!sj) throw ComparisonError("missing summary.json in " + dir);
    run.summary = json::parse(sj);
    std::ifstream cs(dir + "/observables.csv");
    if (!cs) throw ComparisonError("missing observables.csv in " + dir);
    std::string line;
    std::getline(cs, line); // header
    while (std::getline(cs, line)) {
        std::stringstream ss(line);
        std::string exp, quantity, cut, value, d, method, rep, hash, ver;
        std::getline(ss, exp, ',');
        std::getline(ss, quantity, ',');
        std::getline(ss, cut, ',');
        std::getline(ss, value, ',');
        std::getline(ss, d, ',');
        std::getline(ss, method, ',');
        std::getline(ss, rep, ',');
        std::getline(ss, hash, ',');
        std::getline(ss, ver, ',');
        run.table[quantity][std::stol(d)][std::stol(cut)] = std::stod(value);
    }
    return run;
}

} // namespace

CompareResult compare(const std::string &dir_a, const std::string &dir_b) {
    LoadedRun a = load_run(dir_a);
    LoadedRun b = load_run(dir_b);
    if (a.summary.at("model") != b.summary.at("model") ||
        a.summary.at("target_name") != b.summary.at("target_name"))
        throw ComparisonError("runs target different models or states");

    std::string method_a = a.summary.value("method", "?");
    std::string method_b = b.summary.value("method", "?");
    bool tplus_vs_tminus = (method_a == "t_plus" && method_b == "t_minus") ||
                           (method_a == "t_minus" && method_b == "t_plus");

    CompareResult out;
    std::ostringstream csv;
    csv << "D,q_a,q_b,delta_q,fidelity_a,fidelity_b,delta_fidelity,expectation_a,expectation_b,"
           "delta_expectation,flag\n";
    auto qa = a.table.find("q");
    auto qb = b.table.find("q");
    if (qa == a.table.end() || qb == b.table.end()) throw ComparisonError("runs carry no q rows");

    for (const auto &[d, cuts] : qa->second) {
        auto itb = qb->second.find(d);
        if (itb == qb->second.end()) continue;
        CompareRow row;
        row.bond_dim = d;
        row.q_a = cuts.at(0);
        row.q_b = itb->second.at(0);
        auto get0 = [&](const LoadedRun &r, const char *q, double fallback) {
            auto it = r.table.find(q);
            if (it == r.table.end()) return fallback;
            auto itd = it->second.find(d);
            if (itd == it->second.end()) return fallback;
            return itd->second.at(0);
        };
        row.fidelity_a = get0(a, "fidelity", -1.0);
        row.fidelity_b = get0(b, "fidelity", -1.0);
        row.expectation_a = get0(a, "expectation", std::nan(""));
        row.expectation_b = get0(b, "expectation", std::nan(""));
        row.has_expectation = !std::isnan(row.expectation_a) && !std::isnan(row.expectation_b);
        if (tplus_vs_tminus) {
            double q_plus = (method_a == "t_plus") ? row.q_a : row.q_b;
            double q_minus = (method_a == "t_plus") ? row.q_b : row.q_a;
            bool pass = q_plus >= q_minus * (1.0 - 1e-9);
            row.flag = pass ? "q_order_pass" : "q_order_fail";
            if (!pass) out.all_flags_pass = false;
        }
        csv << d << ',' << io::format_double(row.q_a) << ',' << io::format_double(row.q_b) << ','
            << io::format_double(row.q_b - row.q_a) << ',' << io::format_double(row.fidelity_a)
            << ',' << io::format_double(row.fidelity_b) << ','
            << io::format_double(row.fidelity_b - row.fidelity_a) << ','
            << (row.has_expectation ? io::format_double(row.expectation_a) : "") << ','
            << (row.has_expectation ? io::format_double(row.expectation_b) : "") << ','
            << (row.has_expectation ? io::format_double(row.expectation_b - row.expectation_a) : "")
            << ',' << row.flag << "\n";
        out.rows.push_back(row);
    }
    out.csv = csv.str();
    return out;
}

FigureDataResult figure_data(const std::vector<std::string> &run_dirs, const std::string &figure,
                             const std::string &out_csv) {
    FigureDataResult res;
    res.csv_path = out_csv;
    std::ofstream os(out_csv);
    if (!os) throw IoError("cannot open " + out_csv);

    std::string quantity;
    if (figure == "q_vs_D")
        quantity = "q";
    else if (figure == "osee_profile")
        quantity = "osee";
    else if (figure == "expectation_vs_D")
        quantity = "expectation";
    else if (figure == "variance_sites")
        quantity = "variance";
    else
        throw InputError("unknown figure '" + figure + "'");

    if (figure == "q_vs_D")
        os << "experiment_id,target,representation,method,D,log2_D,q,config_hash,code_version\n";
    else if (figure == "osee_profile")
        os << "experiment_id,target,representation,method,D,cut_label,osee,config_hash,"
              "code_version\n";
    else if (figure == "expectation_vs_D")
        os << "experiment_id,target,representation,method,D,log2_D,expectation,config_hash,"
              "code_version\n";
    else
        os << "experiment_id,target,representation,method,D,site,variance,config_hash,"
              "code_version\n";

    for (const std::string &dir : run_dirs) {
        LoadedRun run = load_run(dir);
        auto it = run.table.find(quantity);
        if (it == run.table.end()) {
            res.missing.push_back(dir + ": " + quantity);
            continue;
        }
        std::string exp = run.summary.value("experiment_id", "?");
        std::string target = run.summary.value("target_name", "?");
        std::string rep = run.summary.value("representation", "?");
        std::string method = run.summary.value("method", "?");
        std::string hash = run.summary.value("config_hash", "?");
        for (const auto &[d, cuts] : it->second) {
            for (const auto &[cut, value] : cuts) {
                os << exp << ',' << target << ',' << rep << ',' << method << ',' << d << ',';
                if (figure == "q_vs_D" || figure == "expectation_vs_D")
                    os << io::format_double(d > 0 ? std::log2(static_cast<double>(d)) : 0.0);
                else
                    os << cut;
                os << ',' << io::format_double(value) << ',' << hash << ',' << kCodeVersion << "\n";
            }
        }
    }
    return res;
}

} // namespace tadm::runner
