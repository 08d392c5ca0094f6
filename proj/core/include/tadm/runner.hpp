#pragma once

#include "tadm/run_config.hpp"

#include <string>
#include <vector>

namespace tadm::runner {

/*! Execute the config's (D x observables) matrix; writes per-cell solver
 * reports, MPO checkpoints, one observables.csv and a summary.json into
 * config.output_dir. Returns the summary path. */
std::string run(const RunConfig &config, const std::string &raw_config_text);

struct CompareRow {
    long bond_dim = 0;
    double q_a = 0.0, q_b = 0.0;
    double fidelity_a = -1.0, fidelity_b = -1.0; // -1: not available
    double expectation_a = 0.0, expectation_b = 0.0;
    bool has_expectation = false;
    std::string flag; // e.g. q-ordering pass/fail when methods differ
};

struct CompareResult {
    std::vector<CompareRow> rows;
    std::string csv;
    bool all_flags_pass = true;
};

/*! Diff two run directories with compatible model/target. */
CompareResult compare(const std::string &run_dir_a, const std::string &run_dir_b);

/*! Assemble figure-ready CSV from a set of run directories.
 * figure: q_vs_D | osee_profile | expectation_vs_D | variance_sites.
 * Missing quantities are listed in `missing`; partial output is written. */
struct FigureDataResult {
    std::string csv_path;
    std::vector<std::string> missing;
};
FigureDataResult figure_data(const std::vector<std::string> &run_dirs, const std::string &figure,
                             const std::string &out_csv);

} // namespace tadm::runner
