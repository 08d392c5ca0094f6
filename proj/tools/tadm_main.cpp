#include <tadm/errors.hpp>
#include <tadm/run_config.hpp>
#include <tadm/runner.hpp>

#include <CLI11.hpp>

#include <Eigen/Core>
#include <cstdlib>
#include <fstream>
#include <iostream>

namespace {

void configure_threads() {
    if (const char *env = std::getenv("TADM_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) Eigen::setNbThreads(n);
    }
}

std::string slurp(const std::string &path) {
    std::ifstream is(path);
    if (!is) throw tadm::ConfigError("cannot open config file " + path);
    return std::string(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
}

} // namespace

int main(int argc, char **argv) {
    configure_threads();

    CLI::App app{"Time-averaged density matrices of closed spin chains via "
                 "constrained overlap maximization"};
    app.require_subcommand(1);

    std::string config_path;
    auto *run_cmd = app.add_subcommand("run", "Execute the experiment matrix of a config file");
    run_cmd->add_option("config", config_path, "JSON run configuration")->required();

    std::string dir_a, dir_b;
    auto *cmp_cmd = app.add_subcommand("compare", "Diff two finished runs (q, fidelity, expectations)");
    cmp_cmd->add_option("run_a", dir_a, "first run directory")->required();
    cmp_cmd->add_option("run_b", dir_b, "second run directory")->required();

    std::vector<std::string> fig_runs;
    std::string figure, fig_out = "figure.csv";
    auto *fig_cmd = app.add_subcommand("figure-data", "Assemble figure-ready CSV from run directories");
    fig_cmd->add_option("--figure", figure, "q_vs_D | osee_profile | expectation_vs_D | variance_sites")
        ->required();
    fig_cmd->add_option("--out", fig_out, "output CSV path");
    fig_cmd->add_option("runs", fig_runs, "run directories")->required();

    std::string val_path;
    auto *val_cmd = app.add_subcommand("validate-config", "Parse and validate a config file");
    val_cmd->add_option("config", val_path, "JSON run configuration")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            std::string raw = slurp(config_path);
            tadm::RunConfig cfg = tadm::parse_run_config(raw, config_path);
            std::string summary = tadm::runner::run(cfg, raw);
            std::cout << "run complete: " << summary << "\n";
        } else if (*cmp_cmd) {
            tadm::runner::CompareResult res = tadm::runner::compare(dir_a, dir_b);
            std::cout << res.csv;
            if (!res.all_flags_pass) {
                std::cerr << "comparison flags failed\n";
                return 2;
            }
        } else if (*fig_cmd) {
            tadm::runner::FigureDataResult res = tadm::runner::figure_data(fig_runs, figure, fig_out);
            for (const std::string &m : res.missing)
                std::cerr << "missing quantity: " << m << "\n";
            std::cout << "wrote " << res.csv_path << "\n";
        } else if (*val_cmd) {
            tadm::load_run_config(val_path);
            std::cout << "config ok\n";
        }
    } catch (const tadm::ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const tadm::ComparisonError &e) {
        std::cerr << "comparison error: " << e.what() << "\n";
        return 3;
    } catch (const tadm::TadmError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
