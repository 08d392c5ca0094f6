#pragma once

#include "tadm/double_mps.hpp"
#include "tadm/mpo.hpp"
#include "tadm/solver.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tadm {

struct QValue {
    double value = 0.0; // +inf when the residual hits the floor
    bool at_floor = false;
    double floor = 0.0;
    double numerator = 0.0;   // ||C rho0||
    double denominator = 0.0; // ||C rho_bar_approx||
};

/*! q = ||C rho0|| / ||C rho_bar||. The default floor is 1e-11 relative to
 * the numerator; hitting it means "perfect within working precision". */
QValue q_value(const Mpo &rho_bar, const Mpo &rho0, const SuperMpo &c_super,
               double rel_floor = 1e-11);
QValue q_value(const DoubleMps &rho_bar, const DoubleMps &rho0, const Mpo &h,
               double rel_floor = 1e-11);

/*! Operator space entanglement entropy at one cut: Schmidt entropy of the
 * vectorized, Hilbert-Schmidt-normalized operator. Natural log by default. */
double osee(const Mpo &op, long cut, bool log_base2 = false);
double osee(const DoubleMps &op, long cut, bool log_base2 = false);

struct OseeProfile {
    std::vector<long> cuts;        // raw bond index, 1..L-1
    std::vector<long> cut_labels;  // centered labels, bond - ceil(L/2)
    std::vector<double> entropy;
    bool log_base2 = false;
};

OseeProfile osee_profile(const Mpo &op, bool log_base2 = false);

/*! Centered cut label of bond j (1-based bonds): j - ceil(L/2). The center
 * of the chain sits at label zero; for even L the center bond it is. */
long centered_cut_label(long bond, long L);

enum class ExpectationRoute { RhoBar, OBar, Both };

std::string to_string(ExpectationRoute r);

struct ExpectationOperands {
    std::optional<Mpo> rho_bar;
    std::optional<Mpo> o_bar;
    std::optional<Mpo> rho0;
    std::optional<Mpo> o0;
};

/*! <O>_avg via <rho_bar|O0>, <rho0|O_bar> or the error-reduced <rho_bar|O_bar>.
 * Throws InputError when a route operand is missing; the imaginary residual
 * must stay below 1e-9. */
double tadm_expectation(ExpectationRoute route, const ExpectationOperands &ops);

/*! Time-averaged operator: the solver with O0 in the role of rho0. */
struct TimeAverageResult {
    Mpo o_bar;
    SolveResult solve;
};
TimeAverageResult time_average_operator(const Mpo &o0, const SuperMpo &c_super,
                                        const SolverConfig &cfg, bool use_real_map = true);

struct DoubledSystem {
    Mpo p0;        // rho0 (x) rho0 over 2L sites
    Mpo h_doubled; // H (x) 1 + 1 (x) H
    int length = 0;
};

DoubledSystem build_doubled(const Mps &rho0_pure, const SpinChainModel &model);

struct VarianceValue {
    double value = 0.0; // clipped at zero
    double raw = 0.0;   // may dip below zero from approximation error
};

/*! sigma^2 = <P_bar|O (x) O> - <rho_bar|O>^2. */
VarianceValue variance_from_doubled(const Mpo &p_bar, const Mpo &rho_bar, const Mpo &obs);

/*! OSEE of P_bar at the system-system cut (bond L of the 2L chain). */
double equilibration_entanglement(const Mpo &p_bar);

} // namespace tadm
