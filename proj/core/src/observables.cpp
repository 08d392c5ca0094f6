#include "tadm/observables.hpp"
#include "tadm/errors.hpp"
#include "tadm/hermitian_real.hpp"

#include <cmath>

namespace tadm {

namespace {

QValue q_from_chains(chain::Sites rho_bar, const chain::Sites &rho0, const chain::OpSites &c,
                     double rel_floor) {
    chain::compress(rho_bar, 0, 1e-13);
    chain::OpSites c2 = chain::compose(c, c);
    chain::compress_op(c2, 0, 1e-12);

    double num2 = std::max(0.0, std::real(chain::inner_op(rho0, c2, rho0)));
    double den2 = std::max(0.0, std::real(chain::inner_op(rho_bar, c2, rho_bar)));
    QValue q;
    q.numerator = std::sqrt(num2);
    q.denominator = std::sqrt(den2);
    q.floor = rel_floor * q.numerator;
    if (q.denominator <= q.floor) {
        q.at_floor = true;
        q.value = std::numeric_limits<double>::infinity();
    } else {
        q.value = q.numerator / q.denominator;
    }
    return q;
}

} // namespace

QValue q_value(const Mpo &rho_bar, const Mpo &rho0, const SuperMpo &c_super, double rel_floor) {
    if (mpo_norm(apply_super(c_super, rho0)) == 0.0 && mpo_norm(rho0) == 0.0)
        throw InputError("q_value: zero rho0");
    return q_from_chains(rho_bar.vec(), rho0.vec(), c_super.op(), rel_floor);
}

QValue q_value(const DoubleMps &rho_bar, const DoubleMps &rho0, const Mpo &h, double rel_floor) {
    return q_from_chains(rho_bar.tensors(), rho0.tensors(), double_commutator(h), rel_floor);
}

namespace {

double entropy_from_schmidt(const std::vector<double> &s, bool log_base2) {
    double sum2 = 0.0;
    for (double v : s) sum2 += v * v;
    if (sum2 <= 0.0) throw InputError("osee of a zero operator");
    double h = 0.0;
    for (double v : s) {
        double p = v * v / sum2;
        if (p > 0.0) h -= p * std::log(p);
    }
    return log_base2 ? h / std::log(2.0) : h;
}

} // namespace

double osee(const Mpo &op, long cut, bool log_base2) {
    return entropy_from_schmidt(chain::schmidt_values(op.vec(), cut), log_base2);
}

double osee(const DoubleMps &op, long cut, bool log_base2) {
    Mpo folded = op.fold(0, 1e-12);
    return osee(folded, cut, log_base2);
}

long centered_cut_label(long bond, long L) { return bond - (L + 1) / 2; }

OseeProfile osee_profile(const Mpo &op, bool log_base2) {
    OseeProfile p;
    p.log_base2 = log_base2;
    const long L = op.nsites();
    for (long cut = 1; cut < L; ++cut) {
        p.cuts.push_back(cut);
        p.cut_labels.push_back(centered_cut_label(cut, L));
        p.entropy.push_back(osee(op, cut, log_base2));
    }
    return p;
}

std::string to_string(ExpectationRoute r) {
    switch (r) {
        case ExpectationRoute::RhoBar: return "rho_bar";
        case ExpectationRoute::OBar: return "o_bar";
        case ExpectationRoute::Both: return "both";
    }
    return "?";
}

double tadm_expectation(ExpectationRoute route, const ExpectationOperands &ops) {
    const Mpo *a = nullptr;
    const Mpo *b = nullptr;
    switch (route) {
        case ExpectationRoute::RhoBar:
            if (!ops.rho_bar || !ops.o0) throw InputError("route rho_bar needs rho_bar and o0");
            a = &*ops.rho_bar;
            b = &*ops.o0;
            break;
        case ExpectationRoute::OBar:
            if (!ops.rho0 || !ops.o_bar) throw InputError("route o_bar needs rho0 and o_bar");
            a = &*ops.rho0;
            b = &*ops.o_bar;
            break;
        case ExpectationRoute::Both:
            if (!ops.rho_bar || !ops.o_bar) throw InputError("route both needs rho_bar and o_bar");
            a = &*ops.rho_bar;
            b = &*ops.o_bar;
            break;
    }
    cplx val = inner(*a, *b); // <A|B> = tr(A B) for Hermitian A
    if (std::abs(val.imag()) > 1e-9 * std::max(1.0, std::abs(val)))
        throw InputError("tadm_expectation: imaginary residual above 1e-9");
    return val.real();
}

TimeAverageResult time_average_operator(const Mpo &o0, const SuperMpo &c_super,
                                        const SolverConfig &cfg, bool use_real_map) {
    TimeAverageResult res;
    res.solve = use_real_map ? solve_real(o0, c_super, cfg) : solve(o0, c_super, cfg);
    res.o_bar = assemble_tadm(o0, res.solve.M, c_super, res.solve.c);
    return res;
}

DoubledSystem build_doubled(const Mps &rho0_pure, const SpinChainModel &model) {
    DoubledSystem d;
    d.length = model.length;
    Mpo rho = initial_mpo(rho0_pure);
    std::vector<Tensor> t = rho.tensors();
    std::vector<Tensor> doubled = t;
    doubled.insert(doubled.end(), t.begin(), t.end());
    d.p0 = Mpo(std::move(doubled));
    d.h_doubled = hamiltonian_mpo_doubled(model);
    return d;
}

VarianceValue variance_from_doubled(const Mpo &p_bar, const Mpo &rho_bar, const Mpo &obs) {
    if (p_bar.nsites() != 2 * obs.nsites() || rho_bar.nsites() != obs.nsites())
        throw DimensionError("variance_from_doubled: site counts do not match");
    Mpo oo = o_tensor_o(obs);
    double first = std::real(inner(p_bar, oo));
    double mean = std::real(inner(rho_bar, obs));
    VarianceValue v;
    v.raw = first - mean * mean;
    v.value = std::max(0.0, v.raw);
    return v;
}

double equilibration_entanglement(const Mpo &p_bar) {
    if (p_bar.nsites() % 2 != 0)
        throw DimensionError("equilibration_entanglement expects a doubled chain");
    return osee(p_bar, p_bar.nsites() / 2, false);
}

} // namespace tadm
