#include "tadm/chain.hpp"
#include "tadm/errors.hpp"

#include <algorithm>
#include <cmath>

namespace tadm::chain {

namespace {

void check_nonempty(size_t n) {
    if (n == 0) throw DimensionError("empty chain");
}

} // namespace

void validate(const Sites &a) {
    check_nonempty(a.size());
    if (a.front().dim(0) != 1 || a.back().dim(2) != 1)
        throw DimensionError("chain outer bonds must have extent 1");
    for (size_t j = 0; j < a.size(); ++j) {
        if (a[j].rank() != 3) throw DimensionError("chain site tensors must be rank 3");
        if (j + 1 < a.size() && a[j].dim(2) != a[j + 1].dim(0))
            throw DimensionError("chain bond extent mismatch at site " + std::to_string(j));
    }
}

void validate_op(const OpSites &w) {
    check_nonempty(w.size());
    if (w.front().dim(0) != 1 || w.back().dim(3) != 1)
        throw DimensionError("operator chain outer bonds must have extent 1");
    for (size_t j = 0; j < w.size(); ++j) {
        if (w[j].rank() != 4) throw DimensionError("operator chain site tensors must be rank 4");
        if (j + 1 < w.size() && w[j].dim(3) != w[j + 1].dim(0))
            throw DimensionError("operator chain bond extent mismatch at site " + std::to_string(j));
    }
}

long nsites(const Sites &a) { return static_cast<long>(a.size()); }

std::vector<long> bond_dims(const Sites &a) {
    std::vector<long> b;
    b.push_back(a.front().dim(0));
    for (const Tensor &t : a) b.push_back(t.dim(2));
    return b;
}

std::vector<long> bond_dims_op(const OpSites &w) {
    std::vector<long> b;
    b.push_back(w.front().dim(0));
    for (const Tensor &t : w) b.push_back(t.dim(3));
    return b;
}

long max_bond(const Sites &a) {
    long m = 0;
    for (long d : bond_dims(a)) m = std::max(m, d);
    return m;
}

long max_bond_op(const OpSites &w) {
    long m = 0;
    for (long d : bond_dims_op(w)) m = std::max(m, d);
    return m;
}

std::vector<long> phys_dims(const Sites &a) {
    std::vector<long> p;
    for (const Tensor &t : a) p.push_back(t.dim(1));
    return p;
}

Sites conj(const Sites &a) {
    Sites out;
    out.reserve(a.size());
    for (const Tensor &t : a) out.push_back(t.conj());
    return out;
}

Sites scale(Sites a, cplx factor) {
    a.front() *= factor;
    return a;
}

Sites zeros_like(const Sites &a) {
    Sites out;
    out.reserve(a.size());
    for (const Tensor &t : a) out.emplace_back(t.shape());
    return out;
}

cplx inner(const Sites &a, const Sites &b) {
    if (a.size() != b.size()) throw DimensionError("inner: site count mismatch");
    Tensor env = Tensor::scalar(1.0).reshape({1, 1}); // [abar, b]
    for (size_t j = 0; j < a.size(); ++j) {
        Tensor t = contract(env, b[j], {{1, 0}});      // [abar, p, br]
        env = contract(a[j].conj(), t, {{0, 0}, {1, 1}}); // [ar_bar, br]
    }
    return env.flat(0);
}

double norm(const Sites &a) {
    double n2 = std::real(inner(a, a));
    return std::sqrt(std::max(0.0, n2));
}

cplx inner_op(const Sites &a, const OpSites &w, const Sites &b) {
    if (a.size() != w.size() || a.size() != b.size())
        throw DimensionError("inner_op: site count mismatch");
    Tensor env = Tensor::scalar(1.0).reshape({1, 1, 1}); // [abar, w, b]
    for (size_t j = 0; j < a.size(); ++j) {
        Tensor t = contract(env, b[j], {{2, 0}});            // [abar, w, p_in, br]
        t = contract(t, w[j], {{1, 0}, {2, 2}});             // [abar, br, p_out, wr]
        env = contract(a[j].conj(), t, {{0, 0}, {1, 2}});    // [ar_bar, br, wr]
        env = env.permute({0, 2, 1});                        // [abar, w, b]
    }
    return env.flat(0);
}

Sites apply_op(const OpSites &w, const Sites &b) {
    if (w.size() != b.size()) throw DimensionError("apply_op: site count mismatch");
    Sites out;
    out.reserve(b.size());
    for (size_t j = 0; j < b.size(); ++j) {
        // [wl, po, pi, wr] x [bl, pi, br] -> [wl, po, wr, bl, br]
        Tensor t = contract(w[j], b[j], {{2, 1}});
        t = t.permute({0, 3, 1, 2, 4}); // [wl, bl, po, wr, br]
        out.push_back(std::move(t).reshape(
            {w[j].dim(0) * b[j].dim(0), w[j].dim(1), w[j].dim(3) * b[j].dim(2)}));
    }
    return out;
}

OpSites compose(const OpSites &w2, const OpSites &w1) {
    if (w2.size() != w1.size()) throw DimensionError("compose: site count mismatch");
    OpSites out;
    out.reserve(w1.size());
    for (size_t j = 0; j < w1.size(); ++j) {
        // [l2, po, t, r2] x [l1, t, pi, r1] -> [l2, po, r2, l1, pi, r1]
        Tensor t = contract(w2[j], w1[j], {{2, 1}});
        t = t.permute({0, 3, 1, 4, 2, 5}); // [l2, l1, po, pi, r2, r1]
        out.push_back(std::move(t).reshape({w2[j].dim(0) * w1[j].dim(0), w2[j].dim(1),
                                            w1[j].dim(2), w2[j].dim(3) * w1[j].dim(3)}));
    }
    return out;
}

OpSites adjoint_op(const OpSites &w) {
    OpSites out;
    out.reserve(w.size());
    for (const Tensor &t : w) out.push_back(t.conj().permute({0, 2, 1, 3}));
    return out;
}

namespace {

Tensor direct_sum_site(const Tensor &a, const Tensor &b, bool first, bool last, cplx ca, cplx cb) {
    // rank-3 [bl, p, br]; block-diagonal in the bonds.
    long al = a.dim(0), p = a.dim(1), ar = a.dim(2);
    long bl = b.dim(0), br = b.dim(2);
    if (p != b.dim(1)) throw DimensionError("add: physical extent mismatch");
    long ol = first ? 1 : al + bl;
    long orr = last ? 1 : ar + br;
    Tensor out({ol, p, orr});
    auto put = [&](long i, long k, long j, cplx v) { out({i, k, j}) = v; };
    for (long i = 0; i < al; ++i)
        for (long k = 0; k < p; ++k)
            for (long j = 0; j < ar; ++j)
                put(first ? 0 : i, k, last ? 0 : j, ca * a({i, k, j}));
    for (long i = 0; i < bl; ++i)
        for (long k = 0; k < p; ++k)
            for (long j = 0; j < br; ++j) {
                long oi = first ? 0 : al + i;
                long oj = last ? 0 : ar + j;
                out({oi, k, oj}) += cb * b({i, k, j});
            }
    return out;
}

} // namespace

Sites add(const Sites &a, const Sites &b, cplx ca, cplx cb) {
    if (a.size() != b.size()) throw DimensionError("add: site count mismatch");
    const size_t n = a.size();
    if (n == 1) {
        Sites out;
        out.push_back(tensor_add(a[0], b[0], ca, cb));
        return out;
    }
    Sites out;
    out.reserve(n);
    for (size_t j = 0; j < n; ++j) {
        bool first = (j == 0), last = (j + 1 == n);
        // coefficients only on the first site, identity continuation elsewhere
        cplx fa = first ? ca : cplx(1.0);
        cplx fb = first ? cb : cplx(1.0);
        out.push_back(direct_sum_site(a[j], b[j], first, last, fa, fb));
    }
    return out;
}

OpSites add_op(const OpSites &a, const OpSites &b, cplx ca, cplx cb) {
    if (a.size() != b.size()) throw DimensionError("add_op: site count mismatch");
    const size_t n = a.size();
    auto fuse = [](const Tensor &t) {
        return t.reshape({t.dim(0), t.dim(1) * t.dim(2), t.dim(3)});
    };
    Sites af, bf;
    for (size_t j = 0; j < n; ++j) {
        af.push_back(fuse(a[j]));
        bf.push_back(fuse(b[j]));
    }
    Sites sum = add(af, bf, ca, cb);
    OpSites out;
    for (size_t j = 0; j < n; ++j)
        out.push_back(sum[j].reshape({sum[j].dim(0), a[j].dim(1), a[j].dim(2), sum[j].dim(2)}));
    return out;
}

double CompressReport::residual() const {
    if (input_norm <= 0.0) return 0.0;
    return std::sqrt(std::max(0.0, discarded_norm2)) / input_norm;
}

void left_canonicalize(Sites &a) {
    validate(a);
    for (size_t j = 0; j + 1 < a.size(); ++j) {
        QrResult qr = qr_split(a[j], {0, 1});
        a[j] = qr.q; // [bl, p, k]
        a[j + 1] = contract(qr.r, a[j + 1], {{1, 0}});
    }
}

void right_canonicalize(Sites &a) {
    validate(a);
    for (size_t j = a.size() - 1; j > 0; --j) {
        RqResult rq = rq_split(a[j], {0});
        a[j] = rq.q; // [k, p, br]
        a[j - 1] = contract(a[j - 1], rq.r, {{2, 0}});
    }
}

CompressReport compress(Sites &a, long max_bond_cap, double tol) {
    validate(a);
    CompressReport rep;
    right_canonicalize(a);
    rep.input_norm = a.front().norm(); // right-canonical: norm sits in site 0

    const double tol2_total = tol > 0 ? tol * tol * rep.input_norm * rep.input_norm : 0.0;
    const long nb = static_cast<long>(a.size()) - 1;
    const double tol2_bond = nb > 0 ? tol2_total / static_cast<double>(nb) : 0.0;

    for (size_t j = 0; j + 1 < a.size(); ++j) {
        SvdResult svd = svd_split(a[j], {0, 1});
        long k = static_cast<long>(svd.s.size());
        // zero floor, then residual budget, then hard cap
        long keep = std::min<long>(k, svd.rank);
        if (keep == 0) keep = 1;
        double tail = 0.0;
        while (keep > 1) {
            double s2 = svd.s[static_cast<size_t>(keep - 1)] * svd.s[static_cast<size_t>(keep - 1)];
            if (tail + s2 > tol2_bond) break;
            tail += s2;
            --keep;
        }
        if (max_bond_cap > 0 && keep > max_bond_cap) {
            rep.bond_capped = true;
            keep = max_bond_cap;
        }
        double disc = 0.0;
        for (long i = keep; i < k; ++i) disc += svd.s[static_cast<size_t>(i)] * svd.s[static_cast<size_t>(i)];
        rep.discarded_norm2 += disc;

        // a[j] <- U[:, :keep]; carry S V into the next site
        Tensor u = svd.u; // [bl, p, k]
        Tensor ut({u.dim(0), u.dim(1), keep});
        for (long x = 0; x < u.dim(0); ++x)
            for (long y = 0; y < u.dim(1); ++y)
                for (long z = 0; z < keep; ++z) ut({x, y, z}) = u({x, y, z});
        Tensor sv({keep, svd.v.dim(1)});
        for (long x = 0; x < keep; ++x)
            for (long y = 0; y < svd.v.dim(1); ++y) sv({x, y}) = svd.s[static_cast<size_t>(x)] * svd.v({x, y});
        a[j] = std::move(ut);
        a[j + 1] = contract(sv, a[j + 1], {{1, 0}});
    }
    rep.max_bond = max_bond(a);
    return rep;
}

CompressReport compress_op(OpSites &w, long max_bond_cap, double tol) {
    validate_op(w);
    std::vector<long> po, pi;
    for (const Tensor &t : w) {
        po.push_back(t.dim(1));
        pi.push_back(t.dim(2));
    }
    Sites s = op_to_sites(w);
    CompressReport rep = compress(s, max_bond_cap, tol);
    for (size_t j = 0; j < w.size(); ++j)
        w[j] = s[j].reshape({s[j].dim(0), po[j], pi[j], s[j].dim(2)});
    return rep;
}

std::vector<double> schmidt_values(Sites a, long cut) {
    validate(a);
    const long n = nsites(a);
    if (cut < 1 || cut >= n) throw DimensionError("schmidt cut out of range");
    // left-orthonormalize [0, cut), right-orthonormalize (cut, n), then the
    // singular values of site `cut` over [bl | p*br] are the Schmidt spectrum.
    for (long j = 0; j < cut; ++j) {
        QrResult qr = qr_split(a[static_cast<size_t>(j)], {0, 1});
        a[static_cast<size_t>(j)] = qr.q;
        a[static_cast<size_t>(j + 1)] = contract(qr.r, a[static_cast<size_t>(j + 1)], {{1, 0}});
    }
    for (long j = n - 1; j > cut; --j) {
        RqResult rq = rq_split(a[static_cast<size_t>(j)], {0});
        a[static_cast<size_t>(j)] = rq.q;
        a[static_cast<size_t>(j - 1)] = contract(a[static_cast<size_t>(j - 1)], rq.r, {{2, 0}});
    }
    SvdResult svd = svd_split(a[static_cast<size_t>(cut)], {0});
    return svd.s;
}

Tensor dense(const Sites &a) {
    validate(a);
    Tensor acc = a[0]; // [1, p1, b]
    Shape phys{a[0].dim(1)};
    acc = acc.reshape({a[0].dim(1), a[0].dim(2)});
    for (size_t j = 1; j < a.size(); ++j) {
        acc = contract(acc, a[j], {{static_cast<int>(acc.rank() - 1), 0}});
        phys.push_back(a[j].dim(1));
    }
    Shape out = phys; // trailing bond has extent 1
    return std::move(acc).reshape(out);
}

Sites from_dense(const Tensor &t, double tol, long max_bond_cap) {
    const long n = t.rank();
    if (n < 1) throw DimensionError("from_dense needs rank >= 1");
    Sites out;
    double input_norm = t.norm();
    const double tol2_bond =
        (n > 1 && tol > 0) ? tol * tol * input_norm * input_norm / static_cast<double>(n - 1) : 0.0;

    Tensor rest = t;
    long bl = 1;
    for (long j = 0; j < n - 1; ++j) {
        long p = t.dim(j);
        long tail = rest.size() / (bl * p);
        Tensor m = rest.reshape({bl * p, tail});
        SvdResult svd = svd_split(m, {0});
        long k = static_cast<long>(svd.s.size());
        long keep = std::min<long>(k, svd.rank);
        if (keep == 0) keep = 1;
        double acc = 0.0;
        while (keep > 1) {
            double s2 = svd.s[static_cast<size_t>(keep - 1)] * svd.s[static_cast<size_t>(keep - 1)];
            if (acc + s2 > tol2_bond) break;
            acc += s2;
            --keep;
        }
        if (max_bond_cap > 0 && keep > max_bond_cap) keep = max_bond_cap;

        Tensor u({bl * p, keep});
        for (long x = 0; x < bl * p; ++x)
            for (long z = 0; z < keep; ++z) u({x, z}) = svd.u({x, z});
        out.push_back(std::move(u).reshape({bl, p, keep}));

        Tensor sv({keep, tail});
        for (long x = 0; x < keep; ++x)
            for (long y = 0; y < tail; ++y) sv({x, y}) = svd.s[static_cast<size_t>(x)] * svd.v({x, y});
        rest = std::move(sv);
        bl = keep;
    }
    out.push_back(rest.reshape({bl, t.dim(n - 1), 1}));
    return out;
}

OpSites sites_to_op(const Sites &a, const std::vector<long> &phys_out) {
    OpSites out;
    for (size_t j = 0; j < a.size(); ++j) {
        long po = phys_out[j];
        long pi = a[j].dim(1) / po;
        out.push_back(a[j].reshape({a[j].dim(0), po, pi, a[j].dim(2)}));
    }
    return out;
}

Sites op_to_sites(const OpSites &w) {
    Sites out;
    for (const Tensor &t : w) out.push_back(t.reshape({t.dim(0), t.dim(1) * t.dim(2), t.dim(3)}));
    return out;
}

OpSites identity_op(const std::vector<long> &phys) {
    OpSites out;
    for (long p : phys) {
        Tensor t({1, p, p, 1});
        for (long s = 0; s < p; ++s) t({0, s, s, 0}) = 1.0;
        out.push_back(std::move(t));
    }
    return out;
}

Sites reverse(const Sites &a) {
    Sites out;
    out.reserve(a.size());
    for (auto it = a.rbegin(); it != a.rend(); ++it) out.push_back(it->permute({2, 1, 0}));
    return out;
}

OpSites reverse_op(const OpSites &w) {
    OpSites out;
    out.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(it->permute({3, 1, 2, 0}));
    return out;
}

OpSites transpose_op(const OpSites &w) {
    OpSites out;
    out.reserve(w.size());
    for (const Tensor &t : w) out.push_back(t.permute({0, 2, 1, 3}));
    return out;
}

Sites concat(const Sites &a, const Sites &b) {
    Sites out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

OpSites concat_op(const OpSites &a, const OpSites &b) {
    OpSites out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

} // namespace tadm::chain
