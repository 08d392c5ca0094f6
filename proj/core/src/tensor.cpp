#include "tadm/tensor.hpp"
#include "tadm/errors.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace tadm {

namespace {

using MatrixC = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatrixR = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapC = Eigen::Map<const MatrixC>;

long product(const Shape &s) {
    long p = 1;
    for (long d : s) p *= d;
    return p;
}

bool all_real(const Tensor &t) {
    for (const cplx &v : t.data())
        if (v.imag() != 0.0) return false;
    return true;
}

// Splits [0, rank) into (left_axes, complement), both ascending.
void split_axes(long rank, const std::vector<int> &left_axes, std::vector<int> &left,
                std::vector<int> &right) {
    std::vector<char> is_left(static_cast<size_t>(rank), 0);
    for (int a : left_axes) {
        if (a < 0 || a >= rank) throw DimensionError("split axis out of range");
        if (is_left[static_cast<size_t>(a)]) throw DimensionError("duplicate split axis");
        is_left[static_cast<size_t>(a)] = 1;
    }
    left.clear();
    right.clear();
    for (long i = 0; i < rank; ++i)
        (is_left[static_cast<size_t>(i)] ? left : right).push_back(static_cast<int>(i));
    if (left.empty() || right.empty())
        throw DimensionError("split needs a nonempty proper subset of axes");
}

} // namespace

Tensor::Tensor(Shape shape) : shape_(std::move(shape)) {
    data_.assign(static_cast<size_t>(product(shape_)), cplx(0.0, 0.0));
}

Tensor::Tensor(Shape shape, std::vector<cplx> data) : shape_(std::move(shape)), data_(std::move(data)) {
    if (product(shape_) != static_cast<long>(data_.size()))
        throw DimensionError("tensor data does not match shape " + shape_str());
}

Tensor Tensor::scalar(cplx value) {
    Tensor t(Shape{1});
    t.data_[0] = value;
    return t;
}

long Tensor::dim(long axis) const {
    if (axis < 0 || axis >= rank()) throw DimensionError("axis out of range");
    return shape_[static_cast<size_t>(axis)];
}

size_t Tensor::offset(std::initializer_list<long> idx) const {
    size_t off = 0;
    size_t k = 0;
    for (long i : idx) {
        off = off * static_cast<size_t>(shape_[k]) + static_cast<size_t>(i);
        ++k;
    }
    return off;
}

Tensor Tensor::reshape(Shape shape) const & {
    if (product(shape) != size()) throw DimensionError("reshape changes total size");
    Tensor t;
    t.shape_ = std::move(shape);
    t.data_ = data_;
    return t;
}

Tensor Tensor::reshape(Shape shape) && {
    if (product(shape) != size()) throw DimensionError("reshape changes total size");
    Tensor t;
    t.shape_ = std::move(shape);
    t.data_ = std::move(data_);
    return t;
}

Tensor Tensor::permute(const std::vector<int> &perm) const {
    const long r = rank();
    if (static_cast<long>(perm.size()) != r) throw DimensionError("permutation rank mismatch");

    Shape new_shape(static_cast<size_t>(r));
    for (long i = 0; i < r; ++i) new_shape[static_cast<size_t>(i)] = shape_[static_cast<size_t>(perm[static_cast<size_t>(i)])];

    // old strides, then stride of output index i in the input layout
    std::vector<long> stride(static_cast<size_t>(r), 1);
    for (long i = r - 2; i >= 0; --i)
        stride[static_cast<size_t>(i)] = stride[static_cast<size_t>(i + 1)] * shape_[static_cast<size_t>(i + 1)];
    std::vector<long> in_stride(static_cast<size_t>(r));
    for (long i = 0; i < r; ++i) in_stride[static_cast<size_t>(i)] = stride[static_cast<size_t>(perm[static_cast<size_t>(i)])];

    Tensor out(new_shape);
    const long n = size();
    std::vector<long> idx(static_cast<size_t>(r), 0);
    long src = 0;
    for (long flat = 0; flat < n; ++flat) {
        out.data_[static_cast<size_t>(flat)] = data_[static_cast<size_t>(src)];
        for (long ax = r - 1; ax >= 0; --ax) {
            auto a = static_cast<size_t>(ax);
            if (++idx[a] < new_shape[a]) {
                src += in_stride[a];
                break;
            }
            src -= in_stride[a] * (new_shape[a] - 1);
            idx[a] = 0;
        }
    }
    return out;
}

Tensor Tensor::conj() const {
    Tensor t(*this);
    for (cplx &v : t.data_) v = std::conj(v);
    return t;
}

Tensor Tensor::transpose2() const {
    if (rank() != 2) throw DimensionError("transpose2 needs a rank-2 tensor");
    return permute({1, 0});
}

Tensor &Tensor::operator*=(cplx factor) {
    for (cplx &v : data_) v *= factor;
    return *this;
}

Tensor &Tensor::operator+=(const Tensor &other) {
    if (shape_ != other.shape_) throw DimensionError("tensor sum shape mismatch");
    for (size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

double Tensor::norm() const {
    double s = 0.0;
    for (const cplx &v : data_) s += std::norm(v);
    return std::sqrt(s);
}

double Tensor::max_abs() const {
    double m = 0.0;
    for (const cplx &v : data_) m = std::max(m, std::abs(v));
    return m;
}

double Tensor::max_abs_imag() const {
    double m = 0.0;
    for (const cplx &v : data_) m = std::max(m, std::abs(v.imag()));
    return m;
}

bool Tensor::is_real(double tol) const {
    for (const cplx &v : data_)
        if (std::abs(v.imag()) > tol) return false;
    return true;
}

void Tensor::zero_imag() {
    for (cplx &v : data_) v = cplx(v.real(), 0.0);
}

std::string Tensor::shape_str() const {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < shape_.size(); ++i) os << (i ? "," : "") << shape_[i];
    os << "]";
    return os.str();
}

Tensor contract(const Tensor &a, const Tensor &b, const std::vector<std::pair<int, int>> &axes) {
    const long ra = a.rank(), rb = b.rank();
    std::vector<char> a_used(static_cast<size_t>(ra), 0), b_used(static_cast<size_t>(rb), 0);
    long contracted = 1;
    for (auto [ia, ib] : axes) {
        if (ia < 0 || ia >= ra || ib < 0 || ib >= rb) throw DimensionError("contract axis out of range");
        if (a_used[static_cast<size_t>(ia)] || b_used[static_cast<size_t>(ib)])
            throw DimensionError("contract axis used twice");
        if (a.dim(ia) != b.dim(ib))
            throw DimensionError("contract extent mismatch: a" + a.shape_str() + " axis " +
                                 std::to_string(ia) + " vs b" + b.shape_str() + " axis " + std::to_string(ib));
        a_used[static_cast<size_t>(ia)] = 1;
        b_used[static_cast<size_t>(ib)] = 1;
        contracted *= a.dim(ia);
    }

    std::vector<int> a_perm, b_perm;
    Shape out_shape;
    long fa = 1, fb = 1;
    for (long i = 0; i < ra; ++i)
        if (!a_used[static_cast<size_t>(i)]) {
            a_perm.push_back(static_cast<int>(i));
            out_shape.push_back(a.dim(i));
            fa *= a.dim(i);
        }
    for (auto [ia, ib] : axes) {
        a_perm.push_back(ia);
        (void)ib;
    }
    for (auto [ia, ib] : axes) {
        b_perm.push_back(ib);
        (void)ia;
    }
    for (long i = 0; i < rb; ++i)
        if (!b_used[static_cast<size_t>(i)]) {
            b_perm.push_back(static_cast<int>(i));
            out_shape.push_back(b.dim(i));
            fb *= b.dim(i);
        }
    if (out_shape.empty()) out_shape.push_back(1); // full contraction -> scalar tensor [1]

    Tensor ap = a.permute(a_perm);
    Tensor bp = b.permute(b_perm);

    Tensor out(out_shape);
    // Real inputs hit a real GEMM; complex chains mapped to real ones keep
    // their speed advantage without a second scalar type in the API.
    if (all_real(ap) && all_real(bp)) {
        MatrixR am(fa, contracted), bm(contracted, fb);
        for (long i = 0; i < fa * contracted; ++i) am.data()[i] = ap.data()[static_cast<size_t>(i)].real();
        for (long i = 0; i < contracted * fb; ++i) bm.data()[i] = bp.data()[static_cast<size_t>(i)].real();
        MatrixR cm = am * bm;
        for (long i = 0; i < fa * fb; ++i) out.data()[static_cast<size_t>(i)] = cplx(cm.data()[i], 0.0);
    } else {
        MapC am(ap.data().data(), fa, contracted);
        MapC bm(bp.data().data(), contracted, fb);
        MatrixC cm = am * bm;
        std::copy(cm.data(), cm.data() + fa * fb, out.data().begin());
    }
    return out;
}

namespace {

struct MatrixView {
    std::vector<int> left, right;
    Shape left_dims, right_dims;
    long rows = 1, cols = 1;
    Tensor permuted;
};

MatrixView as_matrix(const Tensor &t, const std::vector<int> &left_axes) {
    MatrixView mv;
    split_axes(t.rank(), left_axes, mv.left, mv.right);
    std::vector<int> perm;
    for (int a : mv.left) {
        perm.push_back(a);
        mv.left_dims.push_back(t.dim(a));
        mv.rows *= t.dim(a);
    }
    for (int a : mv.right) {
        perm.push_back(a);
        mv.right_dims.push_back(t.dim(a));
        mv.cols *= t.dim(a);
    }
    mv.permuted = t.permute(perm);
    return mv;
}

} // namespace

SvdResult svd_split(const Tensor &t, const std::vector<int> &left_axes) {
    MatrixView mv = as_matrix(t, left_axes);
    const long k = std::min(mv.rows, mv.cols);

    Eigen::MatrixXcd u, v;
    Eigen::VectorXd s;
    try {
        if (all_real(mv.permuted)) {
            Eigen::MatrixXd m(mv.rows, mv.cols);
            for (long r = 0; r < mv.rows; ++r)
                for (long c = 0; c < mv.cols; ++c)
                    m(r, c) = mv.permuted.data()[static_cast<size_t>(r * mv.cols + c)].real();
            Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
            u = svd.matrixU().cast<cplx>();
            v = svd.matrixV().cast<cplx>();
            s = svd.singularValues();
        } else {
            Eigen::MatrixXcd m(mv.rows, mv.cols);
            for (long r = 0; r < mv.rows; ++r)
                for (long c = 0; c < mv.cols; ++c)
                    m(r, c) = mv.permuted.data()[static_cast<size_t>(r * mv.cols + c)];
            Eigen::BDCSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
            u = svd.matrixU();
            v = svd.matrixV();
            s = svd.singularValues();
        }
    } catch (const std::exception &e) {
        throw DecompositionError(std::string("svd backend failure: ") + e.what());
    }

    SvdResult res;
    res.s.assign(s.data(), s.data() + k);
    res.rank = k;
    const double floor = res.s.empty() ? 0.0 : kSingularZeroFloor * res.s.front();
    while (res.rank > 0 && res.s[static_cast<size_t>(res.rank - 1)] <= floor) --res.rank;

    Shape us = mv.left_dims;
    us.push_back(k);
    Tensor ut(us);
    for (long r = 0; r < mv.rows; ++r)
        for (long c = 0; c < k; ++c) ut.data()[static_cast<size_t>(r * k + c)] = u(r, c);

    Shape vs;
    vs.push_back(k);
    for (long d : mv.right_dims) vs.push_back(d);
    Tensor vt(vs);
    for (long r = 0; r < k; ++r)
        for (long c = 0; c < mv.cols; ++c) vt.data()[static_cast<size_t>(r * mv.cols + c)] = std::conj(v(c, r));

    res.u = std::move(ut);
    res.v = std::move(vt);
    return res;
}

QrResult qr_split(const Tensor &t, const std::vector<int> &left_axes) {
    MatrixView mv = as_matrix(t, left_axes);
    const long k = std::min(mv.rows, mv.cols);

    Eigen::MatrixXcd q, r;
    try {
        if (all_real(mv.permuted)) {
            Eigen::MatrixXd m(mv.rows, mv.cols);
            for (long i = 0; i < mv.rows; ++i)
                for (long j = 0; j < mv.cols; ++j)
                    m(i, j) = mv.permuted.data()[static_cast<size_t>(i * mv.cols + j)].real();
            Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
            Eigen::MatrixXd thin_q = qr.householderQ() * Eigen::MatrixXd::Identity(mv.rows, k);
            Eigen::MatrixXd rr = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
            q = thin_q.cast<cplx>();
            r = rr.cast<cplx>();
        } else {
            Eigen::MatrixXcd m(mv.rows, mv.cols);
            for (long i = 0; i < mv.rows; ++i)
                for (long j = 0; j < mv.cols; ++j)
                    m(i, j) = mv.permuted.data()[static_cast<size_t>(i * mv.cols + j)];
            Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
            q = qr.householderQ() * Eigen::MatrixXcd::Identity(mv.rows, k);
            r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
        }
    } catch (const std::exception &e) {
        throw DecompositionError(std::string("qr backend failure: ") + e.what());
    }

    // Force a real nonnegative diagonal on r.
    for (long j = 0; j < k; ++j) {
        cplx d = r(j, j);
        double mag = std::abs(d);
        if (mag == 0.0) continue;
        cplx phase = d / mag;
        r.row(j) *= std::conj(phase);
        q.col(j) *= phase;
    }

    Shape qs = mv.left_dims;
    qs.push_back(k);
    Tensor qt(qs);
    for (long i = 0; i < mv.rows; ++i)
        for (long j = 0; j < k; ++j) qt.data()[static_cast<size_t>(i * k + j)] = q(i, j);

    Shape rs;
    rs.push_back(k);
    for (long d : mv.right_dims) rs.push_back(d);
    Tensor rt(rs);
    for (long i = 0; i < k; ++i)
        for (long j = 0; j < mv.cols; ++j) rt.data()[static_cast<size_t>(i * mv.cols + j)] = r(i, j);

    return {std::move(qt), std::move(rt)};
}

RqResult rq_split(const Tensor &t, const std::vector<int> &left_axes) {
    // t = r.q follows from qr of the transposed matrix view: t^T = q'.r'
    // gives t = r'^T q'^T with (q'^T)(q'^T)^dag = (q'^dag q')^T = 1.
    MatrixView mv = as_matrix(t, left_axes);
    const long k = std::min(mv.rows, mv.cols);

    Tensor tt = mv.permuted.reshape({mv.rows, mv.cols}).permute({1, 0});
    QrResult qr = qr_split(tt, {0});
    Tensor q = qr.q.permute({1, 0}); // [k, rows] -> wait: qr.q is [cols, k]; transpose -> [k, cols]
    Tensor r = qr.r.permute({1, 0}); // qr.r is [k, rows]? no: [k, cols of tt] = [k, rows]; transpose -> [rows, k]

    Shape rshape = mv.left_dims;
    rshape.push_back(k);
    Shape qshape;
    qshape.push_back(k);
    for (long d : mv.right_dims) qshape.push_back(d);
    return {std::move(r).reshape(rshape), std::move(q).reshape(qshape)};
}

Tensor tensor_add(const Tensor &a, const Tensor &b, cplx ca, cplx cb) {
    if (a.shape() != b.shape()) throw DimensionError("tensor_add shape mismatch");
    Tensor out(a.shape());
    for (long i = 0; i < a.size(); ++i)
        out.data()[static_cast<size_t>(i)] =
            ca * a.data()[static_cast<size_t>(i)] + cb * b.data()[static_cast<size_t>(i)];
    return out;
}

cplx conjdot(const Tensor &a, const Tensor &b) {
    if (a.shape() != b.shape()) throw DimensionError("conjdot shape mismatch");
    cplx s(0.0, 0.0);
    for (long i = 0; i < a.size(); ++i)
        s += std::conj(a.data()[static_cast<size_t>(i)]) * b.data()[static_cast<size_t>(i)];
    return s;
}

} // namespace tadm
