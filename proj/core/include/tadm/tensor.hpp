#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

namespace tadm {

using cplx = std::complex<double>;
using Shape = std::vector<long>;

/*! Dense complex tensor with a fixed row-major linearization.
 *
 * The linearization is part of the contract: serialized tensors are
 * bit-comparable across modules, and fusing adjacent indices is a pure
 * reshape. Indices are addressed left to right, the rightmost index
 * runs fastest.
 */
class Tensor {
  public:
    Tensor() = default;
    explicit Tensor(Shape shape);
    Tensor(Shape shape, std::vector<cplx> data);

    static Tensor scalar(cplx value);

    long rank() const { return static_cast<long>(shape_.size()); }
    long size() const { return static_cast<long>(data_.size()); }
    const Shape &shape() const { return shape_; }
    long dim(long axis) const;

    const std::vector<cplx> &data() const { return data_; }
    std::vector<cplx> &data() { return data_; }

    cplx &operator()(std::initializer_list<long> idx) { return data_[offset(idx)]; }
    const cplx &operator()(std::initializer_list<long> idx) const { return data_[offset(idx)]; }
    cplx &flat(long i) { return data_[static_cast<size_t>(i)]; }
    const cplx &flat(long i) const { return data_[static_cast<size_t>(i)]; }

    /*! Reinterpret the data under a new shape of equal total size. */
    Tensor reshape(Shape shape) const &;
    Tensor reshape(Shape shape) &&;

    /*! B = permute(A, p) with B(i_{p[0]}, ..., i_{p[r-1]}) = A(i_0, ..., i_{r-1}). */
    Tensor permute(const std::vector<int> &perm) const;

    Tensor conj() const;
    Tensor transpose2() const; // rank-2 transpose

    Tensor &operator*=(cplx factor);
    Tensor &operator+=(const Tensor &other);

    double norm() const;
    double max_abs() const;
    double max_abs_imag() const;
    bool is_real(double tol = 0.0) const;
    void zero_imag();

    std::string shape_str() const;

  private:
    size_t offset(std::initializer_list<long> idx) const;

    Shape shape_;
    std::vector<cplx> data_;
};

/*! Pairwise tensor contraction.
 *
 * axes lists (axis-of-a, axis-of-b) pairs that are summed over; paired
 * extents must match. The result carries the free axes of a (original
 * order) followed by the free axes of b.
 */
Tensor contract(const Tensor &a, const Tensor &b, const std::vector<std::pair<int, int>> &axes);

struct SvdResult {
    Tensor u;              // [left dims..., r]
    std::vector<double> s; // descending, r entries
    Tensor v;              // [r, right dims...]
    long rank = 0;         // entries of s above the relative zero floor
};

/*! SVD across the bipartition (left_axes | rest): t = u . diag(s) . v.
 *
 * left_axes must be a nonempty proper subset of the axes; axis order
 * inside each group follows the original tensor. Singular values below
 * 1e-14 * s[0] are counted as zero in `rank` but still returned.
 */
SvdResult svd_split(const Tensor &t, const std::vector<int> &left_axes);

struct QrResult {
    Tensor q; // [left dims..., k], isometric
    Tensor r; // [k, right dims...], upper triangular with real nonnegative diagonal
};

/*! Thin QR across the bipartition (left_axes | rest): t = q . r.
 * The diagonal of r is forced real nonnegative; gauging with negative
 * diagonal entries can flip tensor-element signs between sweep directions.
 */
QrResult qr_split(const Tensor &t, const std::vector<int> &left_axes);

struct RqResult {
    Tensor r; // [left dims..., k]
    Tensor q; // [k, right dims...], isometric on its rows
};

/*! Thin RQ across the bipartition: t = r . q, with q q^dag = 1. */
RqResult rq_split(const Tensor &t, const std::vector<int> &left_axes);

Tensor tensor_add(const Tensor &a, const Tensor &b, cplx ca, cplx cb);

/*! sum_i conj(a_i) b_i over identically shaped tensors. */
cplx conjdot(const Tensor &a, const Tensor &b);

constexpr double kSingularZeroFloor = 1e-14;

} // namespace tadm
