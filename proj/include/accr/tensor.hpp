#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

namespace accr {

enum class Variance { Upper, Lower };
enum class Basis { Coordinate, PhiFrame };

// Dense components of a tensor at one point, row-major over its slots.
class PointTensor {
 public:
  PointTensor() = default;
  PointTensor(int dim, std::vector<Variance> variance, Basis basis = Basis::Coordinate);

  static PointTensor scalar(double value, Basis basis = Basis::Coordinate);
  // (1,1) identity.
  static PointTensor identity(int dim, Basis basis = Basis::Coordinate);
  // (0,2) or (2,0) tensor from a row-major matrix.
  static PointTensor from_matrix(int dim, std::span<const double> m, Variance v, Basis basis = Basis::Coordinate);

  int dim() const { return dim_; }
  int rank() const { return static_cast<int>(variance_.size()); }
  const std::vector<Variance>& variance() const { return variance_; }
  Basis basis() const { return basis_; }
  void set_basis(Basis b) { basis_ = b; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  std::size_t size() const { return data_.size(); }

  template <class... Idx>
  double& operator()(Idx... idx) {
    return data_[offset({static_cast<int>(idx)...})];
  }
  template <class... Idx>
  double operator()(Idx... idx) const {
    return data_[offset({static_cast<int>(idx)...})];
  }
  double& at(std::span<const int> idx) { return data_[offset(idx)]; }
  double at(std::span<const int> idx) const { return data_[offset(idx)]; }

  double max_abs() const;

 private:
  std::size_t offset(std::initializer_list<int> idx) const {
    return offset(std::span<const int>(idx.begin(), idx.size()));
  }
  std::size_t offset(std::span<const int> idx) const;

  int dim_ = 0;
  std::vector<Variance> variance_;
  std::vector<double> data_;
  Basis basis_ = Basis::Coordinate;
};

struct Signature {
  int positive = 0;
  int negative = 0;
  int zero = 0;
  friend bool operator==(const Signature&, const Signature&) = default;
};

// A metric at a point with its inverse and signature.
struct MetricAtPoint {
  PointTensor g;      // (0,2)
  PointTensor g_inv;  // (2,0)
  Signature signature;
};

// Inverse of a symmetric (0,2) tensor by fully pivoted LU; throws
// SingularMetric when a pivot falls below 1e-12 of the largest entry.
PointTensor metric_invert(const PointTensor& g);
// Eigenvalue sign counts with threshold 1e-10 relative to the largest |eigenvalue|.
Signature signature_of(const PointTensor& g);
MetricAtPoint make_metric(const PointTensor& g);

// Traces slots a and b (which must have opposite variance).
PointTensor contract(const PointTensor& t, int slot_a, int slot_b);
PointTensor tensor_product(const PointTensor& a, const PointTensor& b);
// Flips the variance of one slot using g (lowering) or g_inv (raising).
PointTensor raise_lower(const PointTensor& t, int slot, const MetricAtPoint& metric);

// Columns of `frame` (row-major dim x dim) are the frame vectors in coordinate
// components. Lower slots transform with the frame, upper slots with its inverse.
PointTensor to_frame(const PointTensor& t, std::span<const double> frame, Basis target = Basis::PhiFrame);

// max |t(i_0..i_r) - sign * t(i_perm[0]..i_perm[r-1])|.
double symmetry_check(const PointTensor& t, std::span<const int> permutation, double sign);

double max_abs_difference(const PointTensor& a, const PointTensor& b);

// Iterates over all multi-indices of the given rank in row-major order.
template <class F>
void for_each_index(int dim, int rank, F&& f) {
  std::vector<int> idx(static_cast<std::size_t>(rank), 0);
  for (;;) {
    f(std::span<const int>(idx));
    int k = rank - 1;
    while (k >= 0 && ++idx[k] == dim) idx[k--] = 0;
    if (k < 0) return;
  }
}

}  // namespace accr
