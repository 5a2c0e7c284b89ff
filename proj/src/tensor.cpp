#include "accr/tensor.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "accr/errors.hpp"

namespace accr {

namespace {

std::size_t ipow(int base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Matrix as_matrix(const PointTensor& t) {
  Matrix m(t.dim(), t.dim());
  for (int i = 0; i < t.dim(); ++i)
    for (int j = 0; j < t.dim(); ++j) m(i, j) = t(i, j);
  return m;
}

}  // namespace

PointTensor::PointTensor(int dim, std::vector<Variance> variance, Basis basis)
    : dim_(dim), variance_(std::move(variance)), data_(ipow(dim, static_cast<int>(variance_.size())), 0.0),
      basis_(basis) {}

PointTensor PointTensor::scalar(double value, Basis basis) {
  PointTensor t(1, {}, basis);
  t.data_[0] = value;
  return t;
}

PointTensor PointTensor::identity(int dim, Basis basis) {
  PointTensor t(dim, {Variance::Upper, Variance::Lower}, basis);
  for (int i = 0; i < dim; ++i) t(i, i) = 1.0;
  return t;
}

PointTensor PointTensor::from_matrix(int dim, std::span<const double> m, Variance v, Basis basis) {
  PointTensor t(dim, {v, v}, basis);
  std::copy(m.begin(), m.end(), t.data_.begin());
  return t;
}

std::size_t PointTensor::offset(std::span<const int> idx) const {
  if (idx.size() != variance_.size()) throw IndexOutOfRange("wrong number of indices for tensor rank");
  std::size_t off = 0;
  for (int i : idx) {
    if (i < 0 || i >= dim_) throw IndexOutOfRange("tensor index out of range");
    off = off * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
  }
  return off;
}

double PointTensor::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

PointTensor metric_invert(const PointTensor& g) {
  if (g.rank() != 2 || g.variance()[0] != Variance::Lower || g.variance()[1] != Variance::Lower)
    throw VarianceMismatch("metric_invert expects a (0,2) tensor");
  const Matrix m = as_matrix(g);
  Eigen::FullPivLU<Matrix> lu(m);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) throw SingularMetric("metric is singular at this point");
  const Matrix inv = lu.inverse();
  PointTensor out(g.dim(), {Variance::Upper, Variance::Upper}, g.basis());
  for (int i = 0; i < g.dim(); ++i)
    for (int j = 0; j < g.dim(); ++j) out(i, j) = 0.5 * (inv(i, j) + inv(j, i));
  return out;
}

Signature signature_of(const PointTensor& g) {
  Matrix m = as_matrix(g);
  m = 0.5 * (m + m.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  Signature s;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) <= 1e-10 * std::max(scale, 1.0)) {
      ++s.zero;
    } else if (ev(i) > 0) {
      ++s.positive;
    } else {
      ++s.negative;
    }
  }
  return s;
}

MetricAtPoint make_metric(const PointTensor& g) { return {g, metric_invert(g), signature_of(g)}; }

PointTensor contract(const PointTensor& t, int slot_a, int slot_b) {
  const int r = t.rank();
  if (slot_a < 0 || slot_b < 0 || slot_a >= r || slot_b >= r || slot_a == slot_b)
    throw IndexOutOfRange("invalid contraction slots");
  if (t.variance()[slot_a] == t.variance()[slot_b])
    throw VarianceMismatch("contraction requires one upper and one lower slot");
  std::vector<Variance> var;
  for (int s = 0; s < r; ++s)
    if (s != slot_a && s != slot_b) var.push_back(t.variance()[s]);
  PointTensor out(var.empty() ? 1 : t.dim(), var, t.basis());
  if (var.empty()) out = PointTensor::scalar(0.0, t.basis());
  std::vector<int> full(static_cast<std::size_t>(r));
  for_each_index(t.dim(), r - 2, [&](std::span<const int> idx) {
    double sum = 0.0;
    for (int k = 0; k < t.dim(); ++k) {
      std::size_t p = 0;
      for (int s = 0; s < r; ++s) full[s] = (s == slot_a || s == slot_b) ? k : idx[p++];
      sum += t.at(full);
    }
    out.at(idx) = sum;
  });
  return out;
}

PointTensor tensor_product(const PointTensor& a, const PointTensor& b) {
  if (a.basis() != b.basis()) throw Error("tensor_product: basis tags differ");
  std::vector<Variance> var = a.variance();
  var.insert(var.end(), b.variance().begin(), b.variance().end());
  const int dim = a.rank() > 0 ? a.dim() : b.dim();
  PointTensor out(dim, var, a.basis());
  std::size_t k = 0;
  for (double x : a.data())
    for (double y : b.data()) out.data()[k++] = x * y;
  return out;
}

PointTensor raise_lower(const PointTensor& t, int slot, const MetricAtPoint& metric) {
  if (slot < 0 || slot >= t.rank()) throw IndexOutOfRange("invalid slot");
  if (metric.g.basis() != t.basis()) throw Error("raise_lower: basis tags differ");
  const bool lowering = t.variance()[slot] == Variance::Upper;
  const PointTensor& m = lowering ? metric.g : metric.g_inv;
  std::vector<Variance> var = t.variance();
  var[slot] = lowering ? Variance::Lower : Variance::Upper;
  PointTensor out(t.dim(), var, t.basis());
  std::vector<int> src(static_cast<std::size_t>(t.rank()));
  for_each_index(t.dim(), t.rank(), [&](std::span<const int> idx) {
    std::copy(idx.begin(), idx.end(), src.begin());
    double sum = 0.0;
    for (int k = 0; k < t.dim(); ++k) {
      src[slot] = k;
      sum += m(idx[slot], k) * t.at(src);
    }
    out.at(idx) = sum;
  });
  return out;
}

PointTensor to_frame(const PointTensor& t, std::span<const double> frame, Basis target) {
  const int d = t.dim();
  Matrix e(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) e(i, j) = frame[static_cast<std::size_t>(i * d + j)];
  Eigen::FullPivLU<Matrix> lu(e);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) throw SingularFrame("frame vectors are linearly dependent");
  const Matrix e_inv = lu.inverse();

  // Transform one slot at a time.
  PointTensor cur = t;
  for (int slot = 0; slot < t.rank(); ++slot) {
    PointTensor next(d, t.variance(), target);
    const bool lower = t.variance()[slot] == Variance::Lower;
    std::vector<int> src(static_cast<std::size_t>(t.rank()));
    for_each_index(d, t.rank(), [&](std::span<const int> idx) {
      std::copy(idx.begin(), idx.end(), src.begin());
      double sum = 0.0;
      for (int k = 0; k < d; ++k) {
        src[slot] = k;
        const double coeff = lower ? e(k, idx[slot]) : e_inv(idx[slot], k);
        sum += coeff * cur.at(src);
      }
      next.at(idx) = sum;
    });
    cur = std::move(next);
  }
  cur.set_basis(target);
  return cur;
}

double symmetry_check(const PointTensor& t, std::span<const int> permutation, double sign) {
  if (static_cast<int>(permutation.size()) != t.rank()) throw IndexOutOfRange("permutation length != rank");
  double worst = 0.0;
  std::vector<int> perm_idx(permutation.size());
  for_each_index(t.dim(), t.rank(), [&](std::span<const int> idx) {
    for (std::size_t s = 0; s < permutation.size(); ++s) perm_idx[s] = idx[static_cast<std::size_t>(permutation[s])];
    worst = std::max(worst, std::abs(t.at(idx) - sign * t.at(perm_idx)));
  });
  return worst;
}

double max_abs_difference(const PointTensor& a, const PointTensor& b) {
  if (a.size() != b.size()) throw DimensionMismatch("tensor sizes differ");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  return worst;
}

}  // namespace accr
