#pragma once

#include <span>
#include <vector>

namespace accr {

enum class Func { Sin, Cos, Tan, Exp, Ln, Sqrt, Abs, Tanh };

const char* func_name(Func f);

// Scalar value with gradient and symmetric Hessian with respect to the d chart
// coordinates. The Hessian is stored dense, row-major, and every operation
// writes the upper triangle and mirrors it, so symmetry is exact.
class Jet2 {
 public:
  Jet2() = default;
  explicit Jet2(int dim) : value_(0.0), grad_(dim, 0.0), hess_(dim * dim, 0.0) {}

  static Jet2 constant(double value, int dim);
  // Coordinate function x_index evaluated at x.
  static Jet2 seed(int index, double x, int dim);

  int dim() const { return static_cast<int>(grad_.size()); }
  double value() const { return value_; }
  double grad(int i) const { return grad_[i]; }
  double hess(int i, int j) const { return hess_[i * dim() + j]; }
  std::span<const double> gradient() const { return grad_; }
  std::span<const double> hessian() const { return hess_; }

  friend Jet2 operator+(const Jet2& a, const Jet2& b);
  friend Jet2 operator-(const Jet2& a, const Jet2& b);
  friend Jet2 operator*(const Jet2& a, const Jet2& b);
  friend Jet2 operator/(const Jet2& a, const Jet2& b);
  friend Jet2 operator-(const Jet2& a);
  friend Jet2 operator*(double s, const Jet2& a);

  // f(a) given f(a.value), f'(a.value), f''(a.value).
  friend Jet2 chain(const Jet2& a, double f0, double f1, double f2);

 private:
  void mirror();

  double value_ = 0.0;
  std::vector<double> grad_;
  std::vector<double> hess_;
};

Jet2 chain(const Jet2& a, double f0, double f1, double f2);
Jet2 apply(Func f, const Jet2& a);
// a^n by repeated squaring; n may be negative (requires a.value != 0).
Jet2 pow_int(const Jet2& a, long n);

// First-order jet: value and gradient. Used to carry derived fields (Christoffel
// symbols, Lee forms) together with their first coordinate derivatives.
class Jet1 {
 public:
  Jet1() = default;
  explicit Jet1(int dim) : value_(0.0), grad_(dim, 0.0) {}
  Jet1(double value, std::span<const double> grad) : value_(value), grad_(grad.begin(), grad.end()) {}

  static Jet1 constant(double value, int dim);

  int dim() const { return static_cast<int>(grad_.size()); }
  double value() const { return value_; }
  double grad(int i) const { return grad_[i]; }
  std::span<const double> gradient() const { return grad_; }

  Jet1& operator+=(const Jet1& b);
  Jet1& operator-=(const Jet1& b);

  friend Jet1 operator+(Jet1 a, const Jet1& b) { return a += b; }
  friend Jet1 operator-(Jet1 a, const Jet1& b) { return a -= b; }
  friend Jet1 operator*(const Jet1& a, const Jet1& b);
  friend Jet1 operator/(const Jet1& a, const Jet1& b);
  friend Jet1 operator-(const Jet1& a);
  friend Jet1 operator*(double s, const Jet1& a);

 private:
  double value_ = 0.0;
  std::vector<double> grad_;
};

// The value of a Jet2 together with its gradient.
Jet1 value_part(const Jet2& j);
// The partial derivative d/dx_i of a Jet2 together with its own gradient
// (row i of the Hessian).
Jet1 partial_part(const Jet2& j, int i);

}  // namespace accr
