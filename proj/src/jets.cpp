#include "accr/jets.hpp"

#include <cmath>
#include <string>

#include "accr/errors.hpp"

namespace accr {

const char* func_name(Func f) {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Tan: return "tan";
    case Func::Exp: return "exp";
    case Func::Ln: return "ln";
    case Func::Sqrt: return "sqrt";
    case Func::Abs: return "abs";
    case Func::Tanh: return "tanh";
  }
  return "?";
}

Jet2 Jet2::constant(double value, int dim) {
  Jet2 j(dim);
  j.value_ = value;
  return j;
}

Jet2 Jet2::seed(int index, double x, int dim) {
  if (index < 0 || index >= dim) {
    throw IndexOutOfRange("jet seed index " + std::to_string(index) + " out of range for dimension " +
                          std::to_string(dim));
  }
  Jet2 j(dim);
  j.value_ = x;
  j.grad_[index] = 1.0;
  return j;
}

void Jet2::mirror() {
  const int d = dim();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < i; ++j) hess_[i * d + j] = hess_[j * d + i];
}

Jet2 operator+(const Jet2& a, const Jet2& b) {
  Jet2 r(a.dim());
  r.value_ = a.value_ + b.value_;
  for (std::size_t i = 0; i < r.grad_.size(); ++i) r.grad_[i] = a.grad_[i] + b.grad_[i];
  for (std::size_t i = 0; i < r.hess_.size(); ++i) r.hess_[i] = a.hess_[i] + b.hess_[i];
  return r;
}

Jet2 operator-(const Jet2& a, const Jet2& b) {
  Jet2 r(a.dim());
  r.value_ = a.value_ - b.value_;
  for (std::size_t i = 0; i < r.grad_.size(); ++i) r.grad_[i] = a.grad_[i] - b.grad_[i];
  for (std::size_t i = 0; i < r.hess_.size(); ++i) r.hess_[i] = a.hess_[i] - b.hess_[i];
  return r;
}

Jet2 operator-(const Jet2& a) {
  Jet2 r(a.dim());
  r.value_ = -a.value_;
  for (std::size_t i = 0; i < r.grad_.size(); ++i) r.grad_[i] = -a.grad_[i];
  for (std::size_t i = 0; i < r.hess_.size(); ++i) r.hess_[i] = -a.hess_[i];
  return r;
}

Jet2 operator*(double s, const Jet2& a) {
  Jet2 r(a.dim());
  r.value_ = s * a.value_;
  for (std::size_t i = 0; i < r.grad_.size(); ++i) r.grad_[i] = s * a.grad_[i];
  for (std::size_t i = 0; i < r.hess_.size(); ++i) r.hess_[i] = s * a.hess_[i];
  return r;
}

Jet2 operator*(const Jet2& a, const Jet2& b) {
  const int d = a.dim();
  Jet2 r(d);
  r.value_ = a.value_ * b.value_;
  for (int i = 0; i < d; ++i) r.grad_[i] = a.value_ * b.grad_[i] + b.value_ * a.grad_[i];
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      r.hess_[i * d + j] = a.value_ * b.hess_[i * d + j] + b.value_ * a.hess_[i * d + j] +
                           a.grad_[i] * b.grad_[j] + a.grad_[j] * b.grad_[i];
    }
  }
  r.mirror();
  return r;
}

Jet2 chain(const Jet2& a, double f0, double f1, double f2) {
  const int d = a.dim();
  Jet2 r(d);
  r.value_ = f0;
  for (int i = 0; i < d; ++i) r.grad_[i] = f1 * a.grad_[i];
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      r.hess_[i * d + j] = f2 * a.grad_[i] * a.grad_[j] + f1 * a.hess_[i * d + j];
    }
  }
  r.mirror();
  return r;
}

Jet2 operator/(const Jet2& a, const Jet2& b) {
  if (b.value() == 0.0) throw DomainError("division by zero");
  const double v = b.value();
  const Jet2 inv = chain(b, 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
  return a * inv;
}

Jet2 apply(Func f, const Jet2& a) {
  const double x = a.value();
  switch (f) {
    case Func::Sin: return chain(a, std::sin(x), std::cos(x), -std::sin(x));
    case Func::Cos: return chain(a, std::cos(x), -std::sin(x), -std::cos(x));
    case Func::Tan: {
      const double c = std::cos(x);
      if (c == 0.0) throw DomainError("tan at a pole");
      const double t = std::tan(x);
      const double sec2 = 1.0 / (c * c);
      return chain(a, t, sec2, 2.0 * sec2 * t);
    }
    case Func::Exp: {
      const double e = std::exp(x);
      return chain(a, e, e, e);
    }
    case Func::Ln:
      if (x <= 0.0) throw DomainError("ln of non-positive value");
      return chain(a, std::log(x), 1.0 / x, -1.0 / (x * x));
    case Func::Sqrt: {
      if (x <= 0.0) throw DomainError("sqrt of non-positive value");
      const double s = std::sqrt(x);
      return chain(a, s, 0.5 / s, -0.25 / (s * x));
    }
    case Func::Abs:
      if (x == 0.0) throw DomainError("abs is not differentiable at 0");
      return chain(a, std::abs(x), x > 0 ? 1.0 : -1.0, 0.0);
    case Func::Tanh: {
      const double t = std::tanh(x);
      const double s = 1.0 - t * t;
      return chain(a, t, s, -2.0 * t * s);
    }
  }
  throw DomainError("unknown function");
}

Jet2 pow_int(const Jet2& a, long n) {
  if (n < 0) {
    if (a.value() == 0.0) throw DomainError("negative power of zero");
    return Jet2::constant(1.0, a.dim()) / pow_int(a, -n);
  }
  Jet2 result = Jet2::constant(1.0, a.dim());
  Jet2 base = a;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

Jet1 Jet1::constant(double value, int dim) {
  Jet1 j(dim);
  j.value_ = value;
  return j;
}

Jet1& Jet1::operator+=(const Jet1& b) {
  value_ += b.value_;
  for (std::size_t i = 0; i < grad_.size(); ++i) grad_[i] += b.grad_[i];
  return *this;
}

Jet1& Jet1::operator-=(const Jet1& b) {
  value_ -= b.value_;
  for (std::size_t i = 0; i < grad_.size(); ++i) grad_[i] -= b.grad_[i];
  return *this;
}

Jet1 operator*(const Jet1& a, const Jet1& b) {
  Jet1 r(a.dim());
  r.value_ = a.value_ * b.value_;
  for (std::size_t i = 0; i < r.grad_.size(); ++i) r.grad_[i] = a.value_ * b.grad_[i] + b.value_ * a.grad_[i];
  return r;
}

Jet1 operator/(const Jet1& a, const Jet1& b) {
  if (b.value_ == 0.0) throw DomainError("division by zero");
  Jet1 r(a.dim());
  r.value_ = a.value_ / b.value_;
  for (std::size_t i = 0; i < r.grad_.size(); ++i)
    r.grad_[i] = (a.grad_[i] - r.value_ * b.grad_[i]) / b.value_;
  return r;
}

Jet1 operator-(const Jet1& a) {
  Jet1 r(a.dim());
  r.value_ = -a.value_;
  for (std::size_t i = 0; i < r.grad_.size(); ++i) r.grad_[i] = -a.grad_[i];
  return r;
}

Jet1 operator*(double s, const Jet1& a) {
  Jet1 r(a.dim());
  r.value_ = s * a.value_;
  for (std::size_t i = 0; i < r.grad_.size(); ++i) r.grad_[i] = s * a.grad_[i];
  return r;
}

Jet1 value_part(const Jet2& j) { return Jet1(j.value(), j.gradient()); }

Jet1 partial_part(const Jet2& j, int i) {
  const int d = j.dim();
  return Jet1(j.grad(i), j.hessian().subspan(static_cast<std::size_t>(i * d), static_cast<std::size_t>(d)));
}

}  // namespace accr
