#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "accr/errors.hpp"
#include "accr/expr.hpp"

namespace accr::testing {

// Random expression trees over the coordinates x, y, z for property tests.
class RandomExpr {
 public:
  explicit RandomExpr(std::uint64_t seed) : rng_(seed) {}

  ast::NodePtr tree(int depth) {
    if (depth <= 0 || pick(4) == 0) return leaf();
    switch (pick(9)) {
      case 0:
        return ast::neg(tree(depth - 1));
      case 1:
        return ast::binary(ast::BinaryOp::Add, tree(depth - 1), tree(depth - 1));
      case 2:
        return ast::binary(ast::BinaryOp::Sub, tree(depth - 1), tree(depth - 1));
      case 3:
      case 4:
        return ast::binary(ast::BinaryOp::Mul, tree(depth - 1), tree(depth - 1));
      case 5:
        return ast::binary(ast::BinaryOp::Div, tree(depth - 1), tree(depth - 1));
      case 6: {
        // Integer exponents, occasionally a fractional one (needs a positive base).
        ast::NodePtr e = pick(4) == 0 ? ast::number(0.5 * (1 + pick(3))) : ast::number(pick(4));
        return ast::power(tree(depth - 1), e);
      }
      default: {
        static constexpr Func funcs[] = {Func::Sin, Func::Cos, Func::Tan,  Func::Exp,
                                         Func::Ln,  Func::Sqrt, Func::Abs, Func::Tanh};
        return ast::call(funcs[pick(8)], tree(depth - 1));
      }
    }
  }

  Expression expression(int depth) { return Expression(tree(depth), coords()); }

  std::vector<double> point(double lo = -1.5, double hi = 1.5) {
    std::uniform_real_distribution<double> u(lo, hi);
    return {u(rng_), u(rng_), u(rng_)};
  }

  static std::vector<std::string> coords() { return {"x", "y", "z"}; }

 private:
  ast::NodePtr leaf() {
    if (pick(2) == 0) return ast::coord(pick(3));
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    return ast::number(std::round(u(rng_) * 100.0) / 100.0);
  }
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  std::mt19937_64 rng_;
};

struct FdResult {
  double value = 0.0;
  std::vector<double> grad;
  std::vector<double> hess;
};

// Fourth-order central differences: step h for the gradient, 10h for the
// Hessian. Throws whatever the evaluator throws (domain errors included).
inline FdResult finite_difference(const Expression& e, std::vector<double> p, double h) {
  const ConstantBindings none;
  const int d = static_cast<int>(p.size());
  FdResult r;
  r.value = e.eval(p, none);
  auto at = [&](int i, double di, int j, double dj) {
    std::vector<double> q = p;
    q[i] += di;
    q[j] += dj;
    return e.eval(q, none);
  };
  r.grad.resize(d);
  for (int i = 0; i < d; ++i)
    r.grad[i] = (-at(i, 2 * h, i, 0.0) + 8 * at(i, h, i, 0.0) - 8 * at(i, -h, i, 0.0) + at(i, -2 * h, i, 0.0)) / (12 * h);
  const double H = 10 * h;
  auto mixed = [&](int i, int j, double s) {
    return (at(i, s, j, s) - at(i, s, j, -s) - at(i, -s, j, s) + at(i, -s, j, -s)) / (4 * s * s);
  };
  r.hess.resize(d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (i == j) {
        r.hess[i * d + i] = (-at(i, 2 * H, i, 0.0) + 16 * at(i, H, i, 0.0) - 30 * r.value + 16 * at(i, -H, i, 0.0) -
                             at(i, -2 * H, i, 0.0)) /
                            (12 * H * H);
      } else {
        r.hess[i * d + j] = (4 * mixed(i, j, H) - mixed(i, j, 2 * H)) / 3;
      }
    }
  return r;
}

// Worst |a - b| / max(1, scale) over jet and finite-difference derivatives.
inline double jet_vs_fd(const Jet2& j, const FdResult& fd) {
  const int d = j.dim();
  double scale = std::max(1.0, std::abs(fd.value));
  for (double g : fd.grad) scale = std::max(scale, std::abs(g));
  for (double h : fd.hess) scale = std::max(scale, std::abs(h));
  double worst = std::abs(j.value() - fd.value);
  for (int i = 0; i < d; ++i) worst = std::max(worst, std::abs(j.grad(i) - fd.grad[i]));
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) worst = std::max(worst, std::abs(j.hess(i, k) - fd.hess[i * d + k]));
  return worst / scale;
}

// True when the expression is smooth and moderate around p, so that finite
// differences are a meaningful oracle there.
inline bool well_conditioned(const Expression& e, const std::vector<double>& p) {
  try {
    const Jet2 j = e.eval_jet(p, {});
    if (!std::isfinite(j.value()) || std::abs(j.value()) > 1e3) return false;
    for (double g : j.gradient())
      if (!std::isfinite(g) || std::abs(g) > 1e3) return false;
    for (double h : j.hessian())
      if (!std::isfinite(h) || std::abs(h) > 1e3) return false;
    // Stay clear of kinks and poles: the function must be defined on a small box.
    for (int i = 0; i < 3; ++i)
      for (double s : {-2e-3, 2e-3}) {
        std::vector<double> q = p;
        q[i] += s;
        const Jet2 jq = e.eval_jet(q, {});
        double scale = 1.0;
        for (double h : j.hessian()) scale = std::max(scale, std::abs(h));
        for (int k = 0; k < 3; ++k) {
          const double predicted = j.grad(k) + j.hess(k, i) * s;
          if (std::abs(jq.grad(k) - predicted) > 1e-3 * scale) return false;
        }
      }
  } catch (const Error&) {
    return false;
  }
  return true;
}

}  // namespace accr::testing
