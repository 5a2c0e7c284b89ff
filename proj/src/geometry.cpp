#include "accr/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "accr/errors.hpp"

namespace accr {

namespace {

using Vec = std::vector<double>;

std::size_t idx2(int d, int i, int j) { return static_cast<std::size_t>(i * d + j); }
std::size_t idx3(int d, int i, int j, int k) { return static_cast<std::size_t>((i * d + j) * d + k); }

PointTensor values_of(std::span<const Jet1> jets, int dim, std::vector<Variance> var) {
  PointTensor t(dim, std::move(var));
  for (std::size_t i = 0; i < jets.size(); ++i) t.data()[i] = jets[i].value();
  return t;
}

// Trilinear evaluation F(x, y, z) = F_ijk x^i y^j z^k.
double tri(const PointTensor& F, const Vec& x, const Vec& y, const Vec& z) {
  const int d = F.dim();
  double sum = 0.0;
  for (int i = 0; i < d; ++i) {
    if (x[i] == 0.0) continue;
    for (int j = 0; j < d; ++j) {
      if (y[j] == 0.0) continue;
      for (int k = 0; k < d; ++k) sum += F(i, j, k) * x[i] * y[j] * z[k];
    }
  }
  return sum;
}

Vec apply_phi(const StructureValues& v, const Vec& x) {
  const int d = v.dim;
  Vec out(static_cast<std::size_t>(d), 0.0);
  for (int a = 0; a < d; ++a)
    for (int j = 0; j < d; ++j) out[a] += v.phi[idx2(d, a, j)] * x[j];
  return out;
}

double form(const std::vector<double>& w, const Vec& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * x[i];
  return s;
}

double bilinear(std::span<const double> m, int d, const Vec& x, const Vec& y) {
  double s = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) s += m[idx2(d, i, j)] * x[i] * y[j];
  return s;
}

Vec unit_vector(int d, int i) {
  Vec e(static_cast<std::size_t>(d), 0.0);
  e[static_cast<std::size_t>(i)] = 1.0;
  return e;
}

StructureValues structure_values(const PointGeometry& pg) {
  StructureValues v;
  v.dim = pg.dim;
  for (const auto& j : pg.phi) v.phi.push_back(j.value());
  for (const auto& j : pg.xi) v.xi.push_back(j.value());
  for (const auto& j : pg.eta) v.eta.push_back(j.value());
  for (const auto& j : pg.metric) v.g.push_back(j.value());
  return v;
}

}  // namespace

double max_abs_difference(const ConnectionAtPoint& a, const ConnectionAtPoint& b) {
  if (a.gamma.size() != b.gamma.size()) throw DimensionMismatch("connections of different dimension");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.gamma.size(); ++i) worst = std::max(worst, std::abs(a.gamma[i] - b.gamma[i]));
  return worst;
}

PointTensor PointGeometry::metric_tensor() const { return values_of(metric, dim, {Variance::Lower, Variance::Lower}); }
PointTensor PointGeometry::metric_inverse_tensor() const {
  return values_of(metric_inv, dim, {Variance::Upper, Variance::Upper});
}
MetricAtPoint PointGeometry::metric_at_point() const {
  const PointTensor g = metric_tensor();
  return {g, metric_inverse_tensor(), signature_of(g)};
}
PointTensor PointGeometry::phi_tensor() const { return values_of(phi, dim, {Variance::Upper, Variance::Lower}); }
PointTensor PointGeometry::xi_tensor() const { return values_of(xi, dim, {Variance::Upper}); }
PointTensor PointGeometry::eta_tensor() const { return values_of(eta, dim, {Variance::Lower}); }

PointGeometry compute_point_geometry(const AccRStructure& s, MetricTag tag, std::span<const double> point) {
  s.check_point(point);
  const int d = s.dim();
  const StructureJets sj = evaluate_jets(s, point);
  const std::vector<Jet2> metric2 = metric_jets(sj, tag);

  PointGeometry pg;
  pg.dim = d;
  pg.n = s.n();
  pg.tag = tag;
  pg.point.assign(point.begin(), point.end());

  // d_m of each component, as first-order jets: dX[m][...].
  auto split = [d](const std::vector<Jet2>& src, std::vector<Jet1>& val, std::vector<Jet1>& der) {
    for (const auto& j : src) val.push_back(value_part(j));
    der.reserve(static_cast<std::size_t>(d) * src.size());
    for (int m = 0; m < d; ++m)
      for (const auto& j : src) der.push_back(partial_part(j, m));
  };
  std::vector<Jet1> dmetric, dphi, dxi, deta;
  split(metric2, pg.metric, dmetric);
  split(sj.phi, pg.phi, dphi);
  split(sj.xi, pg.xi, dxi);
  split(sj.eta, pg.eta, deta);
  const std::size_t dd = static_cast<std::size_t>(d * d);
  auto dM = [&](int m, int i, int j) -> const Jet1& { return dmetric[m * dd + idx2(d, i, j)]; };
  auto dPhi = [&](int m, int a, int j) -> const Jet1& { return dphi[m * dd + idx2(d, a, j)]; };

  // Inverse metric: value by pivoted LU, derivative d(g^-1) = -g^-1 (dg) g^-1.
  PointTensor gval(d, {Variance::Lower, Variance::Lower});
  for (std::size_t i = 0; i < dd; ++i) gval.data()[i] = pg.metric[i].value();
  const PointTensor ginv = metric_invert(gval);
  pg.metric_inv.reserve(dd);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      std::vector<double> grad(static_cast<std::size_t>(d), 0.0);
      for (int m = 0; m < d; ++m) {
        double sum = 0.0;
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) sum += ginv(i, a) * pg.metric[idx2(d, a, b)].grad(m) * ginv(b, j);
        grad[m] = -sum;
      }
      pg.metric_inv.emplace_back(ginv(i, j), grad);
    }
  }
  auto ginvJ = [&](int i, int j) -> const Jet1& { return pg.metric_inv[idx2(d, i, j)]; };

  // Gamma^k_ij = 1/2 g^kl (d_i g_jl + d_j g_il - d_l g_ij)
  pg.gamma.assign(static_cast<std::size_t>(d * d * d), Jet1(d));
  for (int k = 0; k < d; ++k) {
    for (int i = 0; i < d; ++i) {
      for (int j = i; j < d; ++j) {
        Jet1 sum(d);
        for (int l = 0; l < d; ++l) sum += ginvJ(k, l) * (dM(i, j, l) + dM(j, i, l) - dM(l, i, j));
        sum = 0.5 * sum;
        pg.gamma[idx3(d, k, j, i)] = sum;
        pg.gamma[idx3(d, k, i, j)] = std::move(sum);
      }
    }
  }
  auto G = [&](int k, int i, int j) -> const Jet1& { return pg.gamma[idx3(d, k, i, j)]; };

  pg.nabla_phi.reserve(static_cast<std::size_t>(d * d * d));
  for (int i = 0; i < d; ++i) {
    for (int a = 0; a < d; ++a) {
      for (int j = 0; j < d; ++j) {
        Jet1 v = dPhi(i, a, j);
        for (int m = 0; m < d; ++m) {
          v += G(a, i, m) * pg.phi[idx2(d, m, j)];
          v -= G(m, i, j) * pg.phi[idx2(d, a, m)];
        }
        pg.nabla_phi.push_back(std::move(v));
      }
    }
  }

  pg.F.reserve(static_cast<std::size_t>(d * d * d));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < d; ++k) {
        Jet1 v(d);
        for (int a = 0; a < d; ++a) v += pg.metric[idx2(d, a, k)] * pg.nabla_phi[idx3(d, i, a, j)];
        pg.F.push_back(std::move(v));
      }
    }
  }

  for (int a = 0; a < d; ++a) {
    for (int i = 0; i < d; ++i) {
      Jet1 v = dxi[static_cast<std::size_t>(i * d + a)];
      for (int m = 0; m < d; ++m) v += G(a, i, m) * pg.xi[m];
      pg.nabla_xi.push_back(std::move(v));
    }
  }

  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      Jet1 v = deta[static_cast<std::size_t>(i * d + j)];
      for (int m = 0; m < d; ++m) v -= G(m, i, j) * pg.eta[m];
      pg.nabla_eta.push_back(std::move(v));
    }
  }

  // theta*(z) = g^ij F(e_i, phi e_j, z)
  std::vector<Jet1> phi_inv(dd, Jet1(d));  // [i][b] = sum_j g^ij phi^b_j
  for (int i = 0; i < d; ++i)
    for (int b = 0; b < d; ++b)
      for (int j = 0; j < d; ++j) phi_inv[idx2(d, i, b)] += ginvJ(i, j) * pg.phi[idx2(d, b, j)];
  pg.theta_star.assign(static_cast<std::size_t>(d), Jet1(d));
  pg.omega.assign(static_cast<std::size_t>(d), Jet1(d));
  for (int k = 0; k < d; ++k) {
    for (int i = 0; i < d; ++i) {
      for (int b = 0; b < d; ++b) {
        pg.theta_star[k] += phi_inv[idx2(d, i, b)] * pg.F[idx3(d, i, b, k)];
        pg.omega[k] += pg.xi[i] * pg.xi[b] * pg.F[idx3(d, i, b, k)];
      }
    }
  }
  pg.theta_star_xi = Jet1(d);
  for (int k = 0; k < d; ++k) pg.theta_star_xi += pg.theta_star[k] * pg.xi[k];
  return pg;
}

ConnectionAtPoint christoffel(const PointGeometry& pg) {
  ConnectionAtPoint c;
  c.dim = pg.dim;
  c.tag = pg.tag;
  c.point = pg.point;
  for (const auto& j : pg.gamma) c.gamma.push_back(j.value());
  return c;
}

ConnectionAtPoint christoffel(const AccRStructure& s, MetricTag tag, std::span<const double> point) {
  return christoffel(compute_point_geometry(s, tag, point));
}

NablaXi nabla_xi(const PointGeometry& pg) {
  const int d = pg.dim;
  NablaXi out{values_of(pg.nabla_xi, d, {Variance::Upper, Variance::Lower}), 0.0};
  for (int i = 0; i < d; ++i) {
    double s = 0.0;
    for (int a = 0; a < d; ++a) s += pg.eta[a].value() * out.tensor(a, i);
    out.eta_residual = std::max(out.eta_residual, std::abs(s));
  }
  return out;
}

NablaXi nabla_xi(const AccRStructure& s, MetricTag tag, std::span<const double> point) {
  return nabla_xi(compute_point_geometry(s, tag, point));
}

CurvatureAtPoint curvature(const PointGeometry& pg) {
  const int d = pg.dim;
  auto G = [&](int k, int i, int j) -> const Jet1& { return pg.gamma[idx3(d, k, i, j)]; };
  CurvatureAtPoint c;
  c.r13 = PointTensor(d, {Variance::Upper, Variance::Lower, Variance::Lower, Variance::Lower});
  for (int l = 0; l < d; ++l) {
    for (int k = 0; k < d; ++k) {
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
          double r = G(l, j, k).grad(i) - G(l, i, k).grad(j);
          for (int m = 0; m < d; ++m)
            r += G(l, i, m).value() * G(m, j, k).value() - G(l, j, m).value() * G(m, i, k).value();
          c.r13(l, k, i, j) = r;
        }
      }
    }
  }
  const PointTensor g = pg.metric_tensor();
  const PointTensor ginv = pg.metric_inverse_tensor();
  c.r04 = PointTensor(d, {Variance::Lower, Variance::Lower, Variance::Lower, Variance::Lower});
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int w = 0; w < d; ++w) {
          double s = 0.0;
          for (int l = 0; l < d; ++l) s += g(l, w) * c.r13(l, k, i, j);
          c.r04(i, j, k, w) = s;
        }
  c.ricci = contract(c.r13, 0, 2);
  c.scalar = 0.0;
  c.scalar_star = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      c.scalar += ginv(i, j) * c.ricci(i, j);
      for (int s = 0; s < d; ++s) c.scalar_star += ginv(i, j) * c.ricci(i, s) * pg.phi[idx2(d, s, j)].value();
    }
  }
  return c;
}

CurvatureAtPoint curvature(const AccRStructure& s, MetricTag tag, std::span<const double> point) {
  return curvature(compute_point_geometry(s, tag, point));
}

FundamentalTensorAtPoint fundamental_tensor(const PointGeometry& pg) {
  FundamentalTensorAtPoint f;
  f.tag = pg.tag;
  f.F = values_of(pg.F, pg.dim, {Variance::Lower, Variance::Lower, Variance::Lower});
  f.theta_star = values_of(pg.theta_star, pg.dim, {Variance::Lower});
  f.omega = values_of(pg.omega, pg.dim, {Variance::Lower});
  f.theta_star_xi = pg.theta_star_xi.value();
  return f;
}

FundamentalTensorAtPoint fundamental_tensor(const AccRStructure& s, MetricTag tag, std::span<const double> point) {
  return fundamental_tensor(compute_point_geometry(s, tag, point));
}

PointTensor f_tilde_from_f(const PointTensor& F, const StructureValues& v) {
  const int d = v.dim;
  PointTensor out(d, {Variance::Lower, Variance::Lower, Variance::Lower});
  const Vec xi = v.xi;
  for (int i = 0; i < d; ++i) {
    const Vec x = unit_vector(d, i);
    const Vec px = apply_phi(v, x);
    for (int j = 0; j < d; ++j) {
      const Vec y = unit_vector(d, j);
      const Vec py = apply_phi(v, y);
      for (int k = 0; k < d; ++k) {
        const Vec z = unit_vector(d, k);
        const Vec pz = apply_phi(v, z);
        double two = tri(F, py, z, x) - tri(F, y, pz, x) + tri(F, pz, y, x) - tri(F, z, py, x);
        two += (tri(F, x, y, xi) + tri(F, py, px, xi) + tri(F, x, py, xi)) * v.eta[k];
        two += (tri(F, x, z, xi) + tri(F, pz, px, xi) + tri(F, x, pz, xi)) * v.eta[j];
        two += (tri(F, y, z, xi) + tri(F, pz, py, xi) + tri(F, z, y, xi) + tri(F, py, pz, xi)) * v.eta[i];
        out(i, j, k) = 0.5 * two;
      }
    }
  }
  return out;
}

PointTensor f_tilde_via_relation(const AccRStructure& s, std::span<const double> point) {
  const PointGeometry pg = compute_point_geometry(s, MetricTag::G, point);
  return f_tilde_from_f(fundamental_tensor(pg).F, structure_values(pg));
}

ConnectionAtPoint nabla_tilde_from(const PointGeometry& pg) {
  if (pg.tag != MetricTag::G) throw Error("nabla_tilde_from needs the geometry of g");
  const int d = pg.dim;
  const StructureValues v = structure_values(pg);
  const FundamentalTensorAtPoint ft = fundamental_tensor(pg);
  const PointTensor& F = ft.F;
  const std::vector<double> omega(ft.omega.data().begin(), ft.omega.data().end());
  const PointTensor ginv = pg.metric_inverse_tensor();
  const Vec xi = v.xi;

  ConnectionAtPoint out;
  out.dim = d;
  out.tag = MetricTag::GTilde;
  out.point = pg.point;
  out.gamma.assign(static_cast<std::size_t>(d * d * d), 0.0);
  std::vector<double> rhs(static_cast<std::size_t>(d), 0.0);
  for (int i = 0; i < d; ++i) {
    const Vec x = unit_vector(d, i);
    const Vec px = apply_phi(v, x);
    for (int j = 0; j < d; ++j) {
      const Vec y = unit_vector(d, j);
      const Vec py = apply_phi(v, y);
      for (int k = 0; k < d; ++k) {
        const Vec z = unit_vector(d, k);
        const Vec pz = apply_phi(v, z);
        double g_nabla = 0.0;  // g(nabla_x y, z)
        for (int m = 0; m < d; ++m) g_nabla += pg.gamma[idx3(d, m, i, j)].value() * v.g[idx2(d, m, k)];
        double two = 2.0 * g_nabla - tri(F, x, y, pz) - tri(F, y, x, pz) + tri(F, pz, x, y);
        two += (tri(F, y, z, xi) + tri(F, pz, py, xi) - form(omega, py) * v.eta[k]) * v.eta[i];
        two += (tri(F, x, z, xi) + tri(F, pz, px, xi) - form(omega, px) * v.eta[k]) * v.eta[j];
        two -= (tri(F, xi, x, y) - tri(F, y, x, xi) - tri(F, x, py, xi) - tri(F, x, y, xi) - tri(F, y, px, xi)) *
               v.eta[k];
        rhs[k] = two;
      }
      for (int m = 0; m < d; ++m) {
        double sum = 0.0;
        for (int k = 0; k < d; ++k) sum += ginv(m, k) * rhs[k];
        out.gamma[idx3(d, m, i, j)] = 0.5 * sum;
      }
    }
  }
  return out;
}

ConnectionAtPoint nabla_tilde_via_relation(const AccRStructure& s, std::span<const double> point) {
  return nabla_tilde_from(compute_point_geometry(s, MetricTag::G, point));
}

ConnectionAtPoint nabla_tilde_f5_from(const PointGeometry& pg) {
  if (pg.tag != MetricTag::G) throw Error("nabla_tilde_f5_from needs the geometry of g");
  const int d = pg.dim;
  const StructureValues v = structure_values(pg);
  const double coeff = pg.theta_star_xi.value() / (2.0 * pg.n);
  ConnectionAtPoint out = christoffel(pg);
  out.tag = MetricTag::GTilde;
  for (int i = 0; i < d; ++i) {
    const Vec x = unit_vector(d, i);
    const Vec px = apply_phi(v, x);
    for (int j = 0; j < d; ++j) {
      const Vec y = unit_vector(d, j);
      const Vec py = apply_phi(v, y);
      const double w = bilinear(v.g, d, x, py) + bilinear(v.g, d, px, py);
      for (int m = 0; m < d; ++m) out.gamma[idx3(d, m, i, j)] -= coeff * w * v.xi[m];
    }
  }
  return out;
}

ConnectionAtPoint nabla_tilde_f5_relation(const AccRStructure& s, std::span<const double> point) {
  return nabla_tilde_f5_from(compute_point_geometry(s, MetricTag::G, point));
}

PointTensor covariant_derivative(const PointGeometry& pg, std::span<const Jet2> field) {
  const int d = pg.dim;
  PointTensor out(d, {Variance::Upper, Variance::Lower});
  for (int a = 0; a < d; ++a) {
    for (int i = 0; i < d; ++i) {
      double v = field[a].grad(i);
      for (int m = 0; m < d; ++m) v += pg.gamma[idx3(d, a, i, m)].value() * field[m].value();
      out(a, i) = v;
    }
  }
  return out;
}

PointTensor lie_derivative_metric(const PointGeometry& pg, std::span<const Jet2> field) {
  const int d = pg.dim;
  const PointTensor nabla = covariant_derivative(pg, field);
  const PointTensor g = pg.metric_tensor();
  PointTensor out(d, {Variance::Lower, Variance::Lower});
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      double s = 0.0;
      for (int a = 0; a < d; ++a) s += g(a, j) * nabla(a, i) + g(i, a) * nabla(a, j);
      out(i, j) = s;
    }
  }
  return out;
}

PointTensor lie_derivative_metric(const AccRStructure& s, MetricTag tag, const Potential& potential,
                                  std::span<const double> point) {
  const PointGeometry pg = compute_point_geometry(s, tag, point);
  const StructureJets sj = evaluate_jets(s, point);
  const std::vector<Jet2> field = potential.jets(s, sj, point);
  return lie_derivative_metric(pg, field);
}

PointTensor lie_derivative_vertical_expanded(const PointGeometry& pg, const Jet2& k) {
  const int d = pg.dim;
  const PointTensor g = pg.metric_tensor();
  const NablaXi nx = nabla_xi(pg);
  PointTensor out(d, {Variance::Lower, Variance::Lower});
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      double sym = 0.0;
      for (int a = 0; a < d; ++a) sym += g(a, j) * nx.tensor(a, i) + g(i, a) * nx.tensor(a, j);
      out(i, j) = k.grad(i) * pg.eta[j].value() + k.grad(j) * pg.eta[i].value() + k.value() * sym;
    }
  }
  return out;
}

PointTensor lie_derivative_vertical_expanded(const AccRStructure& s, MetricTag tag, const Expression& k,
                                             std::span<const double> point) {
  const PointGeometry pg = compute_point_geometry(s, tag, point);
  return lie_derivative_vertical_expanded(pg, k.eval_jet(point, s.bindings));
}

PointTensor exterior_derivative(const Jet1& scalar) {
  const int d = scalar.dim();
  PointTensor out(d, {Variance::Lower});
  for (int i = 0; i < d; ++i) out(i) = scalar.grad(i);
  return out;
}

PointTensor exterior_derivative(std::span<const Jet1> one_form) {
  const int d = static_cast<int>(one_form.size());
  PointTensor out(d, {Variance::Lower, Variance::Lower});
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out(i, j) = one_form[j].grad(i) - one_form[i].grad(j);
  return out;
}

std::vector<double> adapted_frame(const StructureValues& v, std::span<const double> metric) {
  using C = std::complex<double>;
  const int d = v.dim;
  const int n = (d - 1) / 2;

  auto horizontal = [&](Vec x) {
    const double e = form(v.eta, x);
    for (int a = 0; a < d; ++a) x[a] -= e * v.xi[a];
    return x;
  };
  // Complex bilinear form on ker eta: G(x,y) = g(x,y) - i g(x, phi y).
  auto cform = [&](const Vec& x, const Vec& y) {
    return C(bilinear(metric, d, x, y), -bilinear(metric, d, x, apply_phi(v, y)));
  };
  // (a + ib) x = a x + b phi x
  auto scale = [&](C z, const Vec& x) {
    const Vec px = apply_phi(v, x);
    Vec out(x.size());
    for (std::size_t a = 0; a < x.size(); ++a) out[a] = z.real() * x[a] + z.imag() * px[a];
    return out;
  };

  std::vector<Vec> candidates;
  for (int i = 0; i < d; ++i) candidates.push_back(horizontal(unit_vector(d, i)));
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      Vec s = unit_vector(d, i);
      s[j] = 1.0;
      candidates.push_back(horizontal(s));
      s[j] = -1.0;
      candidates.push_back(horizontal(s));
    }

  double scale_ref = 0.0;
  for (double m : metric) scale_ref = std::max(scale_ref, std::abs(m));
  std::vector<Vec> basis;
  for (const Vec& cand : candidates) {
    if (static_cast<int>(basis.size()) == n) break;
    Vec w = cand;
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vec& e : basis) {
        const Vec proj = scale(cform(w, e), e);
        for (int a = 0; a < d; ++a) w[a] -= proj[a];
      }
    }
    const C q = cform(w, w);
    if (std::abs(q) <= 1e-8 * std::max(scale_ref, 1.0)) continue;
    basis.push_back(scale(1.0 / std::sqrt(q), w));
  }
  if (static_cast<int>(basis.size()) != n) throw SingularFrame("no phi-adapted frame found at this point");

  std::vector<double> frame(static_cast<std::size_t>(d * d), 0.0);
  for (int a = 0; a < n; ++a) {
    const Vec pe = apply_phi(v, basis[a]);
    for (int r = 0; r < d; ++r) {
      frame[idx2(d, r, a)] = basis[a][r];
      frame[idx2(d, r, a + n)] = pe[r];
    }
  }
  for (int r = 0; r < d; ++r) frame[idx2(d, r, d - 1)] = v.xi[r];
  return frame;
}

std::vector<double> adapted_frame(const AccRStructure& s, std::span<const double> point) {
  const StructureValues v = evaluate(s, point);
  return adapted_frame(v, v.g);
}

}  // namespace accr
