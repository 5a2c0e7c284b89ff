#include "accr/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "accr/errors.hpp"
#include "accr/sampling.hpp"

namespace accr {

namespace {

std::size_t idx2(int d, int i, int j) { return static_cast<std::size_t>(i * d + j); }

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

StructureValues values_of(const PointGeometry& pg) {
  StructureValues v;
  v.dim = pg.dim;
  for (const auto& j : pg.metric) v.g.push_back(j.value());
  for (const auto& j : pg.phi) v.phi.push_back(j.value());
  for (const auto& j : pg.xi) v.xi.push_back(j.value());
  for (const auto& j : pg.eta) v.eta.push_back(j.value());
  return v;
}

// g(phi d_i, phi d_j)
double g_phi_phi(const StructureValues& v, int i, int j) {
  const int d = v.dim;
  double s = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) s += v.g[idx2(d, a, b)] * v.phi[idx2(d, a, i)] * v.phi[idx2(d, b, j)];
  return s;
}

// g(d_i, phi d_j)
double g_x_phi(const StructureValues& v, int i, int j) {
  const int d = v.dim;
  double s = 0.0;
  for (int a = 0; a < d; ++a) s += v.g[idx2(d, i, a)] * v.phi[idx2(d, a, j)];
  return s;
}

MembershipFlag flag_from(double residual, double tol) {
  return {residual <= tol ? Membership::Holds : Membership::Fails, residual};
}

SasakiConsequences sasaki_consequences_at(const AccRStructure& s, const Point& pt) {
  SasakiConsequences c;
  const int d = s.dim();
  const PointGeometry pg = compute_point_geometry(s, MetricTag::G, pt);
  const PointGeometry pgt = compute_point_geometry(s, MetricTag::GTilde, pt);
  const NablaXi nx = nabla_xi(pg);
  const NablaXi nxt = nabla_xi(pgt);
  const CurvatureAtPoint cur = curvature(pg);
  for (int a = 0; a < d; ++a) {
    for (int i = 0; i < d; ++i) {
      const double phi = pg.phi[idx2(d, a, i)].value();
      c.nabla_xi = std::max(c.nabla_xi, std::abs(nx.tensor(a, i) + phi));
      c.nabla_tilde_xi = std::max(c.nabla_tilde_xi, std::abs(nxt.tensor(a, i) + phi));
    }
  }
  // R(d_i, d_j) xi = eta_j d_i - eta_i d_j
  for (int l = 0; l < d; ++l) {
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        double r = 0.0;
        for (int k = 0; k < d; ++k) r += cur.r13(l, k, i, j) * pg.xi[k].value();
        const double expect = (l == i ? pg.eta[j].value() : 0.0) - (l == j ? pg.eta[i].value() : 0.0);
        c.curvature_xi = std::max(c.curvature_xi, std::abs(r - expect));
      }
    }
  }
  for (int i = 0; i < d; ++i) {
    double r = 0.0;
    for (int k = 0; k < d; ++k) r += cur.ricci(i, k) * pg.xi[k].value();
    c.ricci_xi = std::max(c.ricci_xi, std::abs(r - 2.0 * s.n() * pg.eta[i].value()));
  }
  return c;
}

struct FitAtPoint {
  double f = 0.0;
  std::vector<double> gamma;
  double residual = 0.0;
  double condition = 0.0;
  PointTensor nabla;
  std::vector<double> theta;
};

FitAtPoint fit_torse_forming(const PointGeometry& pg, std::span<const Jet2> field) {
  const int d = pg.dim;
  FitAtPoint out;
  out.theta.resize(static_cast<std::size_t>(d));
  double norm = 0.0;
  for (int a = 0; a < d; ++a) {
    out.theta[a] = field[a].value();
    norm = std::max(norm, std::abs(out.theta[a]));
  }
  if (norm <= 1e-12) throw ZeroPotential("potential vanishes at a sample point");
  out.nabla = covariant_derivative(pg, field);

  // Row (i, j): nabla_j theta^i = f delta^i_j + theta^i gamma_j.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(d * d, d + 1);
  Eigen::VectorXd b(d * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const int row = i * d + j;
      A(row, 0) = (i == j) ? 1.0 : 0.0;
      A(row, 1 + j) = out.theta[i];
      b(row) = out.nabla(i, j);
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd x = svd.solve(b);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  out.condition = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
  out.residual = (A * x - b).norm();
  out.f = x(0);
  out.gamma.assign(x.data() + 1, x.data() + 1 + d);
  return out;
}

}  // namespace

const char* membership_name(Membership m) {
  switch (m) {
    case Membership::Holds:
      return "holds";
    case Membership::Fails:
      return "fails";
    case Membership::Degenerate:
      return "degenerate";
  }
  return "fails";
}

double sasaki_like_residual(const PointTensor& F, const StructureValues& v) {
  const int d = v.dim;
  double worst = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        const double rhs = g_phi_phi(v, i, j) * v.eta[k] + g_phi_phi(v, i, k) * v.eta[j];
        worst = std::max(worst, std::abs(F(i, j, k) - rhs));
      }
  return worst;
}

double f5_residual(const PointTensor& F, double theta_star_xi, const StructureValues& v) {
  const int d = v.dim;
  const int n = (d - 1) / 2;
  const double coef = theta_star_xi / (2.0 * n);
  double worst = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        const double rhs = -coef * (g_x_phi(v, i, j) * v.eta[k] + g_x_phi(v, i, k) * v.eta[j]);
        worst = std::max(worst, std::abs(F(i, j, k) - rhs));
      }
  return worst;
}

MembershipFlag check_sasaki_like(const AccRStructure& s, std::span<const Point> samples, double tol,
                                 std::optional<SasakiConsequences>* consequences) {
  const std::vector<double> res = parallel_map<double>(samples.size(), [&](std::size_t i) {
    const PointGeometry pg = compute_point_geometry(s, MetricTag::G, samples[i]);
    return sasaki_like_residual(fundamental_tensor(pg).F, values_of(pg));
  });
  const MembershipFlag flag = flag_from(max_of(res), tol);
  if (consequences) {
    consequences->reset();
    if (flag.verdict == Membership::Holds) {
      const auto per = parallel_map<SasakiConsequences>(
          samples.size(), [&](std::size_t i) { return sasaki_consequences_at(s, samples[i]); });
      SasakiConsequences agg;
      for (const auto& c : per) {
        agg.nabla_xi = std::max(agg.nabla_xi, c.nabla_xi);
        agg.nabla_tilde_xi = std::max(agg.nabla_tilde_xi, c.nabla_tilde_xi);
        agg.curvature_xi = std::max(agg.curvature_xi, c.curvature_xi);
        agg.ricci_xi = std::max(agg.ricci_xi, c.ricci_xi);
      }
      *consequences = agg;
    }
  }
  return flag;
}

ClassMembership check_f5(const AccRStructure& s, std::span<const Point> samples, double tol) {
  struct PerPoint {
    double f5 = 0.0, closed = 0.0, f_norm = 0.0, omega = 0.0;
  };
  const int d = s.dim();
  const auto per = parallel_map<PerPoint>(samples.size(), [&](std::size_t i) {
    const PointGeometry pg = compute_point_geometry(s, MetricTag::G, samples[i]);
    const FundamentalTensorAtPoint ft = fundamental_tensor(pg);
    PerPoint p;
    p.f5 = f5_residual(ft.F, ft.theta_star_xi, values_of(pg));
    p.f_norm = ft.F.max_abs();
    p.omega = ft.omega.max_abs();
    // d(theta*(xi)) = xi(theta*(xi)) eta
    const PointTensor dth = exterior_derivative(pg.theta_star_xi);
    double xi_th = 0.0;
    for (int a = 0; a < d; ++a) xi_th += pg.xi[a].value() * dth(a);
    for (int a = 0; a < d; ++a) p.closed = std::max(p.closed, std::abs(dth(a) - xi_th * pg.eta[a].value()));
    return p;
  });
  ClassMembership m;
  m.samples = samples.size();
  double f5 = 0.0, closed = 0.0, f_norm = 0.0;
  for (const auto& p : per) {
    f5 = std::max(f5, p.f5);
    closed = std::max(closed, p.closed);
    f_norm = std::max(f_norm, p.f_norm);
    m.omega_max = std::max(m.omega_max, p.omega);
  }
  const bool f0 = f_norm <= 1e-12;
  m.f0 = {f0 ? Membership::Holds : Membership::Fails, f_norm};
  if (f0) {
    m.f5 = {Membership::Degenerate, f5};
    m.f5_0 = {Membership::Degenerate, std::max(f5, closed)};
  } else {
    m.f5 = flag_from(f5, tol);
    const bool both = f5 <= tol && closed <= tol;
    m.f5_0 = {both ? Membership::Holds : Membership::Fails, std::max(f5, closed)};
  }
  return m;
}

ClassMembership classify(const AccRStructure& s, std::span<const Point> samples, double tol) {
  ClassMembership m = check_f5(s, samples, tol);
  m.sasaki_like = check_sasaki_like(s, samples, tol, &m.sasaki_consequences);
  return m;
}

std::vector<std::string> Taxonomy::names() const {
  std::vector<std::string> out;
  if (torse_forming) out.emplace_back("torse-forming");
  if (torqued) out.emplace_back("torqued");
  if (concircular) out.emplace_back("concircular");
  if (concurrent) out.emplace_back("concurrent");
  if (recurrent) out.emplace_back("recurrent");
  if (parallel) out.emplace_back("parallel");
  return out;
}

TorseFormingResult torse_forming_extract(const AccRStructure& s, MetricTag tag, const Potential& potential,
                                         std::span<const Point> samples, double tol) {
  const int d = s.dim();
  struct PerPoint {
    FitAtPoint fit;
    double k = 0.0, dk_xi = 0.0, gamma_formula = 0.0, derivative_formula = 0.0;
  };
  const auto per = parallel_map<PerPoint>(samples.size(), [&](std::size_t i) {
    const Point& pt = samples[i];
    const PointGeometry pg = compute_point_geometry(s, tag, pt);
    const StructureJets sj = evaluate_jets(s, pt);
    const std::vector<Jet2> field = potential.jets(s, sj, pt);
    PerPoint p;
    p.fit = fit_torse_forming(pg, field);
    if (potential.is_vertical()) {
      const Jet2 k = potential.k().eval_jet(pt, s.bindings);
      p.k = k.value();
      for (int a = 0; a < d; ++a) p.dk_xi += k.grad(a) * pg.xi[a].value();
      for (int j = 0; j < d; ++j) {
        const double expect = (k.grad(j) - p.fit.f * pg.eta[j].value()) / p.k;
        p.gamma_formula = std::max(p.gamma_formula, std::abs(p.fit.gamma[j] - expect));
      }
      // nabla_x theta = -f phi^2 x + dk(x) xi
      for (int a = 0; a < d; ++a) {
        for (int i2 = 0; i2 < d; ++i2) {
          double phi2 = 0.0;
          for (int m = 0; m < d; ++m) phi2 += pg.phi[idx2(d, a, m)].value() * pg.phi[idx2(d, m, i2)].value();
          const double expect = -p.fit.f * phi2 + k.grad(i2) * pg.xi[a].value();
          p.derivative_formula = std::max(p.derivative_formula, std::abs(p.fit.nabla(a, i2) - expect));
        }
      }
    }
    return p;
  });

  TorseFormingResult r;
  r.tag = tag;
  r.vertical = potential.is_vertical();
  double max_gamma = 0.0, max_gamma_theta = 0.0, max_f = 0.0, max_f_minus_1 = 0.0;
  for (const auto& p : per) {
    r.f.push_back(p.fit.f);
    r.gamma.push_back(p.fit.gamma);
    r.residual_per_sample.push_back(p.fit.residual);
    r.residual = std::max(r.residual, p.fit.residual);
    r.condition = std::max(r.condition, p.fit.condition);
    double gt = 0.0;
    for (int j = 0; j < d; ++j) {
      max_gamma = std::max(max_gamma, std::abs(p.fit.gamma[j]));
      gt += p.fit.gamma[j] * p.fit.theta[j];
    }
    max_gamma_theta = std::max(max_gamma_theta, std::abs(gt));
    max_f = std::max(max_f, std::abs(p.fit.f));
    max_f_minus_1 = std::max(max_f_minus_1, std::abs(p.fit.f - 1.0));
    if (r.vertical) {
      r.k.push_back(p.k);
      r.h.push_back(p.fit.f / p.k);
      r.dk_xi.push_back(p.dk_xi);
      r.gamma_formula_residual = std::max(r.gamma_formula_residual, p.gamma_formula);
      r.derivative_formula_residual = std::max(r.derivative_formula_residual, p.derivative_formula);
      r.f_dk_residual = std::max(r.f_dk_residual, std::abs(p.fit.f - p.dk_xi));
    }
  }
  Taxonomy& t = r.taxonomy;
  t.torse_forming = r.residual <= tol;
  if (t.torse_forming) {
    t.torqued = max_gamma_theta <= tol;
    t.concircular = max_gamma <= tol;
    t.recurrent = max_f <= tol;
    t.concurrent = t.concircular && max_f_minus_1 <= tol;
    t.parallel = t.concircular && t.recurrent;
  }
  return r;
}

SolitonDecomposition decompose_soliton(const PointTensor& half_lie, const MetricAtPoint& metric) {
  const int d = half_lie.dim();
  double trace = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) trace += metric.g_inv(i, j) * half_lie(i, j);
  SolitonDecomposition out;
  out.mu = trace / d;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      out.residual = std::max(out.residual, std::abs(half_lie(i, j) - out.mu * metric.g(i, j)));
  return out;
}

SolitonSolveResult yamabe_soliton_solve(const AccRStructure& s, MetricTag tag, const Potential& potential,
                                        std::span<const Point> samples, double tol) {
  const int d = s.dim();
  const int n = s.n();
  struct PerPoint {
    double tau = 0.0, mu = 0.0, residual = 0.0, lie_expansion = 0.0;
    double lg_trace = 0.0, lg_xixi = 0.0;  // trace and (xi, xi) value of the Lg-tf form
    double k = 0.0, dk_xi = 0.0;
  };
  const bool vertical = potential.is_vertical();
  const std::optional<TorseFormingResult> torse =
      vertical ? std::optional<TorseFormingResult>(torse_forming_extract(s, tag, potential, samples, tol))
               : std::nullopt;

  const auto per = parallel_map<PerPoint>(samples.size(), [&](std::size_t i) {
    const Point& pt = samples[i];
    const PointGeometry pg = compute_point_geometry(s, tag, pt);
    const StructureJets sj = evaluate_jets(s, pt);
    const std::vector<Jet2> field = potential.jets(s, sj, pt);
    PointTensor half = lie_derivative_metric(pg, field);
    for (auto& x : half.data()) x *= 0.5;
    const MetricAtPoint metric = pg.metric_at_point();
    const SolitonDecomposition dec = decompose_soliton(half, metric);
    PerPoint p;
    p.tau = curvature(pg).scalar;
    p.mu = dec.mu;
    p.residual = dec.residual;
    if (vertical) {
      const Jet2 k = potential.k().eval_jet(pt, s.bindings);
      p.k = k.value();
      for (int a = 0; a < d; ++a) p.dk_xi += k.grad(a) * pg.xi[a].value();
      const PointTensor expanded = lie_derivative_vertical_expanded(pg, k);
      p.lie_expansion = max_abs_difference(lie_derivative_metric(pg, field), expanded);
      if (torse) {
        // 1/2 L_theta metric = 1/2 {dk (x) eta + eta (x) dk} - f metric(phi., phi.)
        const double f = torse->f[i];
        double tr = 0.0, xx = 0.0;
        for (int a = 0; a < d; ++a) {
          for (int b = 0; b < d; ++b) {
            double gpp = 0.0;
            for (int c = 0; c < d; ++c)
              for (int e = 0; e < d; ++e)
                gpp += metric.g(c, e) * pg.phi[idx2(d, c, a)].value() * pg.phi[idx2(d, e, b)].value();
            const double m = 0.5 * (k.grad(a) * pg.eta[b].value() + pg.eta[a].value() * k.grad(b)) - f * gpp;
            tr += metric.g_inv(a, b) * m;
            xx += pg.xi[a].value() * pg.xi[b].value() * m;
          }
        }
        p.lg_trace = tr;
        p.lg_xixi = xx;
      }
    }
    return p;
  });

  SolitonSolveResult r;
  r.tag = tag;
  for (const auto& p : per) {
    r.mu.push_back(p.mu);
    r.scalar_curvature.push_back(p.tau);
    r.lambda.push_back(p.tau - p.mu);
    r.residual_per_sample.push_back(p.residual);
    r.residual = std::max(r.residual, p.residual);
    r.lie_expansion_residual = std::max(r.lie_expansion_residual, p.lie_expansion);
  }
  r.soliton = !samples.empty() && r.residual <= tol;
  r.torse = torse;
  r.theorems_applicable = r.soliton && torse && torse->taxonomy.torse_forming;
  if (torse) {
    double tau_f = 0.0, trace = 0.0, xixi = 0.0;
    for (std::size_t i = 0; i < per.size(); ++i) {
      const double tau_minus_lambda = per[i].tau - r.lambda[i];
      tau_f = std::max(tau_f, std::abs(per[i].tau - torse->f[i] - r.lambda[i]));
      trace = std::max(trace, std::abs(per[i].lg_trace - (2 * n + 1) * tau_minus_lambda));
      trace = std::max(trace, std::abs(per[i].dk_xi + 2 * n * torse->f[i] - per[i].lg_trace));
      xixi = std::max(xixi, std::abs(per[i].lg_xixi - tau_minus_lambda));
      xixi = std::max(xixi, std::abs(per[i].dk_xi - per[i].lg_xixi));
    }
    r.tau_eq_f_plus_lambda = tau_f;
    r.f_eq_dk_xi = torse->f_dk_residual;
    r.trace_identity = trace;
    r.xi_xi_identity = xixi;
  }
  return r;
}

SolitonPair yamabe_soliton_pair(const AccRStructure& s, const Potential& potential, const Potential& potential_tilde,
                                std::span<const Point> samples, double tol) {
  SolitonPair out;
  out.g = yamabe_soliton_solve(s, MetricTag::G, potential, samples, tol);
  out.gtilde = yamabe_soliton_solve(s, MetricTag::GTilde, potential_tilde, samples, tol);
  if (out.g.soliton && out.gtilde.soliton && out.g.torse && out.gtilde.torse &&
      out.g.torse->taxonomy.torse_forming && out.gtilde.torse->taxonomy.torse_forming) {
    const ClassMembership m = check_f5(s, samples, tol);
    if (m.f5.verdict == Membership::Holds) {
      double worst = 0.0;
      for (std::size_t i = 0; i < samples.size(); ++i)
        worst = std::max(worst, std::abs(out.g.torse->h[i] - out.gtilde.torse->h[i]));
      out.fk_ratio_match = worst;
    }
  }
  return out;
}

NonexistenceCheck check_nonexistence(const AccRStructure& s, MetricTag tag, const Potential& potential,
                                     std::span<const Point> samples, double tol) {
  NonexistenceCheck c;
  c.sasaki_like = check_sasaki_like(s, samples, tol).verdict == Membership::Holds;
  const VerticalityCheck vc = check_vertical_potential(s, potential, samples, tol);
  c.vertical = potential.is_vertical() && vc.vertical && vc.nonvanishing;
  const SolitonSolveResult r = yamabe_soliton_solve(s, tag, potential, samples, tol);
  c.soliton = r.soliton;
  c.implication_holds = !(c.sasaki_like && c.vertical) || !c.soliton;
  if (c.vertical) {
    const int n = s.n();
    const int d = s.dim();
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const Jet2 k = potential.k().eval_jet(samples[i], s.bindings);
      const StructureValues v = evaluate(s, samples[i]);
      double dk_xi = 0.0;
      for (int a = 0; a < d; ++a) dk_xi += k.grad(a) * v.xi[a];
      c.xi_xi_gap = std::max(c.xi_xi_gap, std::abs(dk_xi - r.mu[i]));
      c.trace_gap = std::max(c.trace_gap, std::abs(dk_xi - (2 * n + 1) * r.mu[i]));
    }
  }
  return c;
}

}  // namespace accr
