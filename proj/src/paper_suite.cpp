#include "accr/paper_suite.hpp"

#include <algorithm>
#include <cmath>

#include "accr/analysis.hpp"
#include "accr/errors.hpp"
#include "accr/geometry.hpp"
#include "accr/sampling.hpp"

namespace accr {

namespace {

std::size_t idx2(int d, int i, int j) { return static_cast<std::size_t>(i * d + j); }

struct SampleData {
  double t = 0.0;
  PointGeometry pg, pgt;
  StructureValues v;
  CurvatureAtPoint cur, curt;
  FundamentalTensorAtPoint ft, ftt;
  PointTensor frame_r04, frame_ricci;
  NablaXi nx, nxt;
  ConnectionAtPoint gamma_t, ntn, f5rel;
  PointTensor f_tilde_rel;
  PointTensor lie_g, lie_gt;  // L_theta g and L_theta~ g~
  PointTensor metric_g, metric_gt;
};

class Suite {
 public:
  explicit Suite(double tol) : tol_(tol) {}

  // Verdict from the worst residual.
  void add(std::string name, std::string anchor, std::vector<double> values, const std::vector<double>& residuals) {
    double worst = 0.0;
    for (double r : residuals) worst = std::max(worst, std::isnan(r) ? INFINITY : r);
    CheckRecord c{std::move(name), std::move(anchor), worst <= tol_ ? Verdict::Pass : Verdict::Fail, worst,
                  std::move(values), {}};
    out_.push_back(std::move(c));
  }
  void add_verdict(std::string name, std::string anchor, Verdict v, double residual, std::vector<double> values,
                   std::string detail) {
    out_.push_back({std::move(name), std::move(anchor), v, residual, std::move(values), std::move(detail)});
  }
  std::vector<CheckRecord> take() { return std::move(out_); }
  double tol() const { return tol_; }

 private:
  double tol_;
  std::vector<CheckRecord> out_;
};

template <class F>
std::vector<double> per_sample(const std::vector<SampleData>& data, F&& f) {
  std::vector<double> out;
  out.reserve(data.size());
  for (const auto& s : data) out.push_back(f(s));
  return out;
}

double max_abs(const PointTensor& a) { return a.max_abs(); }

// max |R04(perm) - sign R04|
double curvature_symmetry(const PointTensor& r04, std::initializer_list<int> perm, double sign) {
  const std::vector<int> p(perm);
  return symmetry_check(r04, p, sign);
}

double bianchi(const PointTensor& r04) {
  const int d = r04.dim();
  double worst = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int w = 0; w < d; ++w)
          worst = std::max(worst, std::abs(r04(i, j, k, w) + r04(j, k, i, w) + r04(k, i, j, w)));
  return worst;
}

double phi2(const PointGeometry& pg, int a, int i) {
  const int d = pg.dim;
  double s = 0.0;
  for (int m = 0; m < d; ++m) s += pg.phi[idx2(d, a, m)].value() * pg.phi[idx2(d, m, i)].value();
  return s;
}

// Basic identities of F for the metric of pg:
// symmetry in the last two slots, and the phi-decomposition.
std::pair<double, double> f_basic_identities(const PointTensor& F, const PointGeometry& pg) {
  const int d = pg.dim;
  auto phi = [&](int a, int j) { return pg.phi[idx2(d, a, j)].value(); };
  double sym = 0.0, decomp = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        sym = std::max(sym, std::abs(F(i, j, k) - F(i, k, j)));
        double fpp = 0.0, fxz = 0.0, fyx = 0.0;
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) fpp += F(i, a, b) * phi(a, j) * phi(b, k);
        for (int a = 0; a < d; ++a) {
          fxz += F(i, a, k) * pg.xi[a].value();
          fyx += F(i, j, a) * pg.xi[a].value();
        }
        const double rhs = fpp + pg.eta[j].value() * fxz + pg.eta[k].value() * fyx;
        decomp = std::max(decomp, std::abs(F(i, j, k) - rhs));
      }
  return {sym, decomp};
}

// F(x, phi y, xi) = (nabla_x eta) y = metric(nabla_x xi, y)
double f_nabla_xi_identity(const PointTensor& F, const PointGeometry& pg, const NablaXi& nx) {
  const int d = pg.dim;
  double worst = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double lhs = 0.0;
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) lhs += F(i, a, b) * pg.phi[idx2(d, a, j)].value() * pg.xi[b].value();
      double g_nx = 0.0;
      for (int a = 0; a < d; ++a) g_nx += pg.metric[idx2(d, a, j)].value() * nx.tensor(a, i);
      worst = std::max(worst, std::abs(lhs - pg.nabla_eta[idx2(d, i, j)].value()));
      worst = std::max(worst, std::abs(lhs - g_nx));
    }
  return worst;
}

std::vector<double> flat_max(const std::vector<std::vector<double>>& v) {
  std::vector<double> out;
  for (const auto& row : v) {
    double m = 0.0;
    for (double x : row) m = std::max(m, std::abs(x));
    out.push_back(m);
  }
  return out;
}

}  // namespace

ConeConstants cone_constants_from(const ConstantBindings& bindings) {
  ConeConstants c;
  if (bindings.contains("c")) c.c = bindings.at("c");
  if (bindings.contains("ct")) c.ct = bindings.at("ct");
  if (bindings.contains("kprime")) c.kprime = bindings.at("kprime");
  return c;
}

std::vector<CheckRecord> verify_paper_suite(const AccRStructure& s, const ConeConstants& k,
                                            std::span<const Point> samples, double tol) {
  const int ti = s.chart.index_of("t");
  if (ti < 0) throw Error("the cone suite needs a coordinate named 't'");
  if (k.c == 0.0 || k.ct == 0.0) throw Error("c and ct must be nonzero: the potential k = c t would vanish");
  const int d = s.dim();
  const int n = s.n();

  const Expression k_expr(ast::binary(ast::BinaryOp::Mul, ast::number(k.c), ast::coord(ti)), s.chart.coordinates);
  const Expression kt_expr(ast::binary(ast::BinaryOp::Mul, ast::number(k.ct), ast::coord(ti)), s.chart.coordinates);
  const Potential pot = Potential::vertical(k_expr);
  const Potential pot_t = Potential::vertical(kt_expr);

  const std::vector<SampleData> data = parallel_map<SampleData>(samples.size(), [&](std::size_t i) {
    const Point& pt = samples[i];
    SampleData sd;
    sd.t = pt[static_cast<std::size_t>(ti)];
    sd.pg = compute_point_geometry(s, MetricTag::G, pt);
    sd.pgt = compute_point_geometry(s, MetricTag::GTilde, pt);
    sd.v = evaluate(s, pt);
    sd.cur = curvature(sd.pg);
    sd.curt = curvature(sd.pgt);
    sd.ft = fundamental_tensor(sd.pg);
    sd.ftt = fundamental_tensor(sd.pgt);
    const std::vector<double> frame = adapted_frame(sd.v, sd.v.g);
    sd.frame_r04 = to_frame(sd.cur.r04, frame);
    sd.frame_ricci = to_frame(sd.cur.ricci, frame);
    sd.nx = nabla_xi(sd.pg);
    sd.nxt = nabla_xi(sd.pgt);
    sd.gamma_t = christoffel(sd.pgt);
    sd.ntn = nabla_tilde_from(sd.pg);
    sd.f5rel = nabla_tilde_f5_from(sd.pg);
    sd.f_tilde_rel = f_tilde_from_f(sd.ft.F, sd.v);
    const StructureJets sj = evaluate_jets(s, pt);
    sd.lie_g = lie_derivative_metric(sd.pg, pot.jets(s, sj, pt));
    sd.lie_gt = lie_derivative_metric(sd.pgt, pot_t.jets(s, sj, pt));
    sd.metric_g = sd.pg.metric_tensor();
    sd.metric_gt = sd.pgt.metric_tensor();
    return sd;
  });

  Suite suite(tol);
  const double kp = k.kprime;

  // Structure identities.
  const ValidationReport vr = validate_structure(s, samples, tol);
  for (const auto& id : vr.identities) {
    suite.add("structure." + id.name, id.formula, id.per_sample, id.per_sample);
  }

  // Classification.
  std::optional<SasakiConsequences> sl_cons;
  const ClassMembership cm = [&] {
    ClassMembership m = check_f5(s, samples, tol);
    m.sasaki_like = check_sasaki_like(s, samples, tol, &sl_cons);
    return m;
  }();
  auto membership_check = [&](const std::string& name, const std::string& anchor, const MembershipFlag& f,
                              Membership expected) {
    suite.add_verdict(name, anchor, f.verdict == expected ? Verdict::Pass : Verdict::Fail, f.residual, {},
                      std::string("observed ") + membership_name(f.verdict) + ", expected " + membership_name(expected));
  };
  membership_check("class.F5", "F(x,y,z) = -(theta*(xi)/2n){g(x,phi y)eta(z) + g(x,phi z)eta(y)}", cm.f5,
                   Membership::Holds);
  membership_check("class.F5_0", "d(theta*(xi)) = xi(theta*(xi)) eta", cm.f5_0, Membership::Holds);
  membership_check("class.sasaki_like", "F(x,y,z) = g(phi x,phi y)eta(z) + g(phi x,phi z)eta(y)", cm.sasaki_like,
                   Membership::Fails);
  membership_check("class.F0", "F = 0", cm.f0, Membership::Fails);

  // Golden curvature numbers in the phi-adapted frame.
  const auto K = [kp](double t) { return (kp - 1.0) / (t * t); };
  suite.add("golden.R1212", "R_1212 = (k'-1)/t^2", per_sample(data, [](const SampleData& x) { return x.frame_r04(0, 1, 0, 1); }),
            per_sample(data, [&](const SampleData& x) { return std::abs(x.frame_r04(0, 1, 0, 1) - K(x.t)); }));
  suite.add("golden.R_other_components", "all other frame components of R follow from R_1212 by symmetry",
            {}, per_sample(data, [&](const SampleData& x) {
              const double Kt = K(x.t);
              double worst = 0.0;
              for_each_index(d, 4, [&](std::span<const int> I) {
                double expect = 0.0;
                const bool ab12 = (I[0] == 0 && I[1] == 1), ab21 = (I[0] == 1 && I[1] == 0);
                const bool cd12 = (I[2] == 0 && I[3] == 1), cd21 = (I[2] == 1 && I[3] == 0);
                if ((ab12 && cd12) || (ab21 && cd21)) expect = Kt;
                if ((ab12 && cd21) || (ab21 && cd12)) expect = -Kt;
                worst = std::max(worst, std::abs(x.frame_r04.at(I) - expect));
              });
              return worst;
            }));
  suite.add("golden.rho11", "rho_11 = (k'-1)/t^2", per_sample(data, [](const SampleData& x) { return x.frame_ricci(0, 0); }),
            per_sample(data, [&](const SampleData& x) { return std::abs(x.frame_ricci(0, 0) - K(x.t)); }));
  suite.add("golden.rho22", "rho_22 = -(k'-1)/t^2", per_sample(data, [](const SampleData& x) { return x.frame_ricci(1, 1); }),
            per_sample(data, [&](const SampleData& x) { return std::abs(x.frame_ricci(1, 1) + K(x.t)); }));
  suite.add("golden.rho_other_components", "rho_ij = 0 unless i = j in {1,2}", {},
            per_sample(data, [&](const SampleData& x) {
              double worst = 0.0;
              for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                  if (!(i == j && i < 2)) worst = std::max(worst, std::abs(x.frame_ricci(i, j)));
              return worst;
            }));
  suite.add("golden.tau", "tau = 2(k'-1)/t^2", per_sample(data, [](const SampleData& x) { return x.cur.scalar; }),
            per_sample(data, [&](const SampleData& x) { return std::abs(x.cur.scalar - 2.0 * K(x.t)); }));
  suite.add("golden.tau_star", "tau* = 0", per_sample(data, [](const SampleData& x) { return x.cur.scalar_star; }),
            per_sample(data, [](const SampleData& x) { return std::abs(x.cur.scalar_star); }));
  suite.add("golden.theta_star_xi", "theta*(xi) = 2/t",
            per_sample(data, [](const SampleData& x) { return x.ft.theta_star_xi; }),
            per_sample(data, [](const SampleData& x) { return std::abs(x.ft.theta_star_xi - 2.0 / x.t); }));
  suite.add("golden.theta_star_xi_times_t", "theta*(xi) t = 2",
            per_sample(data, [](const SampleData& x) { return x.ft.theta_star_xi * x.t; }),
            per_sample(data, [](const SampleData& x) { return std::abs(x.ft.theta_star_xi * x.t - 2.0); }));
  suite.add("golden.tau_tilde", "tau~ = -2/t^2", per_sample(data, [](const SampleData& x) { return x.curt.scalar; }),
            per_sample(data, [](const SampleData& x) { return std::abs(x.curt.scalar + 2.0 / (x.t * x.t)); }));
  suite.add("golden.tau_tilde_times_t2", "tau~ t^2 = -2",
            per_sample(data, [](const SampleData& x) { return x.curt.scalar * x.t * x.t; }),
            per_sample(data, [](const SampleData& x) { return std::abs(x.curt.scalar * x.t * x.t + 2.0); }));
  auto nabla_xi_closed = [&](const SampleData& x, const NablaXi& nx) {
    double worst = 0.0;
    for (int a = 0; a < d; ++a)
      for (int i = 0; i < d; ++i) worst = std::max(worst, std::abs(nx.tensor(a, i) + phi2(x.pg, a, i) / x.t));
    return worst;
  };
  suite.add("golden.nabla_xi", "nabla_x xi = -(1/t) phi^2 x", {},
            per_sample(data, [&](const SampleData& x) { return nabla_xi_closed(x, x.nx); }));
  suite.add("golden.nabla_tilde_xi", "nabla~_x xi = -(1/t) phi^2 x", {},
            per_sample(data, [&](const SampleData& x) { return nabla_xi_closed(x, x.nxt); }));
  suite.add("golden.lie_g", "L_theta g = 2c g", {}, per_sample(data, [&](const SampleData& x) {
              double worst = 0.0;
              for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                  worst = std::max(worst, std::abs(x.lie_g(i, j) - 2.0 * k.c * x.metric_g(i, j)));
              return worst;
            }));
  suite.add("golden.lie_gtilde", "L_theta~ g~ = 2c~ g~", {}, per_sample(data, [&](const SampleData& x) {
              double worst = 0.0;
              for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                  worst = std::max(worst, std::abs(x.lie_gt(i, j) - 2.0 * k.ct * x.metric_gt(i, j)));
              return worst;
            }));

  // F5 shape details.
  suite.add("F5.omega_zero", "omega = 0", per_sample(data, [](const SampleData& x) { return x.ft.omega.max_abs(); }),
            per_sample(data, [](const SampleData& x) { return x.ft.omega.max_abs(); }));
  suite.add("F5.F_xi_zero", "F(xi,y,z) = 0", {}, per_sample(data, [&](const SampleData& x) {
              double worst = 0.0;
              for (int j = 0; j < d; ++j)
                for (int l = 0; l < d; ++l) {
                  double v = 0.0;
                  for (int a = 0; a < d; ++a) v += x.pg.xi[a].value() * x.ft.F(a, j, l);
                  worst = std::max(worst, std::abs(v));
                }
              return worst;
            }));
  suite.add("F5.closed_lee_form", "d theta* = 0", {}, per_sample(data, [](const SampleData& x) {
              return max_abs(exterior_derivative(std::span<const Jet1>(x.pg.theta_star)));
            }));
  suite.add("F5.theta_star_xi_closed", "d(theta*(xi)) = xi(theta*(xi)) eta", {}, per_sample(data, [&](const SampleData& x) {
              const Jet1& th = x.pg.theta_star_xi;
              double xi_th = 0.0;
              for (int a = 0; a < d; ++a) xi_th += x.pg.xi[a].value() * th.grad(a);
              double worst = 0.0;
              for (int a = 0; a < d; ++a) worst = std::max(worst, std::abs(th.grad(a) - xi_th * x.pg.eta[a].value()));
              return worst;
            }));

  // Basic properties of F and F~.
  suite.add("F.symmetry", "F(x,y,z) = F(x,z,y)", {},
            per_sample(data, [](const SampleData& x) { return f_basic_identities(x.ft.F, x.pg).first; }));
  suite.add("F.phi_decomposition", "F(x,y,z) = F(x,phi y,phi z) + eta(y)F(x,xi,z) + eta(z)F(x,y,xi)", {},
            per_sample(data, [](const SampleData& x) { return f_basic_identities(x.ft.F, x.pg).second; }));
  suite.add("F.nabla_xi", "F(x,phi y,xi) = (nabla_x eta)y = g(nabla_x xi,y)", {},
            per_sample(data, [](const SampleData& x) { return f_nabla_xi_identity(x.ft.F, x.pg, x.nx); }));
  suite.add("Ftilde.symmetry", "F~(x,y,z) = F~(x,z,y)", {},
            per_sample(data, [](const SampleData& x) { return f_basic_identities(x.ftt.F, x.pgt).first; }));
  suite.add("Ftilde.phi_decomposition", "F~(x,y,z) = F~(x,phi y,phi z) + eta(y)F~(x,xi,z) + eta(z)F~(x,y,xi)", {},
            per_sample(data, [](const SampleData& x) { return f_basic_identities(x.ftt.F, x.pgt).second; }));
  suite.add("Ftilde.nabla_xi", "F~(x,phi y,xi) = (nabla~_x eta)y = g~(nabla~_x xi,y)", {},
            per_sample(data, [](const SampleData& x) { return f_nabla_xi_identity(x.ftt.F, x.pgt, x.nxt); }));

  // Curvature symmetries.
  for (const auto& [label, sel] : {std::pair<const char*, int>{"g", 0}, {"gtilde", 1}}) {
    auto r04 = [sel](const SampleData& x) -> const PointTensor& { return sel == 0 ? x.cur.r04 : x.curt.r04; };
    const std::string prefix = std::string("curvature.") + label + ".";
    suite.add(prefix + "antisymmetric_xy", "R(x,y,z,w) = -R(y,x,z,w)", {},
              per_sample(data, [&](const SampleData& x) { return curvature_symmetry(r04(x), {1, 0, 2, 3}, -1.0); }));
    suite.add(prefix + "antisymmetric_zw", "R(x,y,z,w) = -R(x,y,w,z)", {},
              per_sample(data, [&](const SampleData& x) { return curvature_symmetry(r04(x), {0, 1, 3, 2}, -1.0); }));
    suite.add(prefix + "pair_symmetric", "R(x,y,z,w) = R(z,w,x,y)", {},
              per_sample(data, [&](const SampleData& x) { return curvature_symmetry(r04(x), {2, 3, 0, 1}, 1.0); }));
    suite.add(prefix + "first_bianchi", "R(x,y,z,w) + R(y,z,x,w) + R(z,x,y,w) = 0", {},
              per_sample(data, [&](const SampleData& x) { return bianchi(r04(x)); }));
  }

  // Cross routes between the two Levi-Civita connections and the two fundamental tensors.
  suite.add("cross.nabla_tilde_general",
            "2g(nabla~_x y,z) = 2g(nabla_x y,z) - F(x,y,phi z) - F(y,x,phi z) + F(phi z,x,y) + ... (omega(z) = F(xi,xi,z))",
            {}, per_sample(data, [](const SampleData& x) { return max_abs_difference(x.gamma_t, x.ntn); }));
  suite.add("cross.nabla_tilde_F5", "nabla~_x y = nabla_x y - (theta*(xi)/2n){g(x,phi y) + g(phi x,phi y)} xi", {},
            per_sample(data, [](const SampleData& x) { return max_abs_difference(x.gamma_t, x.f5rel); }));
  suite.add("cross.F_tilde", "2F~(x,y,z) = F(phi y,z,x) - F(y,phi z,x) + F(phi z,y,x) - F(z,phi y,x) + ...", {},
            per_sample(data, [](const SampleData& x) { return max_abs_difference(x.ftt.F, x.f_tilde_rel); }));

  // Identities with h = theta*(xi)/2n.
  auto h_of = [n](const SampleData& x) { return x.pg.theta_star_xi.value() / (2.0 * n); };
  auto dh_of = [n](const SampleData& x, int i) { return x.pg.theta_star_xi.grad(i) / (2.0 * n); };
  auto dh_xi = [&](const SampleData& x) {
    double v = 0.0;
    for (int a = 0; a < d; ++a) v += dh_of(x, a) * x.pg.xi[a].value();
    return v;
  };
  suite.add("identity.tt_F5", "tau~ = -tau* - ((2n+1)/2n)(theta*(xi))^2 - 2 xi(theta*(xi))",
            per_sample(data, [](const SampleData& x) { return x.curt.scalar; }), per_sample(data, [&](const SampleData& x) {
              const double th = x.pg.theta_star_xi.value();
              double xi_th = 0.0;
              for (int a = 0; a < d; ++a) xi_th += x.pg.xi[a].value() * x.pg.theta_star_xi.grad(a);
              const double rhs = -x.cur.scalar_star - (2.0 * n + 1.0) / (2.0 * n) * th * th - 2.0 * xi_th;
              return std::abs(x.curt.scalar - rhs);
            }));
  suite.add("identity.tt_F5_h", "tau~ = -tau* - 2n(2n+1)h^2 - 4n dh(xi)",
            per_sample(data, [](const SampleData& x) { return x.curt.scalar; }), per_sample(data, [&](const SampleData& x) {
              const double h = h_of(x);
              const double rhs = -x.cur.scalar_star - 2.0 * n * (2.0 * n + 1.0) * h * h - 4.0 * n * dh_xi(x);
              return std::abs(x.curt.scalar - rhs);
            }));
  suite.add("identity.h", "h = 1/t", per_sample(data, h_of),
            per_sample(data, [&](const SampleData& x) { return std::abs(h_of(x) - 1.0 / x.t); }));
  suite.add("identity.R_xi", "R(x,y)xi = -{dh(x) + h^2 eta(x)}phi^2 y + {dh(y) + h^2 eta(y)}phi^2 x", {},
            per_sample(data, [&](const SampleData& x) {
              const double h = h_of(x);
              double worst = 0.0;
              for (int l = 0; l < d; ++l)
                for (int i = 0; i < d; ++i)
                  for (int j = 0; j < d; ++j) {
                    double r = 0.0;
                    for (int kk = 0; kk < d; ++kk) r += x.cur.r13(l, kk, i, j) * x.pg.xi[kk].value();
                    const double rhs = -(dh_of(x, i) + h * h * x.pg.eta[i].value()) * phi2(x.pg, l, j) +
                                       (dh_of(x, j) + h * h * x.pg.eta[j].value()) * phi2(x.pg, l, i);
                    worst = std::max(worst, std::abs(r - rhs));
                  }
              return worst;
            }));
  suite.add("identity.R_xi_y_z", "R(xi,y)z = g(phi y,phi z) grad h - dh(z)phi^2 y + h^2{eta(z)y - g(y,z)xi}", {},
            per_sample(data, [&](const SampleData& x) {
              const double h = h_of(x);
              std::vector<double> grad_h(static_cast<std::size_t>(d), 0.0);
              for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) grad_h[a] += x.pg.metric_inv[idx2(d, a, b)].value() * dh_of(x, b);
              double worst = 0.0;
              for (int l = 0; l < d; ++l)
                for (int j = 0; j < d; ++j)
                  for (int kk = 0; kk < d; ++kk) {
                    double r = 0.0;
                    for (int i = 0; i < d; ++i) r += x.pg.xi[i].value() * x.cur.r13(l, kk, i, j);
                    double gpp = 0.0;
                    for (int a = 0; a < d; ++a)
                      for (int b = 0; b < d; ++b)
                        gpp += x.pg.metric[idx2(d, a, b)].value() * x.pg.phi[idx2(d, a, j)].value() *
                               x.pg.phi[idx2(d, b, kk)].value();
                    const double rhs = gpp * grad_h[l] - dh_of(x, kk) * phi2(x.pg, l, j) +
                                       h * h *
                                           (x.pg.eta[kk].value() * (l == j ? 1.0 : 0.0) -
                                            x.pg.metric[idx2(d, j, kk)].value() * x.pg.xi[l].value());
                    worst = std::max(worst, std::abs(r - rhs));
                  }
              return worst;
            }));
  suite.add("identity.rho_y_xi", "rho(y,xi) = -(2n-1)dh(y) - {dh(xi) + 2n h^2}eta(y)", {},
            per_sample(data, [&](const SampleData& x) {
              const double h = h_of(x);
              double worst = 0.0;
              for (int j = 0; j < d; ++j) {
                double r = 0.0;
                for (int a = 0; a < d; ++a) r += x.cur.ricci(j, a) * x.pg.xi[a].value();
                const double rhs = -(2.0 * n - 1.0) * dh_of(x, j) - (dh_xi(x) + 2.0 * n * h * h) * x.pg.eta[j].value();
                worst = std::max(worst, std::abs(r - rhs));
              }
              return worst;
            }));
  suite.add("identity.rho_xi_xi", "rho(xi,xi) = -2n{dh(xi) + h^2}", {}, per_sample(data, [&](const SampleData& x) {
              const double h = h_of(x);
              double r = 0.0;
              for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) r += x.cur.ricci(a, b) * x.pg.xi[a].value() * x.pg.xi[b].value();
              return std::abs(r + 2.0 * n * (dh_xi(x) + h * h));
            }));
  suite.add("identity.F_x_y_xi", "F(x,y,xi) = -h g(x,phi y)", {}, per_sample(data, [&](const SampleData& x) {
              const double h = h_of(x);
              double worst = 0.0;
              for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                  double lhs = 0.0, gxp = 0.0;
                  for (int a = 0; a < d; ++a) {
                    lhs += x.ft.F(i, j, a) * x.pg.xi[a].value();
                    gxp += x.pg.metric[idx2(d, i, a)].value() * x.pg.phi[idx2(d, a, j)].value();
                  }
                  worst = std::max(worst, std::abs(lhs + h * gxp));
                }
              return worst;
            }));

  // Vertical potentials, torse-forming data and the two solitons.
  for (const auto& [label, p] : {std::pair<const char*, const Potential*>{"g", &pot}, {"gtilde", &pot_t}}) {
    const VerticalityCheck vc = check_vertical_potential(s, *p, samples, tol);
    suite.add_verdict(std::string("potential.") + label + ".vertical", "theta = k xi with k nowhere zero",
                      vc.vertical && vc.nonvanishing ? Verdict::Pass : Verdict::Fail, vc.off_vertical, {},
                      "min |k| = " + std::to_string(vc.min_abs_k));
  }

  const SolitonPair pair = yamabe_soliton_pair(s, pot, pot_t, samples, tol);
  struct TagInfo {
    const char* label;
    const SolitonSolveResult* res;
    double c;
    std::string f, lambda, tau, c_name, k_name;
  };
  const TagInfo infos[] = {{"g", &pair.g, k.c, "f", "lambda", "tau", "c", "k"},
                             {"gtilde", &pair.gtilde, k.ct, "f~", "lambda~", "tau~", "c~", "k~"}};
  for (const auto& info : infos) {
    const SolitonSolveResult& r = *info.res;
    const std::string pre = std::string("soliton.") + info.label + ".";
    suite.add_verdict(pre + "verdict", std::string("1/2 L_theta ") + (r.tag == MetricTag::G ? "g" : "g~") + " = (" +
                                           info.tau + " - " + info.lambda + ") " + (r.tag == MetricTag::G ? "g" : "g~"),
                      r.soliton ? Verdict::Pass : Verdict::Fail, r.residual, r.residual_per_sample,
                      r.soliton ? "soliton" : "not-soliton");
    if (r.tag == MetricTag::G) {
      std::vector<double> res;
      for (std::size_t i = 0; i < data.size(); ++i)
        res.push_back(std::abs(r.lambda[i] - (2.0 * (kp - 1.0) / (data[i].t * data[i].t) - k.c)));
      suite.add(pre + "lambda", "lambda = 2(k'-1)/t^2 - c", r.lambda, res);
    } else {
      std::vector<double> res;
      for (std::size_t i = 0; i < data.size(); ++i)
        res.push_back(std::abs(r.lambda[i] - (-2.0 / (data[i].t * data[i].t) - k.ct)));
      suite.add(pre + "lambda", "lambda~ = -2/t^2 - c~", r.lambda, res);
    }
    suite.add(pre + "lie_expansion", "L_theta = dk (x) eta + eta (x) dk + k L_xi", {}, {r.lie_expansion_residual});

    auto opt_check = [&](const std::string& name, const std::string& anchor, const std::optional<double>& v) {
      const double res = v ? *v : INFINITY;
      suite.add_verdict(name, anchor, r.theorems_applicable && res <= tol ? Verdict::Pass : Verdict::Fail, res, {},
                        r.theorems_applicable ? "" : "premise fails: no vertical torse-forming soliton");
    };
    opt_check(pre + "theorem_tau", info.tau + " = " + info.f + " + " + info.lambda, r.tau_eq_f_plus_lambda);
    opt_check(pre + "f_eq_dk_xi", info.f + " = d" + info.k_name + "(xi)", r.f_eq_dk_xi);
    opt_check(pre + "contracted",
              "d" + info.k_name + "(xi) + 2n " + info.f + " = (2n+1)(" + info.tau + " - " + info.lambda + ")",
              r.trace_identity);
    opt_check(pre + "xi_xi", "d" + info.k_name + "(xi) = " + info.tau + " - " + info.lambda, r.xi_xi_identity);

    if (!r.torse) continue;
    const TorseFormingResult& tf = *r.torse;
    const std::string tpre = std::string("torse.") + info.label + ".";
    suite.add(tpre + "fit", "nabla_x theta = f x + gamma(x) theta", tf.residual_per_sample, tf.residual_per_sample);
    std::vector<double> fres;
    for (double f : tf.f) fres.push_back(std::abs(f - info.c));
    suite.add(tpre + "f", info.f + " = " + info.c_name, tf.f, fres);
    suite.add(tpre + "gamma_zero", "gamma = 0", flat_max(tf.gamma), flat_max(tf.gamma));
    suite.add(tpre + "gamma_formula", "gamma = (1/k){dk - f eta}", {}, {tf.gamma_formula_residual});
    suite.add(tpre + "derivative_formula", "nabla_x theta = -f phi^2 x + dk(x) xi", {}, {tf.derivative_formula_residual});
    std::vector<double> hres;
    for (std::size_t i = 0; i < data.size(); ++i) hres.push_back(std::abs(tf.h[i] - 1.0 / data[i].t));
    suite.add(tpre + "h", info.f + "/" + info.k_name + " = 1/t", tf.h, hres);
    std::vector<double> kct;
    for (std::size_t i = 0; i < data.size(); ++i) kct.push_back(tf.dk_xi[i] * data[i].t - tf.k[i]);
    std::vector<double> kct_abs;
    for (double v : kct) kct_abs.push_back(std::abs(v));
    suite.add(tpre + "k_linear", "t d" + info.k_name + " = " + info.k_name + " dt  (" + info.k_name + " = " + info.c_name + " t)",
              kct, kct_abs);

    double gamma_max = 0.0;
    for (double g : flat_max(tf.gamma)) gamma_max = std::max(gamma_max, g);
    const Taxonomy& tx = tf.taxonomy;
    const bool want_concurrent = std::abs(info.c - 1.0) <= tol;
    const bool ok = tx.torse_forming && tx.torqued && tx.concircular && tx.concurrent == want_concurrent &&
                    !tx.recurrent && !tx.parallel;
    std::string names;
    for (const auto& nm : tx.names()) names += (names.empty() ? "" : ",") + nm;
    suite.add_verdict(tpre + "taxonomy",
                      want_concurrent ? "concircular and concurrent when c = 1, hence torqued"
                                      : "concircular, hence torqued",
                      ok ? Verdict::Pass : Verdict::Fail, gamma_max, {}, names);
  }
  if (pair.fk_ratio_match)
    suite.add_verdict("soliton.fk_ratio", "f/k = f~/k~", *pair.fk_ratio_match <= tol ? Verdict::Pass : Verdict::Fail,
                      *pair.fk_ratio_match, {}, {});
  else
    suite.add_verdict("soliton.fk_ratio", "f/k = f~/k~", Verdict::Fail, INFINITY, {},
                      "not applicable: needs both solitons on an F5 structure");

  // Nonexistence on Sasaki-like structures: vacuous unless the structure is Sasaki-like.
  for (const auto& [label, tag, p] :
       {std::tuple<const char*, MetricTag, const Potential*>{"g", MetricTag::G, &pot}, {"gtilde", MetricTag::GTilde, &pot_t}}) {
    const NonexistenceCheck nc = check_nonexistence(s, tag, *p, samples, tol);
    const Verdict v = !nc.implication_holds ? Verdict::Fail : (nc.sasaki_like ? Verdict::Pass : Verdict::NotApplicable);
    suite.add_verdict(std::string("nonexistence.") + label, "Sasaki-like and vertical potential imply not a soliton", v,
                      0.0, {}, nc.sasaki_like ? "active" : "vacuous: structure is not Sasaki-like");
  }
  if (sl_cons) {
    suite.add("sasaki.nabla_xi", "nabla_x xi = -phi x", {}, {sl_cons->nabla_xi});
    suite.add("sasaki.nabla_tilde_xi", "nabla~_x xi = -phi x", {}, {sl_cons->nabla_tilde_xi});
    suite.add("sasaki.curvature_xi", "R(x,y)xi = eta(y)x - eta(x)y", {}, {sl_cons->curvature_xi});
    suite.add("sasaki.ricci_xi", "rho(x,xi) = 2n eta(x)", {}, {sl_cons->ricci_xi});
  }
  suite.add_verdict("omega.convention", "omega(z) = F(xi,xi,z)",
                    cm.omega_max <= tol ? Verdict::Pass : Verdict::NotApplicable, cm.omega_max, {},
                    cm.omega_max <= tol ? "omega = 0: results do not depend on the omega convention"
                                        : "omega-convention sensitive");
  return suite.take();
}

}  // namespace accr
