// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <json.hpp>
#include <string>
#include <vector>

#include "accr/analysis.hpp"
#include "accr/errors.hpp"
#include "accr/geometry.hpp"
#include "accr/manifold.hpp"
#include "accr/paper_suite.hpp"
#include "accr/sampling.hpp"
#include "support/fd_geometry.hpp"
#include "support/random_expr.hpp"

using namespace accr;

namespace {

constexpr double kTol = 1e-9;

struct Outcome {
  bool pass = true;
  std::string note;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!note.empty()) note += "; ";
      note += what;
    }
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

Expression coord_times(const AccRStructure& s, double c, int power) {
  const int ti = s.chart.index_of("t");
  ast::NodePtr t = ast::coord(ti);
  ast::NodePtr k = power == 1 ? t : ast::power(t, ast::number(power));
  return Expression(ast::binary(ast::BinaryOp::Mul, ast::number(c), k), s.chart.coordinates);
}

// 1. Golden numbers of the cone with k' = 0.
Outcome golden(const AccRStructure& cone, const std::vector<Point>& pts) {
  Outcome o;
  double worst = 0.0;
  for (const auto& p : pts) {
    const double t = p[0];
    const double K = -1.0 / (t * t);
    const CurvatureAtPoint cur = curvature(cone, MetricTag::G, p);
    const CurvatureAtPoint curt = curvature(cone, MetricTag::GTilde, p);
    const FundamentalTensorAtPoint ft = fundamental_tensor(cone, MetricTag::G, p);
    const std::vector<double> frame = adapted_frame(cone, p);
    const PointTensor R = to_frame(cur.r04, frame);
    const PointTensor rho = to_frame(cur.ricci, frame);
    const double errs[] = {std::abs(R(0, 1, 0, 1) - K),
                           std::abs(rho(0, 0) - K),
                           std::abs(rho(1, 1) + K),
                           std::abs(cur.scalar - 2 * K),
                           std::abs(cur.scalar_star),
                           std::abs(ft.theta_star_xi - 2.0 / t),
                           std::abs(curt.scalar + 2.0 / (t * t))};
    for (double e : errs) worst = std::max(worst, e);
  }
  o.require(worst <= kTol, "closed forms off by " + fmt(worst));
  o.note = o.note.empty() ? "max error " + fmt(worst) : o.note;
  return o;
}

// 2 and 3. Solitons and taxonomy for theta = c t xi.
Outcome solitons(const AccRStructure& cone, const std::vector<Point>& pts) {
  Outcome o;
  double worst = 0.0;
  for (double c : {0.5, 1.0, 2.0}) {
    const Potential pot = Potential::vertical(coord_times(cone, c, 1));
    for (MetricTag tag : {MetricTag::G, MetricTag::GTilde}) {
      const SolitonSolveResult r = yamabe_soliton_solve(cone, tag, pot, pts, kTol);
      o.require(r.soliton, std::string("not a soliton for ") + metric_tag_name(tag) + " c=" + fmt(c));
      worst = std::max(worst, r.residual);
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const double t = pts[i][0];
        const double expect = tag == MetricTag::G ? 2.0 * (0.0 - 1.0) / (t * t) - c : -2.0 / (t * t) - c;
        worst = std::max(worst, std::abs(r.lambda[i] - expect));
      }
      o.require(r.theorems_applicable && r.tau_eq_f_plus_lambda.has_value(), "theorem check missing");
      if (r.tau_eq_f_plus_lambda) worst = std::max(worst, *r.tau_eq_f_plus_lambda);
    }
  }
  o.require(worst <= kTol, "residual " + fmt(worst));
  if (o.pass) o.note = "max residual " + fmt(worst);
  return o;
}

Outcome taxonomy(const AccRStructure& cone, const std::vector<Point>& pts) {
  Outcome o;
  double worst_f = 0.0, worst_gamma = 0.0;
  for (double c : {0.5, 1.0, 2.0}) {
    for (MetricTag tag : {MetricTag::G, MetricTag::GTilde}) {
      const TorseFormingResult r =
          torse_forming_extract(cone, tag, Potential::vertical(coord_times(cone, c, 1)), pts, kTol);
      for (double f : r.f) worst_f = std::max(worst_f, std::abs(f - c));
      for (const auto& g : r.gamma)
        for (double x : g) worst_gamma = std::max(worst_gamma, std::abs(x));
      const Taxonomy& t = r.taxonomy;
      o.require(t.torse_forming && t.torqued && t.concircular, "missing flags for c=" + fmt(c));
      o.require(t.concurrent == (c == 1.0), "concurrent flag wrong for c=" + fmt(c));
      o.require(!t.recurrent && !t.parallel, "spurious recurrent/parallel flag");
    }
  }
  o.require(worst_f <= kTol, "f off by " + fmt(worst_f));
  o.require(worst_gamma <= 1e-10, "gamma norm " + fmt(worst_gamma));
  if (o.pass) o.note = "|f - c| " + fmt(worst_f) + ", |gamma| " + fmt(worst_gamma);
  return o;
}

// 4. Cross-route equalities.
Outcome cross_routes(const AccRStructure& cone, const std::vector<Point>& pts) {
  Outcome o;
  double ntn = 0.0, ftf = 0.0, f5 = 0.0;
  for (const auto& p : pts) {
    const ConnectionAtPoint direct = christoffel(cone, MetricTag::GTilde, p);
    ntn = std::max(ntn, max_abs_difference(direct, nabla_tilde_via_relation(cone, p)));
    f5 = std::max(f5, max_abs_difference(direct, nabla_tilde_f5_relation(cone, p)));
    ftf = std::max(ftf, max_abs_difference(fundamental_tensor(cone, MetricTag::GTilde, p).F, f_tilde_via_relation(cone, p)));
  }
  o.require(ntn <= kTol, "connection relation " + fmt(ntn));
  o.require(ftf <= kTol, "F~ relation " + fmt(ftf));
  o.require(f5 <= kTol, "F5 connection relation " + fmt(f5));
  if (o.pass) o.note = "max " + fmt(std::max({ntn, ftf, f5}));
  return o;
}

// 5. Identity suites, read off the cone report.
Outcome identities(const AccRStructure& cone, const std::vector<Point>& pts) {
  Outcome o;
  const std::vector<CheckRecord> records = verify_paper_suite(cone, ConeConstants{}, pts, kTol);
  const char* prefixes[] = {"structure.", "F.", "Ftilde.", "curvature.", "identity.", "F5.theta_star_xi_closed"};
  int used = 0;
  double worst = 0.0;
  for (const auto& r : records) {
    const bool selected = std::any_of(std::begin(prefixes), std::end(prefixes),
                                      [&](const char* p) { return r.name.rfind(p, 0) == 0; });
    if (!selected) continue;
    ++used;
    worst = std::max(worst, r.residual);
    o.require(r.verdict == Verdict::Pass, r.name + " residual " + fmt(r.residual));
  }
  o.require(used >= 30, "expected at least 30 identity records, got " + std::to_string(used));
  if (o.pass) o.note = std::to_string(used) + " identities, max residual " + fmt(worst);
  return o;
}

// 6. Automatic differentiation against finite differences.
Outcome oracles(const AccRStructure& cone) {
  Outcome o;
  double worst_gamma = 0.0;
  const AccRStructure generic = load_manifold_file(ACCR_TEST_DATA "/generic_accr.json");
  for (const AccRStructure* s : {&cone, &generic}) {
    const std::vector<Point> pts = latin_hypercube(s->chart, 32, 7);
    for (const auto& p : pts)
      for (MetricTag tag : {MetricTag::G, MetricTag::GTilde}) {
        const ConnectionAtPoint ad = christoffel(*s, tag, p);
        const std::vector<double> fd = testing::christoffel_fd(*s, tag, p, 1e-5);
        for (std::size_t i = 0; i < fd.size(); ++i)
          worst_gamma = std::max(worst_gamma, std::abs(ad.gamma[i] - fd[i]) / std::max(1.0, std::abs(fd[i])));
      }
  }
  testing::RandomExpr gen(20240607);
  int accepted = 0, attempts = 0;
  double worst_jet = 0.0;
  while (accepted < 1000 && attempts < 200000) {
    ++attempts;
    const Expression e = gen.expression(1 + attempts % 6);
    const std::vector<double> p = gen.point();
    if (!testing::well_conditioned(e, p)) continue;
    testing::FdResult fd;
    try {
      fd = testing::finite_difference(e, p, 1e-5);
    } catch (const Error&) {
      continue;
    }
    ++accepted;
    worst_jet = std::max(worst_jet, testing::jet_vs_fd(e.eval_jet(p, {}), fd));
  }
  o.require(accepted == 1000, "only " + std::to_string(accepted) + " usable random expressions");
  o.require(worst_gamma <= 1e-5, "Christoffel vs FD " + fmt(worst_gamma));
  o.require(worst_jet <= 1e-5, "jets vs FD " + fmt(worst_jet));
  if (o.pass) o.note = "Christoffel rel " + fmt(worst_gamma) + ", jets rel " + fmt(worst_jet) + " over 1000 expressions";
  return o;
}

// 7. Classification of both builtins.
Outcome classification(const AccRStructure& cone, const std::vector<Point>& pts) {
  Outcome o;
  const ClassMembership c = classify(cone, pts, kTol);
  o.require(c.f5.verdict == Membership::Holds, "cone F5 not holding");
  o.require(c.f5_0.verdict == Membership::Holds, "cone F5_0 not holding");
  o.require(c.sasaki_like.verdict == Membership::Fails, "cone Sasaki-like not failing");
  o.require(c.f0.verdict == Membership::Fails, "cone F0 not failing");

  const AccRStructure flat = builtin("flat-cosymplectic");
  const std::vector<Point> fpts = latin_hypercube(flat.chart, 64, 42);
  const ClassMembership f = classify(flat, fpts, kTol);
  o.require(f.f0.verdict == Membership::Holds, "flat F0 not holding");
  o.require(f.f5.verdict == Membership::Degenerate, "flat F5 not degenerate");
  double worst = 0.0;
  for (const auto& p : fpts)
    for (MetricTag tag : {MetricTag::G, MetricTag::GTilde}) {
      const CurvatureAtPoint cur = curvature(flat, tag, p);
      worst = std::max({worst, cur.r04.max_abs(), cur.ricci.max_abs(), std::abs(cur.scalar), std::abs(cur.scalar_star)});
      worst = std::max(worst, fundamental_tensor(flat, tag, p).F.max_abs());
    }
  o.require(worst <= 1e-12, "flat curvature/F " + fmt(worst));
  if (o.pass) o.note = "flat max |R|,|F| " + fmt(worst);
  return o;
}

// 8. Negative controls.
Outcome negatives(const AccRStructure& cone, const std::vector<Point>& pts) {
  Outcome o;
  const SolitonSolveResult r =
      yamabe_soliton_solve(cone, MetricTag::G, Potential::vertical(coord_times(cone, 1.0, 2)), pts, kTol);
  o.require(!r.soliton, "k = t^2 accepted as a soliton");

  auto j = nlohmann::json::parse(builtin_source("cone-flat-fiber"));
  j["phi"][1][2] = "-1.01";
  const AccRStructure bent = load_manifold(j.dump());
  const ValidationReport vr = validate_structure(bent, pts, kTol);
  o.require(!vr.pass, "perturbed phi passes validation");

  const std::vector<std::string>& cs = cone.chart.coordinates;
  const Potential field = Potential::field({Expression::parse("1", cs, {}), Expression::parse("1", cs, {}),
                                            Expression::parse("0", cs, {})});
  const VerticalityCheck vc = check_vertical_potential(cone, field, pts, kTol);
  o.require(!vc.vertical, "d/du + d/dt accepted as vertical");

  const NonexistenceCheck nc = check_nonexistence(cone, MetricTag::G, Potential::vertical(coord_times(cone, 1.0, 1)), pts, kTol);
  o.require(nc.implication_holds, "nonexistence implication violated");
  if (o.pass)
    o.note = "soliton residual " + fmt(r.residual) + ", phi^2 residual " + fmt(vr.get("phi_squared").max) +
             ", off-vertical " + fmt(vc.off_vertical);
  return o;
}

}  // namespace

int main() {
  const AccRStructure cone = builtin("cone-flat-fiber");
  const std::vector<Point> pts = latin_hypercube(cone.chart, 64, 42);

  struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "golden numbers of the cone", [&] { return golden(cone, pts); }},
      {2, "soliton reproduction for g and g~", [&] { return solitons(cone, pts); }},
      {3, "torse-forming taxonomy", [&] { return taxonomy(cone, pts); }},
      {4, "cross-route equalities", [&] { return cross_routes(cone, pts); }},
      {5, "identity suites", [&] { return identities(cone, pts); }},
      {6, "AD vs finite differences", [&] { return oracles(cone); }},
      {7, "classification", [&] { return classification(cone, pts); }},
      {8, "negative controls", [&] { return negatives(cone, pts); }},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %d: %s (%s)\n", o.pass ? "PASS" : "FAIL", c.id, c.title, o.note.c_str());
  }
  return failures == 0 ? 0 : 1;
}
