#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "accr/errors.hpp"
#include "accr/geometry.hpp"
#include "accr/manifold.hpp"
#include "accr/sampling.hpp"
#include "support/fd_geometry.hpp"

using namespace accr;

namespace {

AccRStructure generic() { return load_manifold_file(ACCR_TEST_DATA "/generic_accr.json"); }

Expression parse(const AccRStructure& s, const char* text) {
  return Expression::parse(text, s.chart.coordinates, s.chart.constants);
}

// R^l_kij = d_i G^l_jk - d_j G^l_ik + G^l_im G^m_jk - G^l_jm G^m_ik from
// finite differences of finite-difference Christoffel symbols.
std::vector<double> riemann_fd(const AccRStructure& s, MetricTag tag, const Point& p, double h = 1e-3) {
  const int d = s.dim();
  auto G = [&](const std::vector<double>& g, int k, int i, int j) { return g[(k * d + i) * d + j]; };
  const auto g0 = accr::testing::christoffel_fd(s, tag, p);
  std::vector<std::vector<double>> dG(d);
  for (int m = 0; m < d; ++m) {
    Point a = p, b = p;
    a[m] += h;
    b[m] -= h;
    const auto ga = accr::testing::christoffel_fd(s, tag, a), gb = accr::testing::christoffel_fd(s, tag, b);
    dG[m].resize(ga.size());
    for (std::size_t q = 0; q < ga.size(); ++q) dG[m][q] = (ga[q] - gb[q]) / (2 * h);
  }
  std::vector<double> r(static_cast<std::size_t>(d * d * d * d), 0.0);
  for (int l = 0; l < d; ++l)
    for (int k = 0; k < d; ++k)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          double v = G(dG[i], l, j, k) - G(dG[j], l, i, k);
          for (int m = 0; m < d; ++m) v += G(g0, l, i, m) * G(g0, m, j, k) - G(g0, l, j, m) * G(g0, m, i, k);
          r[((l * d + k) * d + i) * d + j] = v;
        }
  return r;
}

// (L_theta metric)_ij = theta^m d_m metric_ij + metric_mj d_i theta^m + metric_im d_j theta^m.
std::vector<double> lie_coordinate_formula(const AccRStructure& s, MetricTag tag, const std::vector<Expression>& theta,
                                           const Point& p) {
  const int d = s.dim();
  const auto mj = metric_jets(evaluate_jets(s, p), tag);
  std::vector<Jet2> th;
  for (const auto& e : theta) th.push_back(e.eval_jet(p, s.bindings));
  std::vector<double> out(static_cast<std::size_t>(d * d), 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double v = 0.0;
      for (int m = 0; m < d; ++m)
        v += th[m].value() * mj[i * d + j].grad(m) + mj[m * d + j].value() * th[m].grad(i) +
             mj[i * d + m].value() * th[m].grad(j);
      out[i * d + j] = v;
    }
  return out;
}

}  // namespace

TEST(Christoffel, ConeClosedForm) {
  const AccRStructure s = builtin("cone-flat-fiber");
  const Point p{2.0, 0.3, -0.4};
  const ConnectionAtPoint c = christoffel(s, MetricTag::G, p);
  // g = dt^2 + t^2 (du^2 - dv^2)
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double expected = 0.0;
        if (k == 0 && i == 1 && j == 1) expected = -2.0;
        if (k == 0 && i == 2 && j == 2) expected = 2.0;
        if ((k == 1 || k == 2) && ((i == 0 && j == k) || (j == 0 && i == k))) expected = 0.5;
        EXPECT_NEAR(c(k, i, j), expected, 1e-15) << k << i << j;
      }
}

TEST(Christoffel, MatchesFiniteDifferenceOracle) {
  for (const AccRStructure& s : {builtin("cone-flat-fiber"), generic()}) {
    for (MetricTag tag : {MetricTag::G, MetricTag::GTilde}) {
      for (const Point& p : latin_hypercube(s.chart, 8, 3)) {
        const ConnectionAtPoint c = christoffel(s, tag, p);
        const auto fd = accr::testing::christoffel_fd(s, tag, p);
        double scale = 1.0;
        for (double x : fd) scale = std::max(scale, std::abs(x));
        for (std::size_t q = 0; q < fd.size(); ++q) EXPECT_NEAR(c.gamma[q], fd[q], 1e-8 * scale) << s.name;
      }
    }
  }
}

TEST(Christoffel, TorsionFree) {
  const AccRStructure s = generic();
  const Point p{1.1, -0.2, 0.7};
  for (MetricTag tag : {MetricTag::G, MetricTag::GTilde}) {
    const ConnectionAtPoint c = christoffel(s, tag, p);
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) EXPECT_NEAR(c(k, i, j), c(k, j, i), 1e-15);
  }
}

TEST(Curvature, MatchesFiniteDifferenceOracle) {
  for (const AccRStructure& s : {builtin("cone-flat-fiber"), generic()}) {
    for (MetricTag tag : {MetricTag::G, MetricTag::GTilde}) {
      for (const Point& p : latin_hypercube(s.chart, 3, 5)) {
        const CurvatureAtPoint r = curvature(s, tag, p);
        const auto fd = riemann_fd(s, tag, p);
        double scale = 1.0;
        for (double x : fd) scale = std::max(scale, std::abs(x));
        for (std::size_t q = 0; q < fd.size(); ++q) EXPECT_NEAR(r.r13.data()[q], fd[q], 1e-5 * scale) << s.name;
      }
    }
  }
}

TEST(Curvature, ConeSectionalCurvatureOfFiber) {
  // Over a flat fiber the cone dt^2 + t^2 h has R(d_u, d_v, d_v, d_u) = -g_uu g_vv / t^2.
  const AccRStructure s = builtin("cone-flat-fiber");
  for (double t : {0.7, 2.0, 4.5}) {
    const Point p{t, 0.1, 0.2};
    const CurvatureAtPoint r = curvature(s, MetricTag::G, p);
    EXPECT_NEAR(r.r04(1, 2, 2, 1), t * t, 1e-12 * t * t);
    EXPECT_NEAR(r.r04(1, 2, 1, 2), -t * t, 1e-12 * t * t);
    EXPECT_NEAR(r.r04(0, 1, 1, 0), 0.0, 1e-13);
    EXPECT_NEAR(r.r04(0, 2, 2, 0), 0.0, 1e-13);
  }
}

TEST(Curvature, RicciAndScalarAreContractions) {
  const AccRStructure s = generic();
  const Point p{1.4, 0.3, -0.5};
  for (MetricTag tag : {MetricTag::G, MetricTag::GTilde}) {
    const PointGeometry pg = compute_point_geometry(s, tag, p);
    const CurvatureAtPoint r = curvature(pg);
    const PointTensor gi = pg.metric_inverse_tensor();
    const PointTensor phi = pg.phi_tensor();
    double tau = 0.0, tau_star = 0.0;
    for (int y = 0; y < 3; ++y)
      for (int z = 0; z < 3; ++z) {
        double rho = 0.0;
        for (int l = 0; l < 3; ++l) rho += r.r13(l, y, l, z);
        EXPECT_NEAR(r.ricci(y, z), rho, 1e-12);
        EXPECT_NEAR(r.ricci(y, z), r.ricci(z, y), 1e-11);
        tau += gi(y, z) * rho;
        for (int q = 0; q < 3; ++q) tau_star += gi(y, q) * r.ricci(y, z) * phi(z, q);
      }
    EXPECT_NEAR(r.scalar, tau, 1e-11);
    EXPECT_NEAR(r.scalar_star, tau_star, 1e-11);
  }
}

TEST(Curvature, AlgebraicSymmetries) {
  const AccRStructure s = generic();
  const Point p{0.9, -0.6, 0.4};
  for (MetricTag tag : {MetricTag::G, MetricTag::GTilde}) {
    const PointTensor& R = curvature(s, tag, p).r04;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          for (int w = 0; w < 3; ++w) {
            EXPECT_NEAR(R(i, j, k, w), -R(j, i, k, w), 1e-11);
            EXPECT_NEAR(R(i, j, k, w), -R(i, j, w, k), 1e-11);
            EXPECT_NEAR(R(i, j, k, w), R(k, w, i, j), 1e-11);
            EXPECT_NEAR(R(i, j, k, w) + R(j, k, i, w) + R(k, i, j, w), 0.0, 1e-11);
          }
  }
}

TEST(Curvature, FlatCosymplecticIsFlat) {
  const AccRStructure s = builtin("flat-cosymplectic");
  const Point p{0.1, 0.2, -0.3};
  for (MetricTag tag : {MetricTag::G, MetricTag::GTilde}) {
    const CurvatureAtPoint r = curvature(s, tag, p);
    EXPECT_EQ(r.r13.max_abs(), 0.0);
    EXPECT_EQ(r.scalar, 0.0);
    EXPECT_EQ(fundamental_tensor(s, tag, p).F.max_abs(), 0.0);
  }
}

TEST(NablaXi, ConeClosedForm) {
  const AccRStructure s = builtin("cone-flat-fiber");
  const Point p{2.5, 0.0, 0.0};
  const NablaXi nx = nabla_xi(s, MetricTag::G, p);
  EXPECT_NEAR(nx.tensor(1, 1), 0.4, 1e-15);
  EXPECT_NEAR(nx.tensor(2, 2), 0.4, 1e-15);
  EXPECT_NEAR(nx.tensor(0, 0), 0.0, 1e-15);
  EXPECT_NEAR(nx.tensor(1, 2), 0.0, 1e-15);
  EXPECT_LT(nx.eta_residual, 1e-15);
}

TEST(FundamentalTensor, DefinitionAgainstChristoffel) {
  // F_ijk = metric((nabla_i phi) d_j, d_k) with (nabla_i phi)^a_j = d_i phi^a_j + G^a_im phi^m_j - phi^a_m G^m_ij.
  const AccRStructure s = generic();
  const Point p{1.3, 0.2, 0.6};
  for (MetricTag tag : {MetricTag::G, MetricTag::GTilde}) {
    const auto fd = accr::testing::christoffel_fd(s, tag, p);
    const auto G = [&](int k, int i, int j) { return fd[(k * 3 + i) * 3 + j]; };
    const auto m = accr::testing::metric_values(s, tag, p);
    const StructureJets sj = evaluate_jets(s, p);
    const FundamentalTensorAtPoint ft = fundamental_tensor(s, tag, p);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
          double f = 0.0;
          for (int a = 0; a < 3; ++a) {
            double nphi = sj.phi[a * 3 + j].grad(i);
            for (int q = 0; q < 3; ++q) nphi += G(a, i, q) * sj.phi[q * 3 + j].value() - sj.phi[a * 3 + q].value() * G(q, i, j);
            f += m[a * 3 + k] * nphi;
          }
          EXPECT_NEAR(ft.F(i, j, k), f, 1e-8);
        }
  }
}

TEST(FundamentalTensor, GenericFixtureHasNonzeroOmega) {
  const AccRStructure s = generic();
  const FundamentalTensorAtPoint ft = fundamental_tensor(s, MetricTag::G, Point{1.5, 0.5, 0.5});
  EXPECT_GT(ft.omega.max_abs(), 1e-3);
  for (int z = 0; z < 3; ++z) EXPECT_NEAR(ft.omega(z), ft.F(0, 0, z), 1e-15);
}

TEST(CrossRoutes, NablaTildeAndFTildeOnGenericFixture) {
  const AccRStructure s = generic();
  for (const Point& p : latin_hypercube(s.chart, 16, 9)) {
    const ConnectionAtPoint direct = christoffel(s, MetricTag::GTilde, p);
    EXPECT_LT(max_abs_difference(direct, nabla_tilde_via_relation(s, p)), 1e-11);
    const PointTensor ft = fundamental_tensor(s, MetricTag::GTilde, p).F;
    EXPECT_LT(max_abs_difference(ft, f_tilde_via_relation(s, p)), 1e-11);
  }
}

TEST(CrossRoutes, F5RelationOnCone) {
  const AccRStructure s = builtin("cone-flat-fiber");
  for (const Point& p : latin_hypercube(s.chart, 16, 9)) {
    const ConnectionAtPoint direct = christoffel(s, MetricTag::GTilde, p);
    EXPECT_LT(max_abs_difference(direct, nabla_tilde_f5_relation(s, p)), 1e-12);
  }
}

TEST(CrossRoutes, F5RelationDoesNotHoldOnGenericFixture) {
  const AccRStructure s = generic();
  const Point p{1.5, 0.5, 0.5};
  EXPECT_GT(max_abs_difference(christoffel(s, MetricTag::GTilde, p), nabla_tilde_f5_relation(s, p)), 1e-3);
}

TEST(AdaptedFrame, GivesCanonicalMetric) {
  for (const AccRStructure& s : {builtin("cone-flat-fiber"), generic()}) {
    for (const Point& p : latin_hypercube(s.chart, 8, 1)) {
      const auto frame = adapted_frame(s, p);
      const StructureValues v = evaluate(s, p);
      const PointTensor gf = to_frame(PointTensor::from_matrix(3, v.g, Variance::Lower), frame);
      const std::vector<double> expected{1, 0, 0, 0, -1, 0, 0, 0, 1};
      for (int q = 0; q < 9; ++q) EXPECT_NEAR(gf.data()[q], expected[q], 1e-12) << s.name;
    }
  }
}

TEST(AdaptedFrame, DegenerateMetricThrows) {
  const AccRStructure s = builtin("cone-flat-fiber");
  const StructureValues v = evaluate(s, Point{1.0, 0.0, 0.0});
  const std::vector<double> degenerate{1, 0, 0, 0, 0, 0, 0, 0, 0};
  EXPECT_THROW(adapted_frame(v, degenerate), SingularFrame);
}

TEST(LieDerivative, MatchesCoordinateFormula) {
  const AccRStructure s = generic();
  const std::vector<Expression> field{parse(s, "t*u"), parse(s, "sin(v)"), parse(s, "t^2 - u")};
  for (const Point& p : latin_hypercube(s.chart, 8, 2)) {
    for (MetricTag tag : {MetricTag::G, MetricTag::GTilde}) {
      const PointTensor lie = lie_derivative_metric(s, tag, Potential::field(field), p);
      const auto oracle = lie_coordinate_formula(s, tag, field, p);
      for (int q = 0; q < 9; ++q) EXPECT_NEAR(lie.data()[q], oracle[q], 1e-12);
    }
  }
}

TEST(LieDerivative, VerticalExpansionAgrees) {
  for (const AccRStructure& s : {builtin("cone-flat-fiber"), generic()}) {
    const Expression k = parse(s, "exp(t) * (1 + 0.2*u*v)");
    for (const Point& p : latin_hypercube(s.chart, 8, 4)) {
      for (MetricTag tag : {MetricTag::G, MetricTag::GTilde}) {
        const PointTensor a = lie_derivative_metric(s, tag, Potential::vertical(k), p);
        const PointTensor b = lie_derivative_vertical_expanded(s, tag, k, p);
        EXPECT_LT(max_abs_difference(a, b), 1e-12 * std::max(1.0, a.max_abs()));
        EXPECT_LT(symmetry_check(a, std::vector<int>{1, 0}, 1.0), 1e-12 * std::max(1.0, a.max_abs()));
      }
    }
  }
}

TEST(ExteriorDerivative, ExactFormsAreClosed) {
  const AccRStructure s = generic();
  const Point p{1.2, -0.4, 0.3};
  const Jet2 k = parse(s, "t^2 * sin(u) + v*t").eval_jet(p, s.bindings);
  std::vector<Jet1> dk;
  for (int i = 0; i < 3; ++i) dk.push_back(partial_part(k, i));
  EXPECT_LT(exterior_derivative(dk).max_abs(), 1e-15);
  const PointTensor grad = exterior_derivative(value_part(k));
  EXPECT_NEAR(grad(0), 2 * 1.2 * std::sin(-0.4) + 0.3, 1e-15);
}

TEST(ExteriorDerivative, OfEtaOnGenericFixture) {
  // eta = dt + 0.3 t u du, so d eta = 0.3 u dt ^ du.
  const AccRStructure s = generic();
  const Point p{1.2, -0.4, 0.3};
  const StructureJets sj = evaluate_jets(s, p);
  std::vector<Jet1> eta;
  for (const auto& e : sj.eta) eta.push_back(value_part(e));
  const PointTensor de = exterior_derivative(eta);
  EXPECT_NEAR(de(0, 1), 0.3 * -0.4, 1e-15);
  EXPECT_NEAR(de(1, 0), -0.3 * -0.4, 1e-15);
  EXPECT_NEAR(de(0, 2), 0.0, 1e-15);
  EXPECT_NEAR(de(1, 2), 0.0, 1e-15);
}

TEST(CovariantDerivative, OfXiMatchesNablaXi) {
  const AccRStructure s = generic();
  const Point p{1.6, 0.1, -0.7};
  const PointGeometry pg = compute_point_geometry(s, MetricTag::G, p);
  const StructureJets sj = evaluate_jets(s, p);
  const PointTensor a = covariant_derivative(pg, sj.xi);
  EXPECT_LT(max_abs_difference(a, nabla_xi(pg).tensor), 1e-14);
}
