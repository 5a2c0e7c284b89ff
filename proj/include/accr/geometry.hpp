#pragma once

#include <span>
#include <vector>

#include "accr/jets.hpp"
#include "accr/manifold.hpp"
#include "accr/tensor.hpp"

namespace accr {

// Christoffel symbols gamma(k, i, j) = Gamma^k_{ij} of the Levi-Civita
// connection of one of the two B-metrics.
struct ConnectionAtPoint {
  int dim = 0;
  MetricTag tag = MetricTag::G;
  Point point;
  std::vector<double> gamma;

  double operator()(int k, int i, int j) const { return gamma[static_cast<std::size_t>((k * dim + i) * dim + j)]; }
};

double max_abs_difference(const ConnectionAtPoint& a, const ConnectionAtPoint& b);

struct CurvatureAtPoint {
  PointTensor r13;    // r13(l, k, i, j) = R^l_{kij}, R(d_i, d_j) d_k = R^l_{kij} d_l
  PointTensor r04;    // r04(i, j, k, w) = g(R(d_i, d_j) d_k, d_w)
  PointTensor ricci;  // rho(y, z) = trace of x -> R(x, z) y
  double scalar = 0.0;       // tau
  double scalar_star = 0.0;  // tau* = g^{ij} rho_{is} phi^s_j
};

struct FundamentalTensorAtPoint {
  MetricTag tag = MetricTag::G;
  PointTensor F;           // F(x,y,z) = metric((nabla_x phi) y, z)
  PointTensor theta_star;  // theta*(z) = metric^{ij} F(e_i, phi e_j, z)
  PointTensor omega;       // omega(z) = F(xi, xi, z)
  double theta_star_xi = 0.0;
};

// Every connection-level quantity at a point, carried as first-order jets so
// that one coordinate derivative of each is available without third-order
// jets of the structure.
struct PointGeometry {
  int dim = 0;
  int n = 0;
  MetricTag tag = MetricTag::G;
  Point point;
  std::vector<Jet1> metric;      // [i][j]
  std::vector<Jet1> metric_inv;  // [i][j]
  std::vector<Jet1> phi;         // [a][j]
  std::vector<Jet1> xi;          // [a]
  std::vector<Jet1> eta;         // [j]
  std::vector<Jet1> gamma;       // [k][i][j]
  std::vector<Jet1> nabla_phi;   // [i][a][j] = (nabla_i phi)^a_j
  std::vector<Jet1> nabla_xi;    // [a][i] = (nabla_{d_i} xi)^a
  std::vector<Jet1> nabla_eta;   // [i][j] = (nabla_i eta)_j
  std::vector<Jet1> F;           // [i][j][k]
  std::vector<Jet1> theta_star;  // [k]
  std::vector<Jet1> omega;       // [k]
  Jet1 theta_star_xi;

  // Plain-value views.
  PointTensor metric_tensor() const;
  PointTensor metric_inverse_tensor() const;
  MetricAtPoint metric_at_point() const;
  PointTensor phi_tensor() const;     // (1,1)
  PointTensor xi_tensor() const;      // (1,0)
  PointTensor eta_tensor() const;     // (0,1)
};

PointGeometry compute_point_geometry(const AccRStructure& s, MetricTag tag, std::span<const double> point);

ConnectionAtPoint christoffel(const AccRStructure& s, MetricTag tag, std::span<const double> point);
ConnectionAtPoint christoffel(const PointGeometry& pg);

// (1,1) tensor with components (a, i) = (nabla_{d_i} xi)^a.
struct NablaXi {
  PointTensor tensor;
  double eta_residual = 0.0;  // max |eta(nabla_x xi)|
};
NablaXi nabla_xi(const AccRStructure& s, MetricTag tag, std::span<const double> point);
NablaXi nabla_xi(const PointGeometry& pg);

CurvatureAtPoint curvature(const AccRStructure& s, MetricTag tag, std::span<const double> point);
CurvatureAtPoint curvature(const PointGeometry& pg);

FundamentalTensorAtPoint fundamental_tensor(const AccRStructure& s, MetricTag tag, std::span<const double> point);
FundamentalTensorAtPoint fundamental_tensor(const PointGeometry& pg);

// F~ assembled from F (of g) and the structure through the classical
// relation between the fundamental tensors of the two B-metrics.
PointTensor f_tilde_via_relation(const AccRStructure& s, std::span<const double> point);
PointTensor f_tilde_from_f(const PointTensor& F, const StructureValues& v);

// Levi-Civita connection of g~ assembled from that of g, F and omega.
ConnectionAtPoint nabla_tilde_via_relation(const AccRStructure& s, std::span<const double> point);
ConnectionAtPoint nabla_tilde_from(const PointGeometry& pg_g);
// The simplified relation valid on F5 manifolds:
//   nabla~_x y = nabla_x y - (theta*(xi)/2n) {g(x, phi y) + g(phi x, phi y)} xi
ConnectionAtPoint nabla_tilde_f5_relation(const AccRStructure& s, std::span<const double> point);
ConnectionAtPoint nabla_tilde_f5_from(const PointGeometry& pg_g);

// (1,1) tensor (a, i) = (nabla_{d_i} theta)^a for the given potential.
PointTensor covariant_derivative(const PointGeometry& pg, std::span<const Jet2> field);

// (L_theta metric)(x,y) = metric(nabla_x theta, y) + metric(x, nabla_y theta).
PointTensor lie_derivative_metric(const AccRStructure& s, MetricTag tag, const Potential& potential,
                                  std::span<const double> point);
PointTensor lie_derivative_metric(const PointGeometry& pg, std::span<const Jet2> field);
// For theta = k xi: dk(x)eta(y) + dk(y)eta(x) + k {metric(nabla_x xi, y) + metric(x, nabla_y xi)}.
PointTensor lie_derivative_vertical_expanded(const AccRStructure& s, MetricTag tag, const Expression& k,
                                             std::span<const double> point);
PointTensor lie_derivative_vertical_expanded(const PointGeometry& pg, const Jet2& k);

// d of a scalar field (its gradient 1-form) and of a 1-form field
// (dw)(d_i, d_j) = d_i w_j - d_j w_i.
PointTensor exterior_derivative(const Jet1& scalar);
PointTensor exterior_derivative(std::span<const Jet1> one_form);

// Columns: e_1..e_n, phi e_1..phi e_n, xi, with g(e_a, e_b) = delta_ab,
// g(e_a, phi e_b) = 0. Built by Gram-Schmidt for the complex bilinear form
// g(x,y) - i g(x, phi y) on ker eta. Throws SingularFrame when none exists.
std::vector<double> adapted_frame(const StructureValues& v, std::span<const double> metric);
std::vector<double> adapted_frame(const AccRStructure& s, std::span<const double> point);

}  // namespace accr
