#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "accr/geometry.hpp"
#include "accr/manifold.hpp"
#include "accr/tensor.hpp"

namespace accr {

inline constexpr double kDefaultTolerance = 1e-9;

enum class Membership { Holds, Fails, Degenerate };
const char* membership_name(Membership m);

struct MembershipFlag {
  Membership verdict = Membership::Fails;
  double residual = 0.0;
};

// Residuals of the identities every Sasaki-like manifold satisfies; only
// computed when the Sasaki-like condition holds.
struct SasakiConsequences {
  double nabla_xi = 0.0;        // nabla_x xi = -phi x
  double nabla_tilde_xi = 0.0;  // nabla~_x xi = -phi x
  double curvature_xi = 0.0;    // R(x,y)xi = eta(y)x - eta(x)y
  double ricci_xi = 0.0;        // rho(x,xi) = 2n eta(x)
};

struct ClassMembership {
  MembershipFlag sasaki_like;
  MembershipFlag f5;
  MembershipFlag f5_0;
  MembershipFlag f0;
  std::size_t samples = 0;
  std::optional<SasakiConsequences> sasaki_consequences;
  double omega_max = 0.0;  // nonzero omega makes results depend on the omega convention
};

// max |F(x,y,z) - g(phi x, phi y)eta(z) - g(phi x, phi z)eta(y)| over coordinate slots.
double sasaki_like_residual(const PointTensor& F, const StructureValues& v);
// max |F(x,y,z) + (theta*(xi)/2n){g(x,phi y)eta(z) + g(x,phi z)eta(y)}|.
double f5_residual(const PointTensor& F, double theta_star_xi, const StructureValues& v);

MembershipFlag check_sasaki_like(const AccRStructure& s, std::span<const Point> samples, double tol = kDefaultTolerance,
                                 std::optional<SasakiConsequences>* consequences = nullptr);
// Fills f5, f5_0 and f0 (F identically zero makes F5 and F5_0 degenerate).
ClassMembership check_f5(const AccRStructure& s, std::span<const Point> samples, double tol = kDefaultTolerance);
ClassMembership classify(const AccRStructure& s, std::span<const Point> samples, double tol = kDefaultTolerance);

struct Taxonomy {
  bool torse_forming = false;
  bool torqued = false;      // gamma(theta) = 0
  bool concircular = false;  // gamma = 0
  bool concurrent = false;   // f = 1, gamma = 0
  bool recurrent = false;    // f = 0
  bool parallel = false;     // f = 0, gamma = 0

  std::vector<std::string> names() const;
};

// nabla_x theta = f x + gamma(x) theta, fitted by least squares per sample.
struct TorseFormingResult {
  MetricTag tag = MetricTag::G;
  std::vector<double> f;
  std::vector<std::vector<double>> gamma;
  std::vector<double> residual_per_sample;
  double residual = 0.0;
  double condition = 0.0;  // worst condition number of the least-squares system
  Taxonomy taxonomy;

  // Only for vertical potentials theta = k xi.
  bool vertical = false;
  std::vector<double> k;
  std::vector<double> h;      // f / k
  std::vector<double> dk_xi;  // dk(xi)
  double gamma_formula_residual = 0.0;  // gamma = (dk - f eta)/k
  double derivative_formula_residual = 0.0;  // nabla_x theta = -f phi^2 x + dk(x) xi
  double f_dk_residual = 0.0;  // f = dk(xi)
};

// Throws ZeroPotential when every component of theta vanishes at a sample.
TorseFormingResult torse_forming_extract(const AccRStructure& s, MetricTag tag, const Potential& potential,
                                         std::span<const Point> samples, double tol = kDefaultTolerance);

// A = mu * metric + remainder with mu = trace_metric(A) / dim.
struct SolitonDecomposition {
  double mu = 0.0;
  double residual = 0.0;  // max |A - mu metric|
};
SolitonDecomposition decompose_soliton(const PointTensor& half_lie, const MetricAtPoint& metric);

struct SolitonSolveResult {
  MetricTag tag = MetricTag::G;
  bool soliton = false;
  std::vector<double> lambda;
  std::vector<double> mu;
  std::vector<double> scalar_curvature;
  std::vector<double> residual_per_sample;
  double residual = 0.0;
  double lie_expansion_residual = 0.0;  // covariant vs expanded Lie derivative (vertical only)

  // Checks of the vertical torse-forming statements. The residuals are filled
  // for every vertical potential; the statements only apply when
  // theorems_applicable (soliton with torse-forming potential).
  std::optional<TorseFormingResult> torse;
  bool theorems_applicable = false;
  std::optional<double> tau_eq_f_plus_lambda;
  std::optional<double> f_eq_dk_xi;
  std::optional<double> trace_identity;  // trace of the soliton equation: dk(xi) + 2n f = (2n+1)(tau - lambda)
  std::optional<double> xi_xi_identity;  // (xi, xi) evaluation: dk(xi) = tau - lambda
};

// Solves 1/2 L_theta(metric) = (tau - lambda) metric for lambda at every sample.
SolitonSolveResult yamabe_soliton_solve(const AccRStructure& s, MetricTag tag, const Potential& potential,
                                        std::span<const Point> samples, double tol = kDefaultTolerance);

struct SolitonPair {
  SolitonSolveResult g;
  SolitonSolveResult gtilde;
  std::optional<double> fk_ratio_match;  // f/k = f~/k~, only on F5 structures with both solitons
};
SolitonPair yamabe_soliton_pair(const AccRStructure& s, const Potential& potential, const Potential& potential_tilde,
                                std::span<const Point> samples, double tol = kDefaultTolerance);

// A Sasaki-like manifold admits no Yamabe almost soliton with vertical potential
// for either metric. The implication is vacuous unless the structure is
// Sasaki-like.
struct NonexistenceCheck {
  bool sasaki_like = false;
  bool vertical = false;
  bool soliton = false;
  bool implication_holds = true;
  // On a Sasaki-like manifold the (xi, xi) evaluation forces dk(xi) = mu while
  // the trace forces dk(xi) = (2n+1) mu, with mu = tau - lambda. Max gaps over
  // samples, vertical potentials only.
  double xi_xi_gap = 0.0;
  double trace_gap = 0.0;
};
NonexistenceCheck check_nonexistence(const AccRStructure& s, MetricTag tag, const Potential& potential,
                                     std::span<const Point> samples, double tol = kDefaultTolerance);

}  // namespace accr
