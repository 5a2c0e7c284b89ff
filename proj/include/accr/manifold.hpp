#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "accr/expr.hpp"
#include "accr/jets.hpp"

namespace accr {

using Point = std::vector<double>;

// Which of the two B-metrics a computation refers to.
enum class MetricTag { G, GTilde };

const char* metric_tag_name(MetricTag tag);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct Chart {
  int n = 0;  // dim = 2n+1
  std::vector<std::string> coordinates;
  std::vector<Interval> domain;  // open intervals, one per coordinate
  std::vector<std::string> constants;

  int dim() const { return 2 * n + 1; }
  bool contains(std::span<const double> point) const;
  int index_of(std::string_view coordinate) const;  // -1 if absent
};

// Chart plus expression-valued components of g, phi, xi, eta. All matrices are
// row-major dim x dim; phi[i][j] is component i of phi(d_j).
class AccRStructure {
 public:
  std::string name;
  Chart chart;
  std::vector<Expression> g;
  std::vector<Expression> phi;
  std::vector<Expression> xi;
  std::vector<Expression> eta;
  ConstantBindings bindings;

  int dim() const { return chart.dim(); }
  int n() const { return chart.n; }

  // Throws DomainError when the point is not strictly inside the domain box.
  void check_point(std::span<const double> point) const;
  // Throws Error naming the first declared constant without a value.
  void require_bound_constants() const;
  AccRStructure with_bindings(ConstantBindings b) const;
};

// Parses the JSON manifold format:
//   {"n", "coordinates", "domain", "constants", "g", "phi", "xi", "eta"}
// Throws ParseError, DimensionMismatch, UnknownIdentifier or SyntaxError.
AccRStructure load_manifold(std::string_view json_text, std::string name = "file");
AccRStructure load_manifold_file(const std::filesystem::path& path);

// "cone-flat-fiber" or "flat-cosymplectic"; throws UnknownName otherwise.
AccRStructure builtin(std::string_view name);
std::string_view builtin_source(std::string_view name);
std::vector<std::string> builtin_names();

struct StructureValues {
  int dim = 0;
  std::vector<double> g, phi, xi, eta;
};

struct StructureJets {
  int dim = 0;
  std::vector<Jet2> g, phi, xi, eta;
};

StructureValues evaluate(const AccRStructure& s, std::span<const double> point);
StructureJets evaluate_jets(const AccRStructure& s, std::span<const double> point);

// g~(x,y) = g(x, phi y) + eta(x) eta(y), componentwise.
std::vector<double> associated_metric(const StructureValues& v);
// Same, assembled with jet arithmetic so derivatives follow by product rule.
std::vector<Jet2> associated_metric_jets(const StructureJets& j);
std::vector<Jet2> associated_metric_jets(const AccRStructure& s, std::span<const double> point);

// Metric components (g or g~) with jets.
std::vector<Jet2> metric_jets(const StructureJets& j, MetricTag tag);

struct IdentityResidual {
  std::string name;
  std::string formula;
  std::vector<double> per_sample;
  double max = 0.0;
  bool pass = false;
};

struct ValidationReport {
  std::vector<IdentityResidual> identities;
  bool pass = false;

  const IdentityResidual& get(std::string_view name) const;
};

// Checks phi xi = 0, phi^2 = -id + eta (x) xi, eta o phi = 0, eta(xi) = 1,
// g(phi x, phi y) = -g(x,y) + eta(x)eta(y), g(x,xi) = eta(x), g(xi,xi) = 1,
// g(phi x, y) = g(x, phi y) and signature (n+1, n) at every sample.
ValidationReport validate_structure(const AccRStructure& s, std::span<const Point> samples, double tol = 1e-9);

// Soliton potential: either vertical (k xi) or a general vector field.
class Potential {
 public:
  static Potential vertical(Expression k);
  static Potential field(std::vector<Expression> components);

  bool is_vertical() const { return k_.has_value(); }
  const Expression& k() const { return *k_; }
  std::string describe() const;

  // Components theta^i with jets.
  std::vector<Jet2> jets(const AccRStructure& s, const StructureJets& sj, std::span<const double> point) const;

 private:
  std::optional<Expression> k_;
  std::vector<Expression> components_;
};

struct VerticalityCheck {
  double off_vertical = 0.0;   // max |theta - eta(theta) xi|
  double min_abs_k = 0.0;      // min |eta(theta)|
  bool vertical = false;
  bool nonvanishing = false;
};

// A vertical potential theta = k xi with k nowhere zero (|k| > 1e-9).
VerticalityCheck check_vertical_potential(const AccRStructure& s, const Potential& p,
                                          std::span<const Point> samples, double tol = 1e-9);

}  // namespace accr
