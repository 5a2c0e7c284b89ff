#include "accr/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <cctype>
#include <fstream>
#include <limits>
#include <json.hpp>
#include <sstream>

#include "accr/errors.hpp"
#include "accr/tensor.hpp"

namespace accr {

using json = nlohmann::json;

const char* metric_tag_name(MetricTag tag) { return tag == MetricTag::G ? "g" : "gtilde"; }

bool Chart::contains(std::span<const double> point) const {
  if (static_cast<int>(point.size()) != dim()) return false;
  for (int i = 0; i < dim(); ++i)
    if (!(point[i] > domain[i].lo && point[i] < domain[i].hi)) return false;
  return true;
}

int Chart::index_of(std::string_view coordinate) const {
  for (std::size_t i = 0; i < coordinates.size(); ++i)
    if (coordinates[i] == coordinate) return static_cast<int>(i);
  return -1;
}

void AccRStructure::check_point(std::span<const double> point) const {
  if (static_cast<int>(point.size()) != dim()) throw DimensionMismatch("point has wrong dimension");
  if (!chart.contains(point)) throw DomainError("point lies outside the open domain box");
}

void AccRStructure::require_bound_constants() const {
  for (const auto& c : chart.constants)
    if (!bindings.contains(c)) throw Error("constant '" + c + "' is not bound");
}

AccRStructure AccRStructure::with_bindings(ConstantBindings b) const {
  AccRStructure s = *this;
  s.bindings = std::move(b);
  return s;
}

namespace {

const json& field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(std::string("missing field '") + key + "'");
  return *it;
}

std::vector<std::string> string_list(const json& j, const char* key) {
  if (!j.is_array()) throw ParseError(std::string("field '") + key + "' must be an array");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) throw ParseError(std::string("field '") + key + "' must contain strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

Expression parse_component(const json& e, const char* key, const Chart& chart) {
  if (!e.is_string()) throw ParseError(std::string("entries of '") + key + "' must be expression strings");
  return Expression::parse(e.get<std::string>(), chart.coordinates, chart.constants);
}

std::vector<Expression> parse_vector(const json& j, const char* key, const Chart& chart) {
  if (!j.is_array()) throw ParseError(std::string("field '") + key + "' must be an array");
  if (static_cast<int>(j.size()) != chart.dim())
    throw DimensionMismatch(std::string("field '") + key + "' must have " + std::to_string(chart.dim()) + " entries");
  std::vector<Expression> out;
  for (const auto& e : j) out.push_back(parse_component(e, key, chart));
  return out;
}

std::vector<Expression> parse_matrix(const json& j, const char* key, const Chart& chart) {
  const int d = chart.dim();
  if (!j.is_array() || static_cast<int>(j.size()) != d)
    throw DimensionMismatch(std::string("field '") + key + "' must have " + std::to_string(d) + " rows");
  std::vector<Expression> out;
  for (const auto& row : j) {
    if (!row.is_array() || static_cast<int>(row.size()) != d)
      throw DimensionMismatch(std::string("rows of '") + key + "' must have " + std::to_string(d) + " entries");
    for (const auto& e : row) out.push_back(parse_component(e, key, chart));
  }
  return out;
}

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

constexpr std::string_view kConeFlatFiber = R"({
  "n": 1,
  "coordinates": ["t", "u", "v"],
  "domain": {"t": [0.5, 5.0], "u": [-1.0, 1.0], "v": [-1.0, 1.0]},
  "constants": [],
  "g":   [["1", "0", "0"], ["0", "t^2", "0"], ["0", "0", "-t^2"]],
  "phi": [["0", "0", "0"], ["0", "0", "-1"], ["0", "1", "0"]],
  "xi":  ["1", "0", "0"],
  "eta": ["1", "0", "0"]
})";

constexpr std::string_view kFlatCosymplectic = R"({
  "n": 1,
  "coordinates": ["t", "x", "y"],
  "domain": {"t": [-1.0, 1.0], "x": [-1.0, 1.0], "y": [-1.0, 1.0]},
  "constants": [],
  "g":   [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "-1"]],
  "phi": [["0", "0", "0"], ["0", "0", "-1"], ["0", "1", "0"]],
  "xi":  ["1", "0", "0"],
  "eta": ["1", "0", "0"]
})";

}  // namespace

AccRStructure load_manifold(std::string_view json_text, std::string name) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("manifold file must be a JSON object");

  AccRStructure s;
  s.name = std::move(name);
  const json& n = field(doc, "n");
  if (!n.is_number_integer() || n.get<int>() < 1) throw ParseError("field 'n' must be an integer >= 1");
  s.chart.n = n.get<int>();
  s.chart.coordinates = string_list(field(doc, "coordinates"), "coordinates");
  const std::size_t ncoords = s.chart.coordinates.size();
  if (ncoords % 2 == 0)
    throw DimensionMismatch("chart has " + std::to_string(ncoords) + " coordinates; dimension must be odd");
  if (static_cast<int>(ncoords) != s.chart.dim())
    throw DimensionMismatch("n = " + std::to_string(s.chart.n) + " requires " + std::to_string(s.chart.dim()) +
                            " coordinates, got " + std::to_string(ncoords));
  const json& domain = field(doc, "domain");
  const json& constants = field(doc, "constants");
  const json& g = field(doc, "g");
  const json& phi = field(doc, "phi");
  const json& xi = field(doc, "xi");
  const json& eta = field(doc, "eta");

  s.chart.constants = string_list(constants, "constants");
  std::vector<std::string> all = s.chart.coordinates;
  all.insert(all.end(), s.chart.constants.begin(), s.chart.constants.end());
  for (const auto& id : all)
    if (!is_identifier(id)) throw ParseError("'" + id + "' is not a valid identifier");
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end())
    throw ParseError("coordinate and constant names must be distinct");

  if (!domain.is_object()) throw ParseError("field 'domain' must be an object");
  for (const auto& c : s.chart.coordinates) {
    auto it = domain.find(c);
    if (it == domain.end()) throw ParseError("domain has no interval for coordinate '" + c + "'");
    if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() || !(*it)[1].is_number())
      throw ParseError("domain interval for '" + c + "' must be [lo, hi]");
    Interval iv{(*it)[0].get<double>(), (*it)[1].get<double>()};
    if (!(iv.lo < iv.hi) || !std::isfinite(iv.lo) || !std::isfinite(iv.hi))
      throw ParseError("domain interval for '" + c + "' is empty");
    s.chart.domain.push_back(iv);
  }

  s.g = parse_matrix(g, "g", s.chart);
  s.phi = parse_matrix(phi, "phi", s.chart);
  s.xi = parse_vector(xi, "xi", s.chart);
  s.eta = parse_vector(eta, "eta", s.chart);

  const int d = s.dim();
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      if (s.g[i * d + j].to_string() != s.g[j * d + i].to_string())
        throw ParseError("metric is not symmetric: g[" + std::to_string(i) + "][" + std::to_string(j) + "] = '" +
                         s.g[i * d + j].to_string() + "' but g[" + std::to_string(j) + "][" + std::to_string(i) +
                         "] = '" + s.g[j * d + i].to_string() + "'");
    }
  }
  return s;
}

AccRStructure load_manifold_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open manifold file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_manifold(buf.str(), path.string());
}

std::string_view builtin_source(std::string_view name) {
  if (name == "cone-flat-fiber") return kConeFlatFiber;
  if (name == "flat-cosymplectic") return kFlatCosymplectic;
  throw UnknownName("unknown builtin manifold '" + std::string(name) + "'");
}

AccRStructure builtin(std::string_view name) {
  return load_manifold(builtin_source(name), "builtin:" + std::string(name));
}

std::vector<std::string> builtin_names() { return {"cone-flat-fiber", "flat-cosymplectic"}; }

StructureValues evaluate(const AccRStructure& s, std::span<const double> point) {
  StructureValues v;
  v.dim = s.dim();
  auto eval_all = [&](const std::vector<Expression>& exprs, std::vector<double>& out) {
    out.reserve(exprs.size());
    for (const auto& e : exprs) out.push_back(e.eval(point, s.bindings));
  };
  eval_all(s.g, v.g);
  eval_all(s.phi, v.phi);
  eval_all(s.xi, v.xi);
  eval_all(s.eta, v.eta);
  return v;
}

StructureJets evaluate_jets(const AccRStructure& s, std::span<const double> point) {
  StructureJets j;
  j.dim = s.dim();
  auto eval_all = [&](const std::vector<Expression>& exprs, std::vector<Jet2>& out) {
    out.reserve(exprs.size());
    for (const auto& e : exprs) out.push_back(e.eval_jet(point, s.bindings));
  };
  eval_all(s.g, j.g);
  eval_all(s.phi, j.phi);
  eval_all(s.xi, j.xi);
  eval_all(s.eta, j.eta);
  return j;
}

std::vector<double> associated_metric(const StructureValues& v) {
  const int d = v.dim;
  std::vector<double> out(static_cast<std::size_t>(d * d), 0.0);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      double sum = v.eta[i] * v.eta[j];
      for (int k = 0; k < d; ++k) sum += v.g[i * d + k] * v.phi[k * d + j];
      out[i * d + j] = sum;
    }
  }
  return out;
}

std::vector<Jet2> associated_metric_jets(const StructureJets& j) {
  const int d = j.dim;
  std::vector<Jet2> out;
  out.reserve(static_cast<std::size_t>(d * d));
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      Jet2 sum = j.eta[a] * j.eta[b];
      for (int k = 0; k < d; ++k) sum = sum + j.g[a * d + k] * j.phi[k * d + b];
      out.push_back(std::move(sum));
    }
  }
  return out;
}

std::vector<Jet2> associated_metric_jets(const AccRStructure& s, std::span<const double> point) {
  return associated_metric_jets(evaluate_jets(s, point));
}

std::vector<Jet2> metric_jets(const StructureJets& j, MetricTag tag) {
  return tag == MetricTag::G ? j.g : associated_metric_jets(j);
}

const IdentityResidual& ValidationReport::get(std::string_view name) const {
  for (const auto& r : identities)
    if (r.name == name) return r;
  throw UnknownName("no identity named '" + std::string(name) + "'");
}

ValidationReport validate_structure(const AccRStructure& s, std::span<const Point> samples, double tol) {
  const int d = s.dim();
  ValidationReport rep;
  rep.identities = {
      {"phi_xi", "phi xi = 0", {}, 0.0, false},
      {"phi_squared", "phi^2 = -id + eta (x) xi", {}, 0.0, false},
      {"eta_phi", "eta o phi = 0", {}, 0.0, false},
      {"eta_xi", "eta(xi) = 1", {}, 0.0, false},
      {"metric_phi_compatibility", "g(phi x, phi y) = -g(x,y) + eta(x)eta(y)", {}, 0.0, false},
      {"g_xi_eta", "g(x, xi) = eta(x)", {}, 0.0, false},
      {"g_xi_xi", "g(xi, xi) = 1", {}, 0.0, false},
      {"phi_self_adjoint", "g(phi x, y) = g(x, phi y)", {}, 0.0, false},
      {"signature", "signature(g) = (n+1, n)", {}, 0.0, false},
  };
  auto& r = rep.identities;
  for (const auto& p : samples) {
    s.check_point(p);
    const StructureValues v = evaluate(s, p);
    auto G = [&](int i, int j) { return v.g[i * d + j]; };
    auto Phi = [&](int i, int j) { return v.phi[i * d + j]; };
    double res[9] = {};
    for (int a = 0; a < d; ++a) {
      double phixi = 0.0, etaphi = 0.0, gxi = 0.0;
      for (int j = 0; j < d; ++j) {
        phixi += Phi(a, j) * v.xi[j];
        etaphi += v.eta[j] * Phi(j, a);
        gxi += G(a, j) * v.xi[j];
      }
      res[0] = std::max(res[0], std::abs(phixi));
      res[2] = std::max(res[2], std::abs(etaphi));
      res[5] = std::max(res[5], std::abs(gxi - v.eta[a]));
      for (int c = 0; c < d; ++c) {
        double phi2 = 0.0;
        for (int b = 0; b < d; ++b) phi2 += Phi(a, b) * Phi(b, c);
        const double expected = -(a == c ? 1.0 : 0.0) + v.xi[a] * v.eta[c];
        res[1] = std::max(res[1], std::abs(phi2 - expected));
        double gpp = 0.0, gpx = 0.0, gxp = 0.0;
        for (int k = 0; k < d; ++k) {
          gpx += Phi(k, a) * G(k, c);
          gxp += G(a, k) * Phi(k, c);
          for (int l = 0; l < d; ++l) gpp += Phi(k, a) * Phi(l, c) * G(k, l);
        }
        res[4] = std::max(res[4], std::abs(gpp + G(a, c) - v.eta[a] * v.eta[c]));
        res[7] = std::max(res[7], std::abs(gpx - gxp));
      }
    }
    double etaxi = 0.0, gxixi = 0.0;
    for (int a = 0; a < d; ++a) {
      etaxi += v.eta[a] * v.xi[a];
      for (int b = 0; b < d; ++b) gxixi += G(a, b) * v.xi[a] * v.xi[b];
    }
    res[3] = std::abs(etaxi - 1.0);
    res[6] = std::abs(gxixi - 1.0);
    const Signature sig = signature_of(PointTensor::from_matrix(d, v.g, Variance::Lower));
    res[8] = std::abs(sig.positive - (s.n() + 1)) + std::abs(sig.negative - s.n()) + sig.zero;
    for (int k = 0; k < 9; ++k) r[k].per_sample.push_back(res[k]);
  }
  rep.pass = true;
  for (auto& id : r) {
    for (double x : id.per_sample) id.max = std::max(id.max, x);
    id.pass = id.max <= tol;
    rep.pass = rep.pass && id.pass;
  }
  return rep;
}

Potential Potential::vertical(Expression k) {
  Potential p;
  p.k_ = std::move(k);
  return p;
}

Potential Potential::field(std::vector<Expression> components) {
  Potential p;
  p.components_ = std::move(components);
  return p;
}

std::string Potential::describe() const {
  if (k_) return "(" + k_->to_string() + ")*xi";
  std::string out = "[";
  for (std::size_t i = 0; i < components_.size(); ++i) out += (i ? ", " : "") + components_[i].to_string();
  return out + "]";
}

std::vector<Jet2> Potential::jets(const AccRStructure& s, const StructureJets& sj,
                                  std::span<const double> point) const {
  std::vector<Jet2> out;
  if (k_) {
    const Jet2 k = k_->eval_jet(point, s.bindings);
    for (const auto& x : sj.xi) out.push_back(k * x);
    return out;
  }
  if (static_cast<int>(components_.size()) != s.dim())
    throw DimensionMismatch("potential has wrong number of components");
  for (const auto& c : components_) out.push_back(c.eval_jet(point, s.bindings));
  return out;
}

VerticalityCheck check_vertical_potential(const AccRStructure& s, const Potential& p,
                                          std::span<const Point> samples, double tol) {
  VerticalityCheck out;
  out.min_abs_k = std::numeric_limits<double>::infinity();
  const int d = s.dim();
  for (const auto& pt : samples) {
    const StructureJets sj = evaluate_jets(s, pt);
    const std::vector<Jet2> v = p.jets(s, sj, pt);
    double k = 0.0;
    for (int a = 0; a < d; ++a) k += sj.eta[a].value() * v[a].value();
    for (int a = 0; a < d; ++a)
      out.off_vertical = std::max(out.off_vertical, std::abs(v[a].value() - k * sj.xi[a].value()));
    out.min_abs_k = std::min(out.min_abs_k, std::abs(k));
  }
  out.vertical = out.off_vertical <= tol;
  out.nonvanishing = out.min_abs_k > tol;
  return out;
}

}  // namespace accr
