#include "accr/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "accr/analysis.hpp"
#include "accr/errors.hpp"
#include "accr/geometry.hpp"
#include "accr/manifold.hpp"
#include "accr/paper_suite.hpp"
#include "accr/sampling.hpp"

namespace accr {

namespace {

using ojson = nlohmann::ordered_json;

const std::set<std::string> kCommands = {"validate", "classify", "curvature", "soliton", "verify-paper", "report"};

struct Loaded {
  AccRStructure s;
  std::string identity;
  std::vector<Point> samples;
  ConstantBindings user_constants;
};

double parse_double(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v)) throw Error("bad " + what + ": '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

Loaded load(const RunConfig& c) {
  if (!c.builtin.empty() && !c.input.empty()) throw Error("give either an input file or --builtin, not both");
  if (c.samples < 1) throw Error("--samples must be at least 1");
  if (!(c.tolerance > 0.0)) throw Error("--tolerance must be positive");

  std::string builtin_name = c.builtin;
  if (builtin_name.empty() && c.input.rfind("builtin:", 0) == 0) builtin_name = c.input.substr(8);
  if (builtin_name.empty() && c.input.empty()) {
    if (c.command != "verify-paper") throw Error("no input: give a manifold file or --builtin NAME");
    builtin_name = "cone-flat-fiber";
  }

  Loaded out;
  if (!builtin_name.empty()) {
    out.s = builtin(builtin_name);
    out.identity = "builtin:" + builtin_name;
  } else {
    std::ifstream in(c.input, std::ios::binary);
    if (!in) throw Error("cannot read '" + c.input + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string bytes = buf.str();
    out.s = load_manifold(bytes, c.input);
    out.identity = "fnv1a:" + fnv1a_hex(bytes);
  }

  ConstantBindings b = out.s.bindings;
  for (const auto& kv : c.constants) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw Error("--const expects name=value, got '" + kv + "'");
    const std::string name = kv.substr(0, eq);
    const double value = parse_double(kv.substr(eq + 1), "constant value");
    if (out.user_constants.contains(name)) throw Error("constant '" + name + "' given twice");
    out.user_constants.bind(name, value);
    b.set(name, value);
  }
  out.s = out.s.with_bindings(std::move(b));
  out.s.require_bound_constants();

  std::vector<Point> pinned;
  for (const auto& p : c.points) pinned.push_back(parse_point(p, out.s.chart));
  out.samples = sample_points(out.s.chart, c.samples, c.seed, pinned);
  return out;
}

MetricTag parse_tag(const std::string& m) {
  if (m == "g") return MetricTag::G;
  if (m == "gtilde") return MetricTag::GTilde;
  throw Error("--metric must be g or gtilde");
}

ojson config_json(const RunConfig& c, const Loaded& l) {
  ojson j;
  j["command"] = c.command;
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  j["tolerance"] = c.tolerance;
  ojson consts = ojson::object();
  for (const auto& [k, v] : l.s.bindings.values()) consts[k] = v;
  j["constants"] = consts;
  if (c.command == "soliton" || c.command == "curvature") j["metric"] = c.metric;
  if (c.potential_k) j["potential_k"] = *c.potential_k;
  if (c.potential_field) j["potential_field"] = *c.potential_field;
  j["pinned_points"] = c.points;
  j["coordinates"] = l.s.chart.coordinates;
  j["sample_points"] = l.samples;
  return j;
}

Verdict from_membership(Membership m) {
  switch (m) {
    case Membership::Holds:
      return Verdict::Pass;
    case Membership::Degenerate:
      return Verdict::Degenerate;
    case Membership::Fails:
      return Verdict::Fail;
  }
  return Verdict::Fail;
}

std::vector<CheckRecord> validation_records(const ValidationReport& vr) {
  std::vector<CheckRecord> out;
  for (const auto& id : vr.identities)
    out.push_back({"structure." + id.name, id.formula, id.pass ? Verdict::Pass : Verdict::Fail, id.max, id.per_sample,
                   id.pass ? "" : "identity fails"});
  return out;
}

ojson membership_json(const MembershipFlag& f) {
  return ojson{{"verdict", membership_name(f.verdict)}, {"residual", f.residual}};
}

void classification(const Loaded& l, double tol, std::vector<CheckRecord>& records, ojson& extra) {
  const ClassMembership cm = classify(l.s, l.samples, tol);
  auto rec = [&](const char* name, const char* anchor, const MembershipFlag& f) {
    records.push_back({std::string("class.") + name, anchor, from_membership(f.verdict), f.residual, {},
                       membership_name(f.verdict)});
  };
  rec("sasaki_like", "F(x,y,z) = g(phi x,phi y)eta(z) + g(phi x,phi z)eta(y)", cm.sasaki_like);
  rec("F5", "F(x,y,z) = -(theta*(xi)/2n){g(x,phi y)eta(z) + g(x,phi z)eta(y)}", cm.f5);
  rec("F5_0", "d(theta*(xi)) = xi(theta*(xi)) eta", cm.f5_0);
  rec("F0", "F = 0", cm.f0);
  ojson j;
  j["sasaki_like"] = membership_json(cm.sasaki_like);
  j["F5"] = membership_json(cm.f5);
  j["F5_0"] = membership_json(cm.f5_0);
  j["F0"] = membership_json(cm.f0);
  j["samples"] = cm.samples;
  j["omega_max"] = cm.omega_max;
  j["omega_convention_sensitive"] = cm.omega_max > tol;
  if (cm.sasaki_consequences) {
    const auto& c = *cm.sasaki_consequences;
    j["sasaki_consequences"] = ojson{{"nabla_xi", c.nabla_xi},
                                     {"nabla_tilde_xi", c.nabla_tilde_xi},
                                     {"curvature_xi", c.curvature_xi},
                                     {"ricci_xi", c.ricci_xi}};
    for (const auto& [name, v] : {std::pair<const char*, double>{"sasaki.nabla_xi", c.nabla_xi},
                                  {"sasaki.nabla_tilde_xi", c.nabla_tilde_xi},
                                  {"sasaki.curvature_xi", c.curvature_xi},
                                  {"sasaki.ricci_xi", c.ricci_xi}})
      records.push_back({name, "consequence of the Sasaki-like condition", v <= tol ? Verdict::Pass : Verdict::Fail, v,
                         {}, {}});
  }
  if (cm.omega_max > tol)
    records.push_back({"omega.convention", "omega(z) = F(xi,xi,z)", Verdict::NotApplicable, cm.omega_max, {},
                       "omega-convention sensitive"});
  extra = j;
}

void curvature_section(const Loaded& l, MetricTag tag, double tol, std::vector<CheckRecord>& records, ojson& extra) {
  struct Per {
    CurvatureAtPoint cur;
    FundamentalTensorAtPoint ft;
    ConnectionAtPoint gamma;
  };
  const auto per = parallel_map<Per>(l.samples.size(), [&](std::size_t i) {
    const PointGeometry pg = compute_point_geometry(l.s, tag, l.samples[i]);
    return Per{curvature(pg), fundamental_tensor(pg), christoffel(pg)};
  });
  const std::string m = metric_tag_name(tag);
  std::vector<double> tau, tau_star, th;
  double anti_xy = 0.0, anti_zw = 0.0, pair = 0.0, bianchi = 0.0, ricci_sym = 0.0;
  const int d = l.s.dim();
  ojson points = ojson::array();
  for (const auto& p : per) {
    tau.push_back(p.cur.scalar);
    tau_star.push_back(p.cur.scalar_star);
    th.push_back(p.ft.theta_star_xi);
    const std::vector<int> pxy{1, 0, 2, 3}, pzw{0, 1, 3, 2}, ppair{2, 3, 0, 1}, sym2{1, 0};
    anti_xy = std::max(anti_xy, symmetry_check(p.cur.r04, pxy, -1.0));
    anti_zw = std::max(anti_zw, symmetry_check(p.cur.r04, pzw, -1.0));
    pair = std::max(pair, symmetry_check(p.cur.r04, ppair, 1.0));
    ricci_sym = std::max(ricci_sym, symmetry_check(p.cur.ricci, sym2, 1.0));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          for (int w = 0; w < d; ++w)
            bianchi = std::max(bianchi, std::abs(p.cur.r04(i, j, k, w) + p.cur.r04(j, k, i, w) + p.cur.r04(k, i, j, w)));
    ojson pj;
    pj["christoffel"] = p.gamma.gamma;
    pj["ricci"] = std::vector<double>(p.cur.ricci.data().begin(), p.cur.ricci.data().end());
    pj["scalar"] = p.cur.scalar;
    pj["scalar_star"] = p.cur.scalar_star;
    pj["theta_star_xi"] = p.ft.theta_star_xi;
    points.push_back(std::move(pj));
  }
  const std::string R = tag == MetricTag::G ? "R" : "R~";
  records.push_back({"curvature." + m + ".scalar", "tau = g^ij rho_ij", Verdict::NotApplicable, 0.0, tau, "values"});
  records.push_back({"curvature." + m + ".scalar_star", "tau* = g^ij rho_is phi^s_j", Verdict::NotApplicable, 0.0,
                     tau_star, "values"});
  records.push_back({"curvature." + m + ".theta_star_xi", "theta*(xi)", Verdict::NotApplicable, 0.0, th, "values"});
  auto sym = [&](const std::string& name, const std::string& anchor, double r) {
    records.push_back({"curvature." + m + "." + name, anchor, r <= tol ? Verdict::Pass : Verdict::Fail, r, {}, {}});
  };
  sym("antisymmetric_xy", R + "(x,y,z,w) = -" + R + "(y,x,z,w)", anti_xy);
  sym("antisymmetric_zw", R + "(x,y,z,w) = -" + R + "(x,y,w,z)", anti_zw);
  sym("pair_symmetric", R + "(x,y,z,w) = " + R + "(z,w,x,y)", pair);
  sym("first_bianchi", R + "(x,y,z,w) + " + R + "(y,z,x,w) + " + R + "(z,x,y,w) = 0", bianchi);
  sym("ricci_symmetric", "rho(x,y) = rho(y,x)", ricci_sym);
  extra = ojson{{"metric", m}, {"points", std::move(points)}};
}

Expression parse_in(const Loaded& l, const std::string& text) {
  std::vector<std::string> consts = l.s.chart.constants;
  for (const auto& [k, v] : l.s.bindings.values())
    if (std::find(consts.begin(), consts.end(), k) == consts.end()) consts.push_back(k);
  return Expression::parse(text, l.s.chart.coordinates, consts);
}

ojson torse_json(const TorseFormingResult& t) {
  ojson j;
  j["f"] = t.f;
  j["gamma"] = t.gamma;
  j["residual"] = t.residual;
  j["condition"] = t.condition;
  j["taxonomy"] = t.taxonomy.names();
  if (t.vertical) {
    j["k"] = t.k;
    j["h"] = t.h;
    j["dk_xi"] = t.dk_xi;
    j["gamma_formula_residual"] = t.gamma_formula_residual;
    j["derivative_formula_residual"] = t.derivative_formula_residual;
    j["f_dk_residual"] = t.f_dk_residual;
  }
  return j;
}

CommandResult cmd_soliton(const RunConfig& c, const Loaded& l) {
  CommandResult out;
  if (c.potential_k.has_value() == c.potential_field.has_value())
    throw Error("soliton needs exactly one of --potential-k or --potential-field");
  const MetricTag tag = parse_tag(c.metric);
  std::optional<Potential> pot;
  if (c.potential_k) {
    pot = Potential::vertical(parse_in(l, *c.potential_k));
  } else {
    std::vector<Expression> comps;
    for (const auto& part : split(*c.potential_field, ',')) comps.push_back(parse_in(l, part));
    if (static_cast<int>(comps.size()) != l.s.dim())
      throw DimensionMismatch("--potential-field needs " + std::to_string(l.s.dim()) + " components");
    pot = Potential::field(std::move(comps));
  }
  auto& rec = out.report.checks;
  const VerticalityCheck vc = check_vertical_potential(l.s, *pot, l.samples, c.tolerance);
  const bool pre_ok = vc.vertical && vc.nonvanishing;
  rec.push_back({"potential.vertical", "theta = k xi with k nowhere zero", pre_ok ? Verdict::Pass : Verdict::Fail,
                 vc.off_vertical, {},
                 !vc.vertical ? "not collinear with xi" : (!vc.nonvanishing ? "k vanishes at a sample" : "")});
  ojson extra;
  extra["metric"] = metric_tag_name(tag);
  extra["potential"] = pot->describe();
  if (!pre_ok) {
    extra["verdict"] = "precondition-failed";
    out.report.extra = extra;
    out.exit = exit_code::check_failed;
    return out;
  }
  const SolitonSolveResult r = yamabe_soliton_solve(l.s, tag, *pot, l.samples, c.tolerance);
  const std::string mname = tag == MetricTag::G ? "g" : "g~";
  rec.push_back({"soliton.verdict", "1/2 L_theta " + mname + " = (tau - lambda) " + mname,
                 r.soliton ? Verdict::Pass : Verdict::Fail, r.residual, r.residual_per_sample,
                 r.soliton ? "soliton" : "not-soliton"});
  auto opt = [&](const std::string& name, const std::string& anchor, const std::optional<double>& v) {
    if (v && r.theorems_applicable) rec.push_back({name, anchor, *v <= c.tolerance ? Verdict::Pass : Verdict::Fail, *v, {}, {}});
  };
  opt("theorem.tau_eq_f_plus_lambda", "tau = f + lambda", r.tau_eq_f_plus_lambda);
  opt("theorem.f_eq_dk_xi", "f = dk(xi)", r.f_eq_dk_xi);
  opt("theorem.contracted", "dk(xi) + 2n f = (2n+1)(tau - lambda)", r.trace_identity);
  opt("theorem.xi_xi", "dk(xi) = tau - lambda", r.xi_xi_identity);

  extra["verdict"] = r.soliton ? "soliton" : "not-soliton";
  extra["lambda"] = r.lambda;
  extra["mu"] = r.mu;
  extra["scalar_curvature"] = r.scalar_curvature;
  extra["residual"] = r.residual_per_sample;
  extra["lie_expansion_residual"] = r.lie_expansion_residual;
  if (r.torse) extra["torse_forming"] = torse_json(*r.torse);
  ojson th = ojson::object();
  th["applicable"] = r.theorems_applicable;
  if (r.tau_eq_f_plus_lambda) th["tau_eq_f_plus_lambda"] = *r.tau_eq_f_plus_lambda;
  if (r.f_eq_dk_xi) th["f_eq_dk_xi"] = *r.f_eq_dk_xi;
  if (r.trace_identity) th["contracted"] = *r.trace_identity;
  if (r.xi_xi_identity) th["xi_xi"] = *r.xi_xi_identity;
  extra["theorem_checks"] = th;
  out.report.extra = extra;

  bool theorem_fail = false;
  for (const auto& cr : rec)
    if (cr.name.rfind("theorem.", 0) == 0 && cr.verdict == Verdict::Fail) theorem_fail = true;
  if ((c.expect_soliton && !r.soliton) || theorem_fail) out.exit = exit_code::check_failed;
  return out;
}

}  // namespace

CommandResult run_command(const RunConfig& c) {
  if (!kCommands.count(c.command)) throw Error("unknown command '" + c.command + "'");
  const Loaded l = load(c);
  CommandResult out;
  if (c.command == "validate") {
    const ValidationReport vr = validate_structure(l.s, l.samples, c.tolerance);
    out.report.checks = validation_records(vr);
    out.exit = vr.pass ? exit_code::ok : exit_code::check_failed;
  } else if (c.command == "classify") {
    classification(l, c.tolerance, out.report.checks, out.report.extra);
  } else if (c.command == "curvature") {
    curvature_section(l, parse_tag(c.metric), c.tolerance, out.report.checks, out.report.extra);
    out.exit = out.report.any_failure() ? exit_code::check_failed : exit_code::ok;
  } else if (c.command == "soliton") {
    out = cmd_soliton(c, l);
  } else if (c.command == "verify-paper") {
    out.report.checks = verify_paper_suite(l.s, cone_constants_from(l.s.bindings), l.samples, c.tolerance);
    out.exit = out.report.any_failure() ? exit_code::check_failed : exit_code::ok;
  } else {  // report
    const ValidationReport vr = validate_structure(l.s, l.samples, c.tolerance);
    out.report.checks = validation_records(vr);
    ojson cls, cur_g, cur_t;
    std::vector<CheckRecord> class_records;
    classification(l, c.tolerance, class_records, cls);
    curvature_section(l, MetricTag::G, c.tolerance, out.report.checks, cur_g);
    curvature_section(l, MetricTag::GTilde, c.tolerance, out.report.checks, cur_t);
    // Class membership is informational in a full report.
    for (auto& r : class_records)
      if (r.verdict == Verdict::Fail) r.verdict = Verdict::NotApplicable;
    out.report.checks.insert(out.report.checks.end(), class_records.begin(), class_records.end());
    out.report.extra = ojson{{"classification", cls}, {"curvature_g", cur_g}, {"curvature_gtilde", cur_t}};
    out.exit = out.report.any_failure() ? exit_code::check_failed : exit_code::ok;
  }
  out.report.manifold = l.identity;
  out.report.config = config_json(c, l);
  return out;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"accr: numerical verification of almost contact B-metric structures"};
  RunConfig c;
  app.add_option("command", c.command, "validate | classify | curvature | soliton | verify-paper | report")
      ->required()
      ->check(CLI::IsMember(kCommands));
  app.add_option("input", c.input, "manifold JSON file or builtin:NAME");
  app.add_option("--builtin", c.builtin, "builtin manifold (cone-flat-fiber, flat-cosymplectic)");
  app.add_option("--samples", c.samples, "number of sample points")->check(CLI::PositiveNumber);
  app.add_option("--seed", c.seed, "sampling seed");
  app.add_option("--point", c.points, "pinned point coord=value,... (repeatable)");
  app.add_option("--const", c.constants, "constant binding name=value (repeatable)");
  app.add_option("--metric", c.metric, "g or gtilde")->check(CLI::IsMember({"g", "gtilde"}));
  app.add_option("--potential-k", c.potential_k, "vertical potential coefficient k (theta = k xi)");
  app.add_option("--potential-field", c.potential_field, "general potential, comma-separated components");
  app.add_flag("--expect-soliton", c.expect_soliton, "exit 1 when the verdict is not-soliton");
  app.add_option("--tolerance", c.tolerance, "absolute tolerance")->check(CLI::PositiveNumber);
  app.add_option("--format", c.format, "json or table")->check(CLI::IsMember({"json", "table"}));
  app.add_option("-o,--output", c.output, "write the report here instead of stdout");

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_code::ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::usage;
  }

  CommandResult result;
  try {
    const auto start = std::chrono::steady_clock::now();
    result = run_command(c);
    const auto stop = std::chrono::steady_clock::now();
    result.report.wall_ms = std::round(std::chrono::duration<double, std::milli>(stop - start).count() * 1000.0) / 1000.0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::usage;
  }

  const std::string text = c.format == "table" ? result.report.to_table() : result.report.to_json().dump(2) + "\n";
  if (c.output.empty()) {
    out << text;
  } else {
    std::ofstream f(c.output, std::ios::binary);
    if (!f) {
      err << "error: cannot write '" << c.output << "'\n";
      return exit_code::usage;
    }
    f << text;
  }
  return result.exit;
}

}  // namespace accr
