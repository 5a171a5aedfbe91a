#include "ct/cli.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "ct/mutation.hpp"
#include "ct/scattering.hpp"
#include "ct/svg.hpp"
#include "ct/theta.hpp"
#include "ct/tropical.hpp"

namespace ct {

namespace {

using nlohmann::json;

std::string rational_text(const Rational& q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

json int_json(const IntVector& v) { return std::vector<Int>(v.data(), v.data() + v.size()); }

json rat_json(const RatVector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(rational_text(v(i)));
  return out;
}

json path_json(const Path& path) {
  json out = json::array();
  for (const RatVector& x : path) out.push_back(rat_json(x));
  return out;
}

IntVector parse_vector(const std::string& text) {
  std::vector<Int> xs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    Int x = 0;
    try {
      x = std::stoll(item, &used);
    } catch (const std::exception&) {
      throw UsageError("bad coordinate '" + item + "' in point '" + text + "'");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos)
      throw UsageError("bad coordinate '" + item + "' in point '" + text + "'");
    xs.push_back(x);
  }
  if (xs.empty()) throw UsageError("empty point");
  IntVector v(static_cast<Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) v(static_cast<Index>(i)) = xs[i];
  return v;
}

void require_dim(const std::vector<IntVector>& points, Index dim) {
  for (const IntVector& p : points)
    if (p.size() != dim)
      throw UsageError("point " + format_vector(p) + " has " + std::to_string(p.size()) + " coordinates, N̄ has rank " +
                       std::to_string(dim));
}

struct Setup {
  ScatteringDiagram D;
  PLSection phi;
};

Setup completed(const Seed& seed, Int k) {
  require_valid(seed, true);
  ScatteringDiagram D = consistent_completion(initial_diagram(seed, k), k);
  PLSection phi = PLSection::from_seed(seed, D.lattices);
  return {std::move(D), std::move(phi)};
}

ScatteringDiagram load_diagram(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open diagram file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InputError("malformed diagram file " + path + ": " + e.what());
  }
  if (j.is_object() && j.contains("diagram")) j = j["diagram"];
  return diagram_from_json(j);
}

json header(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  j["rng_seed"] = c.rng_seed;
  j["order"] = c.order;
  return j;
}

std::string csv_comment(const RunConfig& c, const RatVector& Q) {
  std::ostringstream os;
  os << "# command=" << c.command << " rng_seed=" << c.rng_seed << " order=" << c.order << " Q=" << format_vector(Q)
     << "\n";
  return os.str();
}

// Rows of exponent coordinates followed by numerator and denominator.
std::string series_csv(const TruncatedSeries& s) {
  std::ostringstream os;
  for (Index i = 0; i < s.rank(); ++i) os << "n" << i + 1 << ",";
  os << "numerator,denominator\n";
  for (const auto& [key, c] : s.terms()) {
    IntVector e = s.base() + key;
    for (Index i = 0; i < e.size(); ++i) os << e(i) << ",";
    os << numer(c) << "," << denom(c) << "\n";
  }
  return os.str();
}

// r-coordinates, then the K₂ exponent in N coordinates, then numerator and denominator.
std::string expansion_csv(const ThetaExpansion& e, Index rbar, Index rank) {
  std::ostringstream os;
  for (Index i = 0; i < rbar; ++i) os << "r" << i + 1 << ",";
  for (Index i = 0; i < rank; ++i) os << "k" << i + 1 << ",";
  os << "numerator,denominator\n";
  for (const auto& [r, coeff] : e)
    for (const auto& [key, c] : coeff.terms()) {
      IntVector k = coeff.base() + key;
      for (Index i = 0; i < r.size(); ++i) os << r(i) << ",";
      for (Index i = 0; i < k.size(); ++i) os << k(i) << ",";
      os << numer(c) << "," << denom(c) << "\n";
    }
  return os.str();
}

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.out.empty()) {
    out << text;
    return;
  }
  namespace fs = std::filesystem;
  const fs::path target(c.out);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw InputError("cannot write " + tmp.string());
    f << text;
    if (!f) throw InputError("failed writing " + tmp.string());
  }
  fs::rename(tmp, target);
}

void emit_json(const RunConfig& c, const json& j, std::ostream& out) { emit(c, j.dump(2) + "\n", out); }

std::vector<IntVector> random_points(Rng& rng, std::size_t count) {
  std::vector<IntVector> pts;
  for (std::size_t j = 0; j < count; ++j) {
    IntVector v(2);
    v << rng.uniform(-2, 2), rng.uniform(-2, 2);
    pts.push_back(v);
  }
  return pts;
}

// Compares each α(p⃗; r) with the tropical count at a basepoint near the ray through r.
json tropical_check(const Setup& s, const std::vector<IntVector>& points, const ThetaExpansion& e, Int k, Rng& rng,
                    bool& pass) {
  json report;
  json mismatches = json::array();
  std::size_t compared = 0;
  for (const auto& [r, alpha] : e) {
    RatVector Q = r.isZero() ? generic_point(s.D, rng) : near_ray_point(s.D, s.phi, r, 1, rng);
    TruncatedSeries trop = tropical_alpha(s.D, s.phi, points, r, Q, k, rng);
    ++compared;
    if (!(trop == alpha)) {
      json m;
      m["r"] = int_json(r);
      m["Q"] = rat_json(Q);
      m["theta"] = series_to_json(alpha);
      m["tropical"] = series_to_json(trop);
      mismatches.push_back(m);
    }
  }
  pass = mismatches.empty();
  report["pass"] = pass;
  report["compared"] = compared;
  report["mismatches"] = mismatches;
  return report;
}

int cmd_scatter(const RunConfig& c, std::ostream& out) {
  ScatteringDiagram D;
  if (!c.diagram_file.empty()) {
    D = load_diagram(c.diagram_file);
  } else {
    Seed seed = load_seed(c.seed_file);
    D = completed(seed, c.order).D;
  }
  if (c.format == "svg") {
    emit(c, diagram_svg(D), out);
    return kExitOk;
  }
  if (c.format != "json") throw UsageError("scatter writes json or svg");
  json j = header(c);
  j["diagram"] = diagram_to_json(D);
  emit_json(c, j, out);
  return kExitOk;
}

int cmd_product(const RunConfig& c, std::ostream& out) {
  Seed seed = load_seed(c.seed_file);
  Setup s = completed(seed, c.order);
  if (c.points.empty()) throw UsageError("--points is required");
  require_dim(c.points, s.D.lattices.rbar);
  Rng rng(c.rng_seed);
  RatVector Q = generic_point(s.D, rng);
  ThetaExpansion e = theta_product_expand(s.D, s.phi, c.points, Q, c.order);
  if (c.format == "csv") {
    if (c.check_tropical) throw UsageError("--check-tropical reports in json");
    emit(c, csv_comment(c, Q) + expansion_csv(e, s.D.lattices.rbar, seed.rank), out);
    return kExitOk;
  }
  if (c.format != "json") throw UsageError("product writes json or csv");
  json j = header(c);
  j["Q"] = rat_json(Q);
  json pts = json::array();
  for (const IntVector& p : c.points) pts.push_back(int_json(p));
  j["points"] = pts;
  j["expansion"] = expansion_to_json(e);
  bool pass = true;
  if (c.check_tropical) j["tropical_check"] = tropical_check(s, c.points, e, c.order, rng, pass);
  emit_json(c, j, out);
  return pass ? kExitOk : kExitPropertyFailure;
}

int cmd_theta(const RunConfig& c, std::ostream& out) {
  if (c.points.size() != 1) return cmd_product(c, out);
  Seed seed = load_seed(c.seed_file);
  Setup s = completed(seed, c.order);
  require_dim(c.points, s.D.lattices.rbar);
  const IntVector& p = c.points[0];
  Rng rng(c.rng_seed);
  RatVector Q = generic_point(s.D, rng);
  TruncatedSeries theta = theta_function(s.D, s.phi, p, Q, c.order);
  if (c.format == "csv") {
    if (c.check_tropical) throw UsageError("--check-tropical reports in json");
    emit(c, csv_comment(c, Q) + series_csv(theta), out);
    return kExitOk;
  }
  if (c.format != "json") throw UsageError("theta writes json or csv");
  json j = header(c);
  j["Q"] = rat_json(Q);
  j["p"] = int_json(p);
  if (p.isZero())
    j["series"] = 1;
  else
    j["series"] = series_to_json(theta);
  bool pass = true;
  if (c.check_tropical) {
    ThetaExpansion e = theta_product_expand(s.D, s.phi, c.points, Q, c.order);
    j["tropical_check"] = tropical_check(s, c.points, e, c.order, rng, pass);
  }
  emit_json(c, j, out);
  return pass ? kExitOk : kExitPropertyFailure;
}

int cmd_tropical(const RunConfig& c, std::ostream& out) {
  Seed seed = load_seed(c.seed_file);
  Setup s = completed(seed, c.order);
  if (c.points.empty()) throw UsageError("--points is required");
  if (!c.target) throw UsageError("--target is required");
  const SeedLattices& lat = s.D.lattices;
  require_dim(c.points, lat.rbar);
  require_dim({*c.target}, lat.rbar);
  const IntVector& p = *c.target;
  Rng rng(c.rng_seed);
  RatVector Q = p.isZero() ? generic_point(s.D, rng) : near_ray_point(s.D, s.phi, p, 1, rng);
  TruncatedSeries trop = tropical_alpha(s.D, s.phi, c.points, p, Q, c.order, rng);
  TruncatedSeries theta = product_coefficient_at(s.D, s.phi, c.points, p, Q, c.order);

  std::vector<IntVector> nonzero;
  for (const IntVector& q : c.points)
    if (!q.isZero()) nonzero.push_back(q);
  std::vector<CurveGroup> groups;
  json degrees = json::array();
  if (!nonzero.empty())
    for (const DegreeSpec& spec : weight_vectors(seed, lat, nonzero, p, c.order)) {
      TropicalProblem P = disk_problem(seed, lat, spec, generic_translates(s.D, spec, Q, c.order, rng), Q);
      std::size_t wall_legs = P.legs.size() - nonzero.size() - 2;
      std::vector<TropicalCurve> disks = enumerate_disks(P, wall_legs, nonzero.size());
      json d;
      d["weights"] = spec.weights;
      d["a_w"] = rational_text(spec.a_w());
      d["aut_order"] = spec.aut_order();
      json list = json::array();
      for (const TropicalCurve& curve : disks) list.push_back(curve_to_json(curve, P));
      d["disks"] = list;
      degrees.push_back(d);
      groups.emplace_back(std::move(P), std::move(disks));
    }
  if (c.format == "svg") {
    emit(c, curves_svg(s.D, groups), out);
    return kExitOk;
  }
  if (c.format != "json") throw UsageError("tropical writes json or svg");
  json j = header(c);
  j["Q"] = rat_json(Q);
  json pts = json::array();
  for (const IntVector& q : c.points) pts.push_back(int_json(q));
  j["points"] = pts;
  j["target"] = int_json(p);
  j["alpha"] = series_to_json(trop);
  j["theta_coefficient"] = series_to_json(theta);
  j["agree"] = trop == theta;
  j["degrees"] = degrees;
  emit_json(c, j, out);
  return trop == theta ? kExitOk : kExitPropertyFailure;
}

json check_entry(const std::string& name, bool pass) {
  json j;
  j["name"] = name;
  j["pass"] = pass;
  return j;
}

json skipped(const std::string& name, const std::string& why) {
  json j;
  j["name"] = name;
  j["skipped"] = why;
  return j;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  Setup s;
  const bool from_file = !c.diagram_file.empty();
  if (from_file) {
    s.D = load_diagram(c.diagram_file);
    s.phi = PLSection::from_seed(s.D.seed, s.D.lattices);
  } else {
    s = completed(load_seed(c.seed_file), c.order);
  }
  const ScatteringDiagram& D = s.D;
  const Int k = D.order;
  const SeedLattices& lat = D.lattices;
  Rng rng(c.rng_seed);
  json checks = json::array();
  bool all = true;
  auto record = [&](json entry) {
    if (entry.contains("pass") && !entry["pass"].get<bool>()) all = false;
    checks.push_back(std::move(entry));
  };

  {
    ConsistencyReport r = consistency_check(D, k, c.trials, rng);
    json e = check_entry("consistency", r.consistent);
    e["loops"] = c.trials;
    if (r.failing_loop) e["failing_loop"] = path_json(*r.failing_loop);
    if (r.failing_probe) e["failing_probe"] = *r.failing_probe + 1;
    record(e);
  }

  if (from_file || k < 2) {
    record(skipped("truncation_stability", from_file ? "diagram read from file" : "order below 2"));
  } else {
    ScatteringDiagram lower = consistent_completion(initial_diagram(D.seed, k - 1), k - 1);
    bool same = diagrams_equivalent(truncated(D, k - 1), lower, k - 1, c.trials, rng);
    json e = check_entry("truncation_stability", same);
    e["walls_at_order"] = {{"k", D.walls.size()}, {"k-1", lower.walls.size()}};
    record(e);
  }

  if (lat.rbar != 2) {
    record(skipped("basepoint_transport", "needs rank N̄ = 2"));
  } else {
    json e = check_entry("basepoint_transport", true);
    e["trials"] = c.trials;
    for (int t = 0; t < c.trials; ++t) {
      IntVector p = random_points(rng, 1)[0];
      RatVector Q = generic_point(D, rng), Q2 = generic_point(D, rng);
      if (!basepoint_transport(D, s.phi, p, Q, Q2, k, rng)) {
        e["pass"] = false;
        e["counterexample"] = {{"p", int_json(p)}, {"Q", rat_json(Q)}, {"Q2", rat_json(Q2)}};
        break;
      }
    }
    record(e);
  }

  const int products = std::min(c.trials, 5);
  if (from_file || lat.rbar != 2 || D.seed.unfrozen.empty()) {
    record(skipped("mutation", from_file ? "diagram read from file" : "needs rank N̄ = 2 and an unfrozen index"));
  } else if (lat.K2.cols() == 0) {
    json e = check_entry("mutation_agreement", true);
    for (Index i : D.seed.unfrozen)
      for (int t = 0; t < products; ++t) {
        std::vector<IntVector> pts = random_points(rng, 2);
        if (!structure_constant_agreement(D.seed, i, pts, k, rng).agree) {
          e["pass"] = false;
          json ce = json::array();
          for (const IntVector& q : pts) ce.push_back(int_json(q));
          e["counterexample"] = {{"index", i + 1}, {"points", ce}};
        }
      }
    record(e);
  } else {
    json e = check_entry("exponent_effectiveness", true);
    std::size_t exponents = 0;
    for (int t = 0; t < products; ++t) {
      std::vector<IntVector> pts = random_points(rng, 2);
      EffectivenessReport r = exponent_effectiveness(D.seed, theta_product_expand(D, s.phi, pts, generic_point(D, rng), k));
      exponents += r.exponents;
      if (!r.ok()) {
        e["pass"] = false;
        e["counterexample"] = int_json(r.failures.front());
      }
    }
    e["exponents"] = exponents;
    record(e);
  }

  json j = header(c);
  j["order"] = k;
  j["checks"] = checks;
  j["pass"] = all;
  emit_json(c, j, out);
  return all ? kExitOk : kExitPropertyFailure;
}

int cmd_mutate(const RunConfig& c, std::ostream& out) {
  Seed seed = load_seed(c.seed_file);
  require_valid(seed, true);
  const Index i = c.index - 1;
  Seed mu = mutate_seed(seed, i);
  json j = header(c);
  j["index"] = c.index;
  j["seed"] = seed_to_json(mu);
  bool pass = true;
  SeedLattices lat = seed_lattices(seed);
  if (lat.rbar == 2 && lat.K2.cols() == 0) {
    Rng rng(c.rng_seed);
    std::size_t compared = 0;
    for (int t = 0; t < std::min(c.trials, 5); ++t) {
      MutationAgreement a = structure_constant_agreement(seed, i, random_points(rng, 2), c.order, rng);
      compared += a.compared;
      pass = pass && a.agree;
    }
    j["agreement"] = {{"pass", pass}, {"compared", compared}};
  }
  emit_json(c, j, out);
  return pass ? kExitOk : kExitPropertyFailure;
}

}  // namespace

std::vector<IntVector> parse_points(const std::string& text) {
  std::vector<IntVector> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';'))
    if (item.find_first_not_of(" \t") != std::string::npos) out.push_back(parse_vector(item));
  return out;
}

int run_command(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.order < 1) throw UsageError("--order must be at least 1");
    if (config.trials < 1) throw UsageError("--trials must be at least 1");
    const bool needs_seed = !(config.command == "scatter" || config.command == "verify") || config.diagram_file.empty();
    if (needs_seed && config.seed_file.empty()) throw UsageError("--seed-file is required");
    if (config.command == "scatter") return cmd_scatter(config, out);
    if (config.command == "theta") return cmd_theta(config, out);
    if (config.command == "product") return cmd_product(config, out);
    if (config.command == "tropical") return cmd_tropical(config, out);
    if (config.command == "verify") return cmd_verify(config, out);
    if (config.command == "mutate") return cmd_mutate(config, out);
    throw UsageError("unknown command " + config.command);
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitPropertyFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scattering diagrams, theta functions and tropical counts for cluster seeds"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig config;
  std::string points, target;
  app.add_option("--seed-file", config.seed_file, "seed JSON");
  app.add_option("--diagram-file", config.diagram_file, "diagram JSON (scatter renders it, verify checks it)");
  app.add_option("--order", config.order, "truncation order k");
  app.add_option("--points", points, "points of N̄ as 'x,y;x,y'");
  app.add_option("--target", target, "the point p of α(p⃗; p) for tropical");
  app.add_option("--out", config.out, "output file (default: stdout)");
  app.add_option("--format", config.format, "json, csv or svg")->check(CLI::IsMember({"json", "csv", "svg"}));
  app.add_option("--rng-seed", config.rng_seed, "seed for every generic choice");
  app.add_option("--trials", config.trials, "random trials per check");
  app.add_option("--index", config.index, "mutation index, 1-based");
  app.add_flag("--check-tropical", config.check_tropical, "compare with tropical counts");
  const std::pair<const char*, const char*> commands[] = {
      {"scatter", "complete the initial diagram to order k"},
      {"theta", "theta function at a generic basepoint"},
      {"product", "expand a product of theta functions in the theta basis"},
      {"tropical", "structure constant from tropical disk counts"},
      {"verify", "consistency, truncation, transport and mutation checks"},
      {"mutate", "mutate the seed at --index"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, r;
    int code = app.exit(e, o, r);
    out << o.str();
    err << r.str();
    return code == 0 ? kExitOk : kExitInputError;
  }
  config.command = app.get_subcommands().front()->get_name();
  try {
    config.points = parse_points(points);
    if (!target.empty()) config.target = parse_vector(target);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return run_command(config, out, err);
}

}  // namespace ct
