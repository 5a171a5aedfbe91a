// One pass/fail line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "ct/cli.hpp"
#include "ct/mutation.hpp"
#include "ct/scattering.hpp"
#include "ct/tropical.hpp"
#include "seeds.hpp"

using namespace ct;
using namespace testing_seeds;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Setup {
  ScatteringDiagram D;
  PLSection phi;
};

Setup completed(const Seed& s, Int k) {
  auto D = consistent_completion(initial_diagram(s, k), k);
  return {D, PLSection::from_seed(s, D.lattices)};
}

IntVector random_point(Rng& rng, Int bound = 2) { return vec({rng.uniform(-bound, bound), rng.uniform(-bound, bound)}); }

std::string str(std::size_t n) { return std::to_string(n); }

Outcome a2_scattering() {
  const Int k = 8;
  auto D = consistent_completion(initial_diagram(a2(), k), k);
  std::size_t added = 0;
  bool function_ok = false;
  for (const Wall& w : D.walls) {
    if (w.incoming) continue;
    ++added;
    function_ok = !w.is_line() && w.function.n == vec({1, 1}) &&
                  w.function.coefficients == std::vector<Rational>{Rational(1)};
  }
  Rng rng(1);
  bool consistent = consistency_check(D, k, 100, rng).consistent;
  return {added == 1 && function_ok && consistent,
          "added walls " + str(added) + ", function 1 + z^(e1+e2) " + (function_ok ? "yes" : "no") +
              ", 100 loops " + (consistent ? "consistent" : "inconsistent")};
}

Outcome kronecker_consistency() {
  auto D6 = consistent_completion(initial_diagram(kronecker(), 6), 6);
  auto D4 = consistent_completion(initial_diagram(kronecker(), 4), 4);
  Rng rng(2);
  bool consistent = consistency_check(D6, 6, 50, rng).consistent;
  bool monotone = diagrams_equivalent(truncated(D6, 4), D4, 4, 50, rng);
  return {consistent && monotone, "walls at k=6 " + str(D6.walls.size()) + ", consistent " +
                                      (consistent ? "yes" : "no") + ", k=6 truncated to 4 equals k=4 " +
                                      (monotone ? "yes" : "no")};
}

Outcome tropical_equals_theta() {
  const Int k = 4;
  Rng rng(3);
  std::size_t seeds = 0, pairs = 0, mismatches = 0;
  for (const Seed& s : {a2(), b2(), kronecker(), a2_framed()}) {
    auto [D, phi] = completed(s, k);
    std::size_t here = 0;
    for (int trial = 0; trial < 6; ++trial) {
      std::vector<IntVector> pts;
      for (int i = 0; i <= trial % 3; ++i) pts.push_back(random_point(rng));
      auto e = theta_product_expand(D, phi, pts, generic_point(D, rng), k);
      for (const auto& [r, alpha] : e) {
        RatVector Q = r.isZero() ? generic_point(D, rng) : near_ray_point(D, phi, r, 1, rng);
        if (!(tropical_alpha(D, phi, pts, r, Q, k, rng) == alpha)) ++mismatches;
        ++here;
      }
    }
    pairs += here;
    if (here >= 5) ++seeds;
  }
  return {seeds >= 3 && mismatches == 0,
          str(seeds) + " seeds, " + str(pairs) + " (p, target) pairs with s in {1,2,3}, k=4, mismatches " +
              str(mismatches)};
}

Outcome multiplicity_formula() {
  Rng rng(4);
  std::size_t disks = 0, bad_lie = 0, bad_sink = 0;
  for (const Seed& s : {a2(), b2(), kronecker()}) {
    const Int k = 3;
    auto [D, phi] = completed(s, k);
    for (int trial = 0; trial < 8; ++trial) {
      std::vector<IntVector> pts;
      while (pts.size() <= std::size_t(trial % 2)) {
        IntVector p = random_point(rng);
        if (!p.isZero()) pts.push_back(p);
      }
      auto e = theta_product_expand(D, phi, pts, generic_point(D, rng), k);
      for (const auto& [r, alpha] : e) {
        if (r.isZero()) continue;
        RatVector Q = near_ray_point(D, phi, r, 1, rng);
        for (const DegreeSpec& spec : weight_vectors(s, D.lattices, pts, r, k)) {
          std::size_t wall_legs = 0;
          for (const auto& w : spec.weights) wall_legs += w.size();
          auto P = disk_problem(s, D.lattices, spec, generic_translates(D, spec, Q, k, rng), Q);
          for (const TropicalCurve& c : enumerate_disks(P, wall_legs, pts.size())) {
            ++disks;
            Int m = mult_gw(c, P, c.root);
            auto lie = mult_lie(c, s, D.lattices, phi, spec);
            if (lie.k != m || lie.coefficient != spec.a_w() * Rational(m) || lie.exponent != spec.n_out(s, phi))
              ++bad_lie;
            for (int v = 0; v < static_cast<int>(c.positions.size()); ++v)
              if (mult_gw(c, P, v) != m) ++bad_sink;
          }
        }
      }
    }
  }
  // single trivalent vertex: w1 w2 |det(u1, u2)|
  std::size_t vertex_cases = 0, bad_vertex = 0;
  for (int trial = 0; trial < 40; ++trial) {
    IntVector u1 = random_point(rng, 3), u2 = random_point(rng, 3);
    if (u1.isZero() || u2.isZero() || lattice_index(u1) != 1 || lattice_index(u2) != 1 || cross2(u1, u2) == 0)
      continue;
    Int w1 = rng.uniform(1, 3), w2 = rng.uniform(1, 3);
    TropicalProblem P;
    auto leg = [&](const IntVector& u, Int w) {
      TropicalLeg l;
      l.delta = u * w;
      l.constraint = {rng.rational_vector(2, -2, 2), {u}, w};
      return l;
    };
    TropicalLeg out;
    out.delta = -(u1 * w1 + u2 * w2);
    out.contracted = true;
    out.constraint = {RatVector::Zero(2), {vec({1, 0}), vec({0, 1})}, 1};
    P.legs = {leg(u1, w1), leg(u2, w2), out};
    P.special = 2;
    auto curves = enumerate_rigid(P);
    ++vertex_cases;
    if (curves.size() != 1 || mult_gw(curves[0], P, curves[0].root) != w1 * w2 * std::abs(cross2(u1, u2)))
      ++bad_vertex;
  }
  bool pass = disks > 0 && bad_lie == 0 && bad_sink == 0 && vertex_cases > 0 && bad_vertex == 0;
  return {pass, str(disks) + " rigid disks, lie formula failures " + str(bad_lie) + ", sink dependence " +
                    str(bad_sink) + ", single vertex " + str(vertex_cases - bad_vertex) + "/" + str(vertex_cases)};
}

Outcome kappa_postconditions() {
  std::vector<Seed> seeds = {torus_p2(), a2_framed(), make_seed({{0, 1, -1}, {-1, 0, 1}, {1, -1, 0}}, {0, 1, 2}),
                             make_seed({{0, 2, -2}, {-2, 0, 2}, {2, -2, 0}}, {0, 1, 2}),
                             make_seed({{0, 0, 1}, {0, 0, 0}, {-2, -1, 0}}, {0, 2}, {Rational(1), Rational(2)})};
  Rng rng(5);
  std::size_t vectors = 0, bad = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Seed& s = seeds[std::size_t(trial) % seeds.size()];
    auto basis = kernel_K2(s);
    IntVector a = IntVector::Zero(s.rank), b = IntVector::Zero(s.rank);
    for (const IntVector& v : basis) {
      a += rng.uniform(-4, 4) * v;
      b += rng.uniform(-4, 4) * v;
    }
    ++vectors;
    Int c = rng.uniform(-3, 3);
    if (kappa_profile(s, a) != a || kappa_profile(s, IntVector(a + c * b)) != IntVector(kappa_profile(s, a) + c * kappa_profile(s, b)))
      ++bad;
  }
  std::size_t degrees = 0, bad_degree = 0;
  for (const Seed& s : {torus_p2(), a2_framed()}) {
    const Int k = 3;
    auto [D, phi] = completed(s, k);
    std::vector<IntVector> rays;
    for (Index f : s.frozen()) rays.push_back(D.lattices.P2.col(f));
    for (int trial = 0; trial < 12; ++trial) {
      std::vector<IntVector> pts;
      for (int i = 0; i <= trial % 3; ++i)
        pts.push_back(IntVector(rays[std::size_t(rng.uniform(0, Int(rays.size()) - 1))] * rng.uniform(1, 2)));
      auto e = theta_product_expand(D, phi, pts, generic_point(D, rng), k);
      for (const auto& [p, alpha] : e) {
        bool on_ray = p.isZero();
        for (const IntVector& ray : rays) on_ray = on_ray || (cross2(p, ray) == 0 && p.dot(ray) > 0);
        if (!on_ray) continue;
        for (const DegreeSpec& spec : weight_vectors(s, D.lattices, pts, p, k)) {
          IntVector r = spec.n_out(s, phi) - phi(p);
          ++degrees;
          if (degree_curve_class(s, D.lattices, spec, p) != kappa_profile(s, r)) ++bad_degree;
        }
      }
    }
  }
  return {bad == 0 && bad_degree == 0 && degrees > 0,
          str(vectors) + " K2 vectors over 5 seeds, failures " + str(bad) + "; " + str(degrees) +
              " degree classes, mismatches " + str(bad_degree)};
}

Outcome basepoint_transport_identity() {
  const Int k = 5;
  Rng rng(6);
  std::size_t triples = 0, bad = 0;
  for (const Seed& s : {a2(), b2(), kronecker(), a2_framed()}) {
    auto [D, phi] = completed(s, k);
    for (int trial = 0; trial < 20; ++trial) {
      IntVector p = random_point(rng);
      RatVector Q = generic_point(D, rng), Q2 = generic_point(D, rng);
      ++triples;
      if (!basepoint_transport(D, phi, p, Q, Q2, k, rng)) ++bad;
    }
  }
  return {bad == 0, str(triples) + " triples over 4 seeds at k=5, failures " + str(bad)};
}

Outcome algebra_axioms() {
  const Int k = 4;
  Rng rng(7);
  std::size_t triples = 0, bad = 0;
  for (const Seed& s : {a2(), kronecker(), a2_framed()}) {
    auto [D, phi] = completed(s, k);
    RatVector Q = generic_point(D, rng);
    for (int trial = 0; trial < 5; ++trial) {
      IntVector p = random_point(rng), q = random_point(rng), r = random_point(rng, 1);
      ++triples;
      auto pq = theta_product_expand(D, phi, {p, q}, Q, k);
      bool ok = expansion_to_json(pq) == expansion_to_json(theta_product_expand(D, phi, {q, p}, Q, k));
      // (ϑ_p ϑ_q) ϑ_r expanded through the basis equals the triple product
      auto pqr = theta_product_expand(D, phi, {p, q, r}, Q, k);
      ThetaExpansion assoc;
      for (const auto& [t, a] : pq)
        for (const auto& [u, b] : theta_product_expand(D, phi, {t, r}, Q, k)) {
          TruncatedSeries term = a * b;
          auto it = assoc.find(u);
          if (it == assoc.end())
            assoc.emplace(u, term);
          else
            it->second += term;
        }
      for (auto it = assoc.begin(); it != assoc.end();)
        it = it->second.is_zero() ? assoc.erase(it) : std::next(it);
      ok = ok && expansion_to_json(assoc) == expansion_to_json(pqr);
      ok = ok && expansion_to_json(theta_product_expand(D, phi, {p, vec({0, 0})}, Q, k)) ==
                     expansion_to_json(theta_product_expand(D, phi, {p}, Q, k));
      ok = ok && trace_s(D, phi, {p, q, r}, Q, k) == trace_s(D, phi, {r, p, q}, Q, k) &&
           trace_s(D, phi, {p, q}, Q, k) == trace_s(D, phi, {q, p}, Q, k);
      if (!ok) ++bad;
    }
  }
  return {bad == 0, str(triples) + " triples over 3 seeds at k=4, failures " + str(bad)};
}

Outcome mutation_invariance() {
  const Int k = 4;
  std::size_t compared = 0;
  bool agree = true;
  Seed s = a2();
  for (Index i : s.unfrozen) {
    Rng draws(8);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<IntVector> pts = {random_point(draws), random_point(draws)};
      Rng rng(9);
      auto a = structure_constant_agreement(s, i, pts, k, rng);
      agree = agree && a.agree;
      compared += a.compared;
    }
  }
  std::size_t exponents = 0, failures = 0;
  bool in_k2 = true;
  Seed framed = a2_framed();
  auto [D, phi] = completed(framed, k);
  Rng rng(10);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<IntVector> pts = {random_point(rng), random_point(rng)};
    auto e = theta_product_expand(D, phi, pts, generic_point(D, rng), k);
    for (const auto& [r, c] : e)
      for (const auto& [key, coeff] : c.terms()) in_k2 = in_k2 && IntVector(D.lattices.P2 * IntVector(c.base() + key)).isZero();
    auto report = exponent_effectiveness(framed, e);
    exponents += report.exponents;
    failures += report.failures.size();
  }
  return {agree && compared > 0 && in_k2 && failures == 0 && exponents > 0,
          "A2 at both indices: " + str(compared) + " constants compared, " + (agree ? "agree" : "disagree") +
              "; framed A2: " + str(exponents) + " exponents, in K2 " + (in_k2 ? "yes" : "no") +
              ", effectiveness failures " + str(failures)};
}

Outcome gram_nondegeneracy() {
  std::vector<IntVector> box = {vec({1, 0}), vec({0, 1}), vec({0, 0}), vec({0, -1}), vec({-1, 0}),
                                vec({1, 1}), vec({-1, -1})};
  Rng rng(11);
  bool ok = true;
  std::string detail;
  for (const Seed& s : {torus_p2(), a2()}) {
    const Int k = 3;
    auto [D, phi] = completed(s, k);
    bool full = gram_full_rank_mod_m(gram_matrix(D, phi, box, generic_point(D, rng), k), rng);
    ok = ok && full;
    detail += std::string(detail.empty() ? "" : ", ") + (s.unfrozen.empty() ? "torus " : "A2 ") +
              (full ? "full rank" : "degenerate");
  }
  return {ok, detail + " on a symmetric box of " + str(box.size()) + " points"};
}

Outcome determinism() {
  const std::string data = CT_DATA_DIR;
  std::vector<std::vector<std::string>> commands = {
      {"scatter", "--seed-file", data + "/kronecker.json", "--order", "5"},
      {"scatter", "--seed-file", data + "/a2.json", "--order", "5", "--format", "svg"},
      {"theta", "--seed-file", data + "/b2.json", "--points", "1,-1", "--order", "4"},
      {"product", "--seed-file", data + "/a2_framed.json", "--points", "1,0;0,1", "--order", "3", "--format", "csv"},
      {"tropical", "--seed-file", data + "/a2.json", "--points", "1,0;0,1", "--target", "1,1", "--format", "svg"},
      {"verify", "--seed-file", data + "/a2_framed.json", "--order", "3"},
      {"mutate", "--seed-file", data + "/kronecker.json", "--index", "2"}};
  std::size_t identical = 0;
  for (auto args : commands) {
    args.insert(args.begin(), "ct_cli");
    args.insert(args.end(), {"--rng-seed", "2024"});
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::string outputs[2];
    int codes[2];
    for (int run = 0; run < 2; ++run) {
      std::ostringstream out, err;
      codes[run] = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
      outputs[run] = out.str();
    }
    if (codes[0] == kExitOk && codes[1] == kExitOk && outputs[0] == outputs[1] && !outputs[0].empty()) ++identical;
  }
  return {identical == commands.size(), str(identical) + "/" + str(commands.size()) + " commands byte-identical"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    const char* tolerance;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> criteria = {
      {"A2 scattering at k=8", "exact, < 1 s", a2_scattering},
      {"Kronecker consistency and truncation at k=6", "exact, < 30 s", kronecker_consistency},
      {"tropical count equals theta expansion", "exact mod m^(k+1), < 5 min", tropical_equals_theta},
      {"multiplicity formula", "exact", multiplicity_formula},
      {"kappa postconditions", "exact", kappa_postconditions},
      {"basepoint transport", "exact mod m^(k+1)", basepoint_transport_identity},
      {"algebra axioms", "exact mod m^(k+1)", algebra_axioms},
      {"mutation invariance", "exact mod m^(k+1)", mutation_invariance},
      {"Gram nondegeneracy", "exact mod m", gram_nondegeneracy},
      {"determinism", "byte-identical", determinism},
  };
  const double limits[] = {1, 30, 300, 0, 0, 0, 0, 0, 0, 0};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (limits[i] > 0 && seconds >= limits[i]) {
      o.pass = false;
      o.detail += ", over the time limit";
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %2zu %s (tolerance: %s, %.2f s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                criteria[i].tolerance, seconds, o.detail.c_str());
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - std::size_t(failed), criteria.size());
  return failed == 0 ? 0 : 1;
}
