#include "ct/theta.hpp"
#include "doctest.h"
#include "seeds.hpp"

using namespace ct;
using namespace testing_seeds;

namespace {

struct Setup {
  ScatteringDiagram D;
  PLSection phi;
};

Setup completed(const Seed& s, Int k) {
  auto D = consistent_completion(initial_diagram(s, k), k);
  return {D, PLSection::from_seed(s, D.lattices)};
}

bool in_K2(const SeedLattices& lat, const IntVector& v) { return (lat.P2 * v).isZero(); }

}  // namespace

TEST_CASE("piecewise linear section") {
  auto t = torus_p2();
  auto lat = seed_lattices(t);
  auto phi = PLSection::from_seed(t, lat);
  CHECK_FALSE(phi.is_linear());
  CHECK(phi(vec({1, 0})) == vec({0, 1, 0}));
  CHECK(phi(vec({0, -1})) == vec({1, 0, 0}));
  CHECK(phi(vec({-1, 0})) == vec({1, 0, 1}));
  CHECK(phi(vec({2, 1})) == vec({0, 3, 1}));
  CHECK(phi(vec({0, 0})) == vec({0, 0, 0}));
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    IntVector y = vec({rng.uniform(-9, 9), rng.uniform(-9, 9)});
    IntVector x = phi(y);
    CHECK(lat.P2 * x == y);
    CHECK(nonnegative(x));
  }
  auto a = a2();
  auto la = seed_lattices(a);
  auto lin = PLSection::from_seed(a, la);
  CHECK(lin.is_linear());
  CHECK(la.P2 * lin(vec({3, -2})) == vec({3, -2}));
}

TEST_CASE("theta functions of the torus are monomials") {
  auto t = torus_p2();
  auto D = initial_diagram(t, 4);
  auto phi = PLSection::from_seed(t, D.lattices);
  RatVector Q = rvec({make_rational(1, 3), make_rational(2, 7)});
  for (auto p : {vec({1, 0}), vec({-2, 1}), vec({0, -3})}) {
    auto th = theta_function(D, phi, p, Q, 4);
    CHECK(th == TruncatedSeries::monomial(phi(p), 4, Rational(1), IntVector::Zero(3)));
  }
  CHECK(theta_function(D, phi, vec({0, 0}), Q, 4) == TruncatedSeries::one(3, 4));
}

TEST_CASE("A2 theta function across the e1 wall") {
  auto [D, phi] = completed(a2(), 4);
  IntVector p = vec({1, 0});  // π₂(e2)
  REQUIRE(phi(p) == vec({0, 1}));
  // Above the outgoing ray: the straight line, and the line bending once on the vertical
  // wall of e1.
  TruncatedSeries above(vec({0, 1}), 4);
  above.add(vec({0, 0}), Rational(1));
  above.add(vec({1, 0}), Rational(1));
  CHECK(theta_function(D, phi, p, rvec({make_rational(-2, 7), Rational(1)}), 4) == above);
  // Below the outgoing ray a second line reaches Q: it bends on the e1 wall below the
  // horizontal axis and again on the e2 wall.
  TruncatedSeries below(vec({0, 1}), 4);
  below.add(vec({0, 0}), Rational(1));
  below.add(vec({1, 0}), Rational(1));
  below.add(vec({1, 1}), Rational(1));
  CHECK(theta_function(D, phi, p, rvec({make_rational(-3, 1), make_rational(1, 5)}), 4) == below);
  // In the chamber containing p no line bends.
  CHECK(theta_function(D, phi, p, rvec({Rational(2), make_rational(1, 3)}), 4) ==
        TruncatedSeries::monomial(vec({0, 1}), 4, Rational(1), vec({0, 0})));

  auto lines = enumerate_broken_lines(D, phi, p, rvec({make_rational(-2, 7), Rational(1)}), 4);
  REQUIRE(lines.size() == 2);
  std::size_t bent = lines[0].bends.empty() ? 1 : 0;
  REQUIRE(lines[bent].bends.size() == 1);
  CHECK(lines[bent].final_exponent == vec({1, 1}));
  CHECK(lines[bent].final_coefficient == Rational(1));
  CHECK(lines[bent].bends[0].point(0) == Rational(0));
}

TEST_CASE("basepoint transport") {
  Rng rng(0x7e7a);
  for (auto s : {a2(), kronecker(), b2(), a2_framed()}) {
    const Int k = 4;
    auto [D, phi] = completed(s, k);
    for (int trial = 0; trial < 6; ++trial) {
      IntVector p = vec({rng.uniform(-2, 2), rng.uniform(-2, 2)});
      RatVector Q = generic_point(D, rng);
      RatVector Q2 = generic_point(D, rng);
      CHECK(basepoint_transport(D, phi, p, Q, Q2, k, rng));
    }
  }
}

TEST_CASE("basepoint transport fails on an inconsistent diagram") {
  // Dropping the outgoing ray of A₂ breaks consistency, so transport across it must fail.
  const Int k = 3;
  auto [D, phi] = completed(a2(), k);
  auto broken = D;
  broken.walls.erase(std::remove_if(broken.walls.begin(), broken.walls.end(),
                                    [](const Wall& w) { return !w.is_line(); }),
                     broken.walls.end());
  REQUIRE(broken.walls.size() == 2);
  Rng rng(5);
  RatVector Q = rvec({make_rational(-2, 7), Rational(1)});
  RatVector Q2 = rvec({make_rational(-3, 1), make_rational(1, 5)});
  CHECK(basepoint_transport(D, phi, vec({1, 0}), Q, Q2, k, rng));
  CHECK_FALSE(basepoint_transport(broken, phi, vec({1, 0}), Q, Q2, k, rng));
}

TEST_CASE("theta products on the torus") {
  auto t = torus_p2();
  auto D = initial_diagram(t, 3);
  auto phi = PLSection::from_seed(t, D.lattices);
  RatVector Q = rvec({make_rational(1, 3), make_rational(2, 7)});
  auto e = theta_product_expand(D, phi, {vec({1, 0}), vec({-1, 0})}, Q, 3);
  REQUIRE(e.size() == 1);
  REQUIRE(e.count(vec({0, 0})));
  // ϑ_{(1,0)}ϑ_{(-1,0)} = z^{e1+e2+e3}, the class spanning K₂.
  CHECK(e.at(vec({0, 0})).coefficient_of_exponent(vec({1, 1, 1})) == Rational(1));
  CHECK(e.at(vec({0, 0})).size() == 1);

  auto same_cone = theta_product_expand(D, phi, {vec({1, 0}), vec({0, 1})}, Q, 3);
  REQUIRE(same_cone.size() == 1);
  CHECK(same_cone.begin()->first == vec({1, 1}));
  CHECK(same_cone.begin()->second.coefficient_of_exponent(IntVector::Zero(3)) == Rational(1));

  CHECK(trace_s(D, phi, {vec({0, -1}), vec({0, 1})}, Q, 3).coefficient_of_exponent(vec({1, 1, 1})) ==
        Rational(1));
  CHECK(trace_s(D, phi, {vec({0, -1}), vec({1, 1})}, Q, 3).is_zero());
}

TEST_CASE("torus Gram matrix pairs p with -p") {
  auto t = torus_p2();
  auto D = initial_diagram(t, 2);
  auto phi = PLSection::from_seed(t, D.lattices);
  RatVector Q = rvec({make_rational(1, 3), make_rational(2, 7)});
  std::vector<IntVector> box = {vec({1, 0}), vec({0, 1}), vec({0, 0}), vec({0, -1}), vec({-1, 0})};
  auto G = gram_matrix(D, phi, box, Q, 2);
  for (std::size_t i = 0; i < box.size(); ++i)
    for (std::size_t j = 0; j < box.size(); ++j) CHECK(G[i][j].is_zero() == (i + j != box.size() - 1));
  Rng rng(3);
  CHECK(gram_full_rank_mod_m(G, rng));
}

TEST_CASE("theta products in the theta basis") {
  Rng rng(0xab);
  const Int k = 3;
  for (auto s : {a2(), a2_framed(), kronecker()}) {
    auto [D, phi] = completed(s, k);
    RatVector Q = generic_point(D, rng);
    for (int trial = 0; trial < 4; ++trial) {
      IntVector p = vec({rng.uniform(-2, 2), rng.uniform(-2, 2)});
      IntVector q = vec({rng.uniform(-2, 2), rng.uniform(-2, 2)});
      IntVector r = vec({rng.uniform(-1, 1), rng.uniform(-1, 1)});
      auto pq = theta_product_expand(D, phi, {p, q}, Q, k);
      auto qp = theta_product_expand(D, phi, {q, p}, Q, k);
      CHECK(expansion_to_json(pq) == expansion_to_json(qp));
      for (const auto& [rr, coeff] : pq)
        for (const auto& [exp, c] : coeff.terms()) CHECK(in_K2(D.lattices, IntVector(coeff.base() + exp)));

      // ϑ₀ acts as the identity and ϑ_p alone expands to itself.
      auto single = theta_product_expand(D, phi, {p}, Q, k);
      REQUIRE(single.size() == 1);
      CHECK(single.begin()->first == p);
      CHECK(expansion_to_json(theta_product_expand(D, phi, {p, vec({0, 0})}, Q, k)) == expansion_to_json(single));

      // The expansion does not depend on the basepoint.
      RatVector Q2 = generic_point(D, rng);
      CHECK(expansion_to_json(theta_product_expand(D, phi, {p, q}, Q2, k)) == expansion_to_json(pq));

      // Triple products are symmetric.
      auto a = theta_product_expand(D, phi, {p, q, r}, Q, k);
      auto b = theta_product_expand(D, phi, {r, p, q}, Q, k);
      CHECK(expansion_to_json(a) == expansion_to_json(b));

      // Trace symmetry.
      auto t1 = trace_s(D, phi, {p, q}, Q, k);
      auto t2 = trace_s(D, phi, {q, p}, Q, k);
      CHECK(t1 == t2);
    }
  }
}

TEST_CASE("A2 with frozen boundary has K2 coefficients") {
  const Int k = 3;
  auto [D, phi] = completed(a2_framed(), k);
  Rng rng(9);
  RatVector Q = generic_point(D, rng);
  auto e = theta_product_expand(D, phi, {vec({1, 0}), vec({-1, 0})}, Q, k);
  REQUIRE(e.count(vec({0, 0})));
  const auto& alpha0 = e.at(vec({0, 0}));
  bool nonconstant = false;
  for (const auto& [key, c] : alpha0.terms())
    if (!IntVector(alpha0.base() + key).isZero()) nonconstant = true;
  CHECK(nonconstant);
}

TEST_CASE("product coefficient near the ray equals the structure constant") {
  Rng rng(21);
  const Int k = 3;
  for (auto s : {a2(), a2_framed()}) {
    auto [D, phi] = completed(s, k);
    for (int trial = 0; trial < 3; ++trial) {
      IntVector p = vec({rng.uniform(-1, 1), rng.uniform(-1, 1)});
      IntVector q = vec({rng.uniform(-1, 1), rng.uniform(-1, 1)});
      auto e = theta_product_expand(D, phi, {p, q}, generic_point(D, rng), k);
      for (const auto& [r, alpha] : e) {
        if (r.isZero()) continue;
        for (int side : {1, -1}) {
          RatVector Qr = near_ray_point(D, phi, r, side, rng);
          auto near = product_coefficient_at(D, phi, {p, q}, r, Qr, k);
          CHECK(near == alpha);
        }
      }
    }
  }
}

TEST_CASE("finiteness report") {
  auto t = torus_p2();
  auto D = initial_diagram(t, 3);
  auto phi = PLSection::from_seed(t, D.lattices);
  auto rep = finiteness_report(D, phi, {vec({1, 0}), vec({-1, 0})}, rvec({make_rational(1, 3), make_rational(2, 7)}), 3);
  CHECK(rep.stabilized);
  CHECK(rep.support == std::vector<IntVector>{vec({0, 0})});
}
