#include <random>

#include "ct/seed.hpp"
#include "doctest.h"

using namespace ct;

namespace {

Seed make_seed(std::initializer_list<std::initializer_list<Int>> rows, std::vector<Index> unfrozen,
               std::vector<Rational> d = {}) {
  Seed s;
  s.rank = static_cast<Index>(rows.size());
  s.B = IntMatrix(s.rank, s.rank);
  Index r = 0;
  for (auto row : rows) {
    Index c = 0;
    for (Int x : row) s.B(r, c++) = x;
    ++r;
  }
  s.unfrozen = unfrozen;
  s.d = d.empty() ? std::vector<Rational>(unfrozen.size(), Rational(1)) : d;
  return s;
}

IntVector vec(std::initializer_list<Int> xs) {
  IntVector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (Int x : xs) v(i++) = x;
  return v;
}

}  // namespace

TEST_CASE("validate_seed on small examples") {
  CHECK(validate_seed(make_seed({{0, 1}, {-1, 0}}, {0, 1})).empty());

  auto zero = validate_seed(make_seed({{0, 0}, {0, 0}}, {0}));
  REQUIRE(!zero.empty());
  CHECK(zero[0] == "π₂(e1) = 0");

  // Unfrozen block [[0,1],[-2,0]] plus a frozen index. B(1,2)/d1 = -B(2,1)/d2 forces d2 = 2 d1.
  auto s = make_seed({{0, 1, 0}, {-2, 0, 1}, {0, -1, 0}}, {0, 1});
  auto report = validate_seed(s);
  CHECK(std::find(report.begin(), report.end(), "not skew-symmetrizable with given d at (e1,e2)") !=
        report.end());
  s.d = {Rational(1), Rational(2)};
  report = validate_seed(s);
  CHECK(std::none_of(report.begin(), report.end(),
                     [](const std::string& l) { return l.find("skew") != std::string::npos; }));
  s.d = {Rational(2), Rational(1)};
  CHECK(!validate_seed(s).empty());
}

TEST_CASE("validate_seed detects frozen defects and non-saturation") {
  // Kronecker form: image 2Z^2 is not saturated.
  auto kron = validate_seed(make_seed({{0, 2}, {-2, 0}}, {0, 1}));
  CHECK(kron == std::vector<std::string>{"π₂(N) is not saturated in M"});
  // frozen images equal
  auto s = make_seed({{0, 1, 1}, {-1, 0, 0}, {-1, 0, 0}}, {0});
  auto report = validate_seed(s);
  CHECK(std::find(report.begin(), report.end(), "π₂(e2) = π₂(e3)") != report.end());
  CHECK_THROWS_AS(require_valid(s), InputError);
}

TEST_CASE("malformed dimensions are input errors") {
  Seed s = make_seed({{0, 1}, {-1, 0}}, {0, 1});
  s.B = IntMatrix::Zero(2, 3);
  CHECK_THROWS_AS(validate_seed(s), InputError);
  s = make_seed({{0, 1}, {-1, 0}}, {0, 1});
  s.d.pop_back();
  CHECK_THROWS_AS(validate_seed(s), InputError);
  CHECK_THROWS_AS(seed_from_json(nlohmann::json::parse(R"({"rank":2,"unfrozen":[1],"B":[[0,1]]})")),
                  InputError);
}

TEST_CASE("pi maps") {
  Seed a2 = make_seed({{0, 1}, {-1, 0}}, {0, 1});
  CHECK(pi_map(a2, vec({1, 0}), 1) == vec({0, 1}));
  CHECK(pi_map(a2, vec({1, 0}), 2) == vec({0, -1}));
  Seed kron = make_seed({{0, 2}, {-2, 0}}, {0, 1});
  CHECK(pi_map(kron, vec({1, 1}), 2) == vec({2, -2}));
}

TEST_CASE("kernel K2") {
  CHECK(kernel_K2(make_seed({{0, 1}, {-1, 0}}, {0, 1})).empty());
  auto zero = kernel_K2(make_seed({{0, 0}, {0, 0}}, {0}));
  CHECK(zero.size() == 2);
  auto cyc = kernel_K2(make_seed({{0, 1, -1}, {-1, 0, 1}, {1, -1, 0}}, {0, 1, 2}));
  REQUIRE(cyc.size() == 1);
  IntVector k = cyc[0](0) < 0 ? IntVector(-cyc[0]) : cyc[0];
  CHECK(k == vec({1, 1, 1}));
}

TEST_CASE("lattice coordinates reproduce the form") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    Index r = 2 + static_cast<Index>(rng() % 3);
    IntMatrix S = IntMatrix::Zero(r, r);
    for (Index i = 0; i < r; ++i)
      for (Index j = i + 1; j < r; ++j) {
        S(i, j) = static_cast<Int>(rng() % 5) - 2;
        S(j, i) = -S(i, j);
      }
    Seed s;
    s.rank = r;
    s.B = S;
    for (Index i = 0; i < r; ++i) s.unfrozen.push_back(i);
    s.d.assign(r, Rational(1));
    SeedLattices lat = seed_lattices(s);
    CHECK(lat.L * lat.P2 == s.B);
    CHECK(lat.P2 * lat.Lift == IntMatrix::Identity(lat.rbar, lat.rbar));
    CHECK((s.B * lat.K2).isZero());
    for (Index i = 0; i < r; ++i)
      for (Index j = 0; j < r; ++j)
        CHECK(lat.pairing(IntVector::Unit(r, i), IntVector::Unit(r, j)) == s.B(i, j));
  }
}

TEST_CASE("kappa profile") {
  // π₂(e1) = 2 π₂(e2) with e2 frozen.
  Seed s = make_seed({{0, 0, 1}, {0, 0, 0}, {-2, -1, 0}}, {0, 2}, {Rational(1), Rational(2)});
  CHECK(s.B.col(0) == 2 * s.B.col(1));
  IntVector k = vec({-1, 2, 0});
  CHECK(kappa_profile(s, k) == k);
  CHECK(kappa_profile(s, IntVector::Zero(3)).isZero());
  CHECK_THROWS_AS(kappa_profile(s, vec({1, 0, 0})), DomainError);
  // |π₂(e1)| = 2 so -e1 + 2e2 balances to zero on the shared ray.
  CHECK(localized_effective(s, k));
  CHECK(localized_effective(s, IntVector(-k)));
}

TEST_CASE("kappa linearity and effectiveness shadow on random kernel vectors") {
  Seed s = make_seed({{0, 1, -1}, {-1, 0, 1}, {1, -1, 0}}, {0, 1, 2});
  auto basis = kernel_K2(s);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    Int a = static_cast<Int>(rng() % 11) - 5, b = static_cast<Int>(rng() % 11) - 5;
    IntVector k1 = a * basis[0], k2 = b * basis[0];
    CHECK(kappa_profile(s, k1 + k2) == kappa_profile(s, k1) + kappa_profile(s, k2));
    if (nonnegative(k1)) CHECK(localized_effective(s, k1));
  }
}

TEST_CASE("nplus order") {
  IntVector base = vec({1, -2});
  CHECK(nplus_order(base, base) == 0);
  CHECK(nplus_order(base + vec({3, 1}), base) == 4);
  CHECK(nplus_order(base + vec({0, 5}), base) == 5);
  CHECK_THROWS_AS(nplus_order(base + vec({-1, 5}), base), DomainError);
}

TEST_CASE("seed JSON round trip uses 1-based indices") {
  auto j = nlohmann::json::parse(
      R"({"rank":3,"unfrozen":[1,2],"B":[[0,1,0],[-2,0,1],[0,-1,0]],"d":[[1,1],[2,1]],"fan_rays":[]})");
  Seed s = seed_from_json(j);
  CHECK(s.unfrozen == std::vector<Index>{0, 1});
  CHECK(s.d[1] == 2);
  CHECK(seed_to_json(s) == j);
}
