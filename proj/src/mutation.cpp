#include "ct/mutation.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "ct/scattering.hpp"

namespace ct {

namespace {

Int positive_part(Int x) { return x > 0 ? x : 0; }

Int fz_entry(const IntMatrix& B, Index i, Index j, Index k) {
  if (j == i || k == i) return -B(j, k);
  Int x = B(j, i), y = B(i, k);
  Int ax = x < 0 ? -x : x, ay = y < 0 ? -y : y;
  return B(j, k) + (ax * y + x * ay) / 2;
}

IntMatrix fz_mutation(const IntMatrix& B, Index i) {
  IntMatrix out(B.rows(), B.cols());
  for (Index j = 0; j < B.rows(); ++j)
    for (Index k = 0; k < B.cols(); ++k) out(j, k) = fz_entry(B, i, j, k);
  return out;
}

void require_unfrozen(const Seed& seed, Index i) {
  if (i < 0 || i >= seed.rank) throw InputError("mutation index " + std::to_string(i + 1) + " out of range");
  if (seed.is_frozen(i)) throw DomainError("cannot mutate at frozen index " + std::to_string(i + 1));
}

// Candidate bases e'_i = -e_i, e'_k = e_k + [σ B(e_k, e_i)]_+ e_i for unfrozen k, frozen e_f
// fixed, σ = ±1. Returns the first whose Gram matrix matches the mutated B on the unfrozen
// block, with its σ. Frozen columns are not compared: the FZ rule there is not induced by any
// basis change that keeps the frozen vectors.
std::optional<std::pair<IntMatrix, int>> mutation_basis(const Seed& seed, Index i) {
  const IntMatrix& B = seed.B;
  const IntMatrix target = fz_mutation(B, i);
  for (int sign : {1, -1}) {
    IntMatrix C = IntMatrix::Identity(B.rows(), B.cols());
    C(i, i) = -1;
    for (Index k : seed.unfrozen)
      if (k != i) C(i, k) = positive_part(sign * B(k, i));
    IntMatrix gram = C.transpose() * B * C;
    bool match = true;
    for (Index a : seed.unfrozen)
      for (Index b : seed.unfrozen) match = match && gram(a, b) == target(a, b);
    if (match) return std::make_pair(C, sign);
  }
  return std::nullopt;
}

IntVector shear(const MutationStep& step, const IntVector& y, bool wrong_side, int direction = 1) {
  Int t = -step.side * step.wall.dot(y);
  if (wrong_side) t = -t;
  return y + step.shear * (positive_part(t) * direction);
}

// ⟨π₁(e_i), π₂(e_i)⟩ = 0, so the shear keeps each point on its side of the wall.
IntVector unshear(const MutationStep& step, const IntVector& y, bool wrong_side) {
  return shear(step, y, wrong_side, -1);
}

Rational total(const TruncatedSeries& s) {
  Rational c = 0;
  for (const auto& term : s.terms()) c += term.second;
  return c;
}

// Order of α(p⃗; r) when K₂ = 0: the coordinate sum of φ(r) - Σ φ(p_j), or -1 if that is
// not in N⊕ (and the constant vanishes).
Int label_order(const PLSection& phi, const std::vector<IntVector>& points, const IntVector& r) {
  IntVector key = phi(r);
  for (const IntVector& p : points) key -= phi(p);
  return nonnegative(key) ? coordinate_sum(key) : -1;
}


}  // namespace

Seed mutate_seed(const Seed& seed, Index i) {
  require_unfrozen(seed, i);
  Seed out = seed;
  out.B = fz_mutation(seed.B, i);
  return out;
}

Seed mutated_presentation(const Seed& seed, const MutationStep& step) {
  Seed out = seed;
  out.B = step.basis.transpose() * seed.B * step.basis;
  for (IntVector& ray : out.fan_rays) ray = step.basis.transpose() * ray;
  return out;
}

MutationStep mutation_step(const Seed& seed, const SeedLattices& lat, Index i) {
  require_unfrozen(seed, i);
  auto C = mutation_basis(seed, i);
  if (!C) throw UnsupportedScope("mutation at " + std::to_string(i + 1) + " is not a change of basis for this B");
  MutationStep step;
  step.index = i;
  step.basis = C->first;
  step.inverse = C->first;  // C is an involution
  step.side = C->second;
  IntVector e = IntVector::Unit(seed.rank, i);
  step.wall = lat.mbar(e);
  step.shear = lat.nbar(e);
  return step;
}

IntVector transport_label(const MutationStep& step, const SeedLattices& from, const SeedLattices& to,
                          const IntVector& y, bool wrong_side) {
  IntVector moved = shear(step, y, wrong_side);
  IntVector m = from.L * moved;
  return to.from_m(IntVector(step.basis.transpose() * m));
}

namespace {

IntVector transport_back(const MutationStep& step, const SeedLattices& from, const SeedLattices& to,
                         const IntVector& y, bool wrong_side) {
  IntVector m = to.L * y;
  IntVector back = from.from_m(IntVector(step.basis.transpose() * m));
  return unshear(step, back, wrong_side);
}

}  // namespace

MutationAgreement structure_constant_agreement(const Seed& seed, Index i, const std::vector<IntVector>& points,
                                               Int k, Rng& rng, bool wrong_side) {
  require_valid(seed, true);
  const SeedLattices lat = seed_lattices(seed);
  if (lat.K2.cols() != 0) throw UnsupportedScope("mutation agreement compares scalar structure constants; needs K₂ = 0");
  const MutationStep step = mutation_step(seed, lat, i);
  const Seed mu = mutated_presentation(seed, step);
  if (mu.B != mutate_seed(seed, i).B) throw UnsupportedScope("mutated matrix is not a change of basis on the frozen columns");
  const SeedLattices lat_mu = seed_lattices(mu);

  ScatteringDiagram D = consistent_completion(initial_diagram(seed, k), k);
  ScatteringDiagram D_mu = consistent_completion(initial_diagram(mu, k), k);
  PLSection phi = PLSection::from_seed(seed, lat), phi_mu = PLSection::from_seed(mu, lat_mu);

  MutationAgreement out;
  for (const IntVector& p : points) out.transported_points.push_back(transport_label(step, lat, lat_mu, p, wrong_side));
  out.original = theta_product_expand(D, phi, points, generic_point(D, rng), k);
  out.mutated = theta_product_expand(D_mu, phi_mu, out.transported_points, generic_point(D_mu, rng), k);

  auto value = [](const ThetaExpansion& e, const IntVector& r) {
    auto it = e.find(r);
    return it == e.end() ? Rational(0) : total(it->second);
  };
  auto in_range = [k](Int order) { return order >= 0 && order <= k; };
  out.agree = true;
  std::vector<IntVector> seen;
  for (const auto& [r, coeff] : out.original) {
    IntVector r_mu = transport_label(step, lat, lat_mu, r, wrong_side);
    if (!in_range(label_order(phi_mu, out.transported_points, r_mu))) continue;
    ++out.compared;
    seen.push_back(r_mu);
    if (total(coeff) != value(out.mutated, r_mu)) out.agree = false;
  }
  for (const auto& [r_mu, coeff] : out.mutated) {
    if (std::find(seen.begin(), seen.end(), r_mu) != seen.end()) continue;
    IntVector r = transport_back(step, lat, lat_mu, r_mu, wrong_side);
    if (!in_range(label_order(phi, points, r))) continue;
    ++out.compared;
    if (total(coeff) != value(out.original, r)) out.agree = false;
  }
  return out;
}

namespace {

using RayDegrees = std::map<IntVector, Rational, LexLess>;

// Is the class with the given intersection numbers against the boundary divisors effective on
// the complete toric surface of these rays? Writes it as Σ c_ρ D_ρ, defined up to
// c_ρ ↦ c_ρ + ⟨m, ρ⟩, and looks for an m making every c_ρ nonnegative.
bool toric_class_effective(const RayDegrees& degrees) {
  std::vector<IntVector> rays;
  std::vector<Rational> d;
  for (const auto& [ray, deg] : degrees) rays.push_back(ray);
  std::sort(rays.begin(), rays.end(),
            [](const IntVector& a, const IntVector& b) { return angle_less(to_rational(a), to_rational(b)); });
  const std::size_t n = rays.size();
  if (n < 3) throw DomainError("toric model needs a complete fan");
  for (const IntVector& r : rays) d.push_back(degrees.at(r));
  auto det = [&](std::size_t a, std::size_t b) { return Rational(cross2(rays[a % n], rays[b % n])); };
  for (std::size_t a = 0; a < n; ++a)
    if (det(a, a + 1) <= 0) throw DomainError("toric model fan is not complete");

  RatMatrix M = RatMatrix::Zero(static_cast<Index>(n), static_cast<Index>(n));
  for (std::size_t a = 0; a < n; ++a) {
    std::size_t prev = (a + n - 1) % n, next = (a + 1) % n;
    M(Index(a), Index(next)) += Rational(1) / det(a, next);
    M(Index(a), Index(prev)) += Rational(1) / det(prev, a);
    M(Index(a), Index(a)) = -det(prev, next) / (det(prev, a) * det(a, next));
  }
  RatVector rhs(static_cast<Index>(n));
  for (std::size_t a = 0; a < n; ++a) rhs(Index(a)) = d[a];
  // c_0 = c_1 = 0 fixes the ambiguity, since adjacent rays are independent
  RatMatrix reduced = M.rightCols(static_cast<Index>(n) - 2);
  auto tail = solve_unique(reduced, rhs);
  if (!tail) throw InternalError("intersection numbers are not balanced");
  std::vector<Rational> c(n, Rational(0));
  for (std::size_t a = 2; a < n; ++a) c[a] = (*tail)(Index(a) - 2);

  // feasibility of ⟨m, ρ_a⟩ ≥ -c_a over m ∈ ℚ², a bounded polygon: test its candidate vertices
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      RatMatrix A(2, 2);
      A << Rational(rays[a](0)), Rational(rays[a](1)), Rational(rays[b](0)), Rational(rays[b](1));
      RatVector bb(2);
      bb << -c[a], -c[b];
      auto m = solve_unique(A, bb);
      if (!m) continue;
      bool inside = true;
      for (std::size_t e = 0; e < n && inside; ++e)
        inside = Rational(rays[e](0)) * (*m)(0) + Rational(rays[e](1)) * (*m)(1) + c[e] >= 0;
      if (inside) return true;
    }
  return false;
}

}  // namespace

bool toric_pushforward_effective(const Seed& seed, const SeedLattices& lat, const IntVector& s, Index mutated_at) {
  if (lat.rbar != 2) throw UnsupportedScope("toric pushforward is implemented for rank π₂(N) = 2");
  if (!lat.nbar(s).isZero()) throw DomainError(format_vector(s) + " is not in K₂");
  RayDegrees degrees;
  for (const IntVector& ray : seed.fan_rays) degrees[primitive(lat.from_m(ray))] = 0;
  if (mutated_at >= 0) {
    require_unfrozen(seed, mutated_at);
    degrees.try_emplace(primitive(IntVector(-lat.nbar(IntVector::Unit(seed.rank, mutated_at)))), 0);
  }
  // the fiber covector of the projection along π₂(e_i), and F · s
  IntVector fiber_m;
  Int fiber = 0;
  if (mutated_at >= 0) {
    fiber_m = primitive(lat.mbar(IntVector::Unit(seed.rank, mutated_at)));
    for (Index j = 0; j < seed.rank; ++j) {
      Int a = fiber_m.dot(lat.nbar(IntVector::Unit(seed.rank, j)));
      if (a > 0) fiber += a * s(j);
    }
  }
  for (Index k = 0; k < seed.rank; ++k) {
    IntVector v = lat.nbar(IntVector::Unit(seed.rank, k));
    if (v.isZero()) continue;
    Int x = s(k);
    if (k == mutated_at) {
      x = fiber - s(k);  // s · C_i'
      v = -v;
    }
    auto it = degrees.find(primitive(v));
    if (it == degrees.end()) throw DomainError("π₂(e_" + std::to_string(k + 1) + ") is not on a ray of the fan");
    it->second += Rational(x * lattice_index(v));
  }
  if (mutated_at >= 0) {
    // contracting the C_i' instead of the C_i is an elementary transformation: the fan is
    // sheared on the side where the fiber covector is positive
    const IntVector shift = lat.nbar(IntVector::Unit(seed.rank, mutated_at));
    RayDegrees sheared;
    for (const auto& [ray, deg] : degrees) {
      Int t = fiber_m.dot(ray);
      sheared[IntVector(ray + shift * (t > 0 ? t : 0))] += deg;
    }
    degrees = std::move(sheared);
  }
  return toric_class_effective(degrees);
}

EffectivenessReport exponent_effectiveness(const Seed& seed, const ThetaExpansion& e) {
  const SeedLattices lat = seed_lattices(seed);
  EffectivenessReport report;
  report.presentations = 1 + seed.unfrozen.size();
  for (const auto& [r, coeff] : e)
    for (const auto& [key, c] : coeff.terms()) {
      if (c == 0) continue;
      IntVector exponent = coeff.base() + key;
      ++report.exponents;
      bool ok = lat.nbar(exponent).isZero() && toric_pushforward_effective(seed, lat, exponent, -1);
      for (Index i : seed.unfrozen) ok = ok && toric_pushforward_effective(seed, lat, exponent, i);
      if (!ok) report.failures.push_back(exponent);
    }
  return report;
}

}  // namespace ct
