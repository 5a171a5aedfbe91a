#include "ct/theta.hpp"

#include <algorithm>
#include <functional>

namespace ct {

namespace {

Rational rdot(const IntVector& u, const RatVector& x) {
  Rational s = 0;
  for (Index i = 0; i < u.size(); ++i) s += Rational(u(i)) * x(i);
  return s;
}

IntMatrix inverse_unimodular2(const IntMatrix& G) {
  Int det = G(0, 0) * G(1, 1) - G(0, 1) * G(1, 0);
  if (det != 1 && det != -1) throw InputError("fan cone is not smooth");
  IntMatrix inv(2, 2);
  inv << G(1, 1), -G(0, 1), -G(1, 0), G(0, 0);
  return inv * det;
}

}  // namespace

PLSection PLSection::from_seed(const Seed& seed, const SeedLattices& lat) {
  PLSection phi;
  if (lat.K2.cols() == 0) {
    phi.linear_ = lat.Lift;
    return phi;
  }
  if (lat.rbar != 2) throw UnsupportedScope("piecewise-linear sections need rank π₂(N) = 2 when K₂ ≠ 0");
  if (seed.fan_rays.empty()) throw InputError("a fan is required when K₂ ≠ 0");
  for (const IntVector& ray : seed.fan_rays) phi.rays_.push_back(lat.from_m(ray));
  std::sort(phi.rays_.begin(), phi.rays_.end(), [](const IntVector& a, const IntVector& b) {
    return angle_less(to_rational(a), to_rational(b));
  });
  auto lift_ray = [&](const IntVector& g) -> IntVector {
    for (Index f : seed.frozen()) {
      IntVector v = lat.P2.col(f);
      if (v == g) return IntVector::Unit(seed.rank, f);
    }
    return lat.lift(g);
  };
  const std::size_t n = phi.rays_.size();
  for (std::size_t a = 0; a < n; ++a) {
    const IntVector& g1 = phi.rays_[a];
    const IntVector& g2 = phi.rays_[(a + 1) % n];
    if (cross2(g1, g2) <= 0) throw InputError("fan is not complete");
    IntMatrix G(2, 2), images(seed.rank, 2);
    G.col(0) = g1;
    G.col(1) = g2;
    images.col(0) = lift_ray(g1);
    images.col(1) = lift_ray(g2);
    phi.cone_maps_.push_back(images * inverse_unimodular2(G));
  }
  return phi;
}

IntVector PLSection::operator()(const IntVector& y) const {
  if (rays_.empty()) return linear_ * y;
  if (y.isZero()) return IntVector::Zero(cone_maps_.front().rows());
  const std::size_t n = rays_.size();
  for (std::size_t a = 0; a < n; ++a)
    if (cross2(rays_[a], y) >= 0 && cross2(y, rays_[(a + 1) % n]) >= 0) return cone_maps_[a] * y;
  throw InternalError("point " + format_vector(y) + " lies in no cone of the fan");
}

namespace {

struct Hit {
  Rational t;
  std::vector<std::size_t> walls;
};

// Wall hits of the open ray X + t d, t > 0, grouped by parameter.
std::vector<Hit> ray_hits(const ScatteringDiagram& D, const RatVector& X, const RatVector& d) {
  if (cross2(X, d) == 0 && dot(X, d) < 0) throw GeometryError("broken line passes through the origin; move Q");
  std::vector<std::pair<Rational, std::size_t>> raw;
  for (std::size_t w = 0; w < D.walls.size(); ++w) {
    const Wall& wall = D.walls[w];
    const IntVector& u = wall.span_normals[0];
    Rational s0 = rdot(u, X), sd = rdot(u, d);
    if (sd == 0) {
      if (s0 == 0 && (wall.contains(X + d) || wall.contains(X)))
        throw GeometryError("broken line runs along a wall; move Q");
      continue;
    }
    Rational t = -s0 / sd;
    if (t <= 0) continue;
    RatVector H = X + d * t;
    if (H.isZero()) throw GeometryError("broken line passes through the origin; move Q");
    if (wall.contains(H)) raw.emplace_back(t, w);
  }
  std::sort(raw.begin(), raw.end());
  std::vector<Hit> hits;
  for (const auto& [t, w] : raw) {
    if (hits.empty() || hits.back().t != t) hits.push_back({t, {}});
    hits.back().walls.push_back(w);
  }
  return hits;
}

struct Search {
  const ScatteringDiagram& D;
  const IntVector& start;  // φ(p)
  IntVector final_exponent;
  std::vector<BrokenLine>& out;
  std::vector<std::pair<Bend, Rational>> trail;  // backward order, with the bend factor

  void run(const RatVector& X, const IntVector& v) {
    if (v == start) {
      BrokenLine line;
      line.initial_exponent = start;
      line.final_exponent = final_exponent;
      Rational c = 1;
      for (auto it = trail.rbegin(); it != trail.rend(); ++it) {
        c *= it->second;
        line.bends.push_back(it->first);
        line.bends.back().coefficient = c;
      }
      line.final_coefficient = c;
      out.push_back(std::move(line));
      return;
    }
    const SeedLattices& lat = D.lattices;
    RatVector d = to_rational(lat.nbar(v));
    Int room = coordinate_sum(IntVector(v - start));
    for (const Hit& hit : ray_hits(D, X, d)) {
      RatVector H = X + d * hit.t;
      TruncatedSeries G = TruncatedSeries::one(v.size(), room);
      for (std::size_t w : hit.walls) {
        const Wall& wall = D.walls[w];
        Int a = wall.span_normals[0].dot(lat.nbar(v));
        G = G * wall_power(wall.function, a < 0 ? -a : a, room);
      }
      for (const auto& [m, cm] : G.terms()) {
        if (m.isZero()) continue;
        IntVector prev = v - m;
        if (!nonnegative(IntVector(prev - start))) continue;
        if (lat.nbar(prev).isZero()) continue;
        trail.push_back({Bend{H, hit.walls, v, Rational(0)}, cm});
        run(H, prev);
        trail.pop_back();
      }
    }
  }
};

// All n ∈ N⊕ with coordinate sum ≤ k.
void for_each_key(Index rank, Int k, const std::function<void(const IntVector&)>& fn) {
  IntVector n = IntVector::Zero(rank);
  std::function<void(Index, Int)> rec = [&](Index i, Int left) {
    if (i == rank) {
      fn(n);
      return;
    }
    for (Int x = 0; x <= left; ++x) {
      n(i) = x;
      rec(i + 1, left - x);
    }
    n(i) = 0;
  };
  rec(0, k);
}

void require_order(const ScatteringDiagram& D, Int k) {
  if (k > D.order) throw UsageError("diagram was completed to order " + std::to_string(D.order) +
                                    ", below the requested order " + std::to_string(k));
}

}  // namespace

std::vector<BrokenLine> enumerate_broken_lines(const ScatteringDiagram& D, const PLSection& phi,
                                               const IntVector& p, const RatVector& Q, Int k) {
  require_order(D, k);
  if (p.isZero()) throw DomainError("broken lines need p ≠ 0");
  if (on_support(D, Q)) throw GeometryError("Q lies on a wall; choose another basepoint");
  const IntVector start = phi(p);
  const Index rank = D.seed.rank;
  std::vector<BrokenLine> lines;
  for_each_key(rank, k, [&](const IntVector& n) {
    IntVector v = start + n;
    if (D.lattices.nbar(v).isZero()) return;
    Search search{D, start, v, lines, {}};
    search.run(Q, v);
  });
  return lines;
}

TruncatedSeries theta_function(const ScatteringDiagram& D, const PLSection& phi, const IntVector& p,
                               const RatVector& Q, Int k) {
  const Index rank = D.seed.rank;
  if (p.isZero()) return TruncatedSeries::one(rank, k);
  IntVector start = phi(p);
  TruncatedSeries out(start, k);
  for (const BrokenLine& line : enumerate_broken_lines(D, phi, p, Q, k))
    out.add(line.final_exponent - start, line.final_coefficient);
  return out;
}

Path generic_path(const ScatteringDiagram& D, const RatVector& a, const RatVector& b, Rng& rng) {
  Path straight = {a, b};
  try {
    path_ordered_product(D, straight, TruncatedSeries::one(D.seed.rank, 0));
    return straight;
  } catch (const GeometryError&) {
  }
  for (int attempt = 0; attempt < 100; ++attempt) {
    Path detour = {a, generic_point(D, rng), b};
    try {
      path_ordered_product(D, detour, TruncatedSeries::one(D.seed.rank, 0));
      return detour;
    } catch (const GeometryError&) {
    }
  }
  throw GeometryError("could not find a generic path");
}

bool basepoint_transport(const ScatteringDiagram& D, const PLSection& phi, const IntVector& p,
                         const RatVector& Q, const RatVector& Q2, Int k, Rng& rng) {
  TruncatedSeries at_q = theta_function(D, phi, p, Q, k);
  TruncatedSeries at_q2 = theta_function(D, phi, p, Q2, k);
  Path path = generic_path(D, Q, Q2, rng);
  return path_ordered_product(D, path, at_q) == at_q2;
}

namespace {

TruncatedSeries product_at(const ScatteringDiagram& D, const PLSection& phi, const std::vector<IntVector>& points,
                           const RatVector& Q, Int k) {
  TruncatedSeries prod = TruncatedSeries::one(D.seed.rank, k);
  for (const IntVector& p : points) prod = prod * theta_function(D, phi, p, Q, k);
  return prod;
}

}  // namespace

ThetaExpansion theta_product_expand(const ScatteringDiagram& D, const PLSection& phi,
                                    const std::vector<IntVector>& points, const RatVector& Q, Int k) {
  if (points.empty()) throw UsageError("theta products need at least one factor");
  require_order(D, k);
  TruncatedSeries work = product_at(D, phi, points, Q, k);
  const IntVector base = work.base();
  const SeedLattices& lat = D.lattices;
  std::map<IntVector, TruncatedSeries, LexLess> thetas;
  ThetaExpansion out;
  std::size_t steps = 0;
  const std::size_t budget = 1000000;
  while (!work.is_zero()) {
    if (++steps > budget) throw InternalError("theta expansion did not terminate");
    // lowest order term, lexicographically first among those
    auto best = work.terms().begin();
    Int best_order = coordinate_sum(best->first);
    for (auto it = work.terms().begin(); it != work.terms().end(); ++it) {
      Int o = coordinate_sum(it->first);
      if (o < best_order) {
        best = it;
        best_order = o;
      }
    }
    const IntVector n = best->first;
    const Rational c = best->second;
    const IntVector exponent = base + n;
    const IntVector r = lat.nbar(exponent);
    const IntVector phi_r = phi(r);
    auto th = thetas.find(r);
    if (th == thetas.end()) th = thetas.emplace(r, theta_function(D, phi, r, Q, k)).first;
    // c z^{exponent - φ(r)} ϑ_r, written over base
    TruncatedSeries term = th->second.shifted(IntVector(exponent - phi_r)).rebased(base) * c;
    if (term.coefficient(n) != c) throw InternalError("theta function has unexpected leading term");
    work -= term;
    auto slot = out.find(r);
    if (slot == out.end()) slot = out.emplace(r, TruncatedSeries(IntVector(base - phi_r), k)).first;
    slot->second.add(n, c);
    if (!(lat.nbar(IntVector(exponent - phi_r))).isZero())
      throw InternalError("structure constant exponent outside K₂");
  }
  for (auto it = out.begin(); it != out.end();)
    it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

TruncatedSeries expansion_coefficient(const ThetaExpansion& e, const IntVector& r, const IntVector& base, Int k) {
  auto it = e.find(r);
  if (it == e.end()) return TruncatedSeries(base, k);
  return it->second.rebased(base).truncated(k);
}

TruncatedSeries trace_s(const ScatteringDiagram& D, const PLSection& phi, const std::vector<IntVector>& points,
                        const RatVector& Q, Int k) {
  ThetaExpansion e = theta_product_expand(D, phi, points, Q, k);
  IntVector base = IntVector::Zero(D.seed.rank);
  for (const IntVector& p : points) base += phi(p);
  auto it = e.find(IntVector::Zero(D.lattices.rbar));
  if (it == e.end()) return TruncatedSeries(base, k);
  return it->second;
}

GramMatrix gram_matrix(const ScatteringDiagram& D, const PLSection& phi, const std::vector<IntVector>& box,
                       const RatVector& Q, Int k) {
  GramMatrix G(box.size());
  for (std::size_t a = 0; a < box.size(); ++a)
    for (std::size_t b = 0; b < box.size(); ++b) G[a].push_back(trace_s(D, phi, {box[a], box[b]}, Q, k));
  return G;
}

bool gram_full_rank_mod_m(const GramMatrix& G, Rng& rng) {
  const Index n = static_cast<Index>(G.size());
  if (n == 0) return true;
  const Index rank = G[0][0].rank();
  std::vector<Rational> x(static_cast<std::size_t>(rank));
  for (auto& xi : x) xi = rng.rational(1, 3);
  auto eval = [&](const IntVector& e) {
    Rational v = 1;
    for (Index i = 0; i < rank; ++i) {
      Rational xi = x[static_cast<std::size_t>(i)];
      Int a = e(i);
      Rational f = a >= 0 ? xi : Rational(1) / xi;
      for (Int j = 0; j < (a >= 0 ? a : -a); ++j) v *= f;
    }
    return v;
  };
  RatMatrix M(n, n);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) {
      const TruncatedSeries& s = G[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      M(a, b) = s.coefficient(IntVector::Zero(rank)) * eval(s.base());
    }
  return exact_rank(M) == n;
}

FinitenessReport finiteness_report(const ScatteringDiagram& D, const PLSection& phi,
                                   const std::vector<IntVector>& points, const RatVector& Q, Int k) {
  FinitenessReport report;
  for (const auto& kv : theta_product_expand(D, phi, points, Q, k)) report.support.push_back(kv.first);
  if (k >= 1) {
    ScatteringDiagram lower = truncated(D, k - 1);
    for (const auto& kv : theta_product_expand(lower, phi, points, Q, k - 1))
      report.previous_support.push_back(kv.first);
  }
  report.stabilized = report.support == report.previous_support;
  return report;
}

RatVector near_ray_point(const ScatteringDiagram& D, const PLSection& phi, const IntVector& p, int side, Rng& rng) {
  if (p.isZero()) return generic_point(D, rng);
  RatVector P = to_rational(p);
  RatVector J(2);
  J << -P(1), P(0);
  if (side < 0) J = -J;
  std::vector<IntVector> directions;
  for (const Wall& w : D.walls)
    for (const IntVector& g : w.generators) directions.push_back(g);
  for (const IntVector& g : phi.rays()) directions.push_back(g);
  Rational delta = make_rational(1, 7);
  for (;;) {
    RatVector q = P + J * delta;
    const bool ccw = cross2(P, q) > 0;
    bool clear = std::none_of(directions.begin(), directions.end(), [&](const IntVector& g) {
      RatVector G = to_rational(g);
      Rational c1 = cross2(P, G), c2 = cross2(G, q);
      return ccw ? (c1 > 0 && c2 >= 0) : (c1 < 0 && c2 <= 0);
    });
    if (clear) {
      // jitter along the segment to stay off any wall through p itself
      for (int attempt = 0; attempt < 100; ++attempt) {
        Rational s = rng.rational(1, 2) / 2;
        RatVector x = (P + J * (delta * s)) * rng.rational(1, 3);
        if (!on_support(D, x)) return x;
      }
    }
    delta /= 2;
  }
}

TruncatedSeries product_coefficient_at(const ScatteringDiagram& D, const PLSection& phi,
                                       const std::vector<IntVector>& points, const IntVector& p,
                                       const RatVector& Q, Int k) {
  TruncatedSeries prod = product_at(D, phi, points, Q, k);
  const IntVector phi_p = phi(p);
  TruncatedSeries out(IntVector(prod.base() - phi_p), k);
  for (const auto& [key, c] : prod.terms())
    if (D.lattices.nbar(IntVector(prod.base() + key)) == p) out.add(key, c);
  return out;
}

nlohmann::json expansion_to_json(const ThetaExpansion& e) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [r, coeff] : e) {
    nlohmann::json entry;
    entry["r"] = std::vector<Int>(r.data(), r.data() + r.size());
    entry["coefficient"] = series_to_json(coeff);
    out.push_back(entry);
  }
  return out;
}

}  // namespace ct
