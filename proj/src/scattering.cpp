#include "ct/scattering.hpp"

#include <algorithm>
#include <tuple>

namespace ct {

namespace {

Rational rdot(const IntVector& u, const RatVector& x) {
  Rational s = 0;
  for (Index i = 0; i < u.size(); ++i) s += Rational(u(i)) * x(i);
  return s;
}

IntVector unit(Index rank, Index i) { return IntVector::Unit(rank, i); }

}  // namespace

bool Wall::contains(const RatVector& x) const {
  for (const IntVector& u : span_normals)
    if (rdot(u, x) != 0) return false;
  if (is_line()) return true;
  return rdot(generators[0], x) >= 0;
}

ScatteringDiagram initial_diagram(const Seed& seed, Int k) {
  require_valid(seed, true);
  ScatteringDiagram D;
  D.seed = seed;
  D.lattices = seed_lattices(seed);
  D.order = k;
  const SeedLattices& lat = D.lattices;
  if (lat.rbar >= 3 && !seed.unfrozen.empty())
    throw UnsupportedScope("scattering is implemented for rank π₂(N) ≤ 2");
  for (Index i : seed.unfrozen) {
    IntVector m = lat.mbar(unit(seed.rank, i));
    if (m.isZero())
      throw InputError("π₁(e" + std::to_string(i + 1) + ") = 0: the initial wall is undefined");
    Wall w;
    IntVector v = primitive(lat.nbar(unit(seed.rank, i)));
    w.generators = {v, IntVector(-v)};
    w.span_normals = {primitive(m)};
    w.function = binomial_wall(unit(seed.rank, i), lattice_index(m), k);
    w.incoming = true;
    if (!w.function.is_trivial()) D.walls.push_back(w);
  }
  return D;
}

namespace {

struct Crossing {
  Rational t;
  std::size_t wall;
  IntVector u;
};

// Crossings of the segment a -> b, sorted along the segment.
std::vector<Crossing> segment_crossings(const ScatteringDiagram& D, const RatVector& a, const RatVector& b) {
  std::vector<Crossing> out;
  const RatVector dir = b - a;
  for (std::size_t w = 0; w < D.walls.size(); ++w) {
    const Wall& wall = D.walls[w];
    if (wall.contains(a) || wall.contains(b))
      throw GeometryError("path endpoint lies on a wall; choose another point");
    if (wall.span_normals.size() != 1) throw UnsupportedScope("walls of codimension other than one");
    const IntVector& u = wall.span_normals[0];
    Rational sa = rdot(u, a), sb = rdot(u, b);
    if (sa == 0 && sb == 0) throw GeometryError("path runs along a wall; choose another path");
    if (sa == 0 || sb == 0 || (sa > 0) == (sb > 0)) continue;
    Rational t = sa / (sa - sb);
    RatVector X = a + dir * t;
    if (X.isZero()) throw GeometryError("path passes through the origin; choose another path");
    if (!wall.contains(X)) continue;
    IntVector uc = rdot(u, dir) < 0 ? u : IntVector(-u);
    out.push_back({t, w, uc});
  }
  std::sort(out.begin(), out.end(), [](const Crossing& x, const Crossing& y) {
    return std::tie(x.t, x.wall) < std::tie(y.t, y.wall);
  });
  return out;
}

}  // namespace

TruncatedSeries path_ordered_product(const ScatteringDiagram& D, const Path& path, const TruncatedSeries& s) {
  TruncatedSeries out = s;
  for (std::size_t seg = 0; seg + 1 < path.size(); ++seg) {
    if (path[seg] == path[seg + 1]) continue;
    for (const Crossing& c : segment_crossings(D, path[seg], path[seg + 1]))
      out = apply_wall_crossing(D.lattices, D.walls[c.wall].function, c.u, out);
  }
  return out;
}

TruncatedSeries path_ordered_product(const ScatteringDiagram& D, const Path& path, const IntVector& p) {
  return path_ordered_product(D, path, TruncatedSeries::monomial(p, D.order, Rational(1), IntVector::Zero(p.size())));
}

namespace {

bool wall_order(const Wall& a, const Wall& b) {
  if (a.is_line() != b.is_line()) return a.is_line();
  RatVector va = to_rational(a.generators[0]), vb = to_rational(b.generators[0]);
  if (angle_less(va, vb)) return true;
  if (angle_less(vb, va)) return false;
  return LexLess{}(a.function.n, b.function.n);
}

bool same_support(const Wall& a, const Wall& b) {
  if (a.is_line() != b.is_line()) return false;
  if (!a.is_line()) return a.generators[0] == b.generators[0];
  return a.generators[0] == b.generators[0] || a.generators[0] == b.generators[1];
}

}  // namespace

ScatteringDiagram reduced(const ScatteringDiagram& D) {
  ScatteringDiagram out = D;
  out.walls.clear();
  for (const Wall& w : D.walls) {
    auto it = std::find_if(out.walls.begin(), out.walls.end(), [&](const Wall& x) {
      return same_support(x, w) && x.function.n == w.function.n;
    });
    if (it == out.walls.end()) {
      out.walls.push_back(w);
      out.walls.back().function = w.function.truncated(D.order);
    } else {
      it->function = wall_multiply(it->function, w.function, D.order);
      it->incoming = it->incoming || w.incoming;
    }
  }
  out.walls.erase(std::remove_if(out.walls.begin(), out.walls.end(),
                                 [](const Wall& w) { return w.function.is_trivial(); }),
                  out.walls.end());
  std::stable_sort(out.walls.begin(), out.walls.end(), wall_order);
  return out;
}

ScatteringDiagram truncated(const ScatteringDiagram& D, Int k) {
  ScatteringDiagram out = D;
  out.order = k;
  for (Wall& w : out.walls) w.function = w.function.truncated(k);
  out.walls.erase(std::remove_if(out.walls.begin(), out.walls.end(),
                                 [](const Wall& w) { return w.function.is_trivial(); }),
                  out.walls.end());
  return out;
}

bool on_support(const ScatteringDiagram& D, const RatVector& x) {
  return std::any_of(D.walls.begin(), D.walls.end(), [&](const Wall& w) { return w.contains(x); });
}

RatVector generic_point(const ScatteringDiagram& D, Rng& rng, Int bound) {
  for (;;) {
    RatVector x = rng.rational_vector(D.lattices.rbar, -bound, bound);
    if (!x.isZero() && !on_support(D, x)) return x;
  }
}

Path rectangle_loop(const Rational& x_lo, const Rational& x_hi, const Rational& y_lo, const Rational& y_hi) {
  auto pt = [](const Rational& x, const Rational& y) {
    RatVector v(2);
    v << x, y;
    return v;
  };
  return {pt(x_hi, y_lo), pt(x_hi, y_hi), pt(x_lo, y_hi), pt(x_lo, y_lo), pt(x_hi, y_lo)};
}

namespace {

bool loop_corners_generic(const ScatteringDiagram& D, const Path& loop) {
  return std::none_of(loop.begin(), loop.end(), [&](const RatVector& x) { return on_support(D, x); });
}

Path random_loop(Rng& rng) {
  Rational x_lo = -rng.rational(1, 5), x_hi = rng.rational(1, 5);
  Rational y_lo = -rng.rational(1, 5), y_hi = rng.rational(1, 5);
  Path loop = rectangle_loop(x_lo, x_hi, y_lo, y_hi);
  // start at a random corner
  std::size_t shift = static_cast<std::size_t>(rng.uniform(0, 3));
  Path out;
  for (std::size_t i = 0; i < 4; ++i) out.push_back(loop[(i + shift) % 4]);
  out.push_back(out.front());
  return out;
}

TruncatedSeries probe(Index rank, Index j, Int order) {
  return TruncatedSeries::monomial(unit(rank, j), order, Rational(1), IntVector::Zero(rank));
}

}  // namespace

ScatteringDiagram consistent_completion(const ScatteringDiagram& D_in, Int k) {
  ScatteringDiagram D = reduced(truncated(D_in, k));
  const SeedLattices& lat = D.lattices;
  if (lat.rbar <= 1 || D.walls.empty()) return D;
  if (lat.rbar >= 3) throw UnsupportedScope("consistent completion is implemented for rank π₂(N) = 2");
  const Index rank = D.seed.rank;
  Rng rng(0x5eed5eedULL);
  Path loop = random_loop(rng);

  auto deviation = [&](Int m) {
    std::map<IntVector, std::vector<Rational>, LexLess> dev;
    for (Index j = 0; j < rank; ++j) {
      TruncatedSeries img = path_ordered_product(D, loop, probe(rank, j, m));
      img -= probe(rank, j, m);
      for (const auto& [n, c] : img.terms()) {
        if (coordinate_sum(n) < m)
          throw InternalError("loop product deviates below the current order " + std::to_string(m));
        auto& row = dev[n];
        row.resize(static_cast<std::size_t>(rank), Rational(0));
        row[static_cast<std::size_t>(j)] = c;
      }
    }
    return dev;
  };

  for (Int m = 1; m <= k; ++m) {
    while (!loop_corners_generic(D, loop)) loop = random_loop(rng);
    auto dev = deviation(m);
    if (dev.empty()) continue;
    std::vector<Wall> added;
    for (const auto& [n, row] : dev) {
      IntVector y = lat.nbar(n);
      if (y.isZero()) throw InternalError("loop deviation at exponent " + format_vector(n) + " in K₂");
      IntVector v = primitive(IntVector(-y));
      IntVector u = planar_normal(v);
      std::optional<Rational> c;
      for (Index j = 0; j < rank; ++j) {
        Int pair = u.dot(lat.nbar(unit(rank, j)));
        if (pair == 0) {
          if (row[j] != 0) throw InternalError("loop deviation is not a derivation of the expected form");
          continue;
        }
        Rational cj = -row[j] / pair;
        if (c && *c != cj) throw InternalError("loop deviation is not a derivation of the expected form");
        c = cj;
      }
      if (!c) throw InternalError("no probe detects the wall direction");
      Wall w;
      w.generators = {v};
      w.span_normals = {u};
      IntVector n0 = primitive(n);
      Int mult = lattice_index(n);
      w.function.n = n0;
      w.function.coefficients.assign(static_cast<std::size_t>(mult), Rational(0));
      w.function.coefficients.back() = *c;
      w.incoming = false;
      added.push_back(w);
    }
    D.walls.insert(D.walls.end(), added.begin(), added.end());
    D = reduced(D);
    while (!loop_corners_generic(D, loop)) loop = random_loop(rng);
    if (!deviation(m).empty()) throw InternalError("completion failed to cancel the order " + std::to_string(m) + " deviation");
  }
  return D;
}

ConsistencyReport consistency_check(const ScatteringDiagram& D, Int k, int trials, Rng& rng) {
  ConsistencyReport report;
  if (D.lattices.rbar <= 1) return report;
  if (D.lattices.rbar >= 3) throw UnsupportedScope("consistency checks are implemented for rank π₂(N) = 2");
  const Index rank = D.seed.rank;
  for (int t = 0; t < trials; ++t) {
    Path loop = random_loop(rng);
    while (!loop_corners_generic(D, loop)) loop = random_loop(rng);
    for (Index j = 0; j < rank; ++j) {
      TruncatedSeries p = probe(rank, j, k);
      if (!(path_ordered_product(D, loop, p) == p)) {
        report.consistent = false;
        report.failing_loop = loop;
        report.failing_probe = j;
        return report;
      }
    }
  }
  return report;
}

bool diagrams_equivalent(const ScatteringDiagram& D1, const ScatteringDiagram& D2, Int k, int trials, Rng& rng) {
  if (D1.lattices.rbar != D2.lattices.rbar || D1.seed.rank != D2.seed.rank) return false;
  const Index rank = D1.seed.rank;
  ScatteringDiagram both = D1;
  both.walls.insert(both.walls.end(), D2.walls.begin(), D2.walls.end());
  for (int t = 0; t < trials; ++t) {
    for (int attempt = 0;; ++attempt) {
      if (attempt > 100) throw GeometryError("could not sample a generic path");
      Path path = {generic_point(both, rng), generic_point(both, rng), generic_point(both, rng)};
      try {
        bool agree = true;
        for (Index j = 0; j < rank && agree; ++j) {
          TruncatedSeries p = probe(rank, j, k);
          agree = path_ordered_product(D1, path, p) == path_ordered_product(D2, path, p);
        }
        if (!agree) return false;
        break;
      } catch (const GeometryError&) {
      }
    }
  }
  return true;
}

namespace {

nlohmann::json int_list(const IntVector& v) { return std::vector<Int>(v.data(), v.data() + v.size()); }

IntVector int_vector(const nlohmann::json& j) {
  if (!j.is_array()) throw InputError("expected integer array");
  IntVector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = j[i].get<Int>();
  return v;
}

}  // namespace

nlohmann::json diagram_to_json(const ScatteringDiagram& D) {
  nlohmann::json j;
  j["seed"] = seed_to_json(D.seed);
  j["order"] = D.order;
  nlohmann::json basis = nlohmann::json::array();
  for (Index c = 0; c < D.lattices.L.cols(); ++c) basis.push_back(int_list(D.lattices.L.col(c)));
  j["nbar_basis"] = basis;
  nlohmann::json walls = nlohmann::json::array();
  for (const Wall& w : D.walls) {
    nlohmann::json jw;
    nlohmann::json gens = nlohmann::json::array(), normals = nlohmann::json::array();
    for (const auto& g : w.generators) gens.push_back(int_list(g));
    for (const auto& u : w.span_normals) normals.push_back(int_list(u));
    jw["support_generators"] = gens;
    jw["span_normals"] = normals;
    jw["function"] = series_to_json(w.function.as_series(D.order));
    jw["incoming"] = w.incoming;
    walls.push_back(jw);
  }
  j["walls"] = walls;
  return j;
}

ScatteringDiagram diagram_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("seed") || !j.contains("order") || !j.contains("walls"))
    throw InputError("diagram JSON needs seed, order and walls");
  ScatteringDiagram D;
  D.seed = seed_from_json(j["seed"]);
  D.lattices = seed_lattices(D.seed);
  D.order = j["order"].get<Int>();
  const Index rank = D.seed.rank;
  for (const auto& jw : j["walls"]) {
    Wall w;
    for (const auto& g : jw.at("support_generators")) w.generators.push_back(int_vector(g));
    for (const auto& u : jw.at("span_normals")) w.span_normals.push_back(int_vector(u));
    w.incoming = jw.at("incoming").get<bool>();
    TruncatedSeries f = series_from_json(jw.at("function"), IntVector::Zero(rank), D.order);
    if (f.coefficient(IntVector::Zero(rank)) != 1) throw InputError("wall function must have constant term 1");
    IntVector n;
    for (const auto& [key, c] : f.terms()) {
      if (key.isZero()) continue;
      if (n.size() == 0 || coordinate_sum(key) < coordinate_sum(n)) n = key;
    }
    if (n.size() == 0) continue;
    n = primitive(n);
    w.function.n = n;
    for (const auto& [key, c] : f.terms()) {
      if (key.isZero()) continue;
      Int mult = lattice_index(key);
      if (key != mult * n) throw InputError("wall function is not a series in a single monomial");
      if (w.function.coefficients.size() < static_cast<std::size_t>(mult))
        w.function.coefficients.resize(static_cast<std::size_t>(mult), Rational(0));
      w.function.coefficients[static_cast<std::size_t>(mult - 1)] = c;
    }
    D.walls.push_back(w);
  }
  return D;
}

}  // namespace ct
