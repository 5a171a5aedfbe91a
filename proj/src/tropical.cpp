#include "ct/tropical.hpp"

#include <algorithm>
#include <functional>
#include <map>


namespace ct {

namespace {

RatVector plane_point() { return RatVector::Zero(2); }

IntVector rot(const IntVector& n) {
  IntVector r(2);
  r << -n(1), n(0);
  return r;
}

bool is_zero_vec(const RatVector& v) { return v.isZero(); }

// Homogeneous element of Λ*M̄ in rank 2. degree < 0 or > 2 encodes a form that vanished.
struct Form {
  int degree = 0;
  Rational s{1};                      // degrees 0 and 2
  RatVector v = RatVector::Zero(2);   // degree 1

  bool vanished() const { return degree < 0 || degree > 2 || (degree == 1 ? is_zero_vec(v) : s == 0); }
};

Form wedge(const Form& a, const Form& b) {
  Form out;
  out.degree = a.degree + b.degree;
  if (a.degree < 0 || b.degree < 0) {
    out.degree = -1;
    return out;
  }
  if (out.degree > 2) return out;
  if (a.degree == 0) {
    out.s = a.s * b.s;
    out.v = b.v * a.s;
  } else if (b.degree == 0) {
    out.s = a.s * b.s;
    out.v = a.v * b.s;
  } else {
    out.s = cross2(a.v, b.v);
  }
  return out;
}

Form contract(const IntVector& n, const Form& a) {
  Form out;
  RatVector N = to_rational(n);
  switch (a.degree) {
    case 1:
      out.degree = 0;
      out.s = dot(a.v, N);
      break;
    case 2:
      out.degree = 1;
      out.v = to_rational(rot(n)) * a.s;
      break;
    default:
      out.degree = -1;
  }
  return out;
}

Form leg_form(const AffineConstraint& A) {
  Form f;
  switch (A.codim()) {
    case 0:
      f.degree = 0;
      f.s = Rational(A.weight);
      break;
    case 1:
      f.degree = 1;
      f.v = to_rational(primitive(rot(A.directions.front()))) * Rational(A.weight);
      break;
    default:
      f.degree = 2;
      f.s = Rational(A.weight);
  }
  return f;
}

std::vector<std::vector<int>> incidence(const TropicalCurve& c) {
  std::vector<std::vector<int>> inc(c.positions.size());
  for (std::size_t e = 0; e < c.edges.size(); ++e) {
    inc[c.edges[e].a].push_back(static_cast<int>(e));
    if (c.edges[e].b >= 0) inc[c.edges[e].b].push_back(static_cast<int>(e));
  }
  return inc;
}

Int factorial(Int n) {
  Int f = 1;
  for (Int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

Index AffineConstraint::codim() const {
  if (directions.empty()) return 2;
  IntMatrix M(2, static_cast<Index>(directions.size()));
  for (std::size_t i = 0; i < directions.size(); ++i) M.col(static_cast<Index>(i)) = directions[i];
  return 2 - exact_rank(M);
}

bool AffineConstraint::contains(const RatVector& x) const {
  switch (codim()) {
    case 0:
      return true;
    case 1:
      return dot(to_rational(rot(directions.front())), RatVector(x - point)) == 0;
    default:
      return x == point;
  }
}

bool AffineConstraint::parallel(const IntVector& v) const {
  switch (codim()) {
    case 0:
      return true;
    case 1:
      return cross2(v, directions.front()) == 0;
    default:
      return v.isZero();
  }
}

bool TropicalProblem::dimension_count_holds() const {
  Int lhs = 0;
  for (const TropicalLeg& l : legs) lhs += l.constraint.codim() + (l.contracted ? l.psi : 0);
  return lhs == static_cast<Int>(legs.size()) + 2 - 3;
}

Index TropicalCurve::valence(int v) const {
  Index val = 0;
  for (const TropicalEdge& e : edges) val += (e.a == v) + (e.b == v);
  return val;
}

bool TropicalCurve::balanced() const {
  std::vector<IntVector> sum(positions.size(), IntVector::Zero(2));
  for (const TropicalEdge& e : edges) {
    sum[e.a] += e.momentum;
    if (e.b >= 0) sum[e.b] -= e.momentum;
  }
  return std::all_of(sum.begin(), sum.end(), [](const IntVector& s) { return s.isZero(); });
}

bool TropicalCurve::realized() const {
  for (const TropicalEdge& e : edges) {
    if (e.b < 0) continue;
    if (e.momentum.isZero()) return false;
    RatVector d = positions[e.b] - positions[e.a];
    RatVector m = to_rational(e.momentum);
    if (cross2(d, m) != 0 || dot(d, m) <= 0) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------------------------
// Brute-force enumeration over labeled trees.

namespace {

struct TreeShape {
  int nv = 0;
  std::vector<int> leg_vertex;                 // by insertion position
  std::vector<std::pair<int, int>> internal;  // vertex pairs
};

Index shape_valence(const TreeShape& t, int v) {
  Index val = std::count(t.leg_vertex.begin(), t.leg_vertex.end(), v);
  for (auto [a, b] : t.internal) val += (a == v) + (b == v);
  return val;
}

std::optional<TropicalCurve> realize(const TreeShape& t, const std::vector<int>& order, const TropicalProblem& P) {
  const std::size_t n = order.size();
  // Valence must equal 3 + Σ s_j at every vertex.
  std::vector<Int> psi(t.nv, 0);
  for (std::size_t q = 0; q < n; ++q)
    if (P.legs[order[q]].contracted) psi[t.leg_vertex[q]] += P.legs[order[q]].psi;
  for (int v = 0; v < t.nv; ++v)
    if (shape_valence(t, v) != 3 + psi[v]) return std::nullopt;

  // Momentum of internal edge (a,b): Σ Δ over legs on b's side.
  std::vector<std::vector<std::pair<int, int>>> adj(t.nv);
  for (std::size_t e = 0; e < t.internal.size(); ++e) {
    adj[t.internal[e].first].push_back({t.internal[e].second, static_cast<int>(e)});
    adj[t.internal[e].second].push_back({t.internal[e].first, static_cast<int>(e)});
  }
  std::function<IntVector(int, int)> side = [&](int v, int from) {
    IntVector s = IntVector::Zero(2);
    for (std::size_t q = 0; q < n; ++q)
      if (t.leg_vertex[q] == v) s += P.legs[order[q]].delta;
    for (auto [w, e] : adj[v])
      if (w != from) s += side(w, v);
    return s;
  };

  TropicalCurve c;
  c.positions.assign(t.nv, RatVector::Zero(2));
  for (auto [a, b] : t.internal) c.edges.push_back({a, b, side(b, a), -1});
  for (std::size_t q = 0; q < n; ++q) c.edges.push_back({t.leg_vertex[q], -1, P.legs[order[q]].delta, order[q]});

  const Index cols = 2 * t.nv;
  std::vector<RatVector> rows;
  std::vector<Rational> rhs;
  auto add_row = [&](int v, const RatVector& coef, const Rational& r, int w = -1, const RatVector& coef_w = {}) {
    RatVector row = RatVector::Zero(cols);
    row.segment(2 * v, 2) += coef;
    if (w >= 0) row.segment(2 * w, 2) += coef_w;
    rows.push_back(row);
    rhs.push_back(r);
  };
  for (const TropicalEdge& e : c.edges) {
    if (e.b >= 0) {
      if (e.momentum.isZero()) return std::nullopt;
      RatVector nrm = to_rational(rot(e.momentum));
      add_row(e.b, nrm, Rational(0), e.a, RatVector(-nrm));
      continue;
    }
    const TropicalLeg& leg = P.legs[e.leg];
    if (!leg.contracted && !leg.constraint.parallel(leg.delta)) return std::nullopt;
    switch (leg.constraint.codim()) {
      case 0:
        break;
      case 1: {
        RatVector nrm = to_rational(rot(leg.constraint.directions.front()));
        add_row(e.a, nrm, dot(nrm, leg.constraint.point));
        break;
      }
      default:
        for (Index i = 0; i < 2; ++i) add_row(e.a, RatVector(RatVector::Unit(2, i)), leg.constraint.point(i));
    }
  }
  RatMatrix A(static_cast<Index>(rows.size()), cols);
  RatVector b(static_cast<Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    A.row(static_cast<Index>(r)) = rows[r].transpose();
    b(static_cast<Index>(r)) = rhs[r];
  }
  if (rows.empty() || exact_rank(A) < cols) return std::nullopt;  // not rigid for this type
  auto x = solve_unique(A, b);
  if (!x) return std::nullopt;
  for (int v = 0; v < t.nv; ++v) c.positions[v] = x->segment(2 * v, 2);
  if (!c.realized()) return std::nullopt;
  return c;
}

}  // namespace

std::vector<TropicalCurve> enumerate_rigid(const TropicalProblem& P, bool require_rigid) {
  for (const TropicalLeg& l : P.legs)
    if (l.delta.size() != 2) throw UnsupportedScope("tropical enumeration is implemented for rank N̄ = 2 only");
  if (require_rigid && !P.dimension_count_holds()) throw DomainError("constraints are not rigid: dimension count fails");
  const std::size_t n = P.legs.size();
  std::vector<TropicalCurve> out;
  if (n < 3) return out;

  std::vector<int> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    Int pa = P.legs[a].contracted ? P.legs[a].psi : 0, pb = P.legs[b].contracted ? P.legs[b].psi : 0;
    return pa > pb;
  });
  Int max_cap = 3;
  for (const TropicalLeg& l : P.legs) max_cap += l.contracted ? l.psi : 0;

  TreeShape start;
  start.nv = 1;
  start.leg_vertex = {0, 0, 0};
  std::function<void(TreeShape&, std::size_t)> grow = [&](TreeShape& t, std::size_t q) {
    if (q == n) {
      if (auto c = realize(t, order, P)) {
        c->root = P.special >= 0 ? c->edges[std::find_if(c->edges.begin(), c->edges.end(),
                                                         [&](const TropicalEdge& e) { return e.leg == P.special; }) -
                                            c->edges.begin()]
                                       .a
                                 : 0;
        out.push_back(*c);
      }
      return;
    }
    for (int v = 0; v < t.nv; ++v) {
      if (shape_valence(t, v) + 1 > max_cap) continue;
      t.leg_vertex.push_back(v);
      grow(t, q + 1);
      t.leg_vertex.pop_back();
    }
    const int w = t.nv;
    for (std::size_t e = 0; e < t.internal.size(); ++e) {
      auto saved = t.internal[e];
      t.internal[e] = {saved.first, w};
      t.internal.push_back({w, saved.second});
      t.nv++;
      t.leg_vertex.push_back(w);
      grow(t, q + 1);
      t.leg_vertex.pop_back();
      t.nv--;
      t.internal.pop_back();
      t.internal[e] = saved;
    }
    for (std::size_t l = 0; l < q; ++l) {
      const int v = t.leg_vertex[l];
      t.internal.push_back({v, w});
      t.nv++;
      t.leg_vertex[l] = w;
      t.leg_vertex.push_back(w);
      grow(t, q + 1);
      t.leg_vertex.pop_back();
      t.leg_vertex[l] = v;
      t.nv--;
      t.internal.pop_back();
    }
  };
  grow(start, 3);
  return out;
}

// ---------------------------------------------------------------------------------------------
// Multiplicities.

Int mult_gw(const TropicalCurve& curve, const TropicalProblem& P, int sink) {
  auto inc = incidence(curve);
  struct Omega {
    IntVector n;
    Form f;
  };
  // ω of edge e flowing out of vertex `from` towards the sink.
  std::function<Omega(int, int)> omega = [&](int e, int from) -> Omega {
    const TropicalEdge& E = curve.edges[e];
    if (E.b < 0) return {E.momentum, leg_form(P.legs[E.leg].constraint)};
    Omega acc{IntVector::Zero(2), Form{}};
    for (int f : inc[from]) {
      if (f == e) continue;
      const TropicalEdge& F = curve.edges[f];
      Omega w = omega(f, F.b < 0 ? -1 : (F.a == from ? F.b : F.a));
      acc.n += w.n;
      acc.f = wedge(acc.f, w.f);
    }
    return {acc.n, contract(acc.n, acc.f)};
  };
  IntVector total = IntVector::Zero(2);
  Form top;
  for (int e : inc[sink]) {
    const TropicalEdge& E = curve.edges[e];
    Omega w = omega(e, E.b < 0 ? -1 : (E.a == sink ? E.b : E.a));
    total += w.n;
    top = wedge(top, w.f);
  }
  if (!total.isZero()) throw InternalError("tropical multiplicity: exponents do not cancel at the sink");
  if (top.degree != 2) throw DomainError("rigidity violated: wedge at the sink is not of top degree");
  Rational m = abs(top.s);
  if (!is_integer(m)) throw InternalError("tropical multiplicity is not an integer");
  return static_cast<Int>(numer(m));
}

Int multinomial_weight(const TropicalCurve& curve, const TropicalProblem& P) {
  Int out = 1;
  for (std::size_t v = 0; v < curve.positions.size(); ++v) {
    Int num = factorial(curve.valence(static_cast<int>(v)) - 3), den = 1;
    for (const TropicalEdge& e : curve.edges)
      if (e.b < 0 && e.a == static_cast<int>(v) && P.legs[e.leg].contracted) den *= factorial(P.legs[e.leg].psi);
    out *= num / den;
  }
  return out;
}

// ---------------------------------------------------------------------------------------------
// Degrees and conditions for theta coefficients.

Int DegreeSpec::total_weight() const {
  Int t = 0;
  for (const auto& wi : weights)
    for (Int w : wi) t += w;
  return t;
}

IntVector DegreeSpec::n_out(const Seed& seed, const PLSection& phi) const {
  IntVector n = IntVector::Zero(seed.rank);
  for (std::size_t i = 0; i < weights.size(); ++i)
    for (Int w : weights[i]) n(seed.unfrozen[i]) += w;
  for (const IntVector& p : points) n += phi(p);
  return n;
}

Int DegreeSpec::aut_order() const {
  Int a = 1;
  for (const auto& wi : weights) {
    std::map<Int, Int> mult;
    for (Int w : wi) ++mult[w];
    for (auto [w, m] : mult) a *= factorial(m);
  }
  return a;
}

Rational DegreeSpec::a_w() const {
  Rational a(1);
  for (const auto& wi : weights)
    for (Int w : wi) a *= make_rational(w % 2 == 1 ? 1 : -1, w);
  return a;
}

std::vector<DegreeSpec> weight_vectors(const Seed& seed, const SeedLattices& lat, const std::vector<IntVector>& points,
                                       const IntVector& p, Int k) {
  const std::size_t u = seed.unfrozen.size();
  IntVector target = p;
  for (const IntVector& q : points) target -= q;
  std::vector<DegreeSpec> out;
  DegreeSpec cur;
  cur.points = points;
  cur.weights.resize(u);
  // Nondecreasing tuples for index i, then move on to i + 1.
  std::function<void(std::size_t, Int, Int, IntVector)> rec = [&](std::size_t i, Int budget, Int min_w, IntVector acc) {
    if (i == u) {
      if (acc == target) out.push_back(cur);
      return;
    }
    rec(i + 1, budget, 1, acc);
    const IntVector dir = lat.P2.col(seed.unfrozen[i]);
    for (Int w = min_w; w <= budget; ++w) {
      cur.weights[i].push_back(w);
      rec(i, budget - w, w, IntVector(acc + dir * w));
      cur.weights[i].pop_back();
    }
  };
  rec(0, k, 1, IntVector::Zero(lat.rbar));
  return out;
}

TropicalProblem disk_problem(const Seed& seed, const SeedLattices& lat, const DegreeSpec& spec,
                             const std::vector<RatVector>& translates, const RatVector& Q) {
  if (lat.rbar != 2) throw UnsupportedScope("tropical disks are implemented for rank N̄ = 2 only");
  TropicalProblem P;
  const std::vector<IntVector> plane = {IntVector::Unit(2, 0), IntVector::Unit(2, 1)};
  IntVector total = IntVector::Zero(2);
  std::size_t t = 0;
  for (std::size_t i = 0; i < spec.weights.size(); ++i) {
    const Index e = seed.unfrozen[i];
    const IntVector dir = lat.P2.col(e);
    for (Int w : spec.weights[i]) {
      if (t >= translates.size()) throw UsageError("disk_problem: not enough translates");
      TropicalLeg leg;
      leg.delta = dir * w;
      leg.constraint = {translates[t++], {primitive(dir)}, lattice_index(lat.mbar(IntVector::Unit(seed.rank, e)))};
      total += leg.delta;
      P.legs.push_back(leg);
    }
  }
  for (const IntVector& p : spec.points) {
    if (p.isZero()) throw DomainError("disk_problem: zero points must be removed first");
    TropicalLeg leg;
    leg.delta = p;
    leg.constraint = {plane_point(), plane, 1};
    total += p;
    P.legs.push_back(leg);
  }
  TropicalLeg out;
  out.delta = -total;
  out.contracted = true;
  out.constraint = {Q, {}, 1};
  out.psi = static_cast<Int>(spec.points.size()) - 1;
  P.special = static_cast<int>(P.legs.size());
  P.legs.push_back(out);
  TropicalLeg inf;
  inf.delta = IntVector::Zero(2);
  inf.contracted = true;
  inf.constraint = {plane_point(), plane, 1};
  P.legs.push_back(inf);
  return P;
}

namespace {

struct WallTree {
  unsigned mask = 0;
  IntVector M;
  int leg = -1;  // leaf if >= 0
  RatVector X;   // vertex (node) or a point of the leg's line (leaf)
  int left = -1, right = -1;
};

class DiskBuilder {
 public:
  DiskBuilder(const TropicalProblem& P, std::size_t walls, std::size_t points)
      : P_(P), walls_(walls), points_(points), Q_(P.legs[P.special].constraint.point) {}

  std::vector<TropicalCurve> run() {
    std::vector<TropicalCurve> out;
    std::vector<unsigned> spine_mask(points_, 0);
    assign(0, spine_mask, out);
    return out;
  }

 private:
  struct Placement {
    std::vector<std::pair<int, RatVector>> trees;  // tree id and spine vertex, from Q outwards
  };

  const TropicalProblem& P_;
  std::size_t walls_, points_;
  RatVector Q_;
  std::vector<WallTree> pool_;
  std::map<unsigned, std::vector<int>> trees_;
  std::map<std::pair<std::size_t, unsigned>, std::vector<Placement>> spines_;

  const std::vector<int>& trees(unsigned mask) {
    auto it = trees_.find(mask);
    if (it != trees_.end()) return it->second;
    std::vector<int> ids;
    if ((mask & (mask - 1)) == 0) {
      int leg = __builtin_ctz(mask);
      WallTree t;
      t.mask = mask;
      t.M = P_.legs[leg].delta;
      t.leg = leg;
      t.X = P_.legs[leg].constraint.point;
      pool_.push_back(t);
      ids.push_back(static_cast<int>(pool_.size()) - 1);
    } else {
      const unsigned low = mask & (~mask + 1);
      const unsigned rest = mask ^ low;
      for (unsigned sub = rest;; sub = (sub - 1) & rest) {
        const unsigned A = low | sub, B = mask ^ A;
        if (B != 0) {
          std::vector<int> ta = trees(A), tb = trees(B);
          for (int a : ta)
            for (int b : tb)
              if (auto id = join(a, b)) ids.push_back(*id);
        }
        if (sub == 0) break;
      }
    }
    return trees_[mask] = ids;
  }

  // Position on the root line of t where a downstream vertex may sit: parameter s along M with
  // the point X + s·M. Nodes require s < 0.
  std::optional<int> join(int a, int b) {
    const WallTree &A = pool_[a], &B = pool_[b];
    RatVector ma = to_rational(A.M), mb = to_rational(B.M);
    Rational det = cross2(ma, mb);
    if (det == 0) return std::nullopt;
    RatVector d = B.X - A.X;
    Rational sa = cross2(d, mb) / det, sb = cross2(d, ma) / det;
    if ((A.leg < 0 && sa >= 0) || (B.leg < 0 && sb >= 0)) return std::nullopt;
    WallTree t;
    t.mask = A.mask | B.mask;
    t.M = A.M + B.M;
    t.X = A.X + ma * sa;
    t.left = a;
    t.right = b;
    pool_.push_back(t);
    return static_cast<int>(pool_.size()) - 1;
  }

  const std::vector<Placement>& spine(std::size_t k, unsigned mask) {
    auto key = std::make_pair(k, mask);
    auto it = spines_.find(key);
    if (it != spines_.end()) return it->second;
    std::vector<Placement> out;
    Placement cur;
    std::function<void(unsigned)> seq = [&](unsigned remaining) {
      if (remaining == 0) {
        if (auto pl = place(k, cur)) out.push_back(*pl);
        return;
      }
      for (unsigned sub = remaining; sub != 0; sub = (sub - 1) & remaining) {
        std::vector<int> ts = trees(sub);
        for (int t : ts) {
          cur.trees.push_back({t, RatVector()});
          seq(remaining ^ sub);
          cur.trees.pop_back();
        }
      }
    };
    seq(mask);
    return spines_[key] = out;
  }

  std::optional<Placement> place(std::size_t k, Placement pl) const {
    IntVector S = P_.legs[walls_ + k].delta;
    for (const auto& [t, y] : pl.trees) S += pool_[t].M;
    RatVector cur = Q_;
    for (auto& [t, y] : pl.trees) {
      const WallTree& T = pool_[t];
      if (S.isZero()) return std::nullopt;
      RatVector s = to_rational(S), m = to_rational(T.M);
      Rational det = cross2(s, m);
      if (det == 0) return std::nullopt;
      RatVector d = T.X - cur;
      Rational ts = cross2(d, m) / det, tm = cross2(d, s) / det;
      if (ts <= 0) return std::nullopt;
      if (T.leg < 0 && tm >= 0) return std::nullopt;
      y = cur + s * ts;
      cur = y;
      S -= T.M;
    }
    return pl;
  }

  void assign(std::size_t leg, std::vector<unsigned>& spine_mask, std::vector<TropicalCurve>& out) {
    if (leg == walls_) {
      std::vector<const std::vector<Placement>*> options;
      for (std::size_t k = 0; k < points_; ++k) {
        options.push_back(&spine(k, spine_mask[k]));
        if (options.back()->empty()) return;
      }
      std::vector<std::size_t> pick(points_, 0);
      for (;;) {
        out.push_back(build(options, pick));
        std::size_t k = 0;
        while (k < points_ && ++pick[k] == options[k]->size()) pick[k++] = 0;
        if (k == points_) break;
      }
      return;
    }
    for (std::size_t k = 0; k < points_; ++k) {
      spine_mask[k] |= 1u << leg;
      assign(leg + 1, spine_mask, out);
      spine_mask[k] &= ~(1u << leg);
    }
  }

  TropicalCurve build(const std::vector<const std::vector<Placement>*>& options, const std::vector<std::size_t>& pick) {
    TropicalCurve c;
    c.positions.push_back(Q_);
    c.root = 0;
    const int out_leg = P_.special;
    c.edges.push_back({0, -1, P_.legs[out_leg].delta, out_leg});
    c.edges.push_back({0, -1, P_.legs[out_leg + 1].delta, out_leg + 1});
    std::function<void(int, int)> attach = [&](int t, int at) {
      const WallTree& T = pool_[t];
      if (T.leg >= 0) {
        c.edges.push_back({at, -1, T.M, T.leg});
        return;
      }
      c.positions.push_back(T.X);
      const int v = static_cast<int>(c.positions.size()) - 1;
      c.edges.push_back({at, v, T.M, -1});
      attach(T.left, v);
      attach(T.right, v);
    };
    for (std::size_t k = 0; k < points_; ++k) {
      const Placement& pl = (*options[k])[pick[k]];
      IntVector S = P_.legs[walls_ + k].delta;
      for (const auto& [t, y] : pl.trees) S += pool_[t].M;
      int cur = 0;
      for (const auto& [t, y] : pl.trees) {
        c.positions.push_back(y);
        const int v = static_cast<int>(c.positions.size()) - 1;
        c.edges.push_back({cur, v, S, -1});
        attach(t, v);
        S -= pool_[t].M;
        cur = v;
      }
      c.edges.push_back({cur, -1, S, static_cast<int>(walls_ + k)});
    }
    return c;
  }
};

}  // namespace

std::vector<TropicalCurve> enumerate_disks(const TropicalProblem& P, std::size_t wall_legs, std::size_t points) {
  if (P.special < 0 || P.legs.size() != wall_legs + points + 2)
    throw UsageError("enumerate_disks expects the layout produced by disk_problem");
  if (wall_legs > 16) throw UsageError("enumerate_disks: too many wall legs");
  if (points == 0) return {};
  return DiskBuilder(P, wall_legs, points).run();
}

namespace {

struct LieElement {
  bool derivation = false;  // element of 𝔥, otherwise of A
  Rational c;
  IntVector n;
  IntVector m;  // covector on N̄ for derivations
};

LieElement bracket(const LieElement& x, const LieElement& y, const SeedLattices& lat) {
  auto pair = [&](const IntVector& n, const IntVector& m) { return m.dot(lat.nbar(n)); };
  LieElement out;
  out.n = x.n + y.n;
  if (!x.derivation && !y.derivation) {
    out.c = 0;
  } else if (x.derivation && y.derivation) {
    out.derivation = true;
    out.c = x.c * y.c;
    out.m = y.m * pair(y.n, x.m) - x.m * pair(x.n, y.m);
  } else if (x.derivation) {
    out.c = x.c * y.c * Rational(pair(y.n, x.m));
  } else {
    out.c = -(x.c * y.c * Rational(pair(x.n, y.m)));
  }
  return out;
}

}  // namespace

LieMultiplicity mult_lie(const TropicalCurve& curve, const Seed& seed, const SeedLattices& lat, const PLSection& phi,
                         const DegreeSpec& spec) {
  std::vector<LieElement> leg_elem;
  for (std::size_t i = 0; i < spec.weights.size(); ++i) {
    const IntVector ei = IntVector::Unit(seed.rank, seed.unfrozen[i]);
    for (Int w : spec.weights[i])
      leg_elem.push_back({true, make_rational(w % 2 == 1 ? 1 : -1, w), IntVector(ei * w), lat.mbar(ei)});
  }
  for (const IntVector& p : spec.points) leg_elem.push_back({false, Rational(1), phi(p), IntVector()});
  for (int extra = 0; extra < 2; ++extra) leg_elem.push_back({false, Rational(1), IntVector::Zero(seed.rank), IntVector()});

  auto inc = incidence(curve);
  std::function<LieElement(int, int)> flow = [&](int e, int from) -> LieElement {
    const TropicalEdge& E = curve.edges[e];
    if (E.b < 0) return leg_elem.at(E.leg);
    std::vector<LieElement> in;
    for (int f : inc[from]) {
      if (f == e) continue;
      const TropicalEdge& F = curve.edges[f];
      in.push_back(flow(f, F.b < 0 ? -1 : (F.a == from ? F.b : F.a)));
    }
    if (in.size() != 2) throw InternalError("mult_lie: vertex away from V₀ is not trivalent");
    return bracket(in[0], in[1], lat);
  };
  LieElement prod{false, Rational(1), IntVector::Zero(seed.rank), IntVector()};
  for (int e : inc[curve.root]) {
    const TropicalEdge& E = curve.edges[e];
    LieElement x = flow(e, E.b < 0 ? -1 : (E.a == curve.root ? E.b : E.a));
    if (x.derivation) throw InternalError("mult_lie: bracket left A at V₀");
    prod.c *= x.c;
    prod.n += x.n;
  }
  LieMultiplicity out;
  out.exponent = prod.n;
  Rational k = abs(prod.c / spec.a_w());
  if (!is_integer(k)) throw InternalError("mult_lie: coefficient is not an integer multiple of a_w");
  out.k = static_cast<Int>(numer(k));
  out.coefficient = k * spec.a_w();
  return out;
}

std::vector<RatVector> generic_translates(const ScatteringDiagram& D, const DegreeSpec& spec, const RatVector& Q,
                                          Int k, Rng& rng) {
  std::vector<IntVector> dirs;
  for (const Wall& w : D.walls)
    for (const IntVector& g : w.generators) dirs.push_back(g);
  for (Index i : D.seed.unfrozen) dirs.push_back(D.lattices.P2.col(i));
  Rational clearance = std::max<Rational>(abs(Q(0)), abs(Q(1)));
  Int scale = 1;
  for (const IntVector& g : dirs) {
    if (g.isZero()) continue;
    Int norm = std::max(std::abs(g(0)), std::abs(g(1)));
    scale = std::max(scale, norm);
    Rational c = abs(cross2(to_rational(g), Q)) / norm;
    if (c > 0) clearance = std::min(clearance, c);
  }
  const Rational eps = clearance / Rational(1000 * (k + 1) * (k + 1) * scale * scale);
  std::vector<RatVector> out;
  for (Int i = 0; i < spec.total_weight(); ++i) out.push_back(rng.rational_vector(2, -1, 1) * eps);
  return out;
}

TruncatedSeries tropical_alpha(const ScatteringDiagram& D, const PLSection& phi, const std::vector<IntVector>& points,
                               const IntVector& p, const RatVector& Q, Int k, Rng& rng) {
  const SeedLattices& lat = D.lattices;
  if (lat.rbar != 2) throw UnsupportedScope("tropical_alpha is implemented for rank N̄ = 2 only");
  IntVector base = -phi(p);
  std::vector<IntVector> nonzero;
  for (const IntVector& q : points) {
    base += phi(q);
    if (!q.isZero()) nonzero.push_back(q);
  }
  TruncatedSeries out(base, k);
  if (nonzero.empty()) {
    if (p.isZero()) out.add(IntVector::Zero(D.seed.rank), Rational(1));
    return out;
  }
  for (const DegreeSpec& spec : weight_vectors(D.seed, lat, nonzero, p, k)) {
    std::vector<RatVector> translates = generic_translates(D, spec, Q, k, rng);
    TropicalProblem P = disk_problem(D.seed, lat, spec, translates, Q);
    Int count = 0;
    for (const TropicalCurve& c : enumerate_disks(P, static_cast<std::size_t>(P.legs.size() - nonzero.size() - 2),
                                                  nonzero.size()))
      count += multinomial_weight(c, P) * mult_gw(c, P, c.root);
    if (count == 0) continue;
    out.add(IntVector(spec.n_out(D.seed, phi) - phi(p) - out.base()),
            spec.a_w() * Rational(count) / Rational(spec.aut_order()));
  }
  return out;
}

IntVector degree_curve_class(const Seed& seed, const SeedLattices& lat, const DegreeSpec& spec, const IntVector& p) {
  IntVector profile = IntVector::Zero(seed.rank);
  for (std::size_t i = 0; i < spec.weights.size(); ++i)
    for (Int w : spec.weights[i]) profile(seed.unfrozen[i]) += w;
  auto on_ray = [&](const IntVector& q, const IntVector& ray) {
    return cross2(q, ray) == 0 && q.dot(ray) > 0;
  };
  auto account = [&](const IntVector& q, Int sign) {
    if (q.isZero()) return;
    for (Index f : seed.frozen()) {
      const IntVector ray = lat.P2.col(f);
      if (on_ray(q, ray)) {
        profile(f) += sign * lattice_index(q) / lattice_index(ray);
        return;
      }
    }
    throw DomainError("degree_curve_class: " + format_vector(q) + " is not on a frozen ray");
  };
  for (const IntVector& q : spec.points) account(q, 1);
  account(p, -1);
  return profile;
}

nlohmann::json curve_to_json(const TropicalCurve& curve, const TropicalProblem& P) {
  nlohmann::json j;
  j["root"] = curve.root;
  j["vertices"] = nlohmann::json::array();
  for (const RatVector& x : curve.positions) j["vertices"].push_back({to_string(x(0)), to_string(x(1))});
  j["edges"] = nlohmann::json::array();
  for (const TropicalEdge& e : curve.edges) {
    nlohmann::json je;
    je["from"] = e.a;
    if (e.b >= 0) je["to"] = e.b;
    else je["leg"] = e.leg;
    je["momentum"] = std::vector<Int>(e.momentum.data(), e.momentum.data() + e.momentum.size());
    if (e.leg >= 0 && P.legs[e.leg].contracted) je["contracted"] = true;
    j["edges"].push_back(je);
  }
  return j;
}

}  // namespace ct
