#include "ct/seed.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace ct {

bool Seed::is_frozen(Index i) const {
  return !std::binary_search(unfrozen.begin(), unfrozen.end(), i);
}

std::vector<Index> Seed::frozen() const {
  std::vector<Index> out;
  for (Index i = 0; i < rank; ++i)
    if (is_frozen(i)) out.push_back(i);
  return out;
}

namespace {

void check_shape(const Seed& seed) {
  if (seed.rank <= 0) throw InputError("seed rank must be positive");
  if (seed.B.rows() != seed.rank || seed.B.cols() != seed.rank)
    throw InputError("B must be a square matrix of size rank");
  for (std::size_t a = 0; a < seed.unfrozen.size(); ++a) {
    Index i = seed.unfrozen[a];
    if (i < 0 || i >= seed.rank) throw InputError("unfrozen index out of range");
    if (a > 0 && seed.unfrozen[a - 1] >= i) throw InputError("unfrozen indices must be distinct and increasing");
  }
  if (seed.d.size() != seed.unfrozen.size())
    throw InputError("need exactly one symmetrizer per unfrozen index");
  for (const Rational& di : seed.d)
    if (di <= 0) throw InputError("symmetrizers must be positive");
  for (const IntVector& ray : seed.fan_rays)
    if (ray.size() != seed.rank) throw InputError("fan ray has wrong dimension");
}

std::string label(Index i) { return "e" + std::to_string(i + 1); }

}  // namespace

SeedLattices seed_lattices(const Seed& seed) {
  check_shape(seed);
  SeedLattices out;
  ColumnHermite h = column_hermite(seed.B);
  out.rbar = h.rank;
  out.L = h.H;
  out.P2 = h.Uinv.topRows(h.rank);
  out.Lift = h.U.leftCols(h.rank);
  out.K2 = h.U.rightCols(seed.rank - h.rank);
  return out;
}

IntVector SeedLattices::from_m(const IntVector& m) const {
  auto y = solve_unique(L.cast<Rational>(), to_rational(m));
  if (!y) throw DomainError("vector " + format_vector(m) + " does not lie in the span of π₂(N)");
  auto yi = to_integer(*y);
  if (!yi) throw DomainError("vector " + format_vector(m) + " is not in the lattice π₂(N)");
  return *yi;
}

IntVector pi_map(const Seed& seed, const IntVector& n, int which) {
  if (n.size() != seed.rank) throw InputError("pi_map: dimension mismatch");
  if (which == 1) return seed.B.transpose() * n;
  if (which == 2) return seed.B * n;
  throw InputError("pi_map: which must be 1 or 2");
}

std::vector<IntVector> kernel_K2(const Seed& seed) {
  IntMatrix K = seed_lattices(seed).K2;
  std::vector<IntVector> out;
  for (Index c = 0; c < K.cols(); ++c) out.push_back(K.col(c));
  return out;
}

namespace {

// Rank-two fan conditions on rays given in N̄ coordinates.
void check_planar_fan(const Seed& seed, const SeedLattices& lat, const std::vector<IntVector>& rays,
                      std::vector<std::string>& report) {
  std::vector<IntVector> sorted = rays;
  std::sort(sorted.begin(), sorted.end(), [](const IntVector& a, const IntVector& b) {
    return angle_less(to_rational(a), to_rational(b));
  });
  const std::size_t n = sorted.size();
  if (n < 3) {
    report.push_back("fan is not complete: fewer than three rays");
    return;
  }
  for (std::size_t a = 0; a < n; ++a) {
    const IntVector& u = sorted[a];
    const IntVector& v = sorted[(a + 1) % n];
    Int c = cross2(u, v);
    if (c <= 0) {
      report.push_back("fan is not complete: rays " + format_vector(u) + " and " + format_vector(v) +
                       " do not span a strictly convex cone");
      continue;
    }
    if (c != 1)
      report.push_back("fan is not smooth: cone spanned by " + format_vector(u) + " and " +
                       format_vector(v) + " has index " + std::to_string(c));
  }
  auto ray_position = [&](const IntVector& dir) -> long {
    for (std::size_t a = 0; a < n; ++a)
      if (sorted[a] == dir) return static_cast<long>(a);
    return -1;
  };
  std::vector<long> unfrozen_pos;
  for (Index i : seed.unfrozen) {
    IntVector v = lat.P2.col(i);
    if (v.isZero()) continue;
    long pos = ray_position(primitive(v));
    if (pos < 0) report.push_back("π₂(" + label(i) + ") does not lie on a ray of the fan");
    unfrozen_pos.push_back(pos);
  }
  std::set<long> distinct(unfrozen_pos.begin(), unfrozen_pos.end());
  distinct.erase(-1);
  for (long a : distinct)
    for (long b : distinct) {
      if (a >= b) continue;
      bool adjacent = (b - a == 1) || (a == 0 && b == static_cast<long>(n) - 1);
      if (adjacent)
        report.push_back("unfrozen rays " + format_vector(sorted[a]) + " and " + format_vector(sorted[b]) +
                         " share a cone of the fan");
    }
}

}  // namespace

std::vector<std::string> validate_seed(const Seed& seed) {
  check_shape(seed);
  std::vector<std::string> report;
  const IntMatrix& B = seed.B;
  for (std::size_t a = 0; a < seed.unfrozen.size(); ++a)
    for (std::size_t b = a; b < seed.unfrozen.size(); ++b) {
      Index i = seed.unfrozen[a], j = seed.unfrozen[b];
      if (B(i, j) / seed.d[a] != -(B(j, i) / seed.d[b]))
        report.push_back("not skew-symmetrizable with given d at (" + label(i) + "," + label(j) + ")");
    }

  SeedLattices lat = seed_lattices(seed);
  for (Index i : seed.unfrozen)
    if (B.col(i).isZero()) report.push_back("π₂(" + label(i) + ") = 0");

  std::vector<Index> frozen = seed.frozen();
  for (Index f : frozen) {
    IntVector v = B.col(f);
    if (lattice_index(v) != 1) report.push_back("π₂(" + label(f) + ") is not primitive in M");
  }
  for (std::size_t a = 0; a < frozen.size(); ++a)
    for (std::size_t b = a + 1; b < frozen.size(); ++b)
      if (B.col(frozen[a]) == B.col(frozen[b]))
        report.push_back("π₂(" + label(frozen[a]) + ") = π₂(" + label(frozen[b]) + ")");

  if (!columns_saturated(lat.L)) report.push_back(kUnsaturatedMessage);

  std::vector<IntVector> rays;
  bool rays_ok = true;
  for (const IntVector& ray : seed.fan_rays) {
    try {
      IntVector y = lat.from_m(ray);
      if (lattice_index(y) != 1) {
        report.push_back("fan ray " + format_vector(ray) + " is not primitive in π₂(N)");
        rays_ok = false;
        continue;
      }
      rays.push_back(y);
    } catch (const DomainError&) {
      report.push_back("fan ray " + format_vector(ray) + " does not lie in π₂(N)");
      rays_ok = false;
    }
  }
  for (Index f : frozen) {
    IntVector v = lat.P2.col(f);
    if (v.isZero()) continue;
    IntVector dir = primitive(v);
    bool found = std::any_of(rays.begin(), rays.end(), [&](const IntVector& r) { return r == dir; });
    if (!found) report.push_back("no fan ray through π₂(" + label(f) + ")");
  }
  if (rays_ok && !rays.empty() && lat.rbar == 2) check_planar_fan(seed, lat, rays, report);
  return report;
}

void require_valid(const Seed& seed, bool allow_unsaturated) {
  auto report = validate_seed(seed);
  if (allow_unsaturated) std::erase(report, std::string(kUnsaturatedMessage));
  if (report.empty()) return;
  std::ostringstream msg;
  msg << "invalid seed:";
  for (const auto& line : report) msg << "\n  " << line;
  throw InputError(msg.str());
}

IntVector kappa_profile(const Seed& seed, const IntVector& k) {
  if (k.size() != seed.rank) throw InputError("kappa_profile: dimension mismatch");
  if (!(seed.B * k).isZero()) throw DomainError("kappa_profile: " + format_vector(k) + " is not in K₂");
  return k;
}

bool localized_effective(const Seed& seed, const IntVector& k) {
  IntVector profile = kappa_profile(seed, k);
  SeedLattices lat = seed_lattices(seed);
  std::map<IntVector, Int, LexLess> per_ray;
  for (Index i = 0; i < seed.rank; ++i) {
    IntVector v = lat.P2.col(i);
    if (v.isZero()) {
      if (profile(i) < 0) return false;
      continue;
    }
    per_ray[primitive(v)] += profile(i) * lattice_index(v);
  }
  return std::all_of(per_ray.begin(), per_ray.end(), [](const auto& kv) { return kv.second >= 0; });
}

Int nplus_order(const IntVector& p, const IntVector& base) {
  if (p.size() != base.size()) throw InputError("nplus_order: dimension mismatch");
  IntVector diff = p - base;
  if (!nonnegative(diff)) throw DomainError("nplus_order: " + format_vector(diff) + " is not in N⊕");
  return coordinate_sum(diff);
}

namespace {

Rational rational_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return Rational(j.get<Int>());
  if (j.is_array() && j.size() == 2 && j[0].is_number_integer() && j[1].is_number_integer()) {
    Int den = j[1].get<Int>();
    if (den == 0) throw InputError("zero denominator");
    return make_rational(j[0].get<Int>(), den);
  }
  throw InputError("expected rational as integer or [num, den]");
}

IntVector vector_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw InputError("expected an integer array");
  IntVector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer()) throw InputError("expected an integer array");
    v(static_cast<Index>(i)) = j[i].get<Int>();
  }
  return v;
}

}  // namespace

Seed seed_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("seed must be a JSON object");
  for (const char* key : {"rank", "unfrozen", "B"})
    if (!j.contains(key)) throw InputError(std::string("seed is missing \"") + key + "\"");
  Seed seed;
  if (!j["rank"].is_number_integer()) throw InputError("rank must be an integer");
  seed.rank = j["rank"].get<Index>();
  if (seed.rank <= 0) throw InputError("rank must be positive");
  const auto& rows = j["B"];
  if (!rows.is_array() || static_cast<Index>(rows.size()) != seed.rank)
    throw InputError("B must have rank rows");
  seed.B = IntMatrix(seed.rank, seed.rank);
  for (Index r = 0; r < seed.rank; ++r) {
    IntVector row = vector_from_json(rows[r]);
    if (row.size() != seed.rank) throw InputError("B must have rank columns");
    seed.B.row(r) = row.transpose();
  }
  if (!j["unfrozen"].is_array()) throw InputError("unfrozen must be an array");
  for (const auto& idx : j["unfrozen"]) {
    if (!idx.is_number_integer()) throw InputError("unfrozen indices must be integers");
    seed.unfrozen.push_back(idx.get<Index>() - 1);
  }
  std::sort(seed.unfrozen.begin(), seed.unfrozen.end());
  if (j.contains("d")) {
    if (!j["d"].is_array()) throw InputError("d must be an array");
    for (const auto& di : j["d"]) seed.d.push_back(rational_from_json(di));
  } else {
    seed.d.assign(seed.unfrozen.size(), Rational(1));
  }
  if (j.contains("fan_rays")) {
    if (!j["fan_rays"].is_array()) throw InputError("fan_rays must be an array");
    for (const auto& ray : j["fan_rays"]) seed.fan_rays.push_back(vector_from_json(ray));
  }
  check_shape(seed);
  return seed;
}

nlohmann::json seed_to_json(const Seed& seed) {
  nlohmann::json j;
  j["rank"] = seed.rank;
  std::vector<Index> one_based;
  for (Index i : seed.unfrozen) one_based.push_back(i + 1);
  j["unfrozen"] = one_based;
  nlohmann::json rows = nlohmann::json::array();
  for (Index r = 0; r < seed.rank; ++r) {
    std::vector<Int> row(seed.B.cols());
    for (Index c = 0; c < seed.B.cols(); ++c) row[c] = seed.B(r, c);
    rows.push_back(row);
  }
  j["B"] = rows;
  nlohmann::json d = nlohmann::json::array();
  for (const Rational& di : seed.d)
    d.push_back({static_cast<Int>(numer(di)), static_cast<Int>(denom(di))});
  j["d"] = d;
  nlohmann::json rays = nlohmann::json::array();
  for (const IntVector& ray : seed.fan_rays) rays.push_back(std::vector<Int>(ray.data(), ray.data() + ray.size()));
  j["fan_rays"] = rays;
  return j;
}

Seed load_seed(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open seed file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("malformed seed file " + path + ": " + e.what());
  }
  return seed_from_json(j);
}

}  // namespace ct
