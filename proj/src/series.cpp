#include "ct/series.hpp"

#include <algorithm>
#include <limits>

namespace ct {

TruncatedSeries::TruncatedSeries(IntVector base, Int order) : base_(std::move(base)), order_(order) {
  if (order < 0) throw UsageError("truncation order must be nonnegative");
}

TruncatedSeries TruncatedSeries::one(Index rank, Int order) {
  TruncatedSeries s(IntVector::Zero(rank), order);
  s.add(IntVector::Zero(rank), Rational(1));
  return s;
}

TruncatedSeries TruncatedSeries::monomial(const IntVector& base, Int order, const Rational& c,
                                          const IntVector& key) {
  TruncatedSeries s(base, order);
  s.add(key, c);
  return s;
}

void TruncatedSeries::add(const IntVector& key, const Rational& c) {
  if (key.size() != base_.size()) throw UsageError("series term has wrong rank");
  if (!nonnegative(key)) throw DomainError("series key " + format_vector(key) + " is not in N⊕");
  if (c == 0 || coordinate_sum(key) > order_) return;
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(key, c);
    return;
  }
  it->second += c;
  if (it->second == 0) terms_.erase(it);
}

Rational TruncatedSeries::coefficient(const IntVector& key) const {
  auto it = terms_.find(key);
  return it == terms_.end() ? Rational(0) : it->second;
}

Rational TruncatedSeries::coefficient_of_exponent(const IntVector& exponent) const {
  IntVector key = exponent - base_;
  if (!nonnegative(key)) return 0;
  return coefficient(key);
}

namespace {

void require_compatible(const TruncatedSeries& a, const TruncatedSeries& b) {
  if (a.order() != b.order()) throw UsageError("series have different truncation orders");
  if (a.rank() != b.rank()) throw UsageError("series have different ranks");
}

}  // namespace

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& other) {
  require_compatible(*this, other);
  if (other.base_ != base_) throw UsageError("adding series over different bases; rebase first");
  for (const auto& [key, c] : other.terms_) add(key, c);
  return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& other) {
  require_compatible(*this, other);
  if (other.base_ != base_) throw UsageError("subtracting series over different bases; rebase first");
  for (const auto& [key, c] : other.terms_) add(key, -c);
  return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& kv : terms_) kv.second *= c;
  return *this;
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) { return series_multiply(a, b); }

bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
  if (a.order_ != b.order_ || a.rank() != b.rank() || a.size() != b.size()) return false;
  if (a.base_ == b.base_) return a.terms_ == b.terms_;
  for (const auto& [key, c] : a.terms_)
    if (b.coefficient_of_exponent(a.base_ + key) != c) return false;
  return true;
}

TruncatedSeries TruncatedSeries::shifted(const IntVector& delta) const {
  TruncatedSeries out = *this;
  out.base_ += delta;
  return out;
}

TruncatedSeries TruncatedSeries::rebased(const IntVector& new_base) const {
  IntVector offset = base_ - new_base;
  if (!nonnegative(offset))
    throw DomainError("rebase target " + format_vector(new_base) + " is not below " + format_vector(base_));
  TruncatedSeries out(new_base, order_);
  for (const auto& [key, c] : terms_) out.add(key + offset, c);
  return out;
}

TruncatedSeries TruncatedSeries::truncated(Int order) const {
  TruncatedSeries out(base_, order);
  for (const auto& [key, c] : terms_) out.add(key, c);
  return out;
}

Int TruncatedSeries::min_order() const {
  Int best = -1;
  for (const auto& kv : terms_) {
    Int o = coordinate_sum(kv.first);
    if (best < 0 || o < best) best = o;
  }
  return best;
}

TruncatedSeries series_multiply(const TruncatedSeries& a, const TruncatedSeries& b) {
  require_compatible(a, b);
  TruncatedSeries out(a.base() + b.base(), a.order());
  for (const auto& [ka, ca] : a.terms()) {
    Int oa = coordinate_sum(ka);
    for (const auto& [kb, cb] : b.terms()) {
      if (oa + coordinate_sum(kb) > a.order()) continue;
      out.add(ka + kb, ca * cb);
    }
  }
  return out;
}

bool WallFunction::is_trivial() const {
  return std::all_of(coefficients.begin(), coefficients.end(), [](const Rational& c) { return c == 0; });
}

WallFunction WallFunction::truncated(Int order) const {
  WallFunction out{n, coefficients};
  Int step = degree_order();
  std::size_t keep = step > 0 ? static_cast<std::size_t>(order / step) : 0;
  if (out.coefficients.size() > keep) out.coefficients.resize(keep);
  while (!out.coefficients.empty() && out.coefficients.back() == 0) out.coefficients.pop_back();
  return out;
}

TruncatedSeries WallFunction::as_series(Int order) const {
  TruncatedSeries s = TruncatedSeries::one(n.size(), order);
  for (std::size_t j = 0; j < coefficients.size(); ++j)
    s.add(static_cast<Int>(j + 1) * n, coefficients[j]);
  return s;
}

namespace {

// Coefficients g_0..g_D of g = f^e for f = 1 + Σ c_j t^j, via g_m = (1/m) Σ_j ((e+1) j - m) c_j g_{m-j}.
std::vector<Rational> univariate_power(const std::vector<Rational>& c, Int e, std::size_t D) {
  std::vector<Rational> g(D + 1, Rational(0));
  g[0] = 1;
  for (std::size_t m = 1; m <= D; ++m) {
    Rational acc = 0;
    for (std::size_t j = 1; j <= m && j <= c.size(); ++j) {
      if (c[j - 1] == 0) continue;
      acc += Rational((e + 1) * static_cast<Int>(j) - static_cast<Int>(m)) * c[j - 1] * g[m - j];
    }
    g[m] = acc / static_cast<Int>(m);
  }
  return g;
}

std::size_t steps_within(const IntVector& n, Int k) {
  Int step = coordinate_sum(n);
  if (step <= 0) throw DomainError("wall exponent must be a nonzero element of N⊕");
  return static_cast<std::size_t>(std::max<Int>(k, 0) / step);
}

}  // namespace

WallFunction binomial_wall(const IntVector& n, Int power, Int order) {
  std::size_t D = steps_within(n, order);
  auto g = univariate_power({Rational(1)}, power, D);
  WallFunction f{n, std::vector<Rational>(g.begin() + 1, g.end())};
  return f.truncated(order);
}

TruncatedSeries wall_power(const WallFunction& f, Int exponent, Int k) {
  std::size_t D = steps_within(f.n, k);
  auto g = univariate_power(f.coefficients, exponent, D);
  TruncatedSeries s(IntVector::Zero(f.n.size()), k);
  for (std::size_t j = 0; j <= D; ++j) s.add(static_cast<Int>(j) * f.n, g[j]);
  return s;
}

WallFunction wall_multiply(const WallFunction& f, const WallFunction& g, Int order) {
  if (f.n != g.n) throw UsageError("wall functions on different exponents");
  std::size_t D = steps_within(f.n, order);
  std::vector<Rational> a(D + 1, Rational(0)), b(D + 1, Rational(0)), out(D + 1, Rational(0));
  a[0] = b[0] = 1;
  for (std::size_t j = 0; j < f.coefficients.size() && j < D; ++j) a[j + 1] = f.coefficients[j];
  for (std::size_t j = 0; j < g.coefficients.size() && j < D; ++j) b[j + 1] = g.coefficients[j];
  for (std::size_t i = 0; i <= D; ++i)
    for (std::size_t j = 0; i + j <= D; ++j) out[i + j] += a[i] * b[j];
  WallFunction h{f.n, std::vector<Rational>(out.begin() + 1, out.end())};
  return h.truncated(order);
}

namespace {

void check_annihilates(const SeedLattices& lat, const WallFunction& f, const IntVector& u) {
  if (u.size() != lat.rbar) throw UsageError("crossing covector has wrong dimension");
  if (u.dot(lat.nbar(f.n)) != 0)
    throw DomainError("covector " + format_vector(u) + " does not annihilate the wall direction");
}

}  // namespace

TruncatedSeries apply_wall_crossing(const SeedLattices& lat, const WallFunction& f, const IntVector& u,
                                    const IntVector& base, const Rational& c, const IntVector& key, Int k) {
  check_annihilates(lat, f, u);
  Int e = u.dot(lat.nbar(base + key));
  TruncatedSeries out(base, k);
  if (e == 0) {
    out.add(key, c);
    return out;
  }
  Int room = k - coordinate_sum(key);
  if (room < 0) return out;
  std::size_t D = steps_within(f.n, room);
  auto g = univariate_power(f.coefficients, e, D);
  for (std::size_t j = 0; j <= D; ++j) out.add(key + static_cast<Int>(j) * f.n, c * g[j]);
  return out;
}

TruncatedSeries apply_wall_crossing(const SeedLattices& lat, const WallFunction& f, const IntVector& u,
                                    const TruncatedSeries& s) {
  check_annihilates(lat, f, u);
  const Int k = s.order();
  std::map<Int, std::vector<Rational>> powers;
  std::size_t D = steps_within(f.n, k);
  TruncatedSeries out(s.base(), k);
  const Int ub = u.dot(lat.nbar(s.base()));
  for (const auto& [key, c] : s.terms()) {
    Int e = ub + u.dot(lat.nbar(key));
    if (e == 0) {
      out.add(key, c);
      continue;
    }
    auto it = powers.find(e);
    if (it == powers.end()) it = powers.emplace(e, univariate_power(f.coefficients, e, D)).first;
    const auto& g = it->second;
    Int room = k - coordinate_sum(key);
    for (std::size_t j = 0; j <= D && static_cast<Int>(j) * f.degree_order() <= room; ++j)
      out.add(key + static_cast<Int>(j) * f.n, c * g[j]);
  }
  return out;
}

void put_rational(nlohmann::json& obj, const Rational& q) {
  auto put = [&](const char* name, const BigInt& x) {
    if (x >= std::numeric_limits<Int>::min() && x <= std::numeric_limits<Int>::max())
      obj[name] = static_cast<Int>(x);
    else
      obj[name] = x.str();
  };
  put("num", numer(q));
  put("den", denom(q));
}

Rational get_rational(const nlohmann::json& obj) {
  auto get = [&](const char* name) -> BigInt {
    if (!obj.contains(name)) throw InputError(std::string("missing \"") + name + "\"");
    const auto& v = obj[name];
    if (v.is_number_integer()) return BigInt(v.get<Int>());
    if (v.is_string()) return BigInt(v.get<std::string>());
    throw InputError(std::string("\"") + name + "\" must be an integer");
  };
  BigInt den = get("den");
  if (den == 0) throw InputError("zero denominator");
  return Rational(get("num"), den);
}

nlohmann::json series_to_json(const TruncatedSeries& s) {
  std::map<IntVector, Rational, LexLess> full;
  for (const auto& [key, c] : s.terms()) full.emplace(s.base() + key, c);
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [exp, c] : full) {
    nlohmann::json term;
    term["exp"] = std::vector<Int>(exp.data(), exp.data() + exp.size());
    put_rational(term, c);
    out.push_back(term);
  }
  return out;
}

TruncatedSeries series_from_json(const nlohmann::json& j, const IntVector& base, Int order) {
  if (!j.is_array()) throw InputError("series must be a JSON array");
  TruncatedSeries s(base, order);
  for (const auto& term : j) {
    if (!term.is_object() || !term.contains("exp") || !term["exp"].is_array())
      throw InputError("series term needs \"exp\"");
    const auto& e = term["exp"];
    if (static_cast<Index>(e.size()) != base.size()) throw InputError("series exponent has wrong rank");
    IntVector exp(base.size());
    for (Index i = 0; i < base.size(); ++i) exp(i) = e[i].get<Int>();
    s.add(exp - base, get_rational(term));
  }
  return s;
}

}  // namespace ct
