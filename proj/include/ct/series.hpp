#ifndef CT_SERIES_HPP
#define CT_SERIES_HPP

#include <map>
#include <vector>

#include "json.hpp"

#include "ct/lattice.hpp"
#include "ct/seed.hpp"

namespace ct {

/// Element of k[P] truncated at N⁺-order k. Every term has exponent base + key with key
/// in N⊕; the order of a term is the coordinate sum of its key.
class TruncatedSeries {
 public:
  using Terms = std::map<IntVector, Rational, LexLess>;

  TruncatedSeries() = default;
  TruncatedSeries(IntVector base, Int order);

  static TruncatedSeries one(Index rank, Int order);
  static TruncatedSeries monomial(const IntVector& base, Int order, const Rational& c,
                                  const IntVector& key);

  const IntVector& base() const { return base_; }
  Int order() const { return order_; }
  Index rank() const { return base_.size(); }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Adds c z^{base + key}; silently drops terms above the truncation order.
  void add(const IntVector& key, const Rational& c);
  Rational coefficient(const IntVector& key) const;
  /// Coefficient of the full exponent (zero if not of the form base + N⊕).
  Rational coefficient_of_exponent(const IntVector& exponent) const;

  TruncatedSeries& operator+=(const TruncatedSeries& other);
  TruncatedSeries& operator-=(const TruncatedSeries& other);
  TruncatedSeries& operator*=(const Rational& c);
  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
  friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
  friend TruncatedSeries operator*(TruncatedSeries a, const Rational& c) { return a *= c; }
  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);
  friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b);

  /// Same terms with base moved by delta (multiplication by z^delta).
  TruncatedSeries shifted(const IntVector& delta) const;
  /// Same element written over new_base, which must satisfy base - new_base ∈ N⊕.
  /// Terms whose order over the new base exceeds the truncation order are dropped.
  TruncatedSeries rebased(const IntVector& new_base) const;
  TruncatedSeries truncated(Int order) const;

  /// Lowest order present, or -1 for the zero series.
  Int min_order() const;

 private:
  IntVector base_;
  Int order_ = 0;
  Terms terms_;
};

/// Multiplies two series with possibly different bases; the product is over base_a + base_b.
TruncatedSeries series_multiply(const TruncatedSeries& a, const TruncatedSeries& b);

/// f = 1 + Σ_j c_j z^{j n}; n ∈ N⊕ nonzero.
struct WallFunction {
  IntVector n;
  std::vector<Rational> coefficients;  // coefficients[j-1] = c_j

  Int degree_order() const { return coordinate_sum(n); }
  bool is_trivial() const;
  /// Drops coefficients of z^{jn} with j·|n| > order and trailing zeros.
  WallFunction truncated(Int order) const;
  TruncatedSeries as_series(Int order) const;
};

/// (1 + z^n)^power truncated at order.
WallFunction binomial_wall(const IntVector& n, Int power, Int order);

/// f^exponent truncated at order k; negative exponents use the power series inverse.
TruncatedSeries wall_power(const WallFunction& f, Int exponent, Int k);

/// Product of two wall functions on the same exponent n.
WallFunction wall_multiply(const WallFunction& f, const WallFunction& g, Int order);

/// c z^p f^{⟨u, π₂(p)⟩} with p = base + key, truncated at k over base.
/// u is a covector on N̄ that must annihilate π₂(f.n).
TruncatedSeries apply_wall_crossing(const SeedLattices& lat, const WallFunction& f, const IntVector& u,
                                    const IntVector& base, const Rational& c, const IntVector& key, Int k);

/// Applies the wall-crossing automorphism to every term of s.
TruncatedSeries apply_wall_crossing(const SeedLattices& lat, const WallFunction& f, const IntVector& u,
                                    const TruncatedSeries& s);

/// Writes q into obj["num"], obj["den"]; integers that overflow 64 bits become strings.
void put_rational(nlohmann::json& obj, const Rational& q);
Rational get_rational(const nlohmann::json& obj);

/// Sorted list of {"exp", "num", "den"} with full exponents.
nlohmann::json series_to_json(const TruncatedSeries& s);
/// Inverse of series_to_json over the given base.
TruncatedSeries series_from_json(const nlohmann::json& j, const IntVector& base, Int order);

}  // namespace ct

#endif  // CT_SERIES_HPP
