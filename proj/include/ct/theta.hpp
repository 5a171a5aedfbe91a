#ifndef CT_THETA_HPP
#define CT_THETA_HPP

#include <map>
#include <optional>
#include <vector>

#include "ct/scattering.hpp"

namespace ct {

/// Piecewise-linear section φ: N̄ → N of π₂, linear on the cones of the fan and sending
/// π₂(e_f) to e_f for frozen f. When K₂ = 0 it is the global inverse of π₂.
class PLSection {
 public:
  static PLSection from_seed(const Seed& seed, const SeedLattices& lat);

  IntVector operator()(const IntVector& y) const;
  bool is_linear() const { return rays_.empty(); }
  const std::vector<IntVector>& rays() const { return rays_; }

 private:
  IntMatrix linear_;                 // used when there is no fan
  std::vector<IntVector> rays_;      // counterclockwise
  std::vector<IntMatrix> cone_maps_; // cone a is spanned by rays_[a], rays_[a+1]
};

struct Bend {
  RatVector point;
  std::vector<std::size_t> walls;
  IntVector exponent;  // monomial exponent after the bend
  Rational coefficient;
};

/// A broken line, listed in forward time: the unbounded incoming segment carries z^{φ(p)}.
struct BrokenLine {
  IntVector initial_exponent;
  std::vector<Bend> bends;
  IntVector final_exponent;
  Rational final_coefficient;
};

/// All broken lines for p ending at Q whose final monomial has order ≤ k over φ(p).
std::vector<BrokenLine> enumerate_broken_lines(const ScatteringDiagram& D, const PLSection& phi,
                                               const IntVector& p, const RatVector& Q, Int k);

/// ϑ_{p,Q} over base φ(p); ϑ_0 = 1.
TruncatedSeries theta_function(const ScatteringDiagram& D, const PLSection& phi, const IntVector& p,
                               const RatVector& Q, Int k);

/// Straight path from a to b, detouring through a generic midpoint if the segment is not generic.
Path generic_path(const ScatteringDiagram& D, const RatVector& a, const RatVector& b, Rng& rng);

/// ϑ_{p,Q'} == θ_{γ,D}(ϑ_{p,Q}) mod 𝔪^{k+1} along a path from Q to Q'.
bool basepoint_transport(const ScatteringDiagram& D, const PLSection& phi, const IntVector& p,
                         const RatVector& Q, const RatVector& Q2, Int k, Rng& rng);

/// α(p⃗; r) for every r, each a series whose full exponents lie in K₂.
using ThetaExpansion = std::map<IntVector, TruncatedSeries, LexLess>;

/// Product ∏ ϑ_{p_i,Q} expanded in the theta basis at the same Q.
ThetaExpansion theta_product_expand(const ScatteringDiagram& D, const PLSection& phi,
                                    const std::vector<IntVector>& points, const RatVector& Q, Int k);

/// α(p⃗; 0), the ϑ₀-coefficient; zero series if absent.
TruncatedSeries trace_s(const ScatteringDiagram& D, const PLSection& phi, const std::vector<IntVector>& points,
                        const RatVector& Q, Int k);

/// Coefficient of ϑ_r in an expansion as a series over the given base (zero if absent).
TruncatedSeries expansion_coefficient(const ThetaExpansion& e, const IntVector& r, const IntVector& base, Int k);

using GramMatrix = std::vector<std::vector<TruncatedSeries>>;

GramMatrix gram_matrix(const ScatteringDiagram& D, const PLSection& phi, const std::vector<IntVector>& box,
                       const RatVector& Q, Int k);

/// Rank of the order-zero part of the Gram matrix after evaluating z^{e_j} at random rationals.
bool gram_full_rank_mod_m(const GramMatrix& G, Rng& rng);

struct FinitenessReport {
  std::vector<IntVector> support;           // r with α(r) ≠ 0 at order k
  std::vector<IntVector> previous_support;  // same at order k - 1
  bool stabilized = false;
};

FinitenessReport finiteness_report(const ScatteringDiagram& D, const PLSection& phi,
                                   const std::vector<IntVector>& points, const RatVector& Q, Int k);

/// A generic point in a chamber whose closure contains the ray through p (p ≠ 0). The sign
/// chooses the side of the ray.
RatVector near_ray_point(const ScatteringDiagram& D, const PLSection& phi, const IntVector& p, int side, Rng& rng);

/// Σ_r c_r z^r over r ∈ K₂, where c_r is the coefficient of z^{φ(p)+r} in ∏ ϑ_{p_i,Q}. For Q near
/// the ray through p this equals α(p⃗; p).
TruncatedSeries product_coefficient_at(const ScatteringDiagram& D, const PLSection& phi,
                                       const std::vector<IntVector>& points, const IntVector& p,
                                       const RatVector& Q, Int k);

nlohmann::json expansion_to_json(const ThetaExpansion& e);

}  // namespace ct

#endif  // CT_THETA_HPP
