#ifndef CT_SCATTERING_HPP
#define CT_SCATTERING_HPP

#include <optional>
#include <vector>

#include "json.hpp"

#include "ct/random.hpp"
#include "ct/seed.hpp"
#include "ct/series.hpp"

namespace ct {

/// A wall in N̄_ℝ. Supports are cones through the origin given by generators in N̄
/// coordinates: one generator for a ray, {v, -v} for a full line.
struct Wall {
  std::vector<IntVector> generators;
  std::vector<IntVector> span_normals;  // covectors on N̄ cutting out the linear span
  WallFunction function;
  bool incoming = false;

  bool is_line() const { return generators.size() == 2; }
  /// Exact membership of a point of N̄_ℚ in the support.
  bool contains(const RatVector& x) const;
};

struct ScatteringDiagram {
  Seed seed;
  SeedLattices lattices;
  Int order = 0;
  std::vector<Wall> walls;
};

/// One incoming line per unfrozen index: support π₁(e_i)^⊥, function (1 + z^{e_i})^{|π₁(e_i)|}.
ScatteringDiagram initial_diagram(const Seed& seed, Int k);

/// Piecewise-linear path through rational points of N̄_ℚ.
using Path = std::vector<RatVector>;

/// θ_{γ,D} applied to s. Throws GeometryError if the path meets the origin or starts, ends
/// or runs along the support of a wall.
TruncatedSeries path_ordered_product(const ScatteringDiagram& D, const Path& path, const TruncatedSeries& s);

/// θ_{γ,D}(z^p) for p = key over base 0.
TruncatedSeries path_ordered_product(const ScatteringDiagram& D, const Path& path, const IntVector& p);

/// Adds outgoing walls order by order until loops around the origin act trivially mod 𝔪^{k+1}.
/// Rank N̄ ≤ 1 has no joints and returns the input; rank N̄ ≥ 3 is unsupported.
ScatteringDiagram consistent_completion(const ScatteringDiagram& D_in, Int k);

/// Merges walls with identical support and exponent and drops trivial functions.
ScatteringDiagram reduced(const ScatteringDiagram& D);

/// Truncates every function to order k and drops walls that become trivial.
ScatteringDiagram truncated(const ScatteringDiagram& D, Int k);

struct ConsistencyReport {
  bool consistent = true;
  std::optional<Path> failing_loop;
  std::optional<Index> failing_probe;
};

/// Random rectangular loops around the origin; every probe z^{e_j} must return unchanged.
ConsistencyReport consistency_check(const ScatteringDiagram& D, Int k, int trials, Rng& rng);

/// Random paths between random points, comparing images of the probes z^{e_j}.
bool diagrams_equivalent(const ScatteringDiagram& D1, const ScatteringDiagram& D2, Int k, int trials, Rng& rng);

/// A point of N̄_ℚ off every wall support, drawn from rng.
RatVector generic_point(const ScatteringDiagram& D, Rng& rng, Int bound = 5);
bool on_support(const ScatteringDiagram& D, const RatVector& x);

/// Rectangle with corners at the given extents, traversed counterclockwise from the
/// corner (x_hi, y_lo); closes back to its start.
Path rectangle_loop(const Rational& x_lo, const Rational& x_hi, const Rational& y_lo, const Rational& y_hi);

nlohmann::json diagram_to_json(const ScatteringDiagram& D);
ScatteringDiagram diagram_from_json(const nlohmann::json& j);

}  // namespace ct

#endif  // CT_SCATTERING_HPP
