#ifndef CT_TROPICAL_HPP
#define CT_TROPICAL_HPP

#include <vector>

#include "json.hpp"

#include "ct/random.hpp"
#include "ct/theta.hpp"

namespace ct {

/// Affine subspace of N̄_ℚ: point + span(directions), carrying a positive weight.
struct AffineConstraint {
  RatVector point;
  std::vector<IntVector> directions;
  Int weight = 1;

  Index codim() const;
  bool contains(const RatVector& x) const;
  bool parallel(const IntVector& v) const;
};

/// Unbounded edge E_j: degree Δ(j), incidence condition A_j and ψ-power s_j.
struct TropicalLeg {
  IntVector delta;
  bool contracted = false;  // weight-0 legs and the special edge E_0
  AffineConstraint constraint;
  Int psi = 0;
};

struct TropicalProblem {
  std::vector<TropicalLeg> legs;
  int special = -1;  // index of E_0 for disks

  /// Σ codim(A_j) + Σ s_j == #J + r - 3 with r = 2.
  bool dimension_count_holds() const;
};

struct TropicalEdge {
  int a = 0;
  int b = -1;          // -1 for unbounded legs
  IntVector momentum;  // w(E)·u_{(a,E)}
  int leg = -1;        // leg index, -1 for bounded edges
};

/// A parameterized genus-0 tropical curve or disk in N̄_ℝ ≅ ℝ².
struct TropicalCurve {
  std::vector<RatVector> positions;
  std::vector<TropicalEdge> edges;
  int root = 0;  // V₀ for disks

  Index valence(int v) const;
  /// Balancing at every vertex, using the leg degrees; E_0 counts with its degree.
  bool balanced() const;
  /// Bounded edges point along their momentum with positive length.
  bool realized() const;
};

/// All rigid curves of the given degree matching the constraints, by brute force over labeled
/// trees and exact solving for vertex positions. Intended for small problems. With
/// require_rigid the dimension count is enforced (DomainError); without it, types whose
/// positions are not uniquely determined are skipped, so overconstrained data yields nothing.
std::vector<TropicalCurve> enumerate_rigid(const TropicalProblem& P, bool require_rigid = true);

/// Mult(Γ) = |ω₀| with the given sink.
Int mult_gw(const TropicalCurve& curve, const TropicalProblem& P, int sink);

/// ⟨Γ⟩ = Π (val(V) - 3)! / Π s_j!.
Int multinomial_weight(const TropicalCurve& curve, const TropicalProblem& P);

/// Weight vectors w⃗ = (w_i) over unfrozen i, each nondecreasing, with points p⃗.
struct DegreeSpec {
  std::vector<std::vector<Int>> weights;  // indexed like Seed::unfrozen
  std::vector<IntVector> points;

  Int total_weight() const;
  /// Σ_{ij} w_ij e_i + Σ_k φ(p_k).
  IntVector n_out(const Seed& seed, const PLSection& phi) const;
  Int aut_order() const;
  /// a_{w⃗} = Π_{ij} (-1)^{w+1}/w.
  Rational a_w() const;
};

/// Every w⃗ with total weight ≤ k such that Σ w_ij π₂(e_i) + Σ p_k = p.
std::vector<DegreeSpec> weight_vectors(const Seed& seed, const SeedLattices& lat, const std::vector<IntVector>& points,
                                       const IntVector& p, Int k);

/// The degree Δ_{w⃗,p⃗} with conditions A_{w⃗,p⃗,Q} and Ψ_{w⃗,p⃗}. Legs are ordered wall legs (i,j),
/// then the points, then out, then ∞. Wall legs lie on the given translates of 𝔡_i.
TropicalProblem disk_problem(const Seed& seed, const SeedLattices& lat, const DegreeSpec& spec,
                             const std::vector<RatVector>& translates, const RatVector& Q);

/// Rigid disks for disk_problem, enumerated by their structure: every branch at V₀ carries
/// exactly one point leg, with wall-leg trees attached along its spine.
std::vector<TropicalCurve> enumerate_disks(const TropicalProblem& P, std::size_t wall_legs, std::size_t points);

struct LieMultiplicity {
  Rational coefficient;  // k·a_{w⃗}, with k > 0
  IntVector exponent;    // n_out
  Int k = 0;
};

/// Lie-theoretic mult(Γ): brackets of g_{iw} and z^{φ(p_k)} flowing into V₀.
LieMultiplicity mult_lie(const TropicalCurve& curve, const Seed& seed, const SeedLattices& lat, const PLSection& phi,
                         const DegreeSpec& spec);

/// Random translate offsets for the wall legs of spec, scaled well below the clearance of Q.
std::vector<RatVector> generic_translates(const ScatteringDiagram& D, const DegreeSpec& spec, const RatVector& Q,
                                          Int k, Rng& rng);

/// α(p⃗; p) by tropical disk counting at Q (which must be near the ray through p unless p = 0).
/// The result is over base Σ φ(p_i) − φ(p) like the theta-side coefficient.
TruncatedSeries tropical_alpha(const ScatteringDiagram& D, const PLSection& phi, const std::vector<IntVector>& points,
                               const IntVector& p, const RatVector& Q, Int k, Rng& rng);

/// Intersection profile of the degree: Σ_j w_ij for unfrozen i, and for a frozen f with ray ρ,
/// Σ_{p_k ∈ ρ} |p_k| minus |p| if p ∈ ρ. Points off the frozen rays raise DomainError.
IntVector degree_curve_class(const Seed& seed, const SeedLattices& lat, const DegreeSpec& spec, const IntVector& p);

nlohmann::json curve_to_json(const TropicalCurve& curve, const TropicalProblem& P);

}  // namespace ct

#endif  // CT_TROPICAL_HPP
