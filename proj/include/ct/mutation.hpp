#ifndef CT_MUTATION_HPP
#define CT_MUTATION_HPP

#include <vector>

#include "ct/random.hpp"
#include "ct/theta.hpp"

namespace ct {

/// Fomin–Zelevinsky mutation of B at the unfrozen index i; d, the frozen set and the fan
/// rays are kept as they are.
Seed mutate_seed(const Seed& seed, Index i);

/// Mutation at i seen as a change of basis of N: e'_i = -e_i, e'_k = e_k + a_k e_i.
/// Frozen vectors stay fixed, and the a_k are chosen so that the Gram matrix of B in the new
/// basis is the mutated matrix on the unfrozen block.
struct MutationStep {
  Index index = 0;
  IntMatrix basis;    // column k = e'_k in old coordinates
  IntMatrix inverse;  // old coordinates -> new coordinates
  IntVector wall;     // π₁(e_i) as a covector on N̄
  IntVector shear;    // π₂(e_i) in N̄ coordinates
  int side = 1;       // the transport is the identity where side·⟨π₁(e_i), y⟩ ≥ 0
};

/// Throws UnsupportedScope if no basis of that shape reproduces the mutated matrix.
MutationStep mutation_step(const Seed& seed, const SeedLattices& lat, Index i);

/// The same seed written in the basis of step: B ↦ CᵀBC, fan rays ↦ Cᵀ·ray. Without frozen
/// indices its B is mutate_seed's.
Seed mutated_presentation(const Seed& seed, const MutationStep& step);

/// Piecewise-linear transport of a theta label: identity on the half-space named by step.side,
/// y ↦ y + |⟨π₁(e_i), y⟩| π₂(e_i) on the other, then rewritten in the coordinates of the
/// mutated seed's N̄. With wrong_side the roles of the two half-spaces are swapped.
IntVector transport_label(const MutationStep& step, const SeedLattices& from, const SeedLattices& to,
                          const IntVector& y, bool wrong_side = false);

struct MutationAgreement {
  bool agree = false;
  std::size_t compared = 0;  // labels of order ≤ k in both presentations
  std::vector<IntVector> transported_points;
  ThetaExpansion original;
  ThetaExpansion mutated;
};

/// Expands ϑ_{p_1}···ϑ_{p_s} in the seed and ϑ_{T(p_1)}···ϑ_{T(p_s)} in mutate_seed(seed, i),
/// then compares α(p⃗; r) with α'(T p⃗; T r) for every r whose order is at most k on both sides.
/// Structure constants are scalars here, so the seed must have K₂ = 0.
MutationAgreement structure_constant_agreement(const Seed& seed, Index i, const std::vector<IntVector>& points,
                                               Int k, Rng& rng, bool wrong_side = false);

struct EffectivenessReport {
  std::size_t exponents = 0;
  std::size_t presentations = 0;  // the seed plus each single mutation
  std::vector<IntVector> failures;
  bool ok() const { return failures.empty(); }
};

/// A necessary condition for κ(s) ∈ NE(Y): its pushforward to the toric model is effective.
/// The toric model's boundary degrees are the per-ray sums of the coordinates of s. With
/// mutated_at = i, the model is the one after mutating at i: the ray -π₂(e_i) is added,
/// C_i' = F - C_i replaces C_i (F the fiber of the projection along π₂(e_i)), and the fan is
/// sheared on one side of that projection.
bool toric_pushforward_effective(const Seed& seed, const SeedLattices& lat, const IntVector& s,
                                 Index mutated_at = -1);

/// Every exponent of every structure constant in e lies in K₂ and passes
/// toric_pushforward_effective in the seed and after each single mutation.
EffectivenessReport exponent_effectiveness(const Seed& seed, const ThetaExpansion& e);

}  // namespace ct

#endif  // CT_MUTATION_HPP
