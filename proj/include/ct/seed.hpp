#ifndef CT_SEED_HPP
#define CT_SEED_HPP

#include <string>
#include <vector>

#include "json.hpp"

#include "ct/lattice.hpp"

namespace ct {

/// Input record of a seed. Indices are 0-based; the JSON form is 1-based.
struct Seed {
  Index rank = 0;
  std::vector<Index> unfrozen;  // strictly increasing
  IntMatrix B;                  // B(i, j) = B(e_i, e_j)
  std::vector<Rational> d;      // one symmetrizer per unfrozen index
  std::vector<IntVector> fan_rays;  // in M coordinates, lying in N̄ = π₂(N)

  bool is_frozen(Index i) const;
  std::vector<Index> frozen() const;
};

/// Derived lattice data. N̄ is given coordinates through the Hermite basis L of the
/// column lattice of B, so that B = L * P2 and points of N̄ are integer r̄-vectors.
struct SeedLattices {
  Index rbar = 0;
  IntMatrix L;     // rank x rbar, basis of N̄ inside M
  IntMatrix P2;    // rbar x rank, column i = π₂(e_i) in N̄ coordinates
  IntMatrix Lift;  // rank x rbar, P2 * Lift = identity
  IntMatrix K2;    // rank x dim K₂, integral basis as columns

  /// π₂(n) in N̄ coordinates.
  IntVector nbar(const IntVector& n) const { return P2 * n; }
  /// π₁(n) as a covector on N̄ (dual coordinates).
  IntVector mbar(const IntVector& n) const { return L.transpose() * n; }
  /// Some n with nbar(n) = y.
  IntVector lift(const IntVector& y) const { return Lift * y; }
  /// Converts an element of M lying in N̄ to N̄ coordinates; throws DomainError otherwise.
  IntVector from_m(const IntVector& m) const;
  /// B(n1, n2) computed through N̄.
  Int pairing(const IntVector& n1, const IntVector& n2) const { return mbar(n1).dot(nbar(n2)); }
};

SeedLattices seed_lattices(const Seed& seed);

/// B(n, ·) for which = 1, B(·, n) for which = 2, in the basis of M dual to E.
IntVector pi_map(const Seed& seed, const IntVector& n, int which);

/// Integral basis of K₂ = ker π₂; empty if K₂ = 0.
std::vector<IntVector> kernel_K2(const Seed& seed);

/// Every violated assumption, as a human-readable line; empty if the seed is valid.
std::vector<std::string> validate_seed(const Seed& seed);

inline constexpr const char* kUnsaturatedMessage = "π₂(N) is not saturated in M";

/// Throws InputError listing the violations if the seed is not valid. With allow_unsaturated,
/// a non-saturated π₂(N) is tolerated: the computations work in π₂(N) itself, which is what
/// makes forms like [[0,2],[-2,0]] usable for scattering.
void require_valid(const Seed& seed, bool allow_unsaturated = false);

/// Intersection numbers of the curve class κ(k): the coordinates of k in basis E.
IntVector kappa_profile(const Seed& seed, const IntVector& k);

/// Coordinate-wise effectiveness test on K₂: for each ray of N̄ spanned by some π₂(e_i),
/// the weighted sum of the coordinates of indices mapping to that ray is nonnegative.
bool localized_effective(const Seed& seed, const IntVector& k);

/// Coordinate sum of p - base; DomainError if p - base has a negative coordinate.
Int nplus_order(const IntVector& p, const IntVector& base);

Seed seed_from_json(const nlohmann::json& j);
nlohmann::json seed_to_json(const Seed& seed);
Seed load_seed(const std::string& path);

}  // namespace ct

#endif  // CT_SEED_HPP
