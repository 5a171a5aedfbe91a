#ifndef CT_SVG_HPP
#define CT_SVG_HPP

#include <string>
#include <vector>

#include "ct/scattering.hpp"
#include "ct/tropical.hpp"

namespace ct {

/// Rank-2 picture of a diagram: each wall drawn from the origin along its generators and
/// labeled by its leading term. Depends only on what diagram_to_json records.
std::string diagram_svg(const ScatteringDiagram& D);

using CurveGroup = std::pair<TropicalProblem, std::vector<TropicalCurve>>;

/// Tropical curves drawn over the walls of D: bounded edges as segments, legs as short rays
/// along their momentum, point constraints as circles.
std::string curves_svg(const ScatteringDiagram& D, const std::vector<CurveGroup>& groups);

}  // namespace ct

#endif  // CT_SVG_HPP
