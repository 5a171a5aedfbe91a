#include "ct/svg.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace ct {

namespace {

constexpr double kSize = 400;   // canvas is [-kSize, kSize]² in screen units
constexpr double kReach = 360;  // wall length on screen

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", std::abs(x) < 5e-4 ? 0.0 : x);
  return buf;
}

double to_double(const Rational& q) { return static_cast<double>(q); }

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

std::string monomial_label(const Rational& c, const IntVector& n) {
  std::ostringstream os;
  if (c != 1) os << c << "·";
  os << "z^" << format_vector(n);
  return os.str();
}

// Leading term 1 + c_j z^{jn} for the first nonzero c_j.
std::string wall_label(const WallFunction& f) {
  for (std::size_t j = 0; j < f.coefficients.size(); ++j)
    if (f.coefficients[j] != 0) return "1 + " + monomial_label(f.coefficients[j], IntVector(f.n * Int(j + 1)));
  return "1";
}

void open_canvas(std::ostringstream& os) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << num(-kSize) << ' ' << num(-kSize) << ' '
     << num(2 * kSize) << ' ' << num(2 * kSize) << "\" width=\"800\" height=\"800\">\n";
  os << "<rect x=\"" << num(-kSize) << "\" y=\"" << num(-kSize) << "\" width=\"" << num(2 * kSize) << "\" height=\""
     << num(2 * kSize) << "\" fill=\"white\"/>\n";
}

// Screen y grows downward.
std::pair<double, double> screen(double x, double y) { return {x, -y}; }

void draw_walls(std::ostringstream& os, const ScatteringDiagram& D) {
  for (std::size_t w = 0; w < D.walls.size(); ++w) {
    const Wall& wall = D.walls[w];
    const std::string style = wall.incoming ? "stroke=\"#1f4e9c\" stroke-dasharray=\"8 4\"" : "stroke=\"#b03a2e\"";
    for (std::size_t g = 0; g < wall.generators.size(); ++g) {
      const IntVector& v = wall.generators[g];
      double len = std::hypot(double(v(0)), double(v(1)));
      auto [x, y] = screen(kReach * double(v(0)) / len, kReach * double(v(1)) / len);
      os << "<line x1=\"0\" y1=\"0\" x2=\"" << num(x) << "\" y2=\"" << num(y) << "\" " << style
         << " stroke-width=\"2\"/>\n";
      if (g == 0)
        os << "<text x=\"" << num(x * 0.8) << "\" y=\"" << num(y * 0.8 - 6) << "\" font-size=\"12\">"
           << escape(wall_label(wall.function)) << "</text>\n";
    }
  }
  os << "<circle cx=\"0\" cy=\"0\" r=\"3\" fill=\"black\"/>\n";
}

}  // namespace

std::string diagram_svg(const ScatteringDiagram& D) {
  if (D.lattices.rbar != 2) throw UnsupportedScope("SVG rendering needs rank N̄ = 2");
  std::ostringstream os;
  open_canvas(os);
  os << "<!-- order " << D.order << ", " << D.walls.size() << " walls -->\n";
  draw_walls(os, D);
  os << "</svg>\n";
  return os.str();
}

std::string curves_svg(const ScatteringDiagram& D, const std::vector<CurveGroup>& groups) {
  if (D.lattices.rbar != 2) throw UnsupportedScope("SVG rendering needs rank N̄ = 2");
  // fit every vertex and point constraint into 60% of the canvas
  double extent = 1;
  auto grow = [&](const RatVector& x) {
    extent = std::max({extent, std::abs(to_double(x(0))), std::abs(to_double(x(1)))});
  };
  std::size_t count = 0;
  for (const auto& [P, curves] : groups) {
    count += curves.size();
    for (const TropicalCurve& c : curves)
      for (const RatVector& x : c.positions) grow(x);
    for (const TropicalLeg& leg : P.legs)
      if (leg.constraint.codim() == 2) grow(leg.constraint.point);
  }
  const double scale = 0.6 * kSize / extent;
  auto at = [&](const RatVector& x) { return screen(scale * to_double(x(0)), scale * to_double(x(1))); };

  std::ostringstream os;
  open_canvas(os);
  os << "<!-- " << count << " curves -->\n";
  draw_walls(os, D);
  for (const auto& group : groups) {
    for (const TropicalCurve& c : group.second) {
      os << "<g stroke=\"#2e7d32\" stroke-width=\"2\" fill=\"none\">\n";
      for (const TropicalEdge& e : c.edges) {
        auto [x1, y1] = at(c.positions[std::size_t(e.a)]);
        double x2, y2;
        if (e.b >= 0) {
          std::tie(x2, y2) = at(c.positions[std::size_t(e.b)]);
        } else {
          if (e.momentum.isZero()) continue;
          double len = std::hypot(double(e.momentum(0)), double(e.momentum(1)));
          auto [dx, dy] = screen(40 * double(e.momentum(0)) / len, 40 * double(e.momentum(1)) / len);
          x2 = x1 + dx;
          y2 = y1 + dy;
        }
        os << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2) << "\" y2=\"" << num(y2)
           << "\"/>\n";
      }
      os << "</g>\n";
      for (std::size_t v = 0; v < c.positions.size(); ++v) {
        auto [x, y] = at(c.positions[v]);
        os << "<circle cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\"" << (int(v) == c.root ? 4 : 2)
           << "\" fill=\"#2e7d32\"/>\n";
      }
    }
  }
  for (const auto& group : groups)
    for (const TropicalLeg& leg : group.first.legs)
      if (leg.constraint.codim() == 2) {
        auto [x, y] = at(leg.constraint.point);
        os << "<circle cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\"5\" fill=\"none\" stroke=\"black\"/>\n";
      }
  os << "</svg>\n";
  return os.str();
}

}  // namespace ct
