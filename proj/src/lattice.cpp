#include "ct/lattice.hpp"

#include <numeric>
#include <sstream>

namespace ct {

std::string to_string(const Rational& q) {
  std::ostringstream out;
  out << numer(q);
  if (denom(q) != 1) out << "/" << denom(q);
  return out.str();
}

Int gcd(Int a, Int b) { return std::gcd(a, b); }

Int lattice_index(const IntVector& v) {
  Int g = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) g = std::gcd(g, v(i));
  return g;
}

IntVector primitive(const IntVector& v) {
  Int g = lattice_index(v);
  if (g == 0) throw DomainError("primitive: zero vector");
  return v / g;
}

Int coordinate_sum(const IntVector& v) { return v.size() == 0 ? 0 : v.sum(); }

bool nonnegative(const IntVector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v(i) < 0) return false;
  return true;
}

RatVector to_rational(const IntVector& v) {
  RatVector q(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) q(i) = Rational(v(i));
  return q;
}

std::optional<IntVector> to_integer(const RatVector& q) {
  IntVector v(q.size());
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    if (!is_integer(q(i))) return std::nullopt;
    v(i) = static_cast<Int>(numer(q(i)));
  }
  return v;
}

namespace {

struct ExtendedGcd {
  Int g, s, t;
};

ExtendedGcd extended_gcd(Int a, Int b) {
  Int old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    Int q = old_r / r;
    Int tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

// Replace columns j,k of A (and U) by unimodular combinations; Uinv gets the inverse row ops.
void combine_columns(IntMatrix& A, IntMatrix& U, IntMatrix& Uinv, Eigen::Index j, Eigen::Index k,
                     Int a, Int b, Int c, Int d) {
  // new_j = a*col_j + b*col_k, new_k = c*col_j + d*col_k, with a*d - b*c = 1.
  IntVector Aj = A.col(j), Ak = A.col(k);
  A.col(j) = a * Aj + b * Ak;
  A.col(k) = c * Aj + d * Ak;
  IntVector Uj = U.col(j), Uk = U.col(k);
  U.col(j) = a * Uj + b * Uk;
  U.col(k) = c * Uj + d * Uk;
  Eigen::Matrix<Int, 1, Eigen::Dynamic> Rj = Uinv.row(j), Rk = Uinv.row(k);
  Uinv.row(j) = d * Rj - c * Rk;
  Uinv.row(k) = -b * Rj + a * Rk;
}

}  // namespace

ColumnHermite column_hermite(const IntMatrix& A_in) {
  IntMatrix A = A_in;
  const Eigen::Index rows = A.rows(), cols = A.cols();
  IntMatrix U = IntMatrix::Identity(cols, cols);
  IntMatrix Uinv = IntMatrix::Identity(cols, cols);
  Eigen::Index pivot_col = 0;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pivots;
  for (Eigen::Index row = 0; row < rows && pivot_col < cols; ++row) {
    for (Eigen::Index k = pivot_col + 1; k < cols; ++k) {
      Int x = A(row, pivot_col), y = A(row, k);
      if (y == 0) continue;
      auto [g, s, t] = extended_gcd(x, y);
      // new pivot = s*col_p + t*col_k; new k = -(y/g)*col_p + (x/g)*col_k.
      combine_columns(A, U, Uinv, pivot_col, k, s, t, -(y / g), x / g);
    }
    if (A(row, pivot_col) == 0) continue;
    if (A(row, pivot_col) < 0) {
      A.col(pivot_col) *= -1;
      U.col(pivot_col) *= -1;
      Uinv.row(pivot_col) *= -1;
    }
    const Int p = A(row, pivot_col);
    for (auto [prow, pcol] : pivots) {
      (void)prow;
      Int e = A(row, pcol);
      Int q = e / p;
      if (e - q * p < 0) --q;
      if (q == 0) continue;
      // col_pcol -= q * col_pivot (a shear, inverse adds q * row_pcol to row_pivot).
      A.col(pcol) -= q * A.col(pivot_col);
      U.col(pcol) -= q * U.col(pivot_col);
      Uinv.row(pivot_col) += q * Uinv.row(pcol);
    }
    pivots.emplace_back(row, pivot_col);
    ++pivot_col;
  }
  ColumnHermite out;
  out.rank = pivot_col;
  out.H = A.leftCols(pivot_col);
  out.U = U;
  out.Uinv = Uinv;
  return out;
}

IntMatrix integer_kernel(const IntMatrix& A) {
  ColumnHermite h = column_hermite(A);
  return h.U.rightCols(A.cols() - h.rank);
}

namespace {

void minors_gcd(const IntMatrix& L, std::vector<Eigen::Index>& chosen, Eigen::Index next, Int& g) {
  const Eigen::Index k = L.cols();
  if (static_cast<Eigen::Index>(chosen.size()) == k) {
    RatMatrix sub(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j < k; ++j) sub(i, j) = Rational(L(chosen[i], j));
    Rational det = determinant(sub);
    g = std::gcd(g, static_cast<Int>(numer(det)));
    return;
  }
  for (Eigen::Index r = next; r < L.rows(); ++r) {
    chosen.push_back(r);
    minors_gcd(L, chosen, r + 1, g);
    chosen.pop_back();
    if (g == 1) return;
  }
}

}  // namespace

bool columns_saturated(const IntMatrix& L) {
  if (L.cols() == 0) return true;
  Int g = 0;
  std::vector<Eigen::Index> chosen;
  minors_gcd(L, chosen, 0, g);
  return g == 1;
}

Rational determinant(RatMatrix A) {
  const Eigen::Index n = A.rows();
  Rational det = 1;
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index pivot = -1;
    for (Eigen::Index r = col; r < n; ++r)
      if (A(r, col) != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) return 0;
    if (pivot != col) {
      A.row(pivot).swap(A.row(col));
      det = -det;
    }
    det *= A(col, col);
    for (Eigen::Index r = col + 1; r < n; ++r) {
      if (A(r, col) == 0) continue;
      Rational f = A(r, col) / A(col, col);
      for (Eigen::Index c = col; c < n; ++c) A(r, c) -= f * A(col, c);
    }
  }
  return det;
}

std::optional<RatVector> solve_unique(const RatMatrix& A_in, const RatVector& b_in) {
  const Eigen::Index rows = A_in.rows(), cols = A_in.cols();
  RatMatrix A(rows, cols + 1);
  A.leftCols(cols) = A_in;
  A.col(cols) = b_in;
  std::vector<Eigen::Index> pivot_cols;
  Eigen::Index rank = 0;
  for (Eigen::Index col = 0; col < cols && rank < rows; ++col) {
    Eigen::Index pivot = -1;
    for (Eigen::Index r = rank; r < rows; ++r)
      if (A(r, col) != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    A.row(pivot).swap(A.row(rank));
    Rational inv = Rational(1) / A(rank, col);
    for (Eigen::Index c = col; c <= cols; ++c) A(rank, c) *= inv;
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (r == rank || A(r, col) == 0) continue;
      Rational f = A(r, col);
      for (Eigen::Index c = col; c <= cols; ++c) A(r, c) -= f * A(rank, c);
    }
    pivot_cols.push_back(col);
    ++rank;
  }
  if (rank < cols) return std::nullopt;
  for (Eigen::Index r = rank; r < rows; ++r)
    if (A(r, cols) != 0) return std::nullopt;
  RatVector x(cols);
  for (Eigen::Index i = 0; i < rank; ++i) x(pivot_cols[i]) = A(i, cols);
  return x;
}

Rational dot(const RatVector& a, const RatVector& b) {
  Rational s = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) s += a(i) * b(i);
  return s;
}

Rational cross2(const RatVector& a, const RatVector& b) { return a(0) * b(1) - a(1) * b(0); }

Int cross2(const IntVector& a, const IntVector& b) { return a(0) * b(1) - a(1) * b(0); }

namespace {

int half_plane(const RatVector& a) {
  // 0 for angles in [0, pi), 1 for [pi, 2pi).
  if (a(1) > 0 || (a(1) == 0 && a(0) > 0)) return 0;
  return 1;
}

}  // namespace

bool angle_less(const RatVector& a, const RatVector& b) {
  int ha = half_plane(a), hb = half_plane(b);
  if (ha != hb) return ha < hb;
  return cross2(a, b) > 0;
}

IntVector planar_normal(const IntVector& v) {
  IntVector n(2);
  n << v(1), -v(0);
  return primitive(n);
}

std::string format_vector(const IntVector& v) {
  std::ostringstream out;
  out << "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) out << (i ? "," : "") << v(i);
  out << ")";
  return out.str();
}

std::string format_vector(const RatVector& v) {
  std::ostringstream out;
  out << "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) out << (i ? "," : "") << to_string(v(i));
  out << ")";
  return out.str();
}

}  // namespace ct
