#ifndef CT_LATTICE_HPP
#define CT_LATTICE_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ct/rational.hpp"

namespace ct {

using Index = Eigen::Index;
using IntVector = Eigen::Matrix<Int, Eigen::Dynamic, 1>;
using IntMatrix = Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic>;
using RatVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;
using RatMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;

// Exponents live in N; points of the scattering space live in N̄ (coordinates in the
// Hermite basis of π₂(N)); covectors live in M̄ (dual coordinates).
using Exponent = IntVector;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InputError : Error {
  using Error::Error;
};
struct DomainError : Error {
  using Error::Error;
};
// Raised when a point or path is incident to a wall or joint; callers resample.
struct GeometryError : Error {
  using Error::Error;
};
struct UnsupportedScope : Error {
  using Error::Error;
};
struct InternalError : Error {
  using Error::Error;
};
// Caller misuse such as combining series of different truncation orders.
struct UsageError : Error {
  using Error::Error;
};

/// Lexicographic order on integer vectors; shorter vectors sort first.
struct LexLess {
  template <typename Derived>
  bool operator()(const Eigen::MatrixBase<Derived>& a, const Eigen::MatrixBase<Derived>& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      if (a(i) < b(i)) return true;
      if (b(i) < a(i)) return false;
    }
    return false;
  }
};

template <typename Derived>
bool equal_vectors(const Eigen::MatrixBase<Derived>& a, const Eigen::MatrixBase<Derived>& b) {
  return a.size() == b.size() && (a.size() == 0 || a == b);
}

Int gcd(Int a, Int b);

/// Index of v: the largest g with v/g integral (0 for the zero vector).
Int lattice_index(const IntVector& v);

IntVector primitive(const IntVector& v);

/// Coordinate sum.
Int coordinate_sum(const IntVector& v);

bool nonnegative(const IntVector& v);

RatVector to_rational(const IntVector& v);

/// Integral vector if every entry of q is an integer.
std::optional<IntVector> to_integer(const RatVector& q);

/// Column-style Hermite form: A * U = [H | 0] with U unimodular and H of full column rank.
struct ColumnHermite {
  IntMatrix H;
  IntMatrix U;
  IntMatrix Uinv;
  Eigen::Index rank = 0;
};

ColumnHermite column_hermite(const IntMatrix& A);

/// Integral basis (as columns) of {x : A x = 0}.
IntMatrix integer_kernel(const IntMatrix& A);

/// True iff the column lattice of L is saturated, i.e. the maximal minors are coprime.
bool columns_saturated(const IntMatrix& L);

Rational determinant(RatMatrix A);

/// Rank over Q via fraction-free elimination on a copy.
template <typename Scalar>
Eigen::Index exact_rank(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& M) {
  RatMatrix A = M.template cast<Rational>();
  Eigen::Index rank = 0;
  for (Eigen::Index col = 0; col < A.cols() && rank < A.rows(); ++col) {
    Eigen::Index pivot = -1;
    for (Eigen::Index r = rank; r < A.rows(); ++r)
      if (A(r, col) != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    A.row(pivot).swap(A.row(rank));
    for (Eigen::Index r = rank + 1; r < A.rows(); ++r) {
      if (A(r, col) == 0) continue;
      Rational factor = A(r, col) / A(rank, col);
      for (Eigen::Index c = col; c < A.cols(); ++c) A(r, c) -= factor * A(rank, c);
    }
    ++rank;
  }
  return rank;
}

/// Unique solution of A x = b, or nullopt if singular or inconsistent.
std::optional<RatVector> solve_unique(const RatMatrix& A, const RatVector& b);

Rational dot(const RatVector& a, const RatVector& b);

// Planar helpers; all vectors are 2-dimensional.
Rational cross2(const RatVector& a, const RatVector& b);
Int cross2(const IntVector& a, const IntVector& b);

/// Strict counterclockwise angular order of nonzero vectors, starting at the positive x-axis.
bool angle_less(const RatVector& a, const RatVector& b);

/// Primitive integer normal (a_2, -a_1)/g of a nonzero planar integer vector.
IntVector planar_normal(const IntVector& v);

std::string format_vector(const IntVector& v);
std::string format_vector(const RatVector& v);

}  // namespace ct

#endif  // CT_LATTICE_HPP
