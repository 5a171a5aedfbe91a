#ifndef CT_RATIONAL_HPP
#define CT_RATIONAL_HPP

#include <cstdint>
#include <string>

#include <Eigen/Core>
#include <boost/multiprecision/cpp_int.hpp>

namespace ct {

using Int = std::int64_t;
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                             boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

inline Rational make_rational(Int num, Int den = 1) { return Rational(BigInt(num), BigInt(den)); }

inline BigInt numer(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt denom(const Rational& q) { return boost::multiprecision::denominator(q); }

inline int sign(const Rational& q) { return q.sign(); }

inline bool is_integer(const Rational& q) { return denom(q) == 1; }

std::string to_string(const Rational& q);

}  // namespace ct

namespace Eigen {

template <>
struct NumTraits<ct::Rational> : GenericNumTraits<ct::Rational> {
  using Real = ct::Rational;
  using NonInteger = ct::Rational;
  using Nested = ct::Rational;
  using Literal = ct::Rational;

  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 4,
    AddCost = 32,
    MulCost = 64
  };

  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen

#endif  // CT_RATIONAL_HPP
