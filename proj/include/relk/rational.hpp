#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace relk {

// All arithmetic in the engine is exact. Every verification reduces to
// algebraic identity checking over Q, so floating point never appears.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& x) { return numerator(x); }
inline Int rat_den(const Rat& x) { return denominator(x); }

inline bool rat_is_integer(const Rat& x) { return denominator(x) == 1; }

// Floor division toward minus infinity.
inline Int int_floor_div(const Int& a, const Int& b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Canonical representative of x mod 1 in [0, 1).
inline Rat rat_mod1(const Rat& x) {
  Int fl = int_floor_div(numerator(x), denominator(x));
  return x - Rat(fl);
}

// "num/den" with den > 0, lowest terms; denominator always printed.
inline std::string rat_str(const Rat& x) {
  return numerator(x).str() + "/" + denominator(x).str();
}

}  // namespace relk
