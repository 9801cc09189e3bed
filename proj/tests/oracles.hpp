#pragma once

// Independent high-precision evaluations of the index formulas, for checking
// the double-precision implementations. 50 significant decimal digits.

#include <cstdint>

#include <boost/multiprecision/cpp_dec_float.hpp>

namespace nashbandit::oracle {

using Real = boost::multiprecision::cpp_dec_float_50;

inline Real ncb(Real mean, Real n, Real T) { return mean + 4 * sqrt(mean * log(T) / n); }

inline Real modified_ncb(Real mean, Real n, Real W, Real c) { return mean + 2 * c * sqrt(2 * mean * log(W) / n); }

inline Real ucb(Real mean, Real n, Real T) { return mean + sqrt(2 * log(T) / n); }

// Raw (uncapped, unrounded) exploration length.
inline Real phase1_raw(Real k, Real T) { return 16 * sqrt(k * T * log(T) / log(k)); }

inline std::uint64_t phase1(std::uint64_t k, std::uint64_t T) {
  if (k == 1) return 0;
  const Real raw = phase1_raw(Real(k), Real(T));
  if (raw >= Real(T)) return T;
  return static_cast<std::uint64_t>(ceil(raw));
}

inline double rel_err(double got, const Real& want) {
  const Real diff = abs(Real(got) - want);
  if (want == 0) return static_cast<double>(diff);
  return static_cast<double>(diff / abs(want));
}

}  // namespace nashbandit::oracle
