// ints.hpp -- exact integer scalars and small numeric helpers
#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>

namespace avass {

using Int = mpz_class;

inline Int int_abs(const Int& x) {
  Int r;
  mpz_abs(r.get_mpz_t(), x.get_mpz_t());
  return r;
}

inline Int int_gcd(const Int& a, const Int& b) {
  Int r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Int int_lcm(const Int& a, const Int& b) {
  Int r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Int int_pow(const Int& base, unsigned long exp) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

/// ceil(sqrt(x)) for x >= 0.
inline Int isqrt_ceil(const Int& x) {
  Int r;
  mpz_sqrt(r.get_mpz_t(), x.get_mpz_t());
  if (r * r < x) ++r;
  return r;
}

/// Number of bits of |x|; 0 for x = 0.
inline std::size_t bit_length(const Int& x) {
  if (x == 0) return 0;
  return mpz_sizeinbase(x.get_mpz_t(), 2);
}

inline bool fits_long(const Int& x) { return x.fits_slong_p(); }

inline long to_long(const Int& x) { return x.get_si(); }

inline std::string to_string(const Int& x) { return x.get_str(); }

}  // namespace avass
