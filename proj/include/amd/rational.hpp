#ifndef AMD_RATIONAL_HPP
#define AMD_RATIONAL_HPP

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace amd {

// Exact arithmetic throughout the toolkit; no floating point on any
// semantic path. GMP keeps values canonical (lowest terms, positive
// denominator) after every operation.
using Rational = mpq_class;

// Parses "num", "num/den", with optional sign. Rejects a zero
// denominator and malformed text. `what` names the value in error
// messages ("prior of agent1", ...).
Rational parse_rational(std::string_view text, std::string_view what = "value");

// Lowest-terms rendering: integers as "5", everything else as "num/den".
std::string to_string(const Rational& q);

// mpq_class has no long long constructors; route through long, which is
// 64-bit on the supported platforms.
inline Rational make_rational(long long num) {
  return Rational(static_cast<long>(num));
}
inline Rational make_rational(long long num, long long den) {
  Rational q(static_cast<long>(num), static_cast<long>(den));
  q.canonicalize();
  return q;
}

inline bool is_canonical(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c == q && mpz_sgn(q.get_den().get_mpz_t()) > 0 &&
         mpz_cmp(c.get_num().get_mpz_t(), q.get_num().get_mpz_t()) == 0 &&
         mpz_cmp(c.get_den().get_mpz_t(), q.get_den().get_mpz_t()) == 0;
}

}  // namespace amd

#endif  // AMD_RATIONAL_HPP
