#ifndef VCOARSE_RATIONAL_HPP
#define VCOARSE_RATIONAL_HPP

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace vcoarse
{

using Rational = mpq_class;
using Integer = mpz_class;

// Parses "3", "-7/4" or "0". Throws StructuralError on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

// Canonical text: "n" when the denominator is 1, otherwise "n/d".
std::string to_string(const Rational &r);

Rational rational_pow(const Rational &base, long exponent);
Integer integer_pow(long base, unsigned long exponent);

bool is_prime(long n);

// Exponent of the prime p in r (numerator minus denominator multiplicity); r must be nonzero.
long p_adic_valuation(const Rational &r, long p);

bool is_integer(const Rational &r);

// True iff the reduced denominator of r is a power of p (including 1).
bool denominator_is_p_power(const Rational &r, long p);

} // namespace vcoarse

#endif
