#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace uh {

using Int = mpz_class;
using Rat = mpq_class;

// Complex number with exact rational parts.
struct CRat {
    Rat re;
    Rat im;

    CRat() = default;
    CRat(const Rat& r) : re(r), im(0) {}
    CRat(const Rat& r, const Rat& i) : re(r), im(i) {}
    CRat(long r) : re(r), im(0) {}

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
    Rat norm2() const { return re * re + im * im; }
    CRat conj() const { return {re, -im}; }

    CRat& operator+=(const CRat& o) { re += o.re; im += o.im; return *this; }
    CRat& operator-=(const CRat& o) { re -= o.re; im -= o.im; return *this; }
    CRat& operator*=(const CRat& o);
    CRat& operator*=(const Rat& s) { re *= s; im *= s; return *this; }
};

inline CRat operator+(CRat a, const CRat& b) { return a += b; }
inline CRat operator-(CRat a, const CRat& b) { return a -= b; }
inline CRat operator-(const CRat& a) { return {-a.re, -a.im}; }
inline CRat operator*(const CRat& a, const CRat& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline CRat operator*(CRat a, const Rat& s) { return a *= s; }
inline CRat operator*(const Rat& s, CRat a) { return a *= s; }
inline CRat& CRat::operator*=(const CRat& o) { return *this = *this * o; }
inline bool operator==(const CRat& a, const CRat& b) { return a.re == b.re && a.im == b.im; }
inline bool operator!=(const CRat& a, const CRat& b) { return !(a == b); }
CRat operator/(const CRat& a, const CRat& b);
CRat pow(const CRat& z, unsigned e);

// Parses "p", "-p" or "p/q" (no decimals, no whitespace). Throws std::invalid_argument.
Rat parse_rat(std::string_view s);
std::string to_string(const Rat& q);
std::string to_string(const CRat& z);

// p/q in canonical form (the two-argument mpq_class constructor does not reduce).
Rat ratio(const Int& p, const Int& q);

Int factorial(unsigned long k);
Int binomial(unsigned long n, unsigned long k);
Rat rat_pow(const Rat& x, unsigned long e);
Int ceil_rat(const Rat& x);
Int floor_rat(const Rat& x);
Rat abs(const Rat& x);

// Smallest multiple of 10^-digits that is >= x.
Rat ceil_decimal(const Rat& x, unsigned digits);

// Certified rational enclosures of irrational quantities. Every function returns
// [lo, hi] with lo <= true value <= hi; results are exact when the value is rational
// and detectable (perfect squares, exp(0), log(1)).
struct Bounds {
    Rat lo;
    Rat hi;
};

Bounds sqrt_bounds(const Rat& x);          // x >= 0
Bounds modulus_bounds(const CRat& z);      // |z|
Bounds exp_bounds(const Rat& x);
Bounds log_bounds(const Rat& x);           // x > 0
Bounds pow_bounds(const Rat& x, const Rat& beta);  // x >= 0, beta > 0
Bounds exp_bounds(const Bounds& x);        // monotone lift
Bounds log_bounds(const Bounds& x);

inline Rat sqrt_upper(const Rat& x) { return sqrt_bounds(x).hi; }
inline Rat modulus_upper(const CRat& z) { return modulus_bounds(z).hi; }

// Working precision (bits) for MPFR-backed enclosures.
constexpr long kBoundPrecision = 192;

double to_double(const Rat& q);
// Exact conversion of a finite double.
Rat from_double(double d);

}  // namespace uh
