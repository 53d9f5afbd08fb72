#pragma once

#include <gmpxx.h>

#include <cmath>
#include <string>

#include "rnderiv/errors.hpp"

namespace rnderiv {

// All masses, endpoints and simple-function values are exact rationals.
// GMP's mpq_class already maintains the canonical form (reduced, positive
// denominator), which is exactly the invariant the artifact needs.
using Rat = mpq_class;
using Int = mpz_class;

inline Rat make_rat(const Int& num, const Int& den) {
    if (den == 0) fail(ErrorCode::invalid_argument, "rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Rat make_rat(long num, long den) { return make_rat(Int(num), Int(den)); }

// Parses "p", "p/q", or a plain decimal such as "0.25" or "1e-6" (decimals
// convert exactly; no binary rounding is involved).
Rat parse_rat(const std::string& text);

// "p" when the denominator is one, else "p/q".
std::string rat_str(const Rat& r);

// Nearest double (mpq_get_d truncates; this corrects to round-to-nearest).
double rat_to_double(const Rat& r);

// Exact value of a double (doubles are dyadic rationals).
Rat rat_from_double(double x);

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

inline Rat pow_rat(const Rat& base, unsigned long e) {
    Rat out;
    mpz_pow_ui(mpq_numref(out.get_mpq_t()), mpq_numref(base.get_mpq_t()), e);
    mpz_pow_ui(mpq_denref(out.get_mpq_t()), mpq_denref(base.get_mpq_t()), e);
    return out; // base canonical => powers canonical
}

// 2^-k / 3^-k as rationals.
inline Rat dyadic(const Int& k, unsigned long level) {
    Int den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, level);
    return make_rat(k, den);
}

inline Rat triadic(const Int& k, unsigned long level) {
    Int den;
    mpz_ui_pow_ui(den.get_mpz_t(), 3, level);
    return make_rat(k, den);
}

// floor(x * base^level) for grid enumeration.
inline Int scaled_floor(const Rat& x, unsigned long base, unsigned long level) {
    Int scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), base, level);
    Rat y = x * Rat(scale);
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), y.get_num().get_mpz_t(), y.get_den().get_mpz_t());
    return q;
}

} // namespace rnderiv
