#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace spd {

//! Arbitrary-precision integer.
using Int = mpz_class;

//! Exact rational, always kept in lowest terms with positive denominator.
using Rat = mpq_class;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

//! Malformed external input (instance files, profiles, rationals).
struct ParseError : Error {
    using Error::Error;
};

//! Violated precondition or domain invariant.
struct ValidationError : Error {
    using Error::Error;
};

//! Instance exceeds a desk-scale enumeration guard.
struct ScaleError : Error {
    using Error::Error;
};

//! Canonical rational from a numerator/denominator pair.
inline Rat make_rat(long num, long den = 1) {
    if (den == 0) {
        throw ValidationError("rational with zero denominator");
    }
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline bool is_integral(const Rat &r) {
    return r.get_den() == 1;
}

//! `num/den` in lowest terms, or a bare integer when den == 1.
inline std::string to_string(const Rat &r) {
    return r.get_str();
}

//! Parses `num/den` or a bare integer. Denominator must be positive.
Rat parse_rat(const std::string &text);

} // namespace spd
