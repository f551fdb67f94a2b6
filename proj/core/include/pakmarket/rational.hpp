#pragma once

#include <gmpxx.h>

#include <string>

namespace pakmarket {

/// Exact rational number. Arbitrary precision, always canonical
/// (lowest terms, positive denominator) courtesy of GMP.
using Rat = mpq_class;

inline Rat make_rat(long long num, long long den = 1) {
    Rat r(static_cast<long>(num), static_cast<long>(den));
    r.canonicalize();
    return r;
}

inline Rat to_rat(long long v) { return Rat(static_cast<long>(v)); }

inline bool rat_is_integer(const Rat& r) { return r.get_den() == 1; }

inline std::string rat_to_string(const Rat& r) { return r.get_str(); }

/// Numerator/denominator as signed 64-bit, for serialization. Desk-scale
/// instances never overflow this; if one ever does, fail loudly.
long long rat_num_i64(const Rat& r);
long long rat_den_i64(const Rat& r);

} // namespace pakmarket
