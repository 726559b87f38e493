#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>
#include <string_view>

// Boost 1.74 recurses forever on rational<int64_t> == int under C++20's
// rewritten comparisons; exact non-template overloads win resolution.
namespace boost {
inline bool operator==(const rational<std::int64_t>& a, int b) { return a == rational<std::int64_t>(b); }
inline bool operator==(int b, const rational<std::int64_t>& a) { return a == rational<std::int64_t>(b); }
inline bool operator!=(const rational<std::int64_t>& a, int b) { return !(a == rational<std::int64_t>(b)); }
inline bool operator!=(int b, const rational<std::int64_t>& a) { return !(a == rational<std::int64_t>(b)); }
}  // namespace boost

namespace kserver {

using Rational = boost::rational<std::int64_t>;

// Canonical "p/q" rendering (q > 0, always present).
std::string to_string(const Rational& r);

// Accepts "p", "p/q" and "-p/q".
Rational parse_rational(std::string_view text);

double to_double(const Rational& r);

// Decimal rendering with a fixed number of places.
std::string to_decimal(const Rational& r, int places = 6);

inline Rational abs(const Rational& r) { return r < 0 ? -r : r; }

}  // namespace kserver
