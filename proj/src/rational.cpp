#include "kserver/rational.hpp"

#include "kserver/errors.hpp"

#include <charconv>
#include <cstdio>

namespace kserver {

std::string to_string(const Rational& r) {
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

namespace {

std::int64_t parse_integer(std::string_view text) {
    std::int64_t value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && text.front() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || first == last)
        throw InvalidParameter("malformed rational: '" + std::string(text) + "'");
    return value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_integer(text));
    const auto num = parse_integer(text.substr(0, slash));
    const auto den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw InvalidParameter("zero denominator: '" + std::string(text) + "'");
    return Rational(num, den);
}

double to_double(const Rational& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

std::string to_decimal(const Rational& r, int places) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", places, to_double(r));
    return buf;
}

}  // namespace kserver
