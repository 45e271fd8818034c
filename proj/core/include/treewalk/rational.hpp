#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace treewalk {

using Rational = boost::rational<std::int64_t>;

// "n" or "n/d" in lowest terms.
std::string to_string(const Rational& r);
// Accepts "n", "-n", "n/d"; throws MalformedSyntax otherwise.
Rational parse_rational(std::string_view text);
inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

}  // namespace treewalk
