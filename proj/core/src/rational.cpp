#include "treewalk/rational.hpp"

#include <charconv>

#include "treewalk/error.hpp"
#include "text_util.hpp"

namespace treewalk {

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rational parse_rational(std::string_view text) {
  text = detail::trim(text);
  auto parse_int = [&](std::string_view s) {
    s = detail::trim(s);
    std::int64_t value = 0;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
      fail(ErrorCode::MalformedSyntax, "not an integer: '" + std::string(s) + "'");
    }
    return value;
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  const auto num = parse_int(text.substr(0, slash));
  const auto den = parse_int(text.substr(slash + 1));
  if (den == 0) fail(ErrorCode::ZeroDenominator, "in '" + std::string(text) + "'");
  return Rational(num, den);
}

}  // namespace treewalk
