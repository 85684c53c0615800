#pragma once

#include <boost/rational.hpp>

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <type_traits>

#include "prnu_mixed/error.hpp"

namespace prnu {

using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& r) { return boost::rational_cast<double>(r); }

inline std::int64_t floor_of(const Rational& r) {
  std::int64_t q = r.numerator() / r.denominator();
  if (r.numerator() % r.denominator() != 0 && r.numerator() < 0) --q;
  return q;
}

inline std::int64_t ceil_of(const Rational& r) {
  std::int64_t f = floor_of(r);
  return Rational(f) == r ? f : f + 1;
}

inline std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// Accepts "3", "1/2" and plain decimals such as "0.4563" (converted exactly).
inline Rational parse_rational(std::string_view text) {
  auto fail = [&] { return ValidationError("not a rational number: '" + std::string(text) + "'"); };
  auto parse_int = [&](std::string_view s) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty()) throw fail();
    return v;
  };
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::int64_t num = parse_int(text.substr(0, slash));
    std::int64_t den = parse_int(text.substr(slash + 1));
    if (den == 0) throw fail();
    return Rational(num, den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    if (frac.empty() || frac.size() > 15) throw fail();
    bool negative = !whole.empty() && whole.front() == '-';
    if (negative) whole.remove_prefix(1);
    std::int64_t w = whole.empty() ? 0 : parse_int(whole);
    std::int64_t f = parse_int(frac);
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    Rational r(w * den + f, den);
    return negative ? -r : r;
  }
  return Rational(parse_int(text));
}

// Weight scalar conversions: the symbolic path is templated on the weight
// type so the same builders serve exact and floating-point maps.
template <typename W>
W weight_cast(const Rational& r) {
  if constexpr (std::is_same_v<W, Rational>) {
    return r;
  } else {
    return static_cast<W>(to_double(r));
  }
}

template <typename W>
double weight_to_double(const W& w) {
  if constexpr (std::is_same_v<W, Rational>) {
    return to_double(w);
  } else {
    return static_cast<double>(w);
  }
}

template <typename W>
inline constexpr bool is_exact_weight_v = std::is_same_v<W, Rational>;

}  // namespace prnu
