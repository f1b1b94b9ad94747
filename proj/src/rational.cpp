#include "causa/rational.hpp"

#include <charconv>

namespace causa {

namespace {

std::optional<std::int64_t> parse_integer(std::string_view text) {
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

} // namespace

std::optional<Rational> parse_rational(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = parse_integer(text.substr(0, slash));
    auto den = parse_integer(text.substr(slash + 1));
    if (!num || !den || *den == 0) return std::nullopt;
    return Rational(*num, *den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    if (frac.empty() || frac.size() > 17) return std::nullopt;
    for (char c : frac)
      if (c < '0' || c > '9') return std::nullopt;
    bool negative = !whole.empty() && whole.front() == '-';
    std::int64_t w = 0;
    if (!whole.empty() && whole != "-" && whole != "+") {
      auto parsed = parse_integer(whole);
      if (!parsed) return std::nullopt;
      w = *parsed < 0 ? -*parsed : *parsed;
    }
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    auto f = parse_integer(frac);
    if (!f) return std::nullopt;
    Rational magnitude = Rational(w) + Rational(*f, scale);
    return negative ? -magnitude : magnitude;
  }
  auto whole = parse_integer(text);
  if (!whole) return std::nullopt;
  return Rational(*whole);
}

std::string to_string(const Rational& value) {
  if (value.denominator() == 1) return std::to_string(value.numerator());
  return std::to_string(value.numerator()) + "/" + std::to_string(value.denominator());
}

} // namespace causa
