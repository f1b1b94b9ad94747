#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace causa {

/// Exact parameter arithmetic. Equation identities must hold with zero error,
/// so nothing in the core ever touches floating point.
using Rational = boost::rational<std::int64_t>;

/// Accepts "7", "-3/4" and terminating decimals such as "0.25".
std::optional<Rational> parse_rational(std::string_view text);

/// "7" for integers, "-3/4" otherwise. Inverse of parse_rational.
std::string to_string(const Rational& value);

} // namespace causa
