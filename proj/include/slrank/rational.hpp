#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace slrank {

using Rational = boost::rational<std::int64_t>;

// Accepts "3", "-2/7", "0.125", ".5".
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& r);

inline double to_double(const Rational& r) {
  return boost::rational_cast<double>(r);
}

}  // namespace slrank
