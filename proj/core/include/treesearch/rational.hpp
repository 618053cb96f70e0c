#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace treesearch {

using BigInt = boost::multiprecision::cpp_int;
// Plain-value arithmetic (no expression templates) so std::max and friends work.
using Rat = boost::multiprecision::number<
    boost::multiprecision::backends::rational_adaptor<boost::multiprecision::backends::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

inline Rat make_rat(long long num, long long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  return Rat(BigInt(num), BigInt(den));
}

/// Parses "p/q", "p", or a decimal literal ("0.31") into an exact rational.
/// Throws std::invalid_argument on malformed input.
Rat parse_rational(const std::string& text);

/// Canonical text form: "p" when the denominator is 1, else "p/q", reduced.
std::string rat_str(const Rat& value);

/// Display-only decimal rendering (never used in comparisons).
double rat_double(const Rat& value);

BigInt floor_int(const Rat& value);
BigInt ceil_int(const Rat& value);

/// Largest multiple of `step` that is <= value. Requires step > 0.
Rat floor_to_multiple(const Rat& value, const Rat& step);
/// Smallest multiple of `step` that is >= value. Requires step > 0.
Rat ceil_to_multiple(const Rat& value, const Rat& step);

/// Smallest k >= 0 with 2^k >= n. Requires n >= 1.
int ceil_log2(long long n);

/// Smallest k >= 0 with 2^(k*k) >= n, i.e. ceil(sqrt(log2 n)). Requires n >= 1.
int ceil_sqrt_log2(long long n);

/// Exact comparison of a rational against log2(n): -1 (q < log2 n),
/// 0 (equal; only possible when n is a power of two), +1 (q > log2 n).
/// Decides via certified dyadic bounds; throws if n < 1.
int compare_to_log2(const Rat& q, long long n);

}  // namespace treesearch
