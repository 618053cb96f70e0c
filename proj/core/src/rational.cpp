#include "treesearch/rational.hpp"

#include <cctype>
#include <cstdlib>

namespace treesearch {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char ch : s) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  }
  return true;
}

}  // namespace

Rat parse_rational(const std::string& text) {
  std::string s = text;
  bool negative = false;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    negative = (s[0] == '-');
    s = s.substr(1);
  }
  if (s.empty()) throw std::invalid_argument("empty rational literal");

  Rat out;
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    std::string num = s.substr(0, slash);
    std::string den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
      throw std::invalid_argument("malformed fraction '" + text + "'");
    BigInt d(den);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    out = Rat(BigInt(num), d);
  } else {
    auto dot = s.find('.');
    if (dot == std::string::npos) {
      if (!all_digits(s)) throw std::invalid_argument("malformed number '" + text + "'");
      out = Rat(BigInt(s));
    } else {
      std::string whole = s.substr(0, dot);
      std::string frac = s.substr(dot + 1);
      if (whole.empty()) whole = "0";
      if (!all_digits(whole) || (!frac.empty() && !all_digits(frac)))
        throw std::invalid_argument("malformed decimal '" + text + "'");
      BigInt scale = 1;
      for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
      BigInt num = BigInt(whole) * scale + (frac.empty() ? BigInt(0) : BigInt(frac));
      out = Rat(num, scale);
    }
  }
  if (negative) out = -out;
  return out;
}

std::string rat_str(const Rat& value) {
  std::string num = numerator(value).str();
  if (denominator(value) == 1) return num;
  return num + "/" + denominator(value).str();
}

double rat_double(const Rat& value) {
  return value.convert_to<double>();
}

BigInt floor_int(const Rat& value) {
  BigInt num = numerator(value);
  BigInt den = denominator(value);
  BigInt q = num / den;
  if (num % den != 0 && num < 0) q -= 1;
  return q;
}

BigInt ceil_int(const Rat& value) {
  BigInt num = numerator(value);
  BigInt den = denominator(value);
  BigInt q = num / den;
  if (num % den != 0 && num > 0) q += 1;
  return q;
}

Rat floor_to_multiple(const Rat& value, const Rat& step) {
  if (step <= 0) throw std::invalid_argument("non-positive rounding step");
  return Rat(floor_int(value / step)) * step;
}

Rat ceil_to_multiple(const Rat& value, const Rat& step) {
  if (step <= 0) throw std::invalid_argument("non-positive rounding step");
  return Rat(ceil_int(value / step)) * step;
}

int ceil_log2(long long n) {
  if (n < 1) throw std::invalid_argument("ceil_log2 requires n >= 1");
  int k = 0;
  BigInt pow = 1;
  while (pow < n) {
    pow <<= 1;
    ++k;
  }
  return k;
}

int ceil_sqrt_log2(long long n) {
  if (n < 1) throw std::invalid_argument("ceil_sqrt_log2 requires n >= 1");
  int k = 0;
  while ((BigInt(1) << (k * k)) < n) ++k;
  return k;
}

int compare_to_log2(const Rat& q, long long n) {
  if (n < 1) throw std::invalid_argument("compare_to_log2 requires n >= 1");
  if (n == 1) {
    if (q < 0) return -1;
    if (q > 0) return 1;
    return 0;
  }
  // Exact when n is a power of two.
  int fl = 0;
  BigInt pow = 1;
  while (pow * 2 <= n) {
    pow <<= 1;
    ++fl;
  }
  if (pow == n) {
    if (q < fl) return -1;
    if (q > fl) return 1;
    return 0;
  }
  if (q <= fl) return -1;       // floor(log2 n) < log2 n
  if (q >= fl + 1) return 1;    // log2 n < ceil(log2 n)

  // Certified dyadic interval for the fractional part of log2(n):
  // classic digit extraction with a bounded-width mantissa interval.
  constexpr int kMantissaBits = 192;
  constexpr int kDigits = 128;
  const BigInt one = BigInt(1) << kMantissaBits;
  // x in [1,2) represented as [lo, hi] / 2^kMantissaBits, certified bounds.
  BigInt lo = (BigInt(n) << kMantissaBits) / pow;
  BigInt hi = lo + 1;
  Rat frac_lo = 0, frac_hi = 0;
  Rat weight = make_rat(1, 2);
  for (int i = 0; i < kDigits; ++i) {
    // Square both ends, keep kMantissaBits of precision, rounding outward.
    lo = (lo * lo) >> kMantissaBits;
    hi = ((hi * hi) >> kMantissaBits) + 1;
    bool bit_lo = lo >= 2 * one;
    bool bit_hi = hi >= 2 * one;
    if (bit_lo != bit_hi) {
      // Undecided digit: finish with the interval we have.
      frac_hi += weight * 2;  // remaining digits bounded by 2 * weight
      break;
    }
    if (bit_lo) {
      lo >>= 1;
      hi >>= 1;
      frac_lo += weight;
      frac_hi += weight;
    }
    weight /= 2;
    if (i == kDigits - 1) frac_hi += weight * 4;
  }
  Rat target = q - fl;  // in (0,1)
  if (target < frac_lo) return -1;
  if (target > frac_hi) return 1;
  throw std::runtime_error("compare_to_log2: certified interval too wide");
}

}  // namespace treesearch
