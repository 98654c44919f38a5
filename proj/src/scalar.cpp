#include "forge/scalar.hpp"

#include <cctype>

namespace forge {

std::string rational_str(const Rational& r) {
  return r.str();
}

std::optional<Rational> parse_rational(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t pos = 0;
  auto take_int = [&](bool sign_ok) -> std::optional<std::string> {
    std::string out;
    if (sign_ok && pos < s.size() && (s[pos] == '+' || s[pos] == '-')) out.push_back(s[pos++]);
    std::size_t digits = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      out.push_back(s[pos++]);
      ++digits;
    }
    if (digits == 0) return std::nullopt;
    return out;
  };
  auto num = take_int(true);
  if (!num) return std::nullopt;
  std::string den = "1";
  if (pos < s.size() && s[pos] == '/') {
    ++pos;
    auto d = take_int(false);
    if (!d) return std::nullopt;
    den = *d;
  }
  if (pos != s.size()) return std::nullopt;
  if (den == "0") return std::nullopt;
  try {
    return Rational(boost::multiprecision::mpz_int(*num), boost::multiprecision::mpz_int(den));
  } catch (...) {
    return std::nullopt;
  }
}

std::string Scalar::str() const {
  if (is_zero()) return "0";
  std::string out;
  if (im == 0) return rational_str(re);
  std::string ipart;
  if (im == 1) {
    ipart = "i";
  } else if (im == -1) {
    ipart = "-i";
  } else {
    ipart = rational_str(im) + "*i";
  }
  if (re == 0) return ipart;
  out = rational_str(re);
  if (im > 0) out += "+";
  out += ipart;
  return out;
}

bool scalar_less(const Scalar& a, const Scalar& b) {
  if (a.re != b.re) return a.re < b.re;
  return a.im < b.im;
}

Rational factorial(int n) {
  Rational f(1);
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace forge
