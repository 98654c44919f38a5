#pragma once

// Exact scalars: the field Q(i) of Gaussian rationals, built on GMP rationals.
// Every value is kept in canonical reduced form by the underlying mpq layer,
// so equality is literal equality and printing is deterministic.

#include <boost/multiprecision/gmp.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace forge {

using Rational = boost::multiprecision::mpq_rational;

// Prints "p/q" in lowest terms, or "p" when the denominator is 1.
std::string rational_str(const Rational& r);

// Parses "p", "p/q", with optional sign; rejects anything else.
std::optional<Rational> parse_rational(const std::string& s);

struct Scalar {
  Rational re{0};
  Rational im{0};

  Scalar() = default;
  Scalar(int n) : re(n) {}
  Scalar(long n) : re(n) {}
  explicit Scalar(Rational r) : re(std::move(r)) {}
  Scalar(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  static Scalar i() { return Scalar{Rational(0), Rational(1)}; }
  static Scalar frac(long num, long den) { return Scalar{Rational(num) / Rational(den)}; }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_one() const { return re == 1 && im == 0; }
  bool is_real() const { return im == 0; }

  Scalar conj() const { return Scalar{re, -im}; }
  Rational norm2() const { return re * re + im * im; }

  Scalar operator-() const { return Scalar{-re, -im}; }

  Scalar& operator+=(const Scalar& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Scalar& operator-=(const Scalar& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Scalar& operator*=(const Scalar& o) {
    Rational r = re * o.re - im * o.im;
    Rational i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }
  Scalar& operator/=(const Scalar& o) {
    if (o.is_zero()) throw std::domain_error("Scalar: division by zero");
    Rational n = o.norm2();
    Rational r = (re * o.re + im * o.im) / n;
    Rational i = (im * o.re - re * o.im) / n;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar& a, const Scalar& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  Scalar inv() const {
    Scalar one(1);
    return one / *this;
  }

  // Deterministic human-readable form: "0", "5/3", "i", "-2*i", "1/2+3/4*i", ...
  std::string str() const;
};

// Total order used only to make sorting deterministic; not a field order.
bool scalar_less(const Scalar& a, const Scalar& b);

// (-1)^n as a Scalar.
inline Scalar sign_pow(long n) { return ((n % 2 + 2) % 2 == 0) ? Scalar(1) : Scalar(-1); }

// n! as a Rational (n small).
Rational factorial(int n);

}  // namespace forge
