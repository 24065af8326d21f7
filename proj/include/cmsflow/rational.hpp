#pragma once

// Exact rational arithmetic over 128-bit integers. Used by the exact
// propagation path that checks the degree/leading-coefficient structure of
// the symmetric-coordinate flow; double precision would lose those digits
// for high-degree polynomials in t.

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace cmsflow {

struct Rational {
  __int128 num = 0;
  __int128 den = 1;

  Rational() = default;
  Rational(long long n) : num(n), den(1) {}
  Rational(long long n, long long d) : num(n), den(d) { normalize(); }

  static __int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  void normalize() {
    if (den == 0) throw std::domain_error("rational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    __int128 g = gcd128(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  friend Rational operator+(Rational a, Rational b) {
    Rational r;
    r.num = a.num * b.den + b.num * a.den;
    r.den = a.den * b.den;
    r.normalize();
    return r;
  }
  friend Rational operator-(Rational a, Rational b) {
    Rational r;
    r.num = a.num * b.den - b.num * a.den;
    r.den = a.den * b.den;
    r.normalize();
    return r;
  }
  friend Rational operator*(Rational a, Rational b) {
    Rational r;
    r.num = a.num * b.num;
    r.den = a.den * b.den;
    r.normalize();
    return r;
  }
  friend Rational operator/(Rational a, Rational b) {
    if (b.num == 0) throw std::domain_error("rational: division by zero");
    Rational r;
    r.num = a.num * b.den;
    r.den = a.den * b.num;
    r.normalize();
    return r;
  }
  Rational operator-() const {
    Rational r = *this;
    r.num = -r.num;
    return r;
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

  bool is_zero() const { return num == 0; }
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  std::string str() const {
    auto i128_str = [](__int128 v) {
      if (v == 0) return std::string("0");
      bool neg = v < 0;
      if (neg) v = -v;
      std::string s;
      while (v) {
        s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
      }
      if (neg) s.insert(s.begin(), '-');
      return s;
    };
    return den == 1 ? i128_str(num) : i128_str(num) + "/" + i128_str(den);
  }
};

}  // namespace cmsflow
