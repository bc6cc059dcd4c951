// Exact rational arithmetic on 64-bit integers, overflow-checked.
#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace stratsp {

namespace detail {
inline long long checked_mul(long long a, long long b) {
  __int128 p = static_cast<__int128>(a) * b;
  if (p > std::numeric_limits<long long>::max() ||
      p < std::numeric_limits<long long>::min())
    throw std::overflow_error("rational: 64-bit overflow in multiply");
  return static_cast<long long>(p);
}
inline long long checked_add(long long a, long long b) {
  __int128 s = static_cast<__int128>(a) + b;
  if (s > std::numeric_limits<long long>::max() ||
      s < std::numeric_limits<long long>::min())
    throw std::overflow_error("rational: 64-bit overflow in add");
  return static_cast<long long>(s);
}
}  // namespace detail

// Invariant: den > 0 and gcd(|num|, den) == 1.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n) : num(n), den(1) {}
  Rational(long long n, long long d) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den == 0) throw std::domain_error("rational: zero denominator");
    if (den < 0) { num = -num; den = -den; }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
    if (num == 0) den = 1;
  }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool is_integer() const { return den == 1; }

  std::string str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }

  // Accepts "3", "-5/2", "10/4" (reduced on construction), and terminating
  // decimals such as "0.5" or "-2.75".
  static Rational parse(const std::string& s) {
    auto whole = [](const std::string& t) {
      size_t pos = 0;
      long long v = std::stoll(t, &pos);
      if (pos != t.size()) throw std::invalid_argument("trailing characters");
      return v;
    };
    try {
      auto slash = s.find('/');
      if (slash != std::string::npos)
        return Rational(whole(s.substr(0, slash)), whole(s.substr(slash + 1)));
      auto dot = s.find('.');
      if (dot == std::string::npos) return Rational(whole(s));
      std::string head = s.substr(0, dot), frac = s.substr(dot + 1);
      if (frac.empty() || frac.size() > 18) throw std::invalid_argument("bad fraction part");
      long long den = 1;
      for (size_t i = 0; i < frac.size(); i++) den = detail::checked_mul(den, 10);
      bool neg = !head.empty() && head[0] == '-';
      if (head == "-" || head == "+") head += "0";
      long long ip = head.empty() ? 0 : whole(head);
      long long fp = whole(frac);
      if (fp < 0) throw std::invalid_argument("bad fraction part");
      long long mag = detail::checked_add(detail::checked_mul(ip < 0 ? -ip : ip, den), fp);
      return Rational(neg || ip < 0 ? -mag : mag, den);
    } catch (const std::exception&) {
      throw std::invalid_argument("rational: cannot parse '" + s + "'");
    }
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(detail::checked_add(detail::checked_mul(a.num, b.den),
                                        detail::checked_mul(b.num, a.den)),
                    detail::checked_mul(a.den, b.den));
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return a + Rational(-b.num, b.den);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(detail::checked_mul(a.num, b.num), detail::checked_mul(a.den, b.den));
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num == 0) throw std::domain_error("rational: division by zero");
    return Rational(detail::checked_mul(a.num, b.den), detail::checked_mul(a.den, b.num));
  }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return a < b || a == b; }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return b <= a; }
};

}  // namespace stratsp
