#pragma once

#include <gmpxx.h>

#include <cctype>
#include <string>
#include <string_view>

#include "kforge/errors.hpp"

namespace kforge {

/// Formats a rational in canonical form: reduced, positive denominator,
/// "/1" omitted.
inline std::string rational_to_string(mpq_class q) {
  q.canonicalize();
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

/// Parses "n" or "p/q" (optional leading sign, decimal digits only).
inline mpq_class parse_rational(std::string_view text) {
  auto fail = [&] { return InputError("malformed rational \"" + std::string(text) + "\""); };
  std::size_t pos = 0;
  auto digits = [&](std::size_t from) {
    std::size_t end = from;
    while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
    return end;
  };
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
  std::size_t num_end = digits(pos);
  if (num_end == pos) throw fail();
  std::string numerator(text.substr(0, num_end));
  if (numerator.front() == '+') numerator.erase(0, 1);
  std::string denominator = "1";
  if (num_end < text.size()) {
    if (text[num_end] != '/') throw fail();
    std::size_t den_end = digits(num_end + 1);
    if (den_end == num_end + 1 || den_end != text.size()) throw fail();
    denominator = std::string(text.substr(num_end + 1));
  }
  mpz_class num(numerator, 10);
  mpz_class den(denominator, 10);
  if (den == 0) throw InputError("zero denominator in \"" + std::string(text) + "\"");
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

/// An exact Gaussian rational re + i·im.
class Scalar {
 public:
  Scalar() = default;
  Scalar(int n) : re_(n) {}
  Scalar(long n) : re_(n) {}
  Scalar(mpq_class re) : re_(std::move(re)) { re_.canonicalize(); }
  Scalar(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  static Scalar i() { return Scalar(mpq_class(0), mpq_class(1)); }
  static Scalar rational(long num, long den) {
    if (den == 0) throw InputError("zero denominator");
    return Scalar(mpq_class(num, den));
  }
  static Scalar parse(std::string_view re, std::string_view im = "0") {
    return Scalar(parse_rational(re), parse_rational(im));
  }

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  Scalar conj() const { return Scalar(re_, -im_); }
  /// |z|², always a non-negative rational.
  mpq_class norm() const { return re_ * re_ + im_ * im_; }

  Scalar operator-() const { return Scalar(-re_, -im_); }

  Scalar& operator+=(const Scalar& o) {
    re_ += o.re_;
    if (sgn(o.im_) != 0) im_ += o.im_;
    return *this;
  }
  Scalar& operator-=(const Scalar& o) {
    re_ -= o.re_;
    if (sgn(o.im_) != 0) im_ -= o.im_;
    return *this;
  }
  Scalar& operator*=(const Scalar& o) {
    if (sgn(im_) == 0 && sgn(o.im_) == 0) {
      re_ *= o.re_;
      return *this;
    }
    mpq_class re = re_ * o.re_ - im_ * o.im_;
    mpq_class im = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
  }
  Scalar& operator/=(const Scalar& o) {
    if (o.is_zero()) throw InputError("division by zero");
    if (sgn(im_) == 0 && sgn(o.im_) == 0) {
      re_ /= o.re_;
      return *this;
    }
    mpq_class n = o.norm();
    mpq_class re = (re_ * o.re_ + im_ * o.im_) / n;
    mpq_class im = (im_ * o.re_ - re_ * o.im_) / n;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
  }

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar& a, const Scalar& b) { return a.re_ == b.re_ && a.im_ == b.im_; }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  /// Human-readable form, e.g. "-1/2", "3i", "1-2/3i".
  std::string to_string() const {
    if (sgn(im_) == 0) return rational_to_string(re_);
    std::string im_part = (im_ == 1) ? "i" : (im_ == -1) ? "-i" : rational_to_string(im_) + "i";
    if (sgn(re_) == 0) return im_part;
    if (sgn(im_) > 0) im_part = "+" + im_part;
    return rational_to_string(re_) + im_part;
  }

 private:
  mpq_class re_{0};
  mpq_class im_{0};
};

/// n! as an exact scalar.
inline Scalar factorial(unsigned n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return Scalar(mpq_class(f));
}

}  // namespace kforge
