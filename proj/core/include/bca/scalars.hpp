#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bca/errors.hpp"

namespace bca {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// ---------------------------------------------------------------------------
// Gaussian rationals: the exact scalar field Q(i).
// ---------------------------------------------------------------------------

struct GaussianRational {
  Rational re;
  Rational im;

  GaussianRational() = default;
  GaussianRational(long r) : re(r) {}  // NOLINT(google-explicit-constructor)
  GaussianRational(Rational r) : re(std::move(r)) {}
  GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  static GaussianRational unit_i() { return {Rational(0), Rational(1)}; }
  static GaussianRational of(long num, long den) { return {Rational(num, den)}; }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }

  GaussianRational conj() const { return {re, Rational(-im)}; }

  // |z|^2 as a rational.
  Rational norm() const { return Rational(re * re + im * im); }

  GaussianRational inverse() const {
    if (is_zero()) throw InputError("division by zero in Q(i)");
    Rational n = norm();
    return {Rational(re / n), Rational(-im / n)};
  }

  // Bit-size proxy used for pivot selection in exact elimination.
  unsigned height() const;

  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {Rational(a.re + b.re), Rational(a.im + b.im)};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {Rational(a.re - b.re), Rational(a.im - b.im)};
  }
  friend GaussianRational operator-(const GaussianRational& a) {
    return {Rational(-a.re), Rational(-a.im)};
  }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {Rational(a.re * b.re - a.im * b.im), Rational(a.re * b.im + a.im * b.re)};
  }
  friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
    return a * b.inverse();
  }
  GaussianRational& operator+=(const GaussianRational& b) { return *this = *this + b; }
  GaussianRational& operator-=(const GaussianRational& b) { return *this = *this - b; }
  GaussianRational& operator*=(const GaussianRational& b) { return *this = *this * b; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) {
    return !(a == b);
  }
};

GaussianRational conj(const GaussianRational& a);

// Canonical literal: `a/b+c/di`, denominators omitted when 1, zero parts
// dropped, `i` written without a unit coefficient. Examples: `-1`, `1/2-3i`,
// `i`, `0`. The parser is whitespace-insensitive and accepts any sum of
// real/imaginary atoms.
std::string to_literal(const GaussianRational& a);
GaussianRational parse_scalar(const std::string& text);

// ---------------------------------------------------------------------------
// Truncated multivariate parameter ring for order-n deformation work.
// ---------------------------------------------------------------------------

// Exponent vector over the ring's generator list, dense.
using Exponents = std::vector<unsigned char>;

int total_degree(const Exponents& e);

class ParameterRing {
public:
  // `conj_pairs` lists (a, b) generator index pairs swapped by conjugation.
  // Self-paired generators are allowed (real parameters).
  static std::shared_ptr<const ParameterRing> make(std::vector<std::string> generators,
                                                   std::vector<std::pair<int, int>> conj_pairs,
                                                   int truncation_order);

  const std::vector<std::string>& generators() const { return generators_; }
  int generator_count() const { return static_cast<int>(generators_.size()); }
  int conj_partner(int index) const { return conj_partner_[index]; }
  int truncation_order() const { return truncation_order_; }
  int index_of(const std::string& name) const;  // -1 when absent

private:
  ParameterRing() = default;
  std::vector<std::string> generators_;
  std::vector<int> conj_partner_;
  int truncation_order_ = 0;
};

using RingPtr = std::shared_ptr<const ParameterRing>;

// Element of R = Q(i)[t_1..t_m] / (degree > N). A poly with a null ring is a
// bare constant and combines with any ring; two different non-null rings
// never mix.
class TruncatedPoly {
public:
  TruncatedPoly() = default;
  explicit TruncatedPoly(GaussianRational constant);
  TruncatedPoly(long value) : TruncatedPoly(GaussianRational(value)) {}  // NOLINT

  static TruncatedPoly constant(RingPtr ring, GaussianRational value);
  static TruncatedPoly generator(RingPtr ring, int index);
  static TruncatedPoly term(RingPtr ring, Exponents exponents, GaussianRational coeff);

  const RingPtr& ring() const { return ring_; }
  const std::map<Exponents, GaussianRational>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  GaussianRational constant_term() const;

  // Homogeneous degree-k slice, keyed by monomial.
  std::map<Exponents, GaussianRational> degree_part(int k) const;
  int max_degree() const;

  TruncatedPoly conj() const;
  // Substitutes the given generator values; conjugate partners must receive
  // conjugate values (enforced by make_point below, not here).
  GaussianRational evaluate(const std::vector<GaussianRational>& point) const;

  friend TruncatedPoly operator+(const TruncatedPoly& a, const TruncatedPoly& b);
  friend TruncatedPoly operator-(const TruncatedPoly& a, const TruncatedPoly& b);
  friend TruncatedPoly operator-(const TruncatedPoly& a);
  friend TruncatedPoly operator*(const TruncatedPoly& a, const TruncatedPoly& b);
  TruncatedPoly& operator+=(const TruncatedPoly& b) { return *this = *this + b; }
  TruncatedPoly& operator-=(const TruncatedPoly& b) { return *this = *this - b; }
  TruncatedPoly& operator*=(const TruncatedPoly& b) { return *this = *this * b; }
  friend bool operator==(const TruncatedPoly& a, const TruncatedPoly& b);
  friend bool operator!=(const TruncatedPoly& a, const TruncatedPoly& b) { return !(a == b); }

private:
  void insert_term(Exponents e, GaussianRational c);
  static RingPtr merge_rings(const RingPtr& a, const RingPtr& b);

  RingPtr ring_;  // null for bare constants
  std::map<Exponents, GaussianRational> terms_;
};

TruncatedPoly conj(const TruncatedPoly& f);

// Poly literal: terms joined by ` + `; a term is a scalar literal and/or
// generator powers, e.g. `t21`, `-t11 t22`, `1/2 t11^2`. Parenthesized forms
// are accepted.
std::string to_literal(const TruncatedPoly& f);
TruncatedPoly parse_poly(const std::string& text, const RingPtr& ring);

// ---------------------------------------------------------------------------
// Uniform scalar access for code generic over Q(i) and the parameter ring.
// ---------------------------------------------------------------------------

template <class S>
struct ScalarOps;

template <>
struct ScalarOps<GaussianRational> {
  static GaussianRational zero() { return {}; }
  static GaussianRational one() { return GaussianRational(1); }
  static bool is_zero(const GaussianRational& s) { return s.is_zero(); }
  static GaussianRational conjugate(const GaussianRational& s) { return s.conj(); }
  static GaussianRational from_rational(const GaussianRational& c) { return c; }
  static std::string literal(const GaussianRational& s) { return to_literal(s); }
  static bool needs_parens(const GaussianRational&) { return false; }
};

template <>
struct ScalarOps<TruncatedPoly> {
  static TruncatedPoly zero() { return {}; }
  static TruncatedPoly one() { return TruncatedPoly(GaussianRational(1)); }
  static bool is_zero(const TruncatedPoly& s) { return s.is_zero(); }
  static TruncatedPoly conjugate(const TruncatedPoly& s) { return s.conj(); }
  static TruncatedPoly from_rational(const GaussianRational& c) { return TruncatedPoly(c); }
  static std::string literal(const TruncatedPoly& s) { return to_literal(s); }
  static bool needs_parens(const TruncatedPoly& s) { return !s.is_constant(); }
};

}  // namespace bca
