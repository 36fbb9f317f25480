#include "bca/scalars.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace bca {

namespace {

unsigned bit_size(const BigInt& v) {
  if (v == 0) return 0;
  return static_cast<unsigned>(msb(abs(v))) + 1;
}

unsigned rational_height(const Rational& r) {
  return std::max(bit_size(numerator(r)), bit_size(denominator(r)));
}

std::string rational_literal(const Rational& r) {
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << "/" << denominator(r);
  return os.str();
}

}  // namespace

unsigned GaussianRational::height() const {
  return std::max(rational_height(re), rational_height(im));
}

GaussianRational conj(const GaussianRational& a) { return a.conj(); }

std::string to_literal(const GaussianRational& a) {
  if (a.is_zero()) return "0";
  std::string out;
  if (a.re != 0) out += rational_literal(a.re);
  if (a.im != 0) {
    Rational mag = a.im < 0 ? Rational(-a.im) : a.im;
    std::string imag = (mag == 1) ? "i" : rational_literal(mag) + "i";
    if (out.empty()) {
      out = (a.im < 0 ? "-" : "") + imag;
    } else {
      out += (a.im < 0 ? "-" : "+") + imag;
    }
  }
  return out;
}

GaussianRational parse_scalar(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw InputError("empty scalar literal");

  GaussianRational value;
  size_t pos = 0;
  bool any = false;
  while (pos < s.size()) {
    int sign = 1;
    while (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
      if (s[pos] == '-') sign = -sign;
      ++pos;
    }
    size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    std::string num(s, start, pos - start);
    std::string den;
    if (pos < s.size() && s[pos] == '/') {
      ++pos;
      size_t dstart = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      den.assign(s, dstart, pos - dstart);
      if (den.empty()) throw InputError("missing denominator in scalar literal: " + text);
    }
    bool imaginary = false;
    if (pos < s.size() && s[pos] == 'i') {
      imaginary = true;
      ++pos;
    }
    if (num.empty() && !imaginary)
      throw InputError("malformed scalar literal: " + text);
    Rational mag = num.empty() ? Rational(1) : Rational(BigInt(num));
    if (!den.empty()) {
      BigInt d(den);
      if (d == 0) throw InputError("zero denominator in scalar literal: " + text);
      mag /= d;
    }
    if (sign < 0) mag = -mag;
    if (imaginary)
      value.im += mag;
    else
      value.re += mag;
    any = true;
  }
  if (!any) throw InputError("malformed scalar literal: " + text);
  return value;
}

// ---------------------------------------------------------------------------

int total_degree(const Exponents& e) {
  int d = 0;
  for (unsigned char x : e) d += x;
  return d;
}

std::shared_ptr<const ParameterRing> ParameterRing::make(
    std::vector<std::string> generators, std::vector<std::pair<int, int>> conj_pairs,
    int truncation_order) {
  if (truncation_order < 0) throw InputError("truncation order must be non-negative");
  auto ring = std::shared_ptr<ParameterRing>(new ParameterRing());
  ring->generators_ = std::move(generators);
  ring->truncation_order_ = truncation_order;
  const int m = static_cast<int>(ring->generators_.size());
  ring->conj_partner_.assign(m, -1);
  for (auto [a, b] : conj_pairs) {
    if (a < 0 || a >= m || b < 0 || b >= m)
      throw InputError("conjugation pair out of range");
    ring->conj_partner_[a] = b;
    ring->conj_partner_[b] = a;
  }
  for (int k = 0; k < m; ++k)
    if (ring->conj_partner_[k] < 0)
      throw InputError("generator " + ring->generators_[k] + " has no conjugate partner");
  return ring;
}

int ParameterRing::index_of(const std::string& name) const {
  for (size_t k = 0; k < generators_.size(); ++k)
    if (generators_[k] == name) return static_cast<int>(k);
  return -1;
}

// ---------------------------------------------------------------------------

TruncatedPoly::TruncatedPoly(GaussianRational constant) {
  if (!constant.is_zero()) terms_.emplace(Exponents{}, std::move(constant));
}

TruncatedPoly TruncatedPoly::constant(RingPtr ring, GaussianRational value) {
  TruncatedPoly f;
  f.ring_ = std::move(ring);
  if (!value.is_zero())
    f.terms_.emplace(Exponents(f.ring_ ? f.ring_->generator_count() : 0, 0), std::move(value));
  return f;
}

TruncatedPoly TruncatedPoly::generator(RingPtr ring, int index) {
  if (!ring || index < 0 || index >= ring->generator_count())
    throw InputError("generator index out of range");
  Exponents e(ring->generator_count(), 0);
  e[index] = 1;
  return term(std::move(ring), std::move(e), GaussianRational(1));
}

TruncatedPoly TruncatedPoly::term(RingPtr ring, Exponents exponents, GaussianRational coeff) {
  if (!ring) throw InputError("ring required for a polynomial term");
  if (static_cast<int>(exponents.size()) != ring->generator_count())
    throw InputError("exponent vector length mismatch");
  TruncatedPoly f;
  f.ring_ = std::move(ring);
  if (!coeff.is_zero() && total_degree(exponents) <= f.ring_->truncation_order())
    f.terms_.emplace(std::move(exponents), std::move(coeff));
  return f;
}

bool TruncatedPoly::is_constant() const {
  for (const auto& [e, c] : terms_)
    if (total_degree(e) > 0) return false;
  return true;
}

GaussianRational TruncatedPoly::constant_term() const {
  for (const auto& [e, c] : terms_)
    if (total_degree(e) == 0) return c;
  return {};
}

std::map<Exponents, GaussianRational> TruncatedPoly::degree_part(int k) const {
  std::map<Exponents, GaussianRational> out;
  for (const auto& [e, c] : terms_)
    if (total_degree(e) == k) out.emplace(e, c);
  return out;
}

int TruncatedPoly::max_degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
  return d;
}

RingPtr TruncatedPoly::merge_rings(const RingPtr& a, const RingPtr& b) {
  if (!a) return b;
  if (!b || a == b) return a;
  throw InputError("polynomials from different parameter rings");
}

void TruncatedPoly::insert_term(Exponents e, GaussianRational c) {
  if (c.is_zero()) return;
  if (ring_ && total_degree(e) > ring_->truncation_order()) return;
  auto [it, fresh] = terms_.try_emplace(std::move(e), c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

namespace {
Exponents resize_exponents(const Exponents& e, int m) {
  Exponents out(m, 0);
  std::copy(e.begin(), e.end(), out.begin());
  return out;
}
}  // namespace

TruncatedPoly operator+(const TruncatedPoly& a, const TruncatedPoly& b) {
  TruncatedPoly out;
  out.ring_ = TruncatedPoly::merge_rings(a.ring_, b.ring_);
  const int m = out.ring_ ? out.ring_->generator_count() : 0;
  for (const auto& [e, c] : a.terms_) out.insert_term(resize_exponents(e, m), c);
  for (const auto& [e, c] : b.terms_) out.insert_term(resize_exponents(e, m), c);
  return out;
}

TruncatedPoly operator-(const TruncatedPoly& a, const TruncatedPoly& b) { return a + (-b); }

TruncatedPoly operator-(const TruncatedPoly& a) {
  TruncatedPoly out;
  out.ring_ = a.ring_;
  for (const auto& [e, c] : a.terms_) out.terms_.emplace(e, -c);
  return out;
}

TruncatedPoly operator*(const TruncatedPoly& a, const TruncatedPoly& b) {
  TruncatedPoly out;
  out.ring_ = TruncatedPoly::merge_rings(a.ring_, b.ring_);
  const int m = out.ring_ ? out.ring_->generator_count() : 0;
  for (const auto& [ea, ca] : a.terms_) {
    Exponents la = resize_exponents(ea, m);
    for (const auto& [eb, cb] : b.terms_) {
      Exponents e = la;
      for (size_t k = 0; k < eb.size(); ++k) e[k] = static_cast<unsigned char>(e[k] + eb[k]);
      out.insert_term(std::move(e), ca * cb);
    }
  }
  return out;
}

bool operator==(const TruncatedPoly& a, const TruncatedPoly& b) {
  return (a - b).is_zero();
}

TruncatedPoly TruncatedPoly::conj() const {
  TruncatedPoly out;
  out.ring_ = ring_;
  for (const auto& [e, c] : terms_) {
    Exponents swapped(e.size(), 0);
    for (size_t k = 0; k < e.size(); ++k)
      if (e[k] != 0) swapped[ring_->conj_partner(static_cast<int>(k))] = e[k];
    out.insert_term(std::move(swapped), c.conj());
  }
  return out;
}

GaussianRational TruncatedPoly::evaluate(const std::vector<GaussianRational>& point) const {
  if (ring_ && static_cast<int>(point.size()) != ring_->generator_count())
    throw InputError("evaluation point has wrong arity");
  GaussianRational out;
  for (const auto& [e, c] : terms_) {
    GaussianRational v = c;
    for (size_t k = 0; k < e.size(); ++k)
      for (int j = 0; j < e[k]; ++j) v *= point[k];
    out += v;
  }
  return out;
}

TruncatedPoly conj(const TruncatedPoly& f) { return f.conj(); }

std::string to_literal(const TruncatedPoly& f) {
  if (f.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : f.terms()) {
    std::string term;
    std::string monos;
    for (size_t k = 0; k < e.size(); ++k) {
      if (e[k] == 0) continue;
      if (!monos.empty()) monos += " ";
      monos += f.ring()->generators()[k];
      if (e[k] > 1) monos += "^" + std::to_string(static_cast<int>(e[k]));
    }
    if (monos.empty()) {
      term = to_literal(c);
    } else if (c == GaussianRational(1)) {
      term = monos;
    } else if (c == -GaussianRational(1)) {
      term = "-" + monos;
    } else {
      term = to_literal(c) + " " + monos;
    }
    out += first ? term : " + " + term;
    first = false;
  }
  return out;
}

TruncatedPoly parse_poly(const std::string& text, const RingPtr& ring) {
  if (!ring) throw InputError("parse_poly requires a ring");
  // Split on top-level '+'/'-' boundaries that start a new term. We keep it
  // simple: tokens are scalar-literal fragments, generator names, '^' powers.
  TruncatedPoly out = TruncatedPoly::constant(ring, GaussianRational(0));
  size_t pos = 0;
  const std::string& s = text;
  auto skip_ws = [&] {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  };
  skip_ws();
  if (pos < s.size() && s[pos] == '(') {
    size_t close = s.rfind(')');
    if (close == std::string::npos) throw InputError("unbalanced parentheses: " + text);
    std::string inner(s, pos + 1, close - pos - 1);
    std::string rest(s, close + 1);
    for (char c : rest)
      if (!std::isspace(static_cast<unsigned char>(c)))
        throw InputError("trailing text after polynomial: " + text);
    return parse_poly(inner, ring);
  }
  bool any = false;
  while (pos < s.size()) {
    skip_ws();
    if (pos >= s.size()) break;
    int sign = 1;
    while (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
      if (s[pos] == '-') sign = -sign;
      ++pos;
      skip_ws();
    }
    // Optional scalar part.
    GaussianRational coeff(1);
    bool have_scalar = false;
    size_t start = pos;
    while (pos < s.size() &&
           (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '/' || s[pos] == 'i')) {
      // A generator name also starts with a letter; 'i' alone is the unit.
      if (s[pos] == 'i' && pos + 1 < s.size() &&
          (std::isalnum(static_cast<unsigned char>(s[pos + 1])) || s[pos + 1] == '_'))
        break;
      ++pos;
    }
    if (pos > start) {
      coeff = parse_scalar(std::string(s, start, pos - start));
      have_scalar = true;
    }
    // Generator powers.
    Exponents e(ring->generator_count(), 0);
    bool have_gen = false;
    for (;;) {
      skip_ws();
      size_t gstart = pos;
      while (pos < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
        ++pos;
      if (pos == gstart) break;
      std::string name(s, gstart, pos - gstart);
      int gi = ring->index_of(name);
      if (gi < 0) throw InputError("unknown parameter '" + name + "'");
      int exp = 1;
      if (pos < s.size() && s[pos] == '^') {
        ++pos;
        size_t estart = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == estart) throw InputError("missing exponent: " + text);
        exp = std::stoi(std::string(s, estart, pos - estart));
      }
      e[gi] = static_cast<unsigned char>(e[gi] + exp);
      have_gen = true;
    }
    if (!have_scalar && !have_gen) throw InputError("malformed polynomial literal: " + text);
    if (sign < 0) coeff = -coeff;
    out += TruncatedPoly::term(ring, std::move(e), coeff);
    any = true;
    skip_ws();
  }
  if (!any) throw InputError("empty polynomial literal");
  return out;
}

}  // namespace bca
