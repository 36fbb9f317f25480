#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "bca/errors.hpp"
#include "bca/scalars.hpp"

namespace bca {

// Bigraded exterior algebra on a coframe {phi^1..phi^n, phibar^1..phibar^n}.
// All forms are invariant: constant coefficients over the scalar ring.

struct Bidegree {
  int p = 0;
  int q = 0;
  int total() const { return p + q; }
  friend bool operator==(const Bidegree&, const Bidegree&) = default;
  friend auto operator<=>(const Bidegree&, const Bidegree&) = default;
};

// One wedge monomial: bitmask over the holomorphic slots and one over the
// anti-holomorphic slots. Canonical generator order within a monomial is all
// holomorphic factors ascending, then all anti-holomorphic ascending.
struct BasisMonomial {
  std::uint32_t hol = 0;
  std::uint32_t anti = 0;
  friend bool operator==(const BasisMonomial&, const BasisMonomial&) = default;
  friend auto operator<=>(const BasisMonomial&, const BasisMonomial&) = default;
};

// One coframe generator, 1-based slot index.
struct CoframeGenerator {
  int index = 1;
  bool bar = false;
};

// Frame vector dual to the coframe: theta_i with theta_i -| phi^j = delta_ij.
struct FrameVector {
  int index = 1;
  bool holomorphic = true;
};

long binomial(int n, int k);
int popcount32(std::uint32_t v);
Bidegree monomial_bidegree(const BasisMonomial& m);

// Generators of a monomial in canonical order.
std::vector<CoframeGenerator> monomial_word(const BasisMonomial& m, int n);

// Sorts a generator word into canonical order, counting transpositions.
// Returns nullopt when a generator repeats (the wedge vanishes). This is the
// single source of truth for reordering signs.
std::optional<std::pair<int, BasisMonomial>> canonicalize_word(
    std::vector<CoframeGenerator> word);

// All monomials of the given bidegree, ordered by ascending (hol, anti) mask
// value. This ordering is the coordinate convention for every matrix built
// downstream.
std::vector<BasisMonomial> monomial_basis(int n, Bidegree deg);
int monomial_index(int n, const BasisMonomial& m);  // index within its bidegree

template <class S>
class BigradedForm {
public:
  BigradedForm() = default;
  BigradedForm(int n, Bidegree deg) : n_(n), deg_(deg) {}

  static BigradedForm monomial(int n, BasisMonomial m, S coeff) {
    BigradedForm f(n, monomial_bidegree(m));
    f.add_term(m, std::move(coeff));
    return f;
  }
  // phi^k and phibar^k.
  static BigradedForm coframe(int n, int k, bool bar = false) {
    if (k < 1 || k > n) throw InputError("coframe index out of range");
    BasisMonomial m;
    (bar ? m.anti : m.hol) = std::uint32_t(1) << (k - 1);
    return monomial(n, m, ScalarOps<S>::one());
  }
  static BigradedForm unit(int n) {  // the constant function 1
    return monomial(n, BasisMonomial{}, ScalarOps<S>::one());
  }

  int dimension() const { return n_; }
  Bidegree bidegree() const { return deg_; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::map<BasisMonomial, S>& terms() const { return coeffs_; }

  S coefficient(const BasisMonomial& m) const {
    auto it = coeffs_.find(m);
    return it == coeffs_.end() ? ScalarOps<S>::zero() : it->second;
  }

  void add_term(const BasisMonomial& m, S coeff) {
    if (ScalarOps<S>::is_zero(coeff)) return;
    if (monomial_bidegree(m) != deg_)
      throw InternalError("monomial bidegree does not match the form");
    auto [it, fresh] = coeffs_.try_emplace(m, coeff);
    if (!fresh) {
      it->second = it->second + coeff;
      if (ScalarOps<S>::is_zero(it->second)) coeffs_.erase(it);
    }
  }

  BigradedForm& operator+=(const BigradedForm& o) {
    require_compatible(o);
    for (const auto& [m, c] : o.coeffs_) add_term(m, c);
    return *this;
  }
  BigradedForm& operator-=(const BigradedForm& o) {
    require_compatible(o);
    for (const auto& [m, c] : o.coeffs_) add_term(m, -c);
    return *this;
  }
  friend BigradedForm operator+(BigradedForm a, const BigradedForm& b) { return a += b; }
  friend BigradedForm operator-(BigradedForm a, const BigradedForm& b) { return a -= b; }
  friend BigradedForm operator-(const BigradedForm& a) {
    BigradedForm out(a.n_, a.deg_);
    for (const auto& [m, c] : a.coeffs_) out.coeffs_.emplace(m, -c);
    return out;
  }
  friend BigradedForm operator*(const S& s, const BigradedForm& a) {
    BigradedForm out(a.n_, a.deg_);
    for (const auto& [m, c] : a.coeffs_) out.add_term(m, s * c);
    return out;
  }
  friend bool operator==(const BigradedForm& a, const BigradedForm& b) {
    return a.n_ == b.n_ && a.deg_ == b.deg_ && a.coeffs_ == b.coeffs_;
  }

private:
  void require_compatible(const BigradedForm& o) const {
    if (n_ != o.n_ || !(deg_ == o.deg_))
      throw InternalError("form bidegree/dimension mismatch in addition");
  }

  int n_ = 0;
  Bidegree deg_;
  std::map<BasisMonomial, S> coeffs_;
};

// A finite sum of forms of distinct bidegrees; the general operand for d and
// for parsed literals.
template <class S>
class FormSum {
public:
  FormSum() = default;
  explicit FormSum(int n) : n_(n) {}
  explicit FormSum(const BigradedForm<S>& f) : n_(f.dimension()) { add(f); }

  int dimension() const { return n_; }
  bool is_zero() const {
    for (const auto& [d, f] : parts_)
      if (!f.is_zero()) return false;
    return true;
  }
  const std::map<Bidegree, BigradedForm<S>>& parts() const { return parts_; }

  BigradedForm<S> component(Bidegree d) const {
    auto it = parts_.find(d);
    return it == parts_.end() ? BigradedForm<S>(n_, d) : it->second;
  }

  void add(const BigradedForm<S>& f) {
    if (f.is_zero()) return;
    if (n_ == 0) n_ = f.dimension();
    auto [it, fresh] = parts_.try_emplace(f.bidegree(), f);
    if (!fresh) {
      it->second += f;
      if (it->second.is_zero()) parts_.erase(it);
    }
  }
  FormSum& operator+=(const FormSum& o) {
    for (const auto& [d, f] : o.parts_) add(f);
    return *this;
  }
  FormSum& operator-=(const FormSum& o) {
    for (const auto& [d, f] : o.parts_) add(-f);
    return *this;
  }
  friend FormSum operator+(FormSum a, const FormSum& b) { return a += b; }
  friend FormSum operator-(FormSum a, const FormSum& b) { return a -= b; }
  friend bool operator==(const FormSum& a, const FormSum& b) {
    return (FormSum(a) -= b).is_zero();
  }

  // True when every part has the same total degree.
  bool homogeneous(int degree) const {
    for (const auto& [d, f] : parts_)
      if (d.total() != degree && !f.is_zero()) return false;
    return true;
  }

private:
  int n_ = 0;
  std::map<Bidegree, BigradedForm<S>> parts_;
};

// --- core operations -------------------------------------------------------

template <class S>
BigradedForm<S> wedge(const BigradedForm<S>& a, const BigradedForm<S>& b) {
  const int n = a.dimension();
  Bidegree deg{a.bidegree().p + b.bidegree().p, a.bidegree().q + b.bidegree().q};
  BigradedForm<S> out(n, deg);
  if (deg.p > n || deg.q > n) return out;
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      auto word = monomial_word(ma, n);
      auto wb = monomial_word(mb, n);
      word.insert(word.end(), wb.begin(), wb.end());
      auto canon = canonicalize_word(std::move(word));
      if (!canon) continue;
      S coeff = ca * cb;
      if (canon->first < 0) coeff = -coeff;
      out.add_term(canon->second, coeff);
    }
  }
  return out;
}

template <class S>
FormSum<S> wedge(const FormSum<S>& a, const FormSum<S>& b) {
  FormSum<S> out(a.dimension());
  for (const auto& [da, fa] : a.parts())
    for (const auto& [db, fb] : b.parts()) out.add(wedge(fa, fb));
  return out;
}

// Interior product with a frame vector: an antiderivation of total degree -1.
template <class S>
BigradedForm<S> interior(const FrameVector& v, const BigradedForm<S>& f) {
  const int n = f.dimension();
  Bidegree deg = f.bidegree();
  Bidegree target = v.holomorphic ? Bidegree{deg.p - 1, deg.q} : Bidegree{deg.p, deg.q - 1};
  if (target.p < 0 || target.q < 0) return BigradedForm<S>(n, Bidegree{0, 0});
  BigradedForm<S> out(n, target);
  const std::uint32_t bit = std::uint32_t(1) << (v.index - 1);
  for (const auto& [m, c] : f.terms()) {
    if (v.holomorphic) {
      if (!(m.hol & bit)) continue;
      int before = popcount32(m.hol & (bit - 1));
      BasisMonomial r{m.hol & ~bit, m.anti};
      out.add_term(r, (before % 2 == 0) ? c : -c);
    } else {
      if (!(m.anti & bit)) continue;
      int before = popcount32(m.hol) + popcount32(m.anti & (bit - 1));
      BasisMonomial r{m.hol, m.anti & ~bit};
      out.add_term(r, (before % 2 == 0) ? c : -c);
    }
  }
  return out;
}

// Complex conjugation: swaps the two mask families and conjugates scalars.
// The reordering sign is computed by sorting the conjugated word, never
// assumed.
template <class S>
BigradedForm<S> conjugate(const BigradedForm<S>& f) {
  const int n = f.dimension();
  Bidegree deg{f.bidegree().q, f.bidegree().p};
  BigradedForm<S> out(n, deg);
  for (const auto& [m, c] : f.terms()) {
    std::vector<CoframeGenerator> word;
    for (const auto& g : monomial_word(m, n)) word.push_back({g.index, !g.bar});
    auto canon = canonicalize_word(std::move(word));
    if (!canon) throw InternalError("conjugation produced a repeated generator");
    S coeff = ScalarOps<S>::conjugate(c);
    if (canon->first < 0) coeff = -coeff;
    out.add_term(canon->second, coeff);
  }
  return out;
}

template <class S>
FormSum<S> conjugate(const FormSum<S>& f) {
  FormSum<S> out(f.dimension());
  for (const auto& [d, part] : f.parts()) out.add(conjugate(part));
  return out;
}

// Q(i)-mode forms lifted into a parameter ring.
BigradedForm<TruncatedPoly> promote(const BigradedForm<GaussianRational>& f, const RingPtr& ring);
FormSum<TruncatedPoly> promote(const FormSum<GaussianRational>& f, const RingPtr& ring);
FormSum<GaussianRational> evaluate(const FormSum<TruncatedPoly>& f,
                                   const std::vector<GaussianRational>& point);

// --- literals ---------------------------------------------------------------
// Term syntax: a leading scalar (or parenthesized polynomial) coefficient and
// a wedge word `phi[1]^phi[2]^phibar[1]`; terms joined by ` + `. The parser
// accepts generators in any order and an omitted unit coefficient; the
// printer always emits canonical order and explicit coefficients.

std::string to_literal(const FormSum<GaussianRational>& f);
std::string to_literal(const FormSum<TruncatedPoly>& f);
std::string to_literal(const BigradedForm<GaussianRational>& f);
std::string to_literal(const BigradedForm<TruncatedPoly>& f);

FormSum<GaussianRational> parse_form(const std::string& text, int n);
FormSum<TruncatedPoly> parse_form(const std::string& text, int n, const RingPtr& ring);

}  // namespace bca
