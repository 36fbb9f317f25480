#include "bca/exterior.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <sstream>

namespace bca {

long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long v = 1;
  for (int j = 0; j < std::min(k, n - k); ++j) v = v * (n - j) / (j + 1);
  return v;
}

int popcount32(std::uint32_t v) { return std::popcount(v); }

Bidegree monomial_bidegree(const BasisMonomial& m) {
  return {popcount32(m.hol), popcount32(m.anti)};
}

std::vector<CoframeGenerator> monomial_word(const BasisMonomial& m, int n) {
  std::vector<CoframeGenerator> word;
  for (int k = 1; k <= n; ++k)
    if (m.hol & (std::uint32_t(1) << (k - 1))) word.push_back({k, false});
  for (int k = 1; k <= n; ++k)
    if (m.anti & (std::uint32_t(1) << (k - 1))) word.push_back({k, true});
  return word;
}

std::optional<std::pair<int, BasisMonomial>> canonicalize_word(
    std::vector<CoframeGenerator> word) {
  // Insertion sort with transposition count; generators anti-commute.
  auto key = [](const CoframeGenerator& g) { return std::pair(g.bar, g.index); };
  int swaps = 0;
  for (size_t i = 1; i < word.size(); ++i) {
    CoframeGenerator g = word[i];
    size_t j = i;
    while (j > 0 && key(word[j - 1]) > key(g)) {
      word[j] = word[j - 1];
      --j;
      ++swaps;
    }
    word[j] = g;
  }
  BasisMonomial m;
  for (size_t i = 0; i < word.size(); ++i) {
    if (i > 0 && word[i].bar == word[i - 1].bar && word[i].index == word[i - 1].index)
      return std::nullopt;
    std::uint32_t bit = std::uint32_t(1) << (word[i].index - 1);
    (word[i].bar ? m.anti : m.hol) |= bit;
  }
  return std::pair{swaps % 2 == 0 ? 1 : -1, m};
}

namespace {

std::vector<std::uint32_t> masks_of_weight(int n, int k) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t m = 0; m < (std::uint32_t(1) << n); ++m)
    if (popcount32(m) == k) out.push_back(m);
  return out;  // ascending by construction
}

int mask_rank(int n, std::uint32_t mask) {
  int k = popcount32(mask);
  int rank = 0;
  for (std::uint32_t m = 0; m < mask; ++m)
    if (popcount32(m) == k) ++rank;
  return rank;
}

}  // namespace

std::vector<BasisMonomial> monomial_basis(int n, Bidegree deg) {
  std::vector<BasisMonomial> out;
  if (deg.p < 0 || deg.q < 0 || deg.p > n || deg.q > n) return out;
  auto hols = masks_of_weight(n, deg.p);
  auto antis = masks_of_weight(n, deg.q);
  out.reserve(hols.size() * antis.size());
  for (std::uint32_t h : hols)
    for (std::uint32_t a : antis) out.push_back({h, a});
  return out;
}

int monomial_index(int n, const BasisMonomial& m) {
  Bidegree d = monomial_bidegree(m);
  return mask_rank(n, m.hol) * static_cast<int>(binomial(n, d.q)) + mask_rank(n, m.anti);
}

BigradedForm<TruncatedPoly> promote(const BigradedForm<GaussianRational>& f, const RingPtr& ring) {
  BigradedForm<TruncatedPoly> out(f.dimension(), f.bidegree());
  for (const auto& [m, c] : f.terms()) out.add_term(m, TruncatedPoly::constant(ring, c));
  return out;
}

FormSum<TruncatedPoly> promote(const FormSum<GaussianRational>& f, const RingPtr& ring) {
  FormSum<TruncatedPoly> out(f.dimension());
  for (const auto& [d, part] : f.parts()) out.add(promote(part, ring));
  return out;
}

FormSum<GaussianRational> evaluate(const FormSum<TruncatedPoly>& f,
                                   const std::vector<GaussianRational>& point) {
  FormSum<GaussianRational> out(f.dimension());
  for (const auto& [d, part] : f.parts()) {
    BigradedForm<GaussianRational> g(f.dimension(), d);
    for (const auto& [m, c] : part.terms()) g.add_term(m, c.evaluate(point));
    out.add(g);
  }
  return out;
}

// --- printing ----------------------------------------------------------------

namespace {

std::string word_literal(const BasisMonomial& m, int n) {
  auto word = monomial_word(m, n);
  std::string out;
  for (size_t i = 0; i < word.size(); ++i) {
    if (i > 0) out += "^";
    out += (word[i].bar ? "phibar[" : "phi[") + std::to_string(word[i].index) + "]";
  }
  return out;
}

template <class S>
std::string form_literal(const FormSum<S>& f) {
  if (f.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [deg, part] : f.parts()) {
    for (const auto& [m, c] : part.terms()) {
      std::string coeff = ScalarOps<S>::literal(c);
      if (ScalarOps<S>::needs_parens(c)) coeff = "(" + coeff + ")";
      std::string word = word_literal(m, f.dimension());
      std::string term = word.empty() ? coeff : coeff + " " + word;
      out += first ? term : " + " + term;
      first = false;
    }
  }
  return out;
}

struct FormParser {
  const std::string& s;
  size_t pos = 0;
  int n;
  RingPtr ring;  // null => Q(i) coefficients only

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  bool at_wedge_word() {
    return s.compare(pos, 4, "phi[") == 0 || s.compare(pos, 7, "phibar[") == 0;
  }

  // Parses one wedge factor `phi[k]` / `phibar[k]`.
  CoframeGenerator parse_factor() {
    bool bar = false;
    if (s.compare(pos, 7, "phibar[") == 0) {
      bar = true;
      pos += 7;
    } else if (s.compare(pos, 4, "phi[") == 0) {
      pos += 4;
    } else {
      throw InputError("expected phi[..] or phibar[..] at: " + s.substr(pos));
    }
    size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start || pos >= s.size() || s[pos] != ']')
      throw InputError("malformed coframe factor in: " + s);
    int index = std::stoi(s.substr(start, pos - start));
    ++pos;  // ']'
    if (index < 1 || index > n) throw InputError("coframe index out of range in: " + s);
    return {index, bar};
  }

  // Scalar or parenthesized polynomial coefficient; empty => 1.
  std::pair<GaussianRational, TruncatedPoly> parse_coefficient(bool& is_poly, int sign) {
    skip_ws();
    is_poly = false;
    if (pos < s.size() && s[pos] == '(') {
      size_t depth = 1, start = ++pos;
      while (pos < s.size() && depth > 0) {
        if (s[pos] == '(') ++depth;
        if (s[pos] == ')') --depth;
        ++pos;
      }
      if (depth != 0) throw InputError("unbalanced parentheses in: " + s);
      std::string inner = s.substr(start, pos - start - 1);
      if (!ring) throw InputError("polynomial coefficient outside a parameter ring: " + inner);
      is_poly = true;
      TruncatedPoly p = parse_poly(inner, ring);
      if (sign < 0) p = -p;
      return {GaussianRational(), p};
    }
    size_t start = pos;
    while (pos < s.size() &&
           (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '/' || s[pos] == 'i')) {
      if (s[pos] == 'i' && pos + 1 < s.size() &&
          (std::isalnum(static_cast<unsigned char>(s[pos + 1])) || s[pos + 1] == '_' ||
           s[pos + 1] == '['))
        break;
      ++pos;
    }
    if (pos == start) {
      // Bare generator-name coefficient, e.g. `t21 phi[1]`. The identifier
      // scan stops at '[', so a leading wedge word reads as "phi"/"phibar"
      // and we backtrack.
      if (ring) {
        size_t gstart = pos;
        while (pos < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
          ++pos;
        std::string name = s.substr(gstart, pos - gstart);
        if (name == "phi" || name == "phibar" || name.empty()) {
          pos = gstart;
          GaussianRational one(1);
          if (sign < 0) one = -one;
          return {one, TruncatedPoly()};
        }
        int gi = ring->index_of(name);
        if (gi < 0) throw InputError("unknown parameter '" + name + "' in: " + s);
        is_poly = true;
        TruncatedPoly p = TruncatedPoly::generator(ring, gi);
        if (sign < 0) p = -p;
        return {GaussianRational(), p};
      }
      GaussianRational one(1);
      if (sign < 0) one = -one;
      return {one, TruncatedPoly()};
    }
    GaussianRational c = parse_scalar(s.substr(start, pos - start));
    if (sign < 0) c = -c;
    return {c, TruncatedPoly()};
  }

  template <class S>
  FormSum<S> run() {
    FormSum<S> out(n);
    skip_ws();
    if (pos >= s.size()) throw InputError("empty form literal");
    if (s.compare(pos, 1, "0") == 0 && pos + 1 >= s.size()) return out;
    bool first = true;
    while (pos < s.size()) {
      skip_ws();
      if (pos >= s.size()) break;
      int sign = 1;
      if (!first || s[pos] == '+' || s[pos] == '-') {
        while (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
          if (s[pos] == '-') sign = -sign;
          ++pos;
          skip_ws();
        }
      }
      first = false;
      size_t term_start = pos;
      bool is_poly = false;
      auto [qc, pc] = parse_coefficient(is_poly, sign);
      skip_ws();
      std::vector<CoframeGenerator> word;
      if (pos < s.size() && at_wedge_word()) {
        word.push_back(parse_factor());
        while (pos < s.size() && s[pos] == '^') {
          ++pos;
          word.push_back(parse_factor());
        }
      }
      auto canon = canonicalize_word(std::move(word));
      if (canon) {
        S coeff;
        if constexpr (std::is_same_v<S, TruncatedPoly>) {
          coeff = is_poly ? pc : TruncatedPoly::constant(ring, qc);
        } else {
          if (is_poly) throw InputError("polynomial coefficient in a rational form: " + s);
          coeff = qc;
        }
        if (canon->first < 0) coeff = -coeff;
        out.add(BigradedForm<S>::monomial(n, canon->second, coeff));
      }
      if (pos == term_start) throw InputError("unparseable form literal: " + s);
      skip_ws();
    }
    return out;
  }
};

}  // namespace

std::string to_literal(const FormSum<GaussianRational>& f) { return form_literal(f); }
std::string to_literal(const FormSum<TruncatedPoly>& f) { return form_literal(f); }
std::string to_literal(const BigradedForm<GaussianRational>& f) {
  return form_literal(FormSum<GaussianRational>(f));
}
std::string to_literal(const BigradedForm<TruncatedPoly>& f) {
  return form_literal(FormSum<TruncatedPoly>(f));
}

FormSum<GaussianRational> parse_form(const std::string& text, int n) {
  FormParser parser{text, 0, n, nullptr};
  return parser.run<GaussianRational>();
}

FormSum<TruncatedPoly> parse_form(const std::string& text, int n, const RingPtr& ring) {
  FormParser parser{text, 0, n, ring};
  return parser.run<TruncatedPoly>();
}

}  // namespace bca
