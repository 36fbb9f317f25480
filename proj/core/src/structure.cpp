#include "bca/structure.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace bca {

namespace {

template <class S>
BigradedForm<S> unit_monomial(int n, const BasisMonomial& m) {
  return BigradedForm<S>::monomial(n, m, ScalarOps<S>::one());
}

}  // namespace

template <class S>
FormSum<S> d(const ManifoldSpec<S>& spec, const BigradedForm<S>& f) {
  const int n = spec.n();
  FormSum<S> out(n);
  for (const auto& [m, c] : f.terms()) {
    auto word = monomial_word(m, n);
    for (size_t j = 0; j < word.size(); ++j) {
      // Leibniz: d passes the j leading generators, picking up (-1)^j.
      const FormSum<S>& dg =
          word[j].bar ? spec.dphi_bar(word[j].index) : spec.dphi(word[j].index);
      if (dg.is_zero()) continue;
      BasisMonomial prefix, suffix;
      for (size_t i = 0; i < word.size(); ++i) {
        if (i == j) continue;
        std::uint32_t bit = std::uint32_t(1) << (word[i].index - 1);
        BasisMonomial& side = i < j ? prefix : suffix;
        (word[i].bar ? side.anti : side.hol) |= bit;
      }
      FormSum<S> piece = wedge(FormSum<S>(unit_monomial<S>(n, prefix)),
                               wedge(dg, FormSum<S>(unit_monomial<S>(n, suffix))));
      S coeff = (j % 2 == 0) ? c : -c;
      for (const auto& [deg, part] : piece.parts()) out.add(coeff * part);
    }
  }
  return out;
}

template <class S>
FormSum<S> d(const ManifoldSpec<S>& spec, const FormSum<S>& f) {
  FormSum<S> out(spec.n());
  for (const auto& [deg, part] : f.parts()) out += d(spec, part);
  return out;
}

template <class S>
BigradedForm<S> partial(const ManifoldSpec<S>& spec, const BigradedForm<S>& f) {
  Bidegree deg = f.bidegree();
  return d(spec, f).component({deg.p + 1, deg.q});
}

template <class S>
BigradedForm<S> dbar(const ManifoldSpec<S>& spec, const BigradedForm<S>& f) {
  Bidegree deg = f.bidegree();
  return d(spec, f).component({deg.p, deg.q + 1});
}

template <class S>
BigradedForm<S> del_delbar(const ManifoldSpec<S>& spec, const BigradedForm<S>& f) {
  // Fixed composite convention: first dbar, then partial.
  return partial(spec, dbar(spec, f));
}

template <class S>
ManifoldSpec<S> validate(ManifoldSpec<S> spec) {
  const int n = spec.n();
  for (int k = 1; k <= n; ++k) {
    const FormSum<S>& eq = spec.dphi(k);
    for (const auto& [deg, part] : eq.parts()) {
      if (part.is_zero()) continue;
      if (deg.total() != 2)
        throw InputError("NonIntegrable: dphi[" + std::to_string(k) +
                         "] has a component of total degree " + std::to_string(deg.total()));
      if (deg.p == 0 && deg.q == 2)
        throw InputError("NonIntegrable: dphi[" + std::to_string(k) +
                         "] has (0,2) component: " + to_literal(part));
    }
  }
  for (int k = 1; k <= n; ++k) {
    FormSum<S> dd = d(spec, spec.dphi(k));
    if (!dd.is_zero())
      throw InputError("NotClosed: d^2 phi[" + std::to_string(k) +
                       "] = " + to_literal(dd));
    FormSum<S> ddb = d(spec, spec.dphi_bar(k));
    if (!ddb.is_zero())
      throw InternalError("conjugate structure equation fails d^2 on phibar[" +
                          std::to_string(k) + "]");
  }
  spec.mark_validated();
  return spec;
}

// --- graded slots -------------------------------------------------------------

GradedSlots GradedSlots::of(int n, std::vector<Bidegree> degs) {
  GradedSlots out;
  out.n = n;
  out.slots = std::move(degs);
  out.offsets.reserve(out.slots.size());
  for (const Bidegree& deg : out.slots) {
    out.offsets.push_back(out.total);
    out.total += static_cast<int>(binomial(n, deg.p) * binomial(n, deg.q));
  }
  return out;
}

GradedSlots GradedSlots::single(int n, Bidegree deg) { return of(n, {deg}); }

GradedSlots GradedSlots::total_degree(int n, int k) {
  std::vector<Bidegree> degs;
  for (int p = std::max(0, k - n); p <= std::min(n, k); ++p) degs.push_back({p, k - p});
  return of(n, std::move(degs));
}

int GradedSlots::slot_of(Bidegree deg) const {
  for (size_t i = 0; i < slots.size(); ++i)
    if (slots[i] == deg) return static_cast<int>(i);
  return -1;
}

template <class S>
std::vector<S> to_coordinates(const GradedSlots& slots, const FormSum<S>& f,
                              bool allow_outside) {
  std::vector<S> v(slots.total, ScalarOps<S>::zero());
  for (const auto& [deg, part] : f.parts()) {
    if (part.is_zero()) continue;
    int slot = slots.slot_of(deg);
    if (slot < 0) {
      if (allow_outside) continue;
      throw InternalError("form component (" + std::to_string(deg.p) + "," +
                          std::to_string(deg.q) + ") has no slot");
    }
    for (const auto& [m, c] : part.terms())
      v[slots.offsets[slot] + monomial_index(slots.n, m)] = c;
  }
  return v;
}

template <class S>
FormSum<S> from_coordinates(const GradedSlots& slots, const std::vector<S>& v) {
  if (static_cast<int>(v.size()) != slots.total)
    throw InternalError("coordinate vector length mismatch");
  FormSum<S> out(slots.n);
  for (size_t i = 0; i < slots.slots.size(); ++i) {
    BigradedForm<S> part(slots.n, slots.slots[i]);
    auto basis = monomial_basis(slots.n, slots.slots[i]);
    for (size_t j = 0; j < basis.size(); ++j)
      part.add_term(basis[j], v[slots.offsets[i] + j]);
    out.add(part);
  }
  return out;
}

template <class S>
Matrix<S> operator_matrix(const ManifoldSpec<S>& spec, DiffOp op, const GradedSlots& source,
                          const GradedSlots& target, bool project) {
  Matrix<S> m(target.total, source.total);
  for (size_t si = 0; si < source.slots.size(); ++si) {
    auto basis = monomial_basis(spec.n(), source.slots[si]);
    for (size_t j = 0; j < basis.size(); ++j) {
      BigradedForm<S> mono = unit_monomial<S>(spec.n(), basis[j]);
      FormSum<S> img(spec.n());
      switch (op) {
        case DiffOp::Partial: img.add(partial(spec, mono)); break;
        case DiffOp::Dbar: img.add(dbar(spec, mono)); break;
        case DiffOp::D: img = d(spec, mono); break;
        case DiffOp::DelDelbar: img.add(del_delbar(spec, mono)); break;
      }
      std::vector<S> col = to_coordinates(target, img, project);
      int c = source.offsets[si] + static_cast<int>(j);
      for (int r = 0; r < target.total; ++r) m.at(r, c) = col[r];
    }
  }
  return m;
}

DifferentialMatrix differential_matrix(const ManifoldSpec<GaussianRational>& spec, DiffOp op,
                                       Bidegree source) {
  GradedSlots src = GradedSlots::single(spec.n(), source);
  GradedSlots dst;
  switch (op) {
    case DiffOp::Partial: dst = GradedSlots::single(spec.n(), {source.p + 1, source.q}); break;
    case DiffOp::Dbar: dst = GradedSlots::single(spec.n(), {source.p, source.q + 1}); break;
    case DiffOp::DelDelbar:
      dst = GradedSlots::single(spec.n(), {source.p + 1, source.q + 1});
      break;
    case DiffOp::D: dst = GradedSlots::total_degree(spec.n(), source.total() + 1); break;
  }
  QMatrix m = operator_matrix(spec, op, src, dst, /*project=*/false);
  return {std::move(src), std::move(dst), std::move(m)};
}

// --- spec files ----------------------------------------------------------------

ManifoldSpec<TruncatedPoly> promote(const ManifoldSpec<GaussianRational>& spec,
                                    const RingPtr& ring) {
  std::vector<FormSum<TruncatedPoly>> dphi;
  dphi.reserve(spec.n());
  for (int k = 1; k <= spec.n(); ++k) dphi.push_back(promote(spec.dphi(k), ring));
  ManifoldSpec<TruncatedPoly> out(spec.n(), std::move(dphi));
  if (spec.validated()) out.mark_validated();
  return out;
}

ManifoldSpec<GaussianRational> central_fiber(const ManifoldSpec<TruncatedPoly>& spec) {
  std::vector<FormSum<GaussianRational>> dphi;
  dphi.reserve(spec.n());
  for (int k = 1; k <= spec.n(); ++k) {
    FormSum<GaussianRational> eq(spec.n());
    for (const auto& [deg, part] : spec.dphi(k).parts()) {
      BigradedForm<GaussianRational> g(spec.n(), deg);
      for (const auto& [m, c] : part.terms()) g.add_term(m, c.constant_term());
      eq.add(g);
    }
    dphi.push_back(std::move(eq));
  }
  return validate(ManifoldSpec<GaussianRational>(spec.n(), std::move(dphi)));
}

ManifoldSpec<GaussianRational> evaluate_family(const ManifoldSpec<TruncatedPoly>& spec,
                                               const RingPtr& ring,
                                               const std::vector<GaussianRational>& base_values) {
  const int m = ring->generator_count();
  std::vector<GaussianRational> point(m);
  int base_index = 0;
  for (int k = 0; k < m; ++k) {
    if (ring->conj_partner(k) < k) continue;  // fill base slot and its partner together
    if (base_index >= static_cast<int>(base_values.size()))
      throw InputError("not enough values to evaluate the family");
    point[k] = base_values[base_index];
    point[ring->conj_partner(k)] = base_values[base_index].conj();
    ++base_index;
  }
  if (base_index != static_cast<int>(base_values.size()))
    throw InputError("too many values for family evaluation");
  std::vector<FormSum<GaussianRational>> dphi;
  dphi.reserve(spec.n());
  for (int k = 1; k <= spec.n(); ++k) dphi.push_back(evaluate(spec.dphi(k), point));
  return validate(ManifoldSpec<GaussianRational>(spec.n(), std::move(dphi)));
}

RingPtr make_parameter_ring(const std::vector<std::string>& base_names, int order) {
  std::vector<std::string> names = base_names;
  std::vector<std::pair<int, int>> pairs;
  const int m = static_cast<int>(base_names.size());
  for (int k = 0; k < m; ++k) {
    names.push_back(base_names[k] + "bar");
    pairs.emplace_back(k, m + k);
  }
  return ParameterRing::make(std::move(names), std::move(pairs), order);
}

namespace {

struct RawSpecLines {
  int dim = 0;
  std::vector<std::string> params;
  int order = -1;
  std::vector<std::pair<int, std::string>> dphi;  // (k, literal)
};

RawSpecLines scan_spec(const std::string& text) {
  RawSpecLines raw;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto where = [&] { return " (line " + std::to_string(lineno) + ")"; };
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    size_t eq = line.find('=');
    std::string key = line.substr(0, eq == std::string::npos ? line.size() : eq);
    auto trim = [](std::string s) {
      size_t a = s.find_first_not_of(" \t\r");
      size_t b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    key = trim(key);
    if (key.empty()) continue;
    if (eq == std::string::npos) throw InputError("expected 'key = value'" + where());
    std::string value = trim(line.substr(eq + 1));
    if (key == "dim") {
      raw.dim = std::stoi(value);
    } else if (key == "order") {
      raw.order = std::stoi(value);
    } else if (key == "params") {
      if (value.size() < 2 || value.front() != '[' || value.back() != ']')
        throw InputError("params must be a [..] list" + where());
      std::string inner = value.substr(1, value.size() - 2);
      std::string name;
      std::istringstream items(inner);
      while (std::getline(items, name, ',')) {
        name = trim(name);
        if (!name.empty()) raw.params.push_back(name);
      }
    } else if (key.rfind("dphi[", 0) == 0 && key.back() == ']') {
      int k = std::stoi(key.substr(5, key.size() - 6));
      raw.dphi.emplace_back(k, value);
    } else {
      throw InputError("unknown spec key '" + key + "'" + where());
    }
  }
  if (raw.dim < 1) throw InputError("spec file must declare dim >= 1");
  return raw;
}

}  // namespace

SpecFile parse_spec_file(const std::string& text) {
  RawSpecLines raw = scan_spec(text);
  const int n = raw.dim;
  for (const auto& [k, lit] : raw.dphi)
    if (k < 1 || k > n) throw InputError("dphi index " + std::to_string(k) + " out of range");

  if (raw.params.empty()) {
    std::vector<FormSum<GaussianRational>> dphi(n, FormSum<GaussianRational>(n));
    for (const auto& [k, lit] : raw.dphi) dphi[k - 1] = parse_form(lit, n);
    return validate(ManifoldSpec<GaussianRational>(n, std::move(dphi)));
  }
  int order = raw.order < 0 ? 1 : raw.order;
  RingPtr ring = make_parameter_ring(raw.params, order);
  std::vector<FormSum<TruncatedPoly>> dphi(n, FormSum<TruncatedPoly>(n));
  for (const auto& [k, lit] : raw.dphi) dphi[k - 1] = parse_form(lit, n, ring);
  FamilyFile family{validate(ManifoldSpec<TruncatedPoly>(n, std::move(dphi))), ring};
  return family;
}

SpecFile read_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open spec file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_spec_file(buffer.str());
}

std::string write_spec_file(const ManifoldSpec<GaussianRational>& spec) {
  std::ostringstream out;
  out << "dim = " << spec.n() << "\n";
  for (int k = 1; k <= spec.n(); ++k)
    if (!spec.dphi(k).is_zero())
      out << "dphi[" << k << "] = " << to_literal(spec.dphi(k)) << "\n";
  return out.str();
}

std::string write_spec_file(const ManifoldSpec<TruncatedPoly>& spec, const RingPtr& ring) {
  std::ostringstream out;
  out << "dim = " << spec.n() << "\n";
  out << "params = [";
  const int m = ring->generator_count();
  bool first = true;
  for (int k = 0; k < m; ++k) {
    // Conjugate generators are implied; list only the bases.
    if (ring->generators()[k].size() > 3 &&
        ring->generators()[k].substr(ring->generators()[k].size() - 3) == "bar")
      continue;
    out << (first ? "" : ", ") << ring->generators()[k];
    first = false;
  }
  out << "]\n";
  out << "order = " << ring->truncation_order() << "\n";
  for (int k = 1; k <= spec.n(); ++k)
    if (!spec.dphi(k).is_zero())
      out << "dphi[" << k << "] = " << to_literal(spec.dphi(k)) << "\n";
  return out.str();
}

// --- explicit instantiations ---------------------------------------------------

template FormSum<GaussianRational> d(const ManifoldSpec<GaussianRational>&,
                                     const BigradedForm<GaussianRational>&);
template FormSum<TruncatedPoly> d(const ManifoldSpec<TruncatedPoly>&,
                                  const BigradedForm<TruncatedPoly>&);
template FormSum<GaussianRational> d(const ManifoldSpec<GaussianRational>&,
                                     const FormSum<GaussianRational>&);
template FormSum<TruncatedPoly> d(const ManifoldSpec<TruncatedPoly>&,
                                  const FormSum<TruncatedPoly>&);
template BigradedForm<GaussianRational> partial(const ManifoldSpec<GaussianRational>&,
                                                const BigradedForm<GaussianRational>&);
template BigradedForm<TruncatedPoly> partial(const ManifoldSpec<TruncatedPoly>&,
                                             const BigradedForm<TruncatedPoly>&);
template BigradedForm<GaussianRational> dbar(const ManifoldSpec<GaussianRational>&,
                                             const BigradedForm<GaussianRational>&);
template BigradedForm<TruncatedPoly> dbar(const ManifoldSpec<TruncatedPoly>&,
                                          const BigradedForm<TruncatedPoly>&);
template BigradedForm<GaussianRational> del_delbar(const ManifoldSpec<GaussianRational>&,
                                                   const BigradedForm<GaussianRational>&);
template BigradedForm<TruncatedPoly> del_delbar(const ManifoldSpec<TruncatedPoly>&,
                                                const BigradedForm<TruncatedPoly>&);
template ManifoldSpec<GaussianRational> validate(ManifoldSpec<GaussianRational>);
template ManifoldSpec<TruncatedPoly> validate(ManifoldSpec<TruncatedPoly>);
template std::vector<GaussianRational> to_coordinates(const GradedSlots&,
                                                      const FormSum<GaussianRational>&, bool);
template std::vector<TruncatedPoly> to_coordinates(const GradedSlots&,
                                                   const FormSum<TruncatedPoly>&, bool);
template FormSum<GaussianRational> from_coordinates(const GradedSlots&,
                                                    const std::vector<GaussianRational>&);
template FormSum<TruncatedPoly> from_coordinates(const GradedSlots&,
                                                 const std::vector<TruncatedPoly>&);
template Matrix<GaussianRational> operator_matrix(const ManifoldSpec<GaussianRational>&, DiffOp,
                                                  const GradedSlots&, const GradedSlots&, bool);
template Matrix<TruncatedPoly> operator_matrix(const ManifoldSpec<TruncatedPoly>&, DiffOp,
                                               const GradedSlots&, const GradedSlots&, bool);

}  // namespace bca
