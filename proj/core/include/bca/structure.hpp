#pragma once

#include <string>
#include <variant>
#include <vector>

#include "bca/exterior.hpp"
#include "bca/linalg.hpp"

namespace bca {

// A manifold given by structure equations: the complex dimension n and, for
// each holomorphic coframe element, its exterior derivative as an invariant
// 2-form with zero (0,2)-component. Conjugate equations are always derived,
// never supplied.
template <class S>
class ManifoldSpec {
public:
  ManifoldSpec(int n, std::vector<FormSum<S>> dphi) : n_(n), dphi_(std::move(dphi)) {
    if (n_ < 1) throw InputError("complex dimension must be at least 1");
    if (static_cast<int>(dphi_.size()) != n_)
      throw InputError("expected one structure equation per coframe element");
    dphi_bar_.reserve(dphi_.size());
    for (const auto& f : dphi_) dphi_bar_.push_back(conjugate(f));
  }

  int n() const { return n_; }
  // d phi^k, 1-based k.
  const FormSum<S>& dphi(int k) const { return dphi_.at(k - 1); }
  const FormSum<S>& dphi_bar(int k) const { return dphi_bar_.at(k - 1); }

  bool validated() const { return validated_; }
  void mark_validated() { validated_ = true; }

private:
  int n_;
  std::vector<FormSum<S>> dphi_;
  std::vector<FormSum<S>> dphi_bar_;
  bool validated_ = false;
};

// Integrability ((0,2)-parts vanish) and d*d = 0 on every generator; throws
// InputError with the offending coframe index and residue otherwise.
template <class S>
ManifoldSpec<S> validate(ManifoldSpec<S> spec);

// The induced operators on invariant forms. `partial` keeps the (p+1,q)
// component of d, `dbar` the (p,q+1) component; d = partial + dbar.
template <class S>
FormSum<S> d(const ManifoldSpec<S>& spec, const BigradedForm<S>& f);
template <class S>
FormSum<S> d(const ManifoldSpec<S>& spec, const FormSum<S>& f);
template <class S>
BigradedForm<S> partial(const ManifoldSpec<S>& spec, const BigradedForm<S>& f);
template <class S>
BigradedForm<S> dbar(const ManifoldSpec<S>& spec, const BigradedForm<S>& f);
template <class S>
BigradedForm<S> del_delbar(const ManifoldSpec<S>& spec, const BigradedForm<S>& f);

enum class DiffOp { Partial, Dbar, D, DelDelbar };

// An ordered list of bidegree slots with offsets; the coordinate convention
// for all block matrices.
struct GradedSlots {
  int n = 0;
  std::vector<Bidegree> slots;
  std::vector<int> offsets;  // per slot
  int total = 0;

  static GradedSlots single(int n, Bidegree deg);
  static GradedSlots total_degree(int n, int k);  // all (p,q), p+q=k, ascending p
  static GradedSlots of(int n, std::vector<Bidegree> degs);

  int slot_of(Bidegree deg) const;  // -1 when absent
};

template <class S>
std::vector<S> to_coordinates(const GradedSlots& slots, const FormSum<S>& f,
                              bool allow_outside = false);
template <class S>
FormSum<S> from_coordinates(const GradedSlots& slots, const std::vector<S>& v);

// Column j is the operator applied to basis monomial j, expanded in the
// target slots. Components outside the target are dropped when `project` is
// set and are an error otherwise.
template <class S>
Matrix<S> operator_matrix(const ManifoldSpec<S>& spec, DiffOp op, const GradedSlots& source,
                          const GradedSlots& target, bool project);

struct DifferentialMatrix {
  GradedSlots source;
  GradedSlots target;
  QMatrix matrix;
};

// Coordinate form of an operator out of a single bidegree (d gets block
// targets over the whole next total degree).
DifferentialMatrix differential_matrix(const ManifoldSpec<GaussianRational>& spec, DiffOp op,
                                       Bidegree source);

// --- spec files --------------------------------------------------------------
// Structured text: `dim = n`, then `dphi[k] = <form literal>` lines (omitted k
// means d phi^k = 0). Families add `params = [t11, ...]` and `order = N`;
// conjugate parameters are implied. Canonical writes round-trip bit-exactly.

struct FamilyFile {
  ManifoldSpec<TruncatedPoly> spec;
  RingPtr ring;
};
using SpecFile = std::variant<ManifoldSpec<GaussianRational>, FamilyFile>;

SpecFile parse_spec_file(const std::string& text);
SpecFile read_spec_file(const std::string& path);
std::string write_spec_file(const ManifoldSpec<GaussianRational>& spec);
std::string write_spec_file(const ManifoldSpec<TruncatedPoly>& spec, const RingPtr& ring);

// Conjugate-closed parameter ring from base names: t -> conjugate tbar.
RingPtr make_parameter_ring(const std::vector<std::string>& base_names, int order);

// Q(i)-mode spec lifted into a parameter ring (constant coefficients).
ManifoldSpec<TruncatedPoly> promote(const ManifoldSpec<GaussianRational>& spec,
                                    const RingPtr& ring);

// Family restricted to parameter degree zero.
ManifoldSpec<GaussianRational> central_fiber(const ManifoldSpec<TruncatedPoly>& spec);

// Point evaluation of a family; `point` assigns the base generators, conjugate
// generators receive conjugated values.
ManifoldSpec<GaussianRational> evaluate_family(const ManifoldSpec<TruncatedPoly>& spec,
                                               const RingPtr& ring,
                                               const std::vector<GaussianRational>& base_values);

}  // namespace bca
