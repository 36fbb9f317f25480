#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bca/cohomology.hpp"

namespace bca {

// Constant-coefficient Kodaira-Spencer class: entry (i, lambda) is the
// coefficient of theta_i (x) phibar^lambda; the conjugate class is derived by
// conjugating entries.
template <class S>
struct KodairaSpencer {
  int n = 0;
  std::vector<S> t;  // row-major n x n
  RingPtr ring;      // null in Q(i) mode

  static KodairaSpencer zero(int n, RingPtr ring = nullptr) {
    return {n, std::vector<S>(static_cast<size_t>(n) * n, ScalarOps<S>::zero()), std::move(ring)};
  }
  const S& entry(int i, int lambda) const {
    return t.at(static_cast<size_t>(i - 1) * n + (lambda - 1));
  }
  S& entry(int i, int lambda) { return t.at(static_cast<size_t>(i - 1) * n + (lambda - 1)); }
};

// Checks dbar-closedness of the class against the central structure
// equations; throws InputError when the direction is not a cocycle.
template <class S>
void validate_kodaira_spencer(const Spec& central, const KodairaSpencer<S>& ks);

// contract: sum_{i,l} t_{il} phibar^l ^ (theta_i -| f), bidegree (p-1, q+1).
// conj_contract: sum conj(t_{il}) phi^l ^ (thetabar_i -| f), bidegree (p+1, q-1).
template <class S>
BigradedForm<S> contract(const KodairaSpencer<S>& ks, const BigradedForm<S>& f);
template <class S>
BigradedForm<S> conj_contract(const KodairaSpencer<S>& ks, const BigradedForm<S>& f);
template <class S>
FormSum<S> contract(const KodairaSpencer<S>& ks, const FormSum<S>& f);
template <class S>
FormSum<S> conj_contract(const KodairaSpencer<S>& ks, const FormSum<S>& f);

enum class SourceKind { BottChern, Aeppli, BClass };

// Where a class lives: Bott-Chern/Aeppli groups at (p,q), or the level-l
// hypercohomology group of the shape-(p,q) complex (position l-1 of the
// resolution model).
struct SourceRef {
  SourceKind kind = SourceKind::BottChern;
  int p = 0, q = 0;
  int level = 0;  // BClass only

  static SourceRef bc(int p, int q) { return {SourceKind::BottChern, p, q, 0}; }
  static SourceRef aeppli(int p, int q) { return {SourceKind::Aeppli, p, q, 0}; }
  static SourceRef bclass(int p, int q, int level) { return {SourceKind::BClass, p, q, level}; }

  // Resolution-model shape and position of the source.
  int shape_p() const { return kind == SourceKind::Aeppli ? p + 1 : p; }
  int shape_q() const { return kind == SourceKind::Aeppli ? q + 1 : q; }
  int position() const {
    switch (kind) {
      case SourceKind::BottChern: return p + q - 1;
      case SourceKind::Aeppli: return p + q;
      case SourceKind::BClass: return level - 1;
    }
    return 0;
  }
  std::string describe() const;
};

// The source group a SourceRef refers to (Bott-Chern and Aeppli use their
// direct definitions; BClass uses the resolution model).
CohomologyGroup source_group(const Spec& spec, const SourceRef& ref);
// Target of the obstruction: resolution-model group one position up.
CohomologyGroup obstruction_target(const Spec& spec, const SourceRef& ref);

template <class S>
struct ObstructionClass {
  SourceRef source;
  // Formula obstructions fill the two branches (partial side / dbar side);
  // order-by-order extension failures report the combined residual in
  // u_branch.
  FormSum<S> u_branch;
  FormSum<S> v_branch;
  std::shared_ptr<const CohomologyGroup> target;
  bool vanishing = true;
  // Coordinates in the target group per parameter monomial; Q(i)-mode results
  // use a single empty-monomial entry.
  std::vector<std::pair<Exponents, QVector>> coordinates;

  FormSum<S> total() const { return u_branch + v_branch; }
};

// First-order obstruction of a central class against a Kodaira-Spencer
// direction. theta must be a valid representative of its source group.
template <class S>
ObstructionClass<S> obstruction_first_order(const Spec& central, const KodairaSpencer<S>& ks,
                                            const SourceRef& ref,
                                            const FormSum<GaussianRational>& theta);

// A one-parameter-block family: structure equations over the truncated ring,
// its central fiber, and the first-order Kodaira-Spencer direction.
struct DeformationFamily {
  ManifoldSpec<TruncatedPoly> spec;
  RingPtr ring;
  Spec central;
  KodairaSpencer<TruncatedPoly> kappa;
};

struct ExtensionResult {
  SourceRef source;
  int requested_order = 0;
  int achieved_order = 0;
  // Extended representative over the ring, in the coordinates of the source
  // position (restricts to the input class at degree zero).
  PolyVector extended;
  GradedSlots slots;
  std::optional<ObstructionClass<TruncatedPoly>> obstruction;

  FormSum<TruncatedPoly> extended_form() const { return from_coordinates(slots, extended); }
};

// Lifts the cocycle condition order by order through the family differential;
// failure packages the first obstructed order's residue as a central class.
ExtensionResult extend_class(const DeformationFamily& family, const SourceRef& ref,
                             const FormSum<GaussianRational>& theta, int order);

// One deformation direction evaluated at a parameter point.
struct DeformationSample {
  std::string label;
  Spec central;
  Spec deformed;
  KodairaSpencer<GaussianRational> kappa;
};

struct JumpEntry {
  GroupKind grid = GroupKind::BottChern;
  int p = 0, q = 0;
  bool flagged = false;          // some first-order obstruction is nonvanishing
  std::string witness;           // literal of a witnessing class when flagged
  std::string witness_source;    // which group the witness came from
  int central_dim = 0;
  int deformed_dim = 0;
};

struct JumpReport {
  std::vector<JumpEntry> entries;
};

// Scans basis classes of both theorem-mandated source groups per bidegree and
// cross-checks against dimensions recomputed at the sample point. A clear
// verdict means "no first-order evidence", not "no jump".
JumpReport jump_scan(const DeformationSample& sample, bool bc_grid, bool aeppli_grid,
                     const std::vector<Bidegree>& bidegrees = {});

struct CorollaryReport {
  int p = 0, q = 0;
  // Bott-Chern criterion at (p,q): both restriction maps vanish.
  int rank_to_dolbeault = 0;
  int rank_to_anti_dolbeault = 0;
  bool bc_applicable = false;
  std::optional<bool> bc_all_extend;
  // Aeppli criterion: restriction maps at (p+1,q) and (p,q+1).
  int rank_next_dolbeault = 0;
  int rank_next_anti_dolbeault = 0;
  bool aeppli_applicable = false;
  std::optional<bool> aeppli_all_extend;
};

// Rank test for the extension criteria on the central fiber (order-0 proxy);
// when a criterion applies, verifies by extension up to the given order.
CorollaryReport corollary_condition(const DeformationFamily& family, int p, int q, int order);

struct ParallelisableWitness {
  int theta_index = 0;  // the holomorphic coframe element used
  int dir_i = 0, dir_lambda = 0;
  ObstructionClass<GaussianRational> obstruction;
};

struct ParallelisableReport {
  bool found = false;
  std::optional<ParallelisableWitness> witness;
  std::vector<std::pair<int, int>> searched;
};

// For a complex parallelisable non-Kaehler spec (model sense: every dphi is
// purely (2,0), some nonzero, n >= 3): searches holomorphic 1-forms against
// frame directions for a nonvanishing first-order obstruction at the
// level-2 shape-(2,2) source. Throws InputError("PreconditionNotMet...") when
// the spec is outside that class.
ParallelisableReport parallelisable_jump_check(
    const Spec& spec, const std::optional<std::vector<std::pair<int, int>>>& directions = {});

}  // namespace bca
