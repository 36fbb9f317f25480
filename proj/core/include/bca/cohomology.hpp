#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bca/linalg.hpp"
#include "bca/structure.hpp"

namespace bca {

enum class GroupKind { DeRham, Dolbeault, AntiDolbeault, BottChern, Aeppli, LPosition };

std::string to_string(GroupKind kind);

// A computed cohomology group: dimension, representative forms and a
// membership reducer (form -> coordinates in the group, nullopt when the form
// is not a cocycle of the ambient complex).
class CohomologyGroup {
public:
  GroupKind kind = GroupKind::DeRham;
  int p = -1, q = -1, k = -1;       // degree data; (p,q) or total k
  int shape_p = -1, shape_q = -1;   // resolution-complex shape when kind == LPosition
  GradedSlots slots;
  QuotientReport classes;

  int dim() const { return classes.dim(); }
  std::vector<FormSum<GaussianRational>> representatives() const;
  std::optional<QVector> reduce(const FormSum<GaussianRational>& form) const;
  std::optional<QVector> reduce_vector(const QVector& v) const { return classes.reduce(v); }
};

using Spec = ManifoldSpec<GaussianRational>;

CohomologyGroup de_rham(const Spec& spec, int k);
CohomologyGroup dolbeault(const Spec& spec, int p, int q);
CohomologyGroup anti_dolbeault(const Spec& spec, int p, int q);
CohomologyGroup bott_chern(const Spec& spec, int p, int q);
CohomologyGroup aeppli(const Spec& spec, int p, int q);

// Global-sections complex attached to a shape (P,Q) whose low positions hold
// the strictly-below-(P,Q) window, with projected d, then the del-delbar
// junction, then full d on the at-least-(P,Q) window. Position P+Q-1 computes
// Bott-Chern of (P,Q); position P+Q of shape (P+1,Q+1) computes Aeppli (P,Q).
template <class S>
struct ResolutionComplex {
  int n = 0;
  int shape_p = 0, shape_q = 0;
  std::vector<GradedSlots> positions;   // index k = 0 .. 2n-1
  std::vector<Matrix<S>> differentials; // positions[k] -> positions[k+1]
};

GradedSlots lposition_slots(int n, int shape_p, int shape_q, int k);

template <class S>
ResolutionComplex<S> build_lcomplex(const ManifoldSpec<S>& spec, int shape_p, int shape_q);

// Single differential of the complex at position k (cheaper than a full build
// when only one arrow is needed).
template <class S>
Matrix<S> lcomplex_differential(const ManifoldSpec<S>& spec, int shape_p, int shape_q, int k);

CohomologyGroup l_cohomology(const Spec& spec, int shape_p, int shape_q, int k);

// Same computation without the shape >= 1 guard; boundary shapes (p or q
// zero) arise as obstruction targets for classes of pure type.
CohomologyGroup l_group(const Spec& spec, int shape_p, int shape_q, int k);

enum class NaturalMapKind { BCToDolbeault, BCToAntiDolbeault, DolbeaultToAeppli,
                            AntiDolbeaultToAeppli, BCToDeRham, DeRhamToAeppli };

struct NaturalMap {
  NaturalMapKind which;
  CohomologyGroup source;
  CohomologyGroup target;
  QMatrix matrix;  // target coordinates of each source representative
  int rank = 0;
};

NaturalMap natural_map(const Spec& spec, NaturalMapKind which, int p, int q);

}  // namespace bca
