#include "bca/cohomology.hpp"

#include <algorithm>

namespace bca {

std::string to_string(GroupKind kind) {
  switch (kind) {
    case GroupKind::DeRham: return "dr";
    case GroupKind::Dolbeault: return "dolbeault";
    case GroupKind::AntiDolbeault: return "anti-dolbeault";
    case GroupKind::BottChern: return "bc";
    case GroupKind::Aeppli: return "aeppli";
    case GroupKind::LPosition: return "lposition";
  }
  return "?";
}

std::vector<FormSum<GaussianRational>> CohomologyGroup::representatives() const {
  std::vector<FormSum<GaussianRational>> out;
  out.reserve(classes.representatives().size());
  for (const QVector& v : classes.representatives()) out.push_back(from_coordinates(slots, v));
  return out;
}

std::optional<QVector> CohomologyGroup::reduce(const FormSum<GaussianRational>& form) const {
  return classes.reduce(to_coordinates(slots, form));
}

namespace {

CohomologyGroup make_group(GroupKind kind, GradedSlots slots, const QMatrix& out_map,
                           const SubspaceBasis& boundaries) {
  CohomologyGroup g;
  g.kind = kind;
  g.slots = std::move(slots);
  g.classes = quotient(kernel(out_map), boundaries);
  return g;
}

}  // namespace

CohomologyGroup de_rham(const Spec& spec, int k) {
  if (k < 0 || k > 2 * spec.n()) throw InputError("de Rham degree out of range");
  GradedSlots cur = GradedSlots::total_degree(spec.n(), k);
  GradedSlots next = GradedSlots::total_degree(spec.n(), k + 1);
  QMatrix out_map = operator_matrix(spec, DiffOp::D, cur, next, /*project=*/false);
  SubspaceBasis boundaries = SubspaceBasis::zero(cur.total);
  if (k > 0) {
    GradedSlots prev = GradedSlots::total_degree(spec.n(), k - 1);
    boundaries = image(operator_matrix(spec, DiffOp::D, prev, cur, /*project=*/false));
  }
  CohomologyGroup g = make_group(GroupKind::DeRham, cur, out_map, boundaries);
  g.k = k;
  return g;
}

namespace {

CohomologyGroup single_operator_group(const Spec& spec, GroupKind kind, DiffOp op, int p, int q,
                                      Bidegree prev_src) {
  GradedSlots cur = GradedSlots::single(spec.n(), {p, q});
  Bidegree out_deg = op == DiffOp::Partial ? Bidegree{p + 1, q} : Bidegree{p, q + 1};
  GradedSlots next = GradedSlots::single(spec.n(), out_deg);
  QMatrix out_map = operator_matrix(spec, op, cur, next, /*project=*/false);
  SubspaceBasis boundaries = SubspaceBasis::zero(cur.total);
  if (prev_src.p >= 0 && prev_src.q >= 0) {
    GradedSlots prev = GradedSlots::single(spec.n(), prev_src);
    boundaries = image(operator_matrix(spec, op, prev, cur, /*project=*/false));
  }
  CohomologyGroup g = make_group(kind, cur, out_map, boundaries);
  g.p = p;
  g.q = q;
  return g;
}

}  // namespace

CohomologyGroup dolbeault(const Spec& spec, int p, int q) {
  if (p < 0 || q < 0 || p > spec.n() || q > spec.n()) throw InputError("bidegree out of range");
  return single_operator_group(spec, GroupKind::Dolbeault, DiffOp::Dbar, p, q, {p, q - 1});
}

CohomologyGroup anti_dolbeault(const Spec& spec, int p, int q) {
  if (p < 0 || q < 0 || p > spec.n() || q > spec.n()) throw InputError("bidegree out of range");
  return single_operator_group(spec, GroupKind::AntiDolbeault, DiffOp::Partial, p, q,
                               {p - 1, q});
}

CohomologyGroup bott_chern(const Spec& spec, int p, int q) {
  if (p < 0 || q < 0 || p > spec.n() || q > spec.n()) throw InputError("bidegree out of range");
  const int n = spec.n();
  GradedSlots cur = GradedSlots::single(n, {p, q});
  GradedSlots next = GradedSlots::total_degree(n, p + q + 1);
  QMatrix out_map = operator_matrix(spec, DiffOp::D, cur, next, /*project=*/false);
  SubspaceBasis boundaries = SubspaceBasis::zero(cur.total);
  if (p >= 1 && q >= 1) {
    GradedSlots prev = GradedSlots::single(n, {p - 1, q - 1});
    boundaries = image(operator_matrix(spec, DiffOp::DelDelbar, prev, cur, /*project=*/false));
  }
  CohomologyGroup g = make_group(GroupKind::BottChern, cur, out_map, boundaries);
  g.p = p;
  g.q = q;
  return g;
}

CohomologyGroup aeppli(const Spec& spec, int p, int q) {
  if (p < 0 || q < 0 || p > spec.n() || q > spec.n()) throw InputError("bidegree out of range");
  const int n = spec.n();
  GradedSlots cur = GradedSlots::single(n, {p, q});
  GradedSlots next = GradedSlots::single(n, {p + 1, q + 1});
  QMatrix out_map = operator_matrix(spec, DiffOp::DelDelbar, cur, next, /*project=*/false);
  std::vector<QVector> boundary_vectors;
  if (p >= 1) {
    GradedSlots prev = GradedSlots::single(n, {p - 1, q});
    QMatrix im = operator_matrix(spec, DiffOp::Partial, prev, cur, /*project=*/false);
    for (const QVector& v : image(im).vectors) boundary_vectors.push_back(v);
  }
  if (q >= 1) {
    GradedSlots prev = GradedSlots::single(n, {p, q - 1});
    QMatrix im = operator_matrix(spec, DiffOp::Dbar, prev, cur, /*project=*/false);
    for (const QVector& v : image(im).vectors) boundary_vectors.push_back(v);
  }
  SubspaceBasis boundaries = SubspaceBasis::span(cur.total, boundary_vectors);
  CohomologyGroup g = make_group(GroupKind::Aeppli, cur, out_map, boundaries);
  g.p = p;
  g.q = q;
  return g;
}

// --- the resolution complex -----------------------------------------------------

GradedSlots lposition_slots(int n, int shape_p, int shape_q, int k) {
  std::vector<Bidegree> degs;
  if (k <= shape_p + shape_q - 2) {
    for (int r = 0; r <= std::min(n, k); ++r) {
      int s = k - r;
      if (s < 0 || s > n) continue;
      if (r < shape_p && s < shape_q) degs.push_back({r, s});
    }
  } else {
    for (int r = 0; r <= std::min(n, k + 1); ++r) {
      int s = k + 1 - r;
      if (s < 0 || s > n) continue;
      if (r >= shape_p && s >= shape_q) degs.push_back({r, s});
    }
  }
  return GradedSlots::of(n, std::move(degs));
}

template <class S>
Matrix<S> lcomplex_differential(const ManifoldSpec<S>& spec, int shape_p, int shape_q, int k) {
  const int n = spec.n();
  GradedSlots src = lposition_slots(n, shape_p, shape_q, k);
  GradedSlots dst = lposition_slots(n, shape_p, shape_q, k + 1);
  if (src.total == 0 || dst.total == 0) return Matrix<S>(dst.total, src.total);
  const int junction = shape_p + shape_q - 2;
  if (k < junction) return operator_matrix(spec, DiffOp::D, src, dst, /*project=*/true);
  if (k == junction) return operator_matrix(spec, DiffOp::DelDelbar, src, dst, /*project=*/false);
  return operator_matrix(spec, DiffOp::D, src, dst, /*project=*/false);
}

template <class S>
ResolutionComplex<S> build_lcomplex(const ManifoldSpec<S>& spec, int shape_p, int shape_q) {
  if (shape_p < 0 || shape_q < 0 || shape_p > spec.n() + 1 || shape_q > spec.n() + 1)
    throw InputError("resolution shape out of range");
  ResolutionComplex<S> out;
  out.n = spec.n();
  out.shape_p = shape_p;
  out.shape_q = shape_q;
  const int top = 2 * spec.n() - 1;
  for (int k = 0; k <= top; ++k)
    out.positions.push_back(lposition_slots(spec.n(), shape_p, shape_q, k));
  for (int k = 0; k < top; ++k)
    out.differentials.push_back(lcomplex_differential(spec, shape_p, shape_q, k));
  // Consecutive arrows must compose to zero.
  for (int k = 0; k + 1 < top; ++k) {
    const Matrix<S>& a = out.differentials[k];
    const Matrix<S>& b = out.differentials[k + 1];
    for (int c = 0; c < a.cols; ++c) {
      std::vector<S> col(a.rows, ScalarOps<S>::zero());
      for (int r = 0; r < a.rows; ++r) col[r] = a.at(r, c);
      std::vector<S> two = b.apply(col);
      for (const S& v : two)
        if (!ScalarOps<S>::is_zero(v))
          throw InternalError("resolution complex differentials do not compose to zero");
    }
  }
  return out;
}

CohomologyGroup l_cohomology(const Spec& spec, int shape_p, int shape_q, int k) {
  if (shape_p < 1 || shape_q < 1)
    throw InputError("resolution shape requires p, q >= 1");
  return l_group(spec, shape_p, shape_q, k);
}

CohomologyGroup l_group(const Spec& spec, int shape_p, int shape_q, int k) {
  if (k < 0 || k > 2 * spec.n() - 1) throw InputError("resolution position out of range");
  GradedSlots cur = lposition_slots(spec.n(), shape_p, shape_q, k);
  QMatrix out_map = lcomplex_differential(spec, shape_p, shape_q, k);
  SubspaceBasis cocycles =
      cur.total == 0 ? SubspaceBasis::zero(0) : kernel(out_map);
  SubspaceBasis boundaries = SubspaceBasis::zero(cur.total);
  if (k > 0) boundaries = image(lcomplex_differential(spec, shape_p, shape_q, k - 1));
  CohomologyGroup g;
  g.kind = GroupKind::LPosition;
  g.k = k;
  g.shape_p = shape_p;
  g.shape_q = shape_q;
  g.slots = cur;
  g.classes = quotient(cocycles, boundaries);
  return g;
}

// --- natural maps -----------------------------------------------------------------

NaturalMap natural_map(const Spec& spec, NaturalMapKind which, int p, int q) {
  NaturalMap out;
  out.which = which;
  switch (which) {
    case NaturalMapKind::BCToDolbeault:
      out.source = bott_chern(spec, p, q);
      out.target = dolbeault(spec, p, q);
      break;
    case NaturalMapKind::BCToAntiDolbeault:
      out.source = bott_chern(spec, p, q);
      out.target = anti_dolbeault(spec, p, q);
      break;
    case NaturalMapKind::DolbeaultToAeppli:
      out.source = dolbeault(spec, p, q);
      out.target = aeppli(spec, p, q);
      break;
    case NaturalMapKind::AntiDolbeaultToAeppli:
      out.source = anti_dolbeault(spec, p, q);
      out.target = aeppli(spec, p, q);
      break;
    case NaturalMapKind::BCToDeRham:
      out.source = bott_chern(spec, p, q);
      out.target = de_rham(spec, p + q);
      break;
    case NaturalMapKind::DeRhamToAeppli:
      out.source = de_rham(spec, p + q);
      out.target = aeppli(spec, p, q);
      break;
  }
  out.matrix = QMatrix(out.target.dim(), out.source.dim());
  int col = 0;
  for (const FormSum<GaussianRational>& rep : out.source.representatives()) {
    FormSum<GaussianRational> mapped(spec.n());
    if (which == NaturalMapKind::DeRhamToAeppli) {
      mapped.add(rep.component({p, q}));  // bidegree projection of a d-closed form
    } else {
      mapped = rep;
    }
    auto coords = out.target.reduce(mapped);
    if (!coords)
      throw InternalError("natural map image is not a cocycle of the target complex");
    for (int r = 0; r < out.target.dim(); ++r) out.matrix.at(r, col) = (*coords)[r];
    ++col;
  }
  out.rank = rank(out.matrix);
  return out;
}

// --- explicit instantiations --------------------------------------------------------

template Matrix<GaussianRational> lcomplex_differential(const ManifoldSpec<GaussianRational>&,
                                                        int, int, int);
template Matrix<TruncatedPoly> lcomplex_differential(const ManifoldSpec<TruncatedPoly>&, int,
                                                     int, int);
template ResolutionComplex<GaussianRational> build_lcomplex(
    const ManifoldSpec<GaussianRational>&, int, int);
template ResolutionComplex<TruncatedPoly> build_lcomplex(const ManifoldSpec<TruncatedPoly>&,
                                                         int, int);

}  // namespace bca
