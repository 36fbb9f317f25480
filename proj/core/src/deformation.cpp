#include "bca/deformation.hpp"

#include <algorithm>

namespace bca {

namespace {

// Coefficient of phi^i ^ phibar^mu in the (1,1)-part of dphi^j.
GaussianRational mixed_structure_constant(const Spec& spec, int j, int i, int mu) {
  BasisMonomial m;
  m.hol = std::uint32_t(1) << (i - 1);
  m.anti = std::uint32_t(1) << (mu - 1);
  return spec.dphi(j).component({1, 1}).coefficient(m);
}

template <class S>
FormSum<S> to_mode(const FormSum<GaussianRational>& f, const RingPtr& ring);

template <>
FormSum<GaussianRational> to_mode(const FormSum<GaussianRational>& f, const RingPtr&) {
  return f;
}

template <>
FormSum<TruncatedPoly> to_mode(const FormSum<GaussianRational>& f, const RingPtr& ring) {
  return promote(f, ring);
}

std::vector<std::pair<Exponents, QVector>> split_by_monomial(const QVector& v) {
  return {{Exponents{}, v}};
}

std::vector<std::pair<Exponents, QVector>> split_by_monomial(const PolyVector& v) {
  std::map<Exponents, QVector> acc;
  size_t arity = 0;
  for (const TruncatedPoly& p : v)
    if (p.ring()) arity = static_cast<size_t>(p.ring()->generator_count());
  for (size_t j = 0; j < v.size(); ++j) {
    for (const auto& [e, c] : v[j].terms()) {
      Exponents key(arity, 0);
      std::copy(e.begin(), e.end(), key.begin());
      auto [it, fresh] = acc.try_emplace(key, QVector(v.size(), GaussianRational(0)));
      it->second[j] = c;
    }
  }
  return {acc.begin(), acc.end()};
}

}  // namespace

template <class S>
void validate_kodaira_spencer(const Spec& central, const KodairaSpencer<S>& ks) {
  const int n = central.n();
  if (ks.n != n || static_cast<int>(ks.t.size()) != n * n)
    throw InputError("Kodaira-Spencer matrix has the wrong shape");
  // dbar-closedness of sum t_{il} theta_i (x) phibar^l over the central
  // structure equations. The frame part contributes through the mixed
  // structure constants of dphi.
  for (int j = 1; j <= n; ++j) {
    BigradedForm<S> residual(n, {0, 2});
    for (int lambda = 1; lambda <= n; ++lambda) {
      const S& t = ks.entry(j, lambda);
      if (ScalarOps<S>::is_zero(t)) continue;
      FormSum<GaussianRational> dbar_phibar(n);
      dbar_phibar.add(central.dphi_bar(lambda).component({0, 2}));
      for (const auto& [deg, part] : to_mode<S>(dbar_phibar, ks.ring).parts())
        residual += t * part;
    }
    for (int i = 1; i <= n; ++i) {
      for (int lambda = 1; lambda <= n; ++lambda) {
        const S& t = ks.entry(i, lambda);
        if (ScalarOps<S>::is_zero(t)) continue;
        for (int mu = 1; mu <= n; ++mu) {
          GaussianRational c = mixed_structure_constant(central, j, i, mu);
          if (c.is_zero()) continue;
          auto w = wedge(BigradedForm<GaussianRational>::coframe(n, lambda, true),
                         BigradedForm<GaussianRational>::coframe(n, mu, true));
          for (const auto& [m, wc] : w.terms()) {
            S coeff = t * ScalarOps<S>::from_rational(-(c * wc));
            residual.add_term(m, coeff);
          }
        }
      }
    }
    if (!residual.is_zero())
      throw InputError("Kodaira-Spencer direction is not dbar-closed (row " + std::to_string(j) +
                       " residual " + to_literal(residual) + ")");
  }
}

template <class S>
BigradedForm<S> contract(const KodairaSpencer<S>& ks, const BigradedForm<S>& f) {
  const int n = f.dimension();
  Bidegree deg = f.bidegree();
  BigradedForm<S> out(n, {deg.p - 1, deg.q + 1});
  if (deg.p - 1 < 0 || deg.q + 1 > n) return BigradedForm<S>(n, {std::max(deg.p - 1, 0), deg.q});
  for (int i = 1; i <= n; ++i) {
    for (int lambda = 1; lambda <= n; ++lambda) {
      const S& t = ks.entry(i, lambda);
      if (ScalarOps<S>::is_zero(t)) continue;
      BigradedForm<S> inner = interior(FrameVector{i, true}, f);
      if (inner.is_zero()) continue;
      BigradedForm<S> w = wedge(BigradedForm<S>::coframe(n, lambda, true), inner);
      out += t * w;
    }
  }
  return out;
}

template <class S>
BigradedForm<S> conj_contract(const KodairaSpencer<S>& ks, const BigradedForm<S>& f) {
  const int n = f.dimension();
  Bidegree deg = f.bidegree();
  BigradedForm<S> out(n, {deg.p + 1, deg.q - 1});
  if (deg.q - 1 < 0 || deg.p + 1 > n) return BigradedForm<S>(n, {deg.p, std::max(deg.q - 1, 0)});
  for (int i = 1; i <= n; ++i) {
    for (int lambda = 1; lambda <= n; ++lambda) {
      const S& t = ks.entry(i, lambda);
      if (ScalarOps<S>::is_zero(t)) continue;
      BigradedForm<S> inner = interior(FrameVector{i, false}, f);
      if (inner.is_zero()) continue;
      BigradedForm<S> w = wedge(BigradedForm<S>::coframe(n, lambda, false), inner);
      out += ScalarOps<S>::conjugate(t) * w;
    }
  }
  return out;
}

template <class S>
FormSum<S> contract(const KodairaSpencer<S>& ks, const FormSum<S>& f) {
  FormSum<S> out(f.dimension());
  for (const auto& [deg, part] : f.parts()) out.add(contract(ks, part));
  return out;
}

template <class S>
FormSum<S> conj_contract(const KodairaSpencer<S>& ks, const FormSum<S>& f) {
  FormSum<S> out(f.dimension());
  for (const auto& [deg, part] : f.parts()) out.add(conj_contract(ks, part));
  return out;
}

std::string SourceRef::describe() const {
  switch (kind) {
    case SourceKind::BottChern:
      return "bc(" + std::to_string(p) + "," + std::to_string(q) + ")";
    case SourceKind::Aeppli:
      return "aeppli(" + std::to_string(p) + "," + std::to_string(q) + ")";
    case SourceKind::BClass:
      return "bclass(" + std::to_string(p) + "," + std::to_string(q) + ";" +
             std::to_string(level) + ")";
  }
  return "?";
}

CohomologyGroup source_group(const Spec& spec, const SourceRef& ref) {
  switch (ref.kind) {
    case SourceKind::BottChern: return bott_chern(spec, ref.p, ref.q);
    case SourceKind::Aeppli: return aeppli(spec, ref.p, ref.q);
    case SourceKind::BClass:
      if (ref.level < 1) throw InputError("hypercohomology level must be >= 1");
      if (ref.p < 1 || ref.q < 1)
        throw InputError("hypercohomology source shape requires p, q >= 1");
      return l_group(spec, ref.p, ref.q, ref.level - 1);
  }
  throw InputError("unknown source kind");
}

CohomologyGroup obstruction_target(const Spec& spec, const SourceRef& ref) {
  return l_group(spec, ref.shape_p(), ref.shape_q(), ref.position() + 1);
}

namespace {

// The lower-window Dolbeault-slot components feeding the obstruction formula.
// High positions carry the window forms themselves; low positions carry
// potentials whose partial/dbar recover them.
FormSum<GaussianRational> u_extract(const Spec& central, const SourceRef& ref,
                                    const FormSum<GaussianRational>& theta) {
  const int P = ref.shape_p(), Q = ref.shape_q(), k = ref.position();
  FormSum<GaussianRational> out(central.n());
  if (k >= P + Q - 1) {
    if (k + 1 - P >= 0 && k + 1 - P <= central.n() && P <= central.n())
      out.add(theta.component({P, k + 1 - P}));
  } else if (P >= 1 && k - P + 1 >= 0 && k - P + 1 <= central.n()) {
    out.add(partial(central, theta.component({P - 1, k - P + 1})));
  }
  return out;
}

FormSum<GaussianRational> v_extract(const Spec& central, const SourceRef& ref,
                                    const FormSum<GaussianRational>& theta) {
  const int P = ref.shape_p(), Q = ref.shape_q(), k = ref.position();
  FormSum<GaussianRational> out(central.n());
  if (k >= P + Q - 1) {
    if (k + 1 - Q >= 0 && k + 1 - Q <= central.n() && Q <= central.n())
      out.add(theta.component({k + 1 - Q, Q}));
  } else if (Q >= 1 && k - Q + 1 >= 0 && k - Q + 1 <= central.n()) {
    out.add(dbar(central, theta.component({k - Q + 1, Q - 1})));
  }
  return out;
}

}  // namespace

template <class S>
ObstructionClass<S> obstruction_first_order(const Spec& central, const KodairaSpencer<S>& ks,
                                            const SourceRef& ref,
                                            const FormSum<GaussianRational>& theta) {
  validate_kodaira_spencer(central, ks);
  CohomologyGroup src = source_group(central, ref);
  if (!src.reduce(theta))
    throw InputError("RepresentativeInvalid: class is not a cocycle of " + ref.describe());

  const int P = ref.shape_p(), Q = ref.shape_q(), k = ref.position();
  FormSum<S> u_raw = contract(ks, to_mode<S>(u_extract(central, ref, theta), ks.ring));
  FormSum<S> v_raw = conj_contract(ks, to_mode<S>(v_extract(central, ref, theta), ks.ring));

  ObstructionClass<S> out;
  out.source = ref;
  const int target_pos = k + 1;
  if (target_pos >= P + Q - 1) {
    // Embedding into the upper window goes through the edge operators.
    ManifoldSpec<S> ops = [&] {
      if constexpr (std::is_same_v<S, TruncatedPoly>) {
        return promote(central, ks.ring);
      } else {
        return central;
      }
    }();
    FormSum<S> u(central.n()), v(central.n());
    for (const auto& [deg, part] : u_raw.parts()) u.add(partial(ops, part));
    for (const auto& [deg, part] : v_raw.parts()) v.add(dbar(ops, part));
    out.u_branch = std::move(u);
    out.v_branch = std::move(v);
  } else {
    out.u_branch = u_raw;
    out.v_branch = v_raw;
  }
  out.u_branch = FormSum<S>(central.n()) - out.u_branch;
  out.v_branch = FormSum<S>(central.n()) - out.v_branch;

  out.target = std::make_shared<CohomologyGroup>(obstruction_target(central, ref));
  std::vector<S> coords = to_coordinates(out.target->slots, out.total());
  out.vanishing = true;
  auto pieces = split_by_monomial(coords);
  for (auto& [mono, vec] : pieces) {
    auto reduced = out.target->classes.reduce(vec);
    if (!reduced)
      throw InternalError("obstruction branch is not a cocycle of the target complex");
    bool nonzero = false;
    for (const auto& c : *reduced) nonzero = nonzero || !c.is_zero();
    if (nonzero) out.vanishing = false;
    out.coordinates.emplace_back(mono, *reduced);
  }
  return out;
}

ExtensionResult extend_class(const DeformationFamily& family, const SourceRef& ref,
                             const FormSum<GaussianRational>& theta, int order) {
  if (order < 0) throw InputError("extension order must be non-negative");
  if (order > family.ring->truncation_order())
    throw InputError("extension order exceeds the ring truncation order");
  CohomologyGroup src = source_group(family.central, ref);
  if (!src.reduce(theta))
    throw InputError("RepresentativeInvalid: class is not a cocycle of " + ref.describe());

  const int P = ref.shape_p(), Q = ref.shape_q(), k = ref.position();
  GradedSlots slots = lposition_slots(family.central.n(), P, Q, k);
  PolyMatrix dk = lcomplex_differential(family.spec, P, Q, k);
  PolyVector omega0 = to_coordinates(slots, promote(theta, family.ring));
  PolyVector rhs = dk.apply(omega0);
  for (TruncatedPoly& x : rhs) x = -x;

  GradedSolveResult solved = graded_solve(dk, rhs, order);

  ExtensionResult out;
  out.source = ref;
  out.requested_order = order;
  out.slots = slots;
  out.extended = omega0;
  for (size_t j = 0; j < out.extended.size(); ++j) out.extended[j] += solved.solution[j];

  if (solved.solved) {
    out.achieved_order = order;
    return out;
  }
  out.achieved_order = solved.achieved_order;

  ObstructionClass<TruncatedPoly> obs;
  obs.source = ref;
  obs.target = std::make_shared<CohomologyGroup>(obstruction_target(family.central, ref));
  FormSum<TruncatedPoly> residual(family.central.n());
  obs.vanishing = true;
  for (const auto& [mono, vec] : solved.residue) {
    auto reduced = obs.target->classes.reduce(vec);
    if (!reduced)
      throw InternalError("extension residue is not a cocycle of the target complex");
    bool nonzero = false;
    for (const auto& c : *reduced) nonzero = nonzero || !c.is_zero();
    if (nonzero) obs.vanishing = false;
    obs.coordinates.emplace_back(mono, *reduced);
    FormSum<GaussianRational> part = from_coordinates(obs.target->slots, vec);
    FormSum<TruncatedPoly> lifted = promote(part, family.ring);
    TruncatedPoly scale = TruncatedPoly::term(family.ring, mono, GaussianRational(1));
    for (const auto& [deg, piece] : lifted.parts()) residual.add(scale * piece);
  }
  obs.u_branch = std::move(residual);  // combined residual; no branch split here
  obs.v_branch = FormSum<TruncatedPoly>(family.central.n());
  if (obs.vanishing)
    throw InternalError("graded solve failed although the residue class vanishes");
  out.obstruction = std::move(obs);
  return out;
}

JumpReport jump_scan(const DeformationSample& sample, bool bc_grid, bool aeppli_grid,
                     const std::vector<Bidegree>& bidegrees) {
  const int n = sample.central.n();
  std::vector<Bidegree> grid = bidegrees;
  if (grid.empty())
    for (int p = 0; p <= n; ++p)
      for (int q = 0; q <= n; ++q) grid.push_back({p, q});

  JumpReport report;
  auto scan_sources = [&](JumpEntry& entry, const std::vector<SourceRef>& sources) {
    for (const SourceRef& ref : sources) {
      CohomologyGroup group = source_group(sample.central, ref);
      for (const FormSum<GaussianRational>& rep : group.representatives()) {
        auto obs = obstruction_first_order(sample.central, sample.kappa, ref, rep);
        if (!obs.vanishing) {
          entry.flagged = true;
          entry.witness = to_literal(rep);
          entry.witness_source = ref.describe();
          return;
        }
      }
    }
  };

  for (const Bidegree& deg : grid) {
    if (bc_grid) {
      JumpEntry entry;
      entry.grid = GroupKind::BottChern;
      entry.p = deg.p;
      entry.q = deg.q;
      entry.central_dim = bott_chern(sample.central, deg.p, deg.q).dim();
      entry.deformed_dim = bott_chern(sample.deformed, deg.p, deg.q).dim();
      std::vector<SourceRef> sources{SourceRef::bc(deg.p, deg.q)};
      if (deg.p >= 1 && deg.q >= 1) sources.push_back(SourceRef::aeppli(deg.p - 1, deg.q - 1));
      scan_sources(entry, sources);
      report.entries.push_back(std::move(entry));
    }
    if (aeppli_grid) {
      JumpEntry entry;
      entry.grid = GroupKind::Aeppli;
      entry.p = deg.p;
      entry.q = deg.q;
      entry.central_dim = aeppli(sample.central, deg.p, deg.q).dim();
      entry.deformed_dim = aeppli(sample.deformed, deg.p, deg.q).dim();
      std::vector<SourceRef> sources{SourceRef::aeppli(deg.p, deg.q)};
      if (deg.p + deg.q >= 1)
        sources.push_back(SourceRef::bclass(deg.p + 1, deg.q + 1, deg.p + deg.q));
      scan_sources(entry, sources);
      report.entries.push_back(std::move(entry));
    }
  }
  return report;
}

CorollaryReport corollary_condition(const DeformationFamily& family, int p, int q, int order) {
  const Spec& spec = family.central;
  const int n = spec.n();
  CorollaryReport out;
  out.p = p;
  out.q = q;

  out.rank_to_dolbeault = natural_map(spec, NaturalMapKind::BCToDolbeault, p, q).rank;
  out.rank_to_anti_dolbeault = natural_map(spec, NaturalMapKind::BCToAntiDolbeault, p, q).rank;
  out.bc_applicable = out.rank_to_dolbeault == 0 && out.rank_to_anti_dolbeault == 0;
  if (out.bc_applicable) {
    bool all = true;
    for (const auto& rep : bott_chern(spec, p, q).representatives()) {
      ExtensionResult r = extend_class(family, SourceRef::bc(p, q), rep, order);
      all = all && r.achieved_order == order;
    }
    out.bc_all_extend = all;
  }

  out.rank_next_dolbeault =
      p + 1 > n ? 0 : natural_map(spec, NaturalMapKind::BCToDolbeault, p + 1, q).rank;
  out.rank_next_anti_dolbeault =
      q + 1 > n ? 0 : natural_map(spec, NaturalMapKind::BCToAntiDolbeault, p, q + 1).rank;
  out.aeppli_applicable = out.rank_next_dolbeault == 0 && out.rank_next_anti_dolbeault == 0;
  if (out.aeppli_applicable) {
    bool all = true;
    for (const auto& rep : aeppli(spec, p, q).representatives()) {
      ExtensionResult r = extend_class(family, SourceRef::aeppli(p, q), rep, order);
      all = all && r.achieved_order == order;
    }
    out.aeppli_all_extend = all;
  }
  return out;
}

ParallelisableReport parallelisable_jump_check(
    const Spec& spec, const std::optional<std::vector<std::pair<int, int>>>& directions) {
  const int n = spec.n();
  bool some_nonzero = false;
  for (int k = 1; k <= n; ++k) {
    if (!spec.dphi(k).component({1, 1}).is_zero() || !spec.dphi(k).component({0, 2}).is_zero())
      throw InputError("PreconditionNotMet: spec is not complex parallelisable in the model sense");
    some_nonzero = some_nonzero || !spec.dphi(k).is_zero();
  }
  if (!some_nonzero)
    throw InputError("PreconditionNotMet: spec has no nonzero structure equation (Kaehler proxy)");
  if (n < 3) throw InputError("PreconditionNotMet: complex dimension must be at least 3");

  ParallelisableReport report;
  std::vector<std::pair<int, int>> dirs;
  if (directions) {
    dirs = *directions;
  } else {
    // Elementary frame directions that are cocycles: phibar^lambda must be
    // dbar-closed.
    for (int i = 1; i <= n; ++i)
      for (int lambda = 1; lambda <= n; ++lambda)
        if (spec.dphi_bar(lambda).component({0, 2}).is_zero()) dirs.emplace_back(i, lambda);
  }
  report.searched = dirs;

  for (auto [i, lambda] : dirs) {
    KodairaSpencer<GaussianRational> ks = KodairaSpencer<GaussianRational>::zero(n);
    ks.entry(i, lambda) = GaussianRational(1);
    validate_kodaira_spencer(spec, ks);
    for (int j = 1; j <= n; ++j) {
      FormSum<GaussianRational> theta(n);
      theta.add(BigradedForm<GaussianRational>::coframe(n, j));
      auto obs = obstruction_first_order(spec, ks, SourceRef::bclass(2, 2, 2), theta);
      if (!obs.vanishing) {
        report.found = true;
        report.witness = ParallelisableWitness{j, i, lambda, std::move(obs)};
        return report;
      }
    }
  }
  return report;
}

// --- explicit instantiations ---------------------------------------------------

template void validate_kodaira_spencer(const Spec&, const KodairaSpencer<GaussianRational>&);
template void validate_kodaira_spencer(const Spec&, const KodairaSpencer<TruncatedPoly>&);
template BigradedForm<GaussianRational> contract(const KodairaSpencer<GaussianRational>&,
                                                 const BigradedForm<GaussianRational>&);
template BigradedForm<TruncatedPoly> contract(const KodairaSpencer<TruncatedPoly>&,
                                              const BigradedForm<TruncatedPoly>&);
template BigradedForm<GaussianRational> conj_contract(const KodairaSpencer<GaussianRational>&,
                                                      const BigradedForm<GaussianRational>&);
template BigradedForm<TruncatedPoly> conj_contract(const KodairaSpencer<TruncatedPoly>&,
                                                   const BigradedForm<TruncatedPoly>&);
template FormSum<GaussianRational> contract(const KodairaSpencer<GaussianRational>&,
                                            const FormSum<GaussianRational>&);
template FormSum<TruncatedPoly> contract(const KodairaSpencer<TruncatedPoly>&,
                                         const FormSum<TruncatedPoly>&);
template FormSum<GaussianRational> conj_contract(const KodairaSpencer<GaussianRational>&,
                                                 const FormSum<GaussianRational>&);
template FormSum<TruncatedPoly> conj_contract(const KodairaSpencer<TruncatedPoly>&,
                                              const FormSum<TruncatedPoly>&);
template ObstructionClass<GaussianRational> obstruction_first_order(
    const Spec&, const KodairaSpencer<GaussianRational>&, const SourceRef&,
    const FormSum<GaussianRational>&);
template ObstructionClass<TruncatedPoly> obstruction_first_order(
    const Spec&, const KodairaSpencer<TruncatedPoly>&, const SourceRef&,
    const FormSum<GaussianRational>&);

}  // namespace bca
