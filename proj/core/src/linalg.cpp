#include "bca/linalg.hpp"

#include <algorithm>

namespace bca {

namespace {

// Gauss-Jordan over Q(i). Exact; pivots chosen by smallest coefficient height
// to keep intermediate fractions small. Returns pivot columns.
std::vector<int> rref(QMatrix& m) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols && row < m.rows; ++col) {
    int best = -1;
    unsigned best_height = 0;
    for (int r = row; r < m.rows; ++r) {
      if (m.at(r, col).is_zero()) continue;
      unsigned h = m.at(r, col).height();
      if (best < 0 || h < best_height) {
        best = r;
        best_height = h;
      }
    }
    if (best < 0) continue;
    if (best != row)
      for (int c = 0; c < m.cols; ++c) std::swap(m.at(row, c), m.at(best, c));
    GaussianRational inv = m.at(row, col).inverse();
    for (int c = col; c < m.cols; ++c) m.at(row, c) *= inv;
    for (int r = 0; r < m.rows; ++r) {
      if (r == row || m.at(r, col).is_zero()) continue;
      GaussianRational factor = m.at(r, col);
      for (int c = col; c < m.cols; ++c) m.at(r, c) -= factor * m.at(row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

SubspaceBasis SubspaceBasis::full(int ambient) {
  SubspaceBasis out{ambient, {}, {}};
  for (int k = 0; k < ambient; ++k) {
    QVector e(ambient);
    e[k] = GaussianRational(1);
    out.vectors.push_back(std::move(e));
    out.pivots.push_back(k);
  }
  return out;
}

SubspaceBasis SubspaceBasis::span(int ambient, const std::vector<QVector>& spanning) {
  QMatrix m(static_cast<int>(spanning.size()), ambient);
  for (size_t r = 0; r < spanning.size(); ++r) {
    if (static_cast<int>(spanning[r].size()) != ambient)
      throw InternalError("spanning vector has wrong ambient dimension");
    for (int c = 0; c < ambient; ++c) m.at(static_cast<int>(r), c) = spanning[r][c];
  }
  std::vector<int> pivots = rref(m);
  SubspaceBasis out{ambient, {}, pivots};
  for (size_t r = 0; r < pivots.size(); ++r) {
    QVector v(ambient);
    for (int c = 0; c < ambient; ++c) v[c] = m.at(static_cast<int>(r), c);
    out.vectors.push_back(std::move(v));
  }
  return out;
}

QVector SubspaceBasis::reduce(QVector v) const {
  if (static_cast<int>(v.size()) != ambient)
    throw InternalError("reduce: ambient dimension mismatch");
  for (size_t k = 0; k < vectors.size(); ++k) {
    GaussianRational c = v[pivots[k]];
    if (c.is_zero()) continue;
    for (int j = 0; j < ambient; ++j) v[j] -= c * vectors[k][j];
  }
  return v;
}

bool SubspaceBasis::contains(const QVector& v) const {
  QVector r = reduce(v);
  return std::all_of(r.begin(), r.end(), [](const GaussianRational& x) { return x.is_zero(); });
}

int rank(QMatrix m) { return static_cast<int>(rref(m).size()); }

SubspaceBasis kernel(const QMatrix& m) {
  QMatrix w = m;
  std::vector<int> pivots = rref(w);
  std::vector<bool> is_pivot(m.cols, false);
  for (int p : pivots) is_pivot[p] = true;
  std::vector<QVector> generators;
  for (int c = 0; c < m.cols; ++c) {
    if (is_pivot[c]) continue;
    QVector v(m.cols);
    v[c] = GaussianRational(1);
    for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -w.at(static_cast<int>(r), c);
    generators.push_back(std::move(v));
  }
  return SubspaceBasis::span(m.cols, generators);
}

SubspaceBasis image(const QMatrix& m) {
  std::vector<QVector> columns;
  for (int c = 0; c < m.cols; ++c) {
    QVector v(m.rows);
    for (int r = 0; r < m.rows; ++r) v[r] = m.at(r, c);
    columns.push_back(std::move(v));
  }
  return SubspaceBasis::span(m.rows, columns);
}

std::optional<QVector> solve(QMatrix m, QVector b) {
  if (static_cast<int>(b.size()) != m.rows) throw InternalError("solve: size mismatch");
  QMatrix aug(m.rows, m.cols + 1);
  for (int r = 0; r < m.rows; ++r) {
    for (int c = 0; c < m.cols; ++c) aug.at(r, c) = m.at(r, c);
    aug.at(r, m.cols) = b[r];
  }
  std::vector<int> pivots = rref(aug);
  if (!pivots.empty() && pivots.back() == m.cols) return std::nullopt;  // inconsistent
  QVector x(m.cols, GaussianRational(0));
  for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug.at(static_cast<int>(r), m.cols);
  return x;
}

QuotientReport quotient(const SubspaceBasis& numerator, const SubspaceBasis& denominator) {
  if (numerator.ambient != denominator.ambient)
    throw InternalError("quotient: ambient dimension mismatch");
  for (const QVector& d : denominator.vectors)
    if (!numerator.contains(d))
      throw InternalError("NotContained: quotient denominator escapes the numerator");

  QuotientReport out;
  out.ambient_ = numerator.ambient;
  out.denominator_ = denominator;

  // Gauss-Jordan over numerator vectors reduced mod the denominator, carrying
  // the lifts along so reduce(lift_k) is exactly the k-th unit vector.
  for (const QVector& nv : numerator.vectors) {
    QVector r = denominator.reduce(nv);
    QVector lift = nv;
    for (size_t k = 0; k < out.canonical_.size(); ++k) {
      GaussianRational c = r[out.canonical_pivots_[k]];
      if (c.is_zero()) continue;
      for (int j = 0; j < out.ambient_; ++j) {
        r[j] -= c * out.canonical_[k][j];
        lift[j] -= c * out.lifts_[k][j];
      }
    }
    int pivot = -1;
    for (int j = 0; j < out.ambient_; ++j) {
      if (!r[j].is_zero()) {
        pivot = j;
        break;
      }
    }
    if (pivot < 0) continue;
    GaussianRational inv = r[pivot].inverse();
    for (int j = 0; j < out.ambient_; ++j) {
      r[j] *= inv;
      lift[j] *= inv;
    }
    // Back-substitute into earlier canonical vectors.
    for (size_t k = 0; k < out.canonical_.size(); ++k) {
      GaussianRational c = out.canonical_[k][pivot];
      if (c.is_zero()) continue;
      for (int j = 0; j < out.ambient_; ++j) {
        out.canonical_[k][j] -= c * r[j];
        out.lifts_[k][j] -= c * lift[j];
      }
    }
    out.canonical_.push_back(std::move(r));
    out.canonical_pivots_.push_back(pivot);
    out.lifts_.push_back(std::move(lift));
  }

  if (out.dim() != numerator.dim() - denominator.dim())
    throw InternalError("quotient dimension bookkeeping failed");
  return out;
}

std::optional<QVector> QuotientReport::reduce(const QVector& v) const {
  QVector r = denominator_.reduce(v);
  QVector coords(dim(), GaussianRational(0));
  for (size_t k = 0; k < canonical_.size(); ++k) {
    GaussianRational c = r[canonical_pivots_[k]];
    if (c.is_zero()) continue;
    coords[k] = c;
    for (int j = 0; j < ambient_; ++j) r[j] -= c * canonical_[k][j];
  }
  for (const GaussianRational& x : r)
    if (!x.is_zero()) return std::nullopt;  // not in the numerator span
  return coords;
}

GradedSolveResult graded_solve(const PolyMatrix& m, const PolyVector& b, int order) {
  if (static_cast<int>(b.size()) != m.rows) throw InternalError("graded_solve: size mismatch");
  if (order < 0) throw InputError("graded_solve: negative order");

  RingPtr ring;
  for (const TruncatedPoly& p : m.a)
    if (p.ring()) ring = p.ring();
  for (const TruncatedPoly& p : b)
    if (p.ring()) ring = p.ring();
  const size_t arity = ring ? static_cast<size_t>(ring->generator_count()) : 0;
  auto padded = [&](const Exponents& e) {
    Exponents out(arity, 0);
    std::copy(e.begin(), e.end(), out.begin());
    return out;
  };

  QMatrix m0(m.rows, m.cols);
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c) m0.at(r, c) = m.at(r, c).constant_term();

  GradedSolveResult out;
  out.solution.assign(m.cols, TruncatedPoly());

  for (int k = 0; k <= order; ++k) {
    // Residual of the current partial solution, sliced at degree k.
    PolyVector mx = m.apply(out.solution);
    std::map<Exponents, QVector> slice;
    auto accumulate = [&](const TruncatedPoly& p, int row, int sign) {
      for (const auto& [e, c] : p.degree_part(k)) {
        auto [it, fresh] = slice.try_emplace(padded(e), QVector(m.rows, GaussianRational(0)));
        it->second[row] += sign > 0 ? c : -c;
      }
    };
    for (int r = 0; r < m.rows; ++r) {
      accumulate(b[r], r, +1);
      accumulate(mx[r], r, -1);
    }
    bool obstructed = false;
    for (const auto& [e, rhs] : slice) {
      bool nonzero = false;
      for (const auto& c : rhs) nonzero = nonzero || !c.is_zero();
      if (!nonzero) continue;
      auto x = solve(m0, rhs);
      if (!x) {
        obstructed = true;
        continue;
      }
      for (int c = 0; c < m.cols; ++c) {
        if ((*x)[c].is_zero()) continue;
        out.solution[c] += ring ? TruncatedPoly::term(ring, e, (*x)[c])
                                : TruncatedPoly((*x)[c]);
      }
    }
    if (obstructed) {
      out.obstructed_order = k;
      out.achieved_order = k - 1;
      out.residue = std::move(slice);
      return out;
    }
  }
  out.solved = true;
  out.achieved_order = order;
  return out;
}

}  // namespace bca
