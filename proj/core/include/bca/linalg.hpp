#pragma once

#include <map>
#include <optional>
#include <vector>

#include "bca/errors.hpp"
#include "bca/scalars.hpp"

namespace bca {

// Dense exact matrices. Over Q(i) we do elimination; over the truncated
// parameter ring only multiplication and degree-slicing are needed.
template <class S>
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<S> a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

  S& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  const S& at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

  std::vector<S> apply(const std::vector<S>& x) const {
    if (static_cast<int>(x.size()) != cols) throw InternalError("matrix/vector size mismatch");
    std::vector<S> y(rows, ScalarOps<S>::zero());
    for (int r = 0; r < rows; ++r) {
      S acc = ScalarOps<S>::zero();
      for (int c = 0; c < cols; ++c) acc = acc + at(r, c) * x[c];
      y[r] = acc;
    }
    return y;
  }

  bool is_zero() const {
    for (const S& v : a)
      if (!ScalarOps<S>::is_zero(v)) return false;
    return true;
  }
};

using QMatrix = Matrix<GaussianRational>;
using QVector = std::vector<GaussianRational>;
using PolyMatrix = Matrix<TruncatedPoly>;
using PolyVector = std::vector<TruncatedPoly>;

// Echelonized subspace: vectors in reduced row echelon form with strictly
// increasing pivots.
struct SubspaceBasis {
  int ambient = 0;
  std::vector<QVector> vectors;
  std::vector<int> pivots;
  int dim() const { return static_cast<int>(vectors.size()); }

  static SubspaceBasis zero(int ambient) { return {ambient, {}, {}}; }
  static SubspaceBasis full(int ambient);
  // Echelonizes arbitrary spanning vectors.
  static SubspaceBasis span(int ambient, const std::vector<QVector>& spanning);

  // v minus its projection onto the subspace along pivot coordinates.
  QVector reduce(QVector v) const;
  bool contains(const QVector& v) const;
};

int rank(QMatrix m);
SubspaceBasis kernel(const QMatrix& m);
SubspaceBasis image(const QMatrix& m);  // column space
std::optional<QVector> solve(QMatrix m, QVector b);

// Quotient numerator/denominator with membership reducer. The reducer maps a
// vector to its coordinates in the chosen quotient basis; vectors outside the
// numerator reduce to nullopt.
class QuotientReport {
public:
  int ambient() const { return ambient_; }
  int dim() const { return static_cast<int>(lifts_.size()); }
  const std::vector<QVector>& representatives() const { return lifts_; }

  std::optional<QVector> reduce(const QVector& v) const;
  bool in_denominator(const QVector& v) const { return denominator_.contains(v); }

  friend QuotientReport quotient(const SubspaceBasis&, const SubspaceBasis&);

private:
  int ambient_ = 0;
  SubspaceBasis denominator_;
  std::vector<QVector> canonical_;  // mutually reduced; canonical_[k] = reduce(lifts_[k]) mod D
  std::vector<int> canonical_pivots_;
  std::vector<QVector> lifts_;
};

// Throws InternalError("NotContained...") when the denominator escapes the
// numerator; that always signals a differential-convention bug upstream.
QuotientReport quotient(const SubspaceBasis& numerator, const SubspaceBasis& denominator);

// Order-by-order solve of M x = b over a truncated parameter ring. Only the
// constant part of M absorbs residuals; higher-order parts of M feed back
// through the residual. Failure is a value: the first obstructed order with
// its homogeneous residue.
struct GradedSolveResult {
  bool solved = false;
  int achieved_order = -1;
  PolyVector solution;
  int obstructed_order = -1;
  std::map<Exponents, QVector> residue;  // degree = obstructed_order
};

GradedSolveResult graded_solve(const PolyMatrix& m, const PolyVector& b, int order);

}  // namespace bca
