#pragma once

#include <optional>
#include <vector>

#include "opgraph/matrix.hpp"
#include "opgraph/scalar.hpp"

namespace opgraph {

using ScalarVec = std::vector<Scalar>;

ScalarVec zero_vec(int n, Backend backend);
double vec_max_abs(const ScalarVec& v);

// Incremental reduced row echelon span.  Rows are kept fully reduced with
// unit pivots and strictly increasing pivot columns, so the stored basis is
// canonical for a given span.  With tracking enabled, each stored row also
// carries its expression in terms of the vectors passed to add(), which is
// what represent() uses to write new vectors in the original generators.
class RowSpan {
 public:
  RowSpan(int ambient, Backend backend, double tol, bool track = false);

  // Inserts v into the span; returns true when the dimension grew.
  bool add(const ScalarVec& v);
  bool contains(const ScalarVec& v) const;

  // Coefficients over the add()ed vectors expressing v.  Requires tracking
  // and membership.
  ScalarVec represent(const ScalarVec& v) const;

  int dim() const { return static_cast<int>(rows_.size()); }
  int ambient() const { return ambient_; }
  Backend backend() const { return backend_; }
  const std::vector<ScalarVec>& rows() const { return rows_; }
  const std::vector<int>& pivot_columns() const { return pivots_; }

 private:
  struct Reduction {
    ScalarVec residual;
    ScalarVec combo;  // expression of (v - residual') bookkeeping, see .cpp
    bool vanished;
  };
  Reduction reduce(const ScalarVec& v) const;
  bool entry_is_zero(const Scalar& s, double scale) const;

  int ambient_;
  Backend backend_;
  double tol_;
  bool track_;
  double scale_ = 1.0;
  int inserted_ = 0;
  std::vector<ScalarVec> rows_;
  std::vector<int> pivots_;
  std::vector<ScalarVec> combos_;
};

// Immutable vector subspace of C^ambient, stored by its canonical reduced
// basis.  Matrices enter and leave through row-major flattening.
class Subspace {
 public:
  Subspace(int ambient, Backend backend, double tol);

  static Subspace span(const std::vector<ScalarVec>& vectors, int ambient,
                       Backend backend, double tol);
  static Subspace span_matrices(const std::vector<CMatrix>& mats, double tol);

  int dim() const { return span_.dim(); }
  int ambient() const { return span_.ambient(); }
  Backend backend() const { return span_.backend(); }
  const std::vector<ScalarVec>& basis() const { return span_.rows(); }

  bool contains(const ScalarVec& v) const { return span_.contains(v); }
  bool contains(const CMatrix& m) const { return span_.contains(m.flatten()); }
  bool contains(const Subspace& other) const;

 private:
  RowSpan span_;
};

bool subspace_equal(const Subspace& a, const Subspace& b);

// Basis of the solution space of rows * x = 0 in C^unknowns.
std::vector<ScalarVec> solve_homogeneous(const std::vector<ScalarVec>& rows,
                                         int unknowns, Backend backend,
                                         double tol);

}  // namespace opgraph
