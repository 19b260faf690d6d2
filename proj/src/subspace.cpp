#include "opgraph/subspace.hpp"

#include <algorithm>
#include <stdexcept>

namespace opgraph {

ScalarVec zero_vec(int n, Backend backend) {
  return ScalarVec(static_cast<size_t>(n), Scalar::zero(backend));
}

double vec_max_abs(const ScalarVec& v) {
  double m = 0.0;
  for (const Scalar& s : v) m = std::max(m, s.abs());
  return m;
}

RowSpan::RowSpan(int ambient, Backend backend, double tol, bool track)
    : ambient_(ambient), backend_(backend), tol_(tol), track_(track) {
  if (ambient < 0) throw std::invalid_argument("ambient dimension must be nonnegative");
}

bool RowSpan::entry_is_zero(const Scalar& s, double scale) const {
  if (backend_ == Backend::kExact) return s.is_exactly_zero();
  return s.abs() <= tol_ * scale;
}

RowSpan::Reduction RowSpan::reduce(const ScalarVec& v) const {
  if (v.size() != static_cast<size_t>(ambient_)) {
    throw std::invalid_argument("ambient dimension mismatch");
  }
  for (const Scalar& s : v) {
    if (s.backend() != backend_) {
      throw std::invalid_argument("scalar backend mismatch (exact vs float)");
    }
  }
  Reduction r;
  r.residual = v;
  if (track_) r.combo = zero_vec(inserted_, backend_);
  for (size_t i = 0; i < rows_.size(); ++i) {
    const int p = pivots_[i];
    Scalar alpha = r.residual[p];
    if (alpha.is_exactly_zero()) continue;
    for (int j = 0; j < ambient_; ++j) {
      r.residual[j] -= alpha * rows_[i][j];
    }
    r.residual[p] = Scalar::zero(backend_);
    if (track_) {
      for (size_t j = 0; j < combos_[i].size(); ++j) {
        r.combo[j] += alpha * combos_[i][j];
      }
    }
  }
  const double scale = std::max({1.0, scale_, vec_max_abs(v)});
  r.vanished = true;
  for (const Scalar& s : r.residual) {
    if (!entry_is_zero(s, scale)) {
      r.vanished = false;
      break;
    }
  }
  return r;
}

bool RowSpan::add(const ScalarVec& v) {
  scale_ = std::max(scale_, vec_max_abs(v));
  Reduction r = reduce(v);
  if (r.vanished) {
    ++inserted_;
    return false;
  }

  int pivot = -1;
  if (backend_ == Backend::kExact) {
    for (int j = 0; j < ambient_; ++j) {
      if (!r.residual[j].is_exactly_zero()) {
        pivot = j;
        break;
      }
    }
  } else {
    double best = -1.0;
    for (int j = 0; j < ambient_; ++j) {
      double mag = r.residual[j].abs();
      if (mag > best) {
        best = mag;
        pivot = j;
      }
    }
  }

  Scalar inv = r.residual[pivot].inverse();
  ScalarVec row(r.residual);
  for (Scalar& s : row) s *= inv;
  row[pivot] = Scalar::one(backend_);

  ScalarVec combo;
  if (track_) {
    combo = zero_vec(inserted_ + 1, backend_);
    for (size_t j = 0; j < r.combo.size(); ++j) combo[j] = -(r.combo[j] * inv);
    combo[inserted_] = inv;
  }

  // Keep the basis fully reduced: clear the new pivot column everywhere.
  for (size_t i = 0; i < rows_.size(); ++i) {
    Scalar beta = rows_[i][pivot];
    if (beta.is_exactly_zero()) continue;
    for (int j = 0; j < ambient_; ++j) rows_[i][j] -= beta * row[j];
    rows_[i][pivot] = Scalar::zero(backend_);
    if (track_) {
      combos_[i].resize(inserted_ + 1, Scalar::zero(backend_));
      for (int j = 0; j <= inserted_; ++j) combos_[i][j] -= beta * combo[j];
    }
  }

  auto pos = std::upper_bound(pivots_.begin(), pivots_.end(), pivot);
  size_t idx = static_cast<size_t>(pos - pivots_.begin());
  pivots_.insert(pos, pivot);
  rows_.insert(rows_.begin() + idx, std::move(row));
  if (track_) combos_.insert(combos_.begin() + idx, std::move(combo));
  ++inserted_;
  return true;
}

bool RowSpan::contains(const ScalarVec& v) const { return reduce(v).vanished; }

ScalarVec RowSpan::represent(const ScalarVec& v) const {
  if (!track_) throw std::logic_error("representation tracking is disabled");
  Reduction r = reduce(v);
  if (!r.vanished) throw std::runtime_error("vector outside span");
  r.combo.resize(static_cast<size_t>(inserted_), Scalar::zero(backend_));
  return r.combo;
}

Subspace::Subspace(int ambient, Backend backend, double tol)
    : span_(ambient, backend, tol, false) {}

Subspace Subspace::span(const std::vector<ScalarVec>& vectors, int ambient,
                        Backend backend, double tol) {
  Subspace s(ambient, backend, tol);
  for (const ScalarVec& v : vectors) s.span_.add(v);
  return s;
}

Subspace Subspace::span_matrices(const std::vector<CMatrix>& mats, double tol) {
  if (mats.empty()) {
    throw std::invalid_argument("empty matrix list has no ambient space");
  }
  const int ambient = mats.front().rows() * mats.front().cols();
  Subspace s(ambient, mats.front().backend(), tol);
  for (const CMatrix& m : mats) {
    if (m.rows() != mats.front().rows() || m.cols() != mats.front().cols()) {
      throw std::invalid_argument("matrix dimension mismatch");
    }
    s.span_.add(m.flatten());
  }
  return s;
}

bool Subspace::contains(const Subspace& other) const {
  if (other.ambient() != ambient()) return false;
  for (const ScalarVec& row : other.basis()) {
    if (!contains(row)) return false;
  }
  return true;
}

bool subspace_equal(const Subspace& a, const Subspace& b) {
  if (a.ambient() != b.ambient() || a.backend() != b.backend()) return false;
  if (a.dim() != b.dim()) return false;
  return a.contains(b) && b.contains(a);
}

std::vector<ScalarVec> solve_homogeneous(const std::vector<ScalarVec>& rows,
                                         int unknowns, Backend backend,
                                         double tol) {
  RowSpan rs(unknowns, backend, tol, false);
  for (const ScalarVec& r : rows) rs.add(r);

  std::vector<bool> is_pivot(static_cast<size_t>(unknowns), false);
  for (int p : rs.pivot_columns()) is_pivot[static_cast<size_t>(p)] = true;

  std::vector<ScalarVec> kernel;
  for (int f = 0; f < unknowns; ++f) {
    if (is_pivot[static_cast<size_t>(f)]) continue;
    ScalarVec x = zero_vec(unknowns, backend);
    x[f] = Scalar::one(backend);
    for (size_t i = 0; i < rs.rows().size(); ++i) {
      x[rs.pivot_columns()[i]] = -rs.rows()[i][f];
    }
    kernel.push_back(std::move(x));
  }
  return kernel;
}

}  // namespace opgraph
