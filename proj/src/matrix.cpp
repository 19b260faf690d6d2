#include "opgraph/matrix.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace opgraph {

namespace {

void require_same_shape(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("matrix dimension mismatch");
  }
  if (a.backend() != b.backend()) {
    throw std::invalid_argument("matrix backend mismatch (exact vs float)");
  }
}

}  // namespace

CMatrix::CMatrix(int rows, int cols, Backend backend)
    : rows_(rows), cols_(cols), backend_(backend) {
  if (rows < 0 || cols < 0) {
    throw std::invalid_argument("matrix dimensions must be nonnegative");
  }
  data_.assign(static_cast<size_t>(rows) * cols, Scalar::zero(backend));
}

CMatrix CMatrix::zeros(int rows, int cols, Backend backend) {
  return CMatrix(rows, cols, backend);
}

CMatrix CMatrix::identity(int n, Backend backend) {
  CMatrix m(n, n, backend);
  for (int i = 0; i < n; ++i) m.at(i, i) = Scalar::one(backend);
  return m;
}

CMatrix CMatrix::operator+(const CMatrix& other) const {
  require_same_shape(*this, other);
  CMatrix out(rows_, cols_, backend_);
  for (size_t k = 0; k < data_.size(); ++k) out.data_[k] = data_[k] + other.data_[k];
  return out;
}

CMatrix CMatrix::operator-(const CMatrix& other) const {
  require_same_shape(*this, other);
  CMatrix out(rows_, cols_, backend_);
  for (size_t k = 0; k < data_.size(); ++k) out.data_[k] = data_[k] - other.data_[k];
  return out;
}

CMatrix CMatrix::operator-() const {
  CMatrix out(rows_, cols_, backend_);
  for (size_t k = 0; k < data_.size(); ++k) out.data_[k] = -data_[k];
  return out;
}

CMatrix CMatrix::operator*(const CMatrix& other) const {
  if (cols_ != other.rows_) {
    throw std::invalid_argument("matrix dimension mismatch");
  }
  if (backend_ != other.backend_) {
    throw std::invalid_argument("matrix backend mismatch (exact vs float)");
  }
  CMatrix out(rows_, other.cols_, backend_);
  for (int i = 0; i < rows_; ++i) {
    for (int k = 0; k < cols_; ++k) {
      const Scalar& aik = at(i, k);
      if (aik.is_exactly_zero()) continue;
      for (int j = 0; j < other.cols_; ++j) {
        out.at(i, j) += aik * other.at(k, j);
      }
    }
  }
  return out;
}

bool CMatrix::operator==(const CMatrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_ ||
      backend_ != other.backend_) {
    return false;
  }
  for (size_t k = 0; k < data_.size(); ++k) {
    if (!(data_[k] == other.data_[k])) return false;
  }
  return true;
}

CMatrix CMatrix::scaled(const Scalar& c) const {
  CMatrix out(rows_, cols_, backend_);
  for (size_t k = 0; k < data_.size(); ++k) out.data_[k] = data_[k] * c;
  return out;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(cols_, rows_, backend_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) out.at(j, i) = at(i, j).conj();
  }
  return out;
}

CMatrix CMatrix::transpose() const {
  CMatrix out(cols_, rows_, backend_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
  }
  return out;
}

Scalar CMatrix::trace() const {
  if (!is_square()) throw std::invalid_argument("trace requires a square matrix");
  Scalar t = Scalar::zero(backend_);
  for (int i = 0; i < rows_; ++i) t += at(i, i);
  return t;
}

CMatrix CMatrix::pow(long k) const {
  if (!is_square()) throw std::invalid_argument("pow requires a square matrix");
  if (k < 0) return inverse().pow(-k);
  CMatrix result = identity(rows_, backend_);
  CMatrix base = *this;
  while (k > 0) {
    if (k & 1) result = result * base;
    base = base * base;
    k >>= 1;
  }
  return result;
}

CMatrix CMatrix::inverse() const {
  if (!is_square()) throw std::invalid_argument("inverse requires a square matrix");
  const int n = rows_;
  CMatrix a = *this;
  CMatrix inv = identity(n, backend_);
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    if (backend_ == Backend::kExact) {
      for (int r = col; r < n; ++r) {
        if (!a.at(r, col).is_exactly_zero()) {
          pivot = r;
          break;
        }
      }
    } else {
      double best = 0.0;
      for (int r = col; r < n; ++r) {
        double mag = a.at(r, col).abs();
        if (mag > best) {
          best = mag;
          pivot = r;
        }
      }
      if (best == 0.0) pivot = -1;
    }
    if (pivot < 0) throw std::runtime_error("singular matrix");
    if (pivot != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(a.at(pivot, j), a.at(col, j));
        std::swap(inv.at(pivot, j), inv.at(col, j));
      }
    }
    Scalar d = a.at(col, col).inverse();
    for (int j = 0; j < n; ++j) {
      a.at(col, j) *= d;
      inv.at(col, j) *= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      Scalar f = a.at(r, col);
      if (f.is_exactly_zero()) continue;
      for (int j = 0; j < n; ++j) {
        a.at(r, j) -= f * a.at(col, j);
        inv.at(r, j) -= f * inv.at(col, j);
      }
    }
  }
  return inv;
}

std::vector<Scalar> CMatrix::flatten() const { return data_; }

CMatrix CMatrix::unflatten(const std::vector<Scalar>& v, int rows, int cols,
                           Backend backend) {
  if (v.size() != static_cast<size_t>(rows) * cols) {
    throw std::invalid_argument("matrix dimension mismatch");
  }
  CMatrix out(rows, cols, backend);
  out.data_ = v;
  return out;
}

double CMatrix::max_abs() const {
  double m = 0.0;
  for (const Scalar& s : data_) m = std::max(m, s.abs());
  return m;
}

CMatrix commutator(const CMatrix& a, const CMatrix& b) {
  return a * b - b * a;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  return (a - b).max_abs();
}

bool approx_equal(const CMatrix& a, const CMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols() ||
      a.backend() != b.backend()) {
    return false;
  }
  if (a.backend() == Backend::kExact) return a == b;
  return max_abs_diff(a, b) <= tol;
}

CMatrix to_float_matrix(const CMatrix& m) {
  if (m.backend() == Backend::kFloat) return m;
  CMatrix out(m.rows(), m.cols(), Backend::kFloat);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      out.at(i, j) = Scalar::floating(m.at(i, j).to_complex());
    }
  }
  return out;
}

}  // namespace opgraph
