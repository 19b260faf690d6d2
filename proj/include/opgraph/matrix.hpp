#pragma once

#include <vector>

#include "opgraph/scalar.hpp"

namespace opgraph {

// Dense complex matrix over either scalar backend.  Rectangular shapes are
// allowed; the Kraus-channel layer uses dim_out x dim_in operators.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(int rows, int cols, Backend backend);

  static CMatrix zeros(int rows, int cols, Backend backend);
  static CMatrix identity(int n, Backend backend);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Backend backend() const { return backend_; }
  bool is_square() const { return rows_ == cols_; }

  Scalar& at(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
  const Scalar& at(int i, int j) const {
    return data_[static_cast<size_t>(i) * cols_ + j];
  }

  CMatrix operator+(const CMatrix& other) const;
  CMatrix operator-(const CMatrix& other) const;
  CMatrix operator*(const CMatrix& other) const;
  CMatrix operator-() const;
  bool operator==(const CMatrix& other) const;

  CMatrix scaled(const Scalar& c) const;
  CMatrix adjoint() const;
  CMatrix transpose() const;
  Scalar trace() const;

  // Nonnegative powers by repeated squaring; negative powers go through
  // inverse().  Square matrices only.
  CMatrix pow(long k) const;
  CMatrix inverse() const;

  // Row-major flattening into the ambient vector space C^(rows*cols).
  std::vector<Scalar> flatten() const;
  static CMatrix unflatten(const std::vector<Scalar>& v, int rows, int cols,
                           Backend backend);

  double max_abs() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  Backend backend_ = Backend::kExact;
  std::vector<Scalar> data_;
};

CMatrix commutator(const CMatrix& a, const CMatrix& b);
double max_abs_diff(const CMatrix& a, const CMatrix& b);
bool approx_equal(const CMatrix& a, const CMatrix& b, double tol);

// Entrywise conversion to the float backend (identity on float input).
CMatrix to_float_matrix(const CMatrix& m);

}  // namespace opgraph
