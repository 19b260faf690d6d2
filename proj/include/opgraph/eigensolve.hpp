#pragma once

#include <complex>
#include <vector>

#include "opgraph/matrix.hpp"

namespace opgraph {

// Eigenvalues of a general complex matrix on the float backend, computed by
// Householder Hessenberg reduction followed by shifted QR iteration.  Order
// is unspecified.
std::vector<std::complex<double>> float_eigenvalues(const CMatrix& m);

// Full eigendecomposition of a Hermitian float matrix by cyclic complex
// Jacobi rotations.  values are ascending; vectors[k] is the orthonormal
// eigenvector for values[k].
struct HermitianEigen {
  std::vector<double> values;
  std::vector<std::vector<std::complex<double>>> vectors;
};
HermitianEigen hermitian_eigen(const CMatrix& m);

// Collapses a list of approximate eigenvalues into distinct representatives,
// clustering anything within tol of an existing representative.
std::vector<std::complex<double>> cluster_values(
    const std::vector<std::complex<double>>& vals, double tol);

}  // namespace opgraph
