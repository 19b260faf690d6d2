#pragma once

#include <cstdint>
#include <vector>

#include "opgraph/matrix.hpp"
#include "opgraph/subspace.hpp"

namespace opgraph::alg {

// A multiplicatively closed span of square matrices together with its
// structure constants: basis[i] * basis[j] == sum_k c[i][j][k] basis[k].
struct MatrixAlgebra {
  int ambient_dim = 0;  // the algebra lives inside Mat_{ambient_dim}
  Backend backend = Backend::kExact;
  double tol = 0.0;
  std::vector<CMatrix> basis;
  std::vector<std::vector<ScalarVec>> structure_constants;
  bool contains_identity = false;

  int dim() const { return static_cast<int>(basis.size()); }
};

struct BlockInfo {
  int block_dim = 0;
  bool is_full_matrix_algebra = false;
  int matrix_size = 0;
};

struct StructureReport {
  int dimension = 0;
  int center_dim = 0;
  int radical_dim = 0;
  std::vector<BlockInfo> blocks;
  // Set when an exact run had to finish the spectral split in floating
  // point because a minimal polynomial did not factor over Q(i).
  bool used_float_fallback = false;
};

// Smallest multiplicatively closed span containing gens (plus the identity
// when requested), found by re-spanning all pairwise products until the
// dimension stabilizes.
MatrixAlgebra generate_algebra(const std::vector<CMatrix>& gens,
                               bool include_identity, double tol);

// Elements commuting with every basis element, as coordinate vectors over
// the basis and as a subspace of flattened matrices.
std::vector<ScalarVec> center_coordinates(const MatrixAlgebra& a, double tol);
Subspace center(const MatrixAlgebra& a, double tol);

// Kernel of the trace form tr(a*b_i); for a concrete matrix algebra over a
// characteristic-zero field this is exactly the nilpotent radical.
std::vector<ScalarVec> radical_coordinates(const MatrixAlgebra& a, double tol);
Subspace radical(const MatrixAlgebra& a, double tol);

// Multiplicative unit of the algebra (the ambient identity when present,
// otherwise solved for); throws when the algebra has none.
CMatrix algebra_unit(const MatrixAlgebra& a);

CMatrix from_coordinates(const MatrixAlgebra& a, const ScalarVec& coords);

// Central splitting of a semisimple algebra: pairwise orthogonal central
// idempotents summing to the unit, one per simple block, found by spectral
// splitting of a seeded random central element.
struct CentralSplit {
  std::vector<CMatrix> idempotents;
  std::vector<MatrixAlgebra> blocks;
  bool used_float_fallback = false;
};

CentralSplit central_idempotents(const MatrixAlgebra& a, double tol,
                                 uint64_t seed);

// Full structure pass: radical, center, and the block decomposition of
// A/rad (of A itself when semisimple).
StructureReport block_decompose(const MatrixAlgebra& a, double tol,
                                uint64_t seed);

}  // namespace opgraph::alg
