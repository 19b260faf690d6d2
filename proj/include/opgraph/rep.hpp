#pragma once

#include <cstdint>
#include <vector>

#include "opgraph/matrix.hpp"
#include "opgraph/scalar.hpp"
#include "opgraph/subspace.hpp"

namespace opgraph::rep {

// A character of the abelian subgroup generated by g and z: determined by a
// nonzero value at g and a sign at z.
struct Character {
  Scalar chi_g;
  Scalar chi_z;
};

// Two-dimensional representation induced from a character, on the basis
// {v, x.v}.
struct InducedRep {
  CMatrix r_x;
  CMatrix r_y;
  CMatrix r_z;
  CMatrix r_g;
};

// R_g = diag(chi_g, 1/chi_g), R_z = chi_z * I, R_x = swap, R_y = R_x R_g.
// Throws std::invalid_argument when chi_g vanishes or chi_z does not square
// to one.
InducedRep induce(const Character& chi);

// {m : m A == A m for all A} as a subspace of flattened n x n matrices.
Subspace commutant(const std::vector<CMatrix>& mats, double tol);

// Schur criterion: the commutant of {R_x, R_y, R_z} is one-dimensional.
bool is_irreducible(const InducedRep& r, double tol);

// Result of splitting the four-dimensional representation into blocks.
// basis_change holds the block bases as columns, ordered to match
// characters and block_dims; conjugating the generator images by it leaves
// off-block entries of size at most residual, and each two-dimensional
// block matches induce(characters[t]) within the same bound.
struct DecompositionReport {
  std::vector<Character> characters;
  std::vector<int> block_dims;
  CMatrix basis_change;
  double residual = 0.0;
};

// Splits C^4 under the generator images through eigenprojections of a
// random element of their commutant: two 2-dim blocks with paired
// characters (chi, -chi) away from theta = +-1, four 1-dim blocks at
// theta = +-1.  Blocks with chi_z = +1 come first; the leading
// two-dimensional block reports the lexicographically larger of its two
// g-eigenvalues and its partner reports the negated value.
DecompositionReport decompose_phi(const Theta& theta, double tol,
                                  uint64_t seed = 12021);

}  // namespace opgraph::rep
