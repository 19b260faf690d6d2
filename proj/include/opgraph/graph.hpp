#pragma once

#include <string>
#include <vector>

#include "opgraph/matrix.hpp"
#include "opgraph/scalar.hpp"
#include "opgraph/subspace.hpp"

namespace opgraph::graph {

// General element a*I + b*X + c*Y + d*Z of the operator graph, kept in
// coefficient form.  Matrix positions follow the 1..4 ordering used in the
// comments; storage is 0-based.
struct GraphElement {
  Scalar a, b, c, d;
  Theta theta;

  CMatrix materialize() const;
};

CMatrix build_graph_element(const Scalar& a, const Scalar& b, const Scalar& c,
                            const Scalar& d, const Theta& theta);

// The three distinguished generators.  X is the permutation (1 2)(3 4), Z is
// the antidiagonal permutation (1 4)(2 3), and Y carries the theta weights on
// the (1,3),(2,4),(3,1),(4,2) positions.
struct GraphGenerators {
  CMatrix x, y, z;
  Theta theta;
};

GraphGenerators build_generators(const Theta& theta);

struct RelationCheck {
  std::string name;
  double residual = 0.0;
  bool ok = true;
};

struct RelationReport {
  std::vector<RelationCheck> checks;
  double max_residual = 0.0;
  bool ok = true;
};

// Verifies the generator relations: the three squares equal to I, the two
// commutations with Z, and the anticommutator identity
// X*Y + Y*X == (theta + 1/theta) * Z.  At theta == +-1 the extra Klein-case
// identities X*Y == Y*X == Z are checked as well.
RelationReport check_relations(const GraphGenerators& gens, double tol);

// span{I, X, Y, Z} inside the 16-dim ambient space of 4x4 matrices.
Subspace graph_span(const Theta& theta, double tol);

// Closure of the span under adjoints, tested by membership of each adjointed
// basis element.  Equivalent to |theta| == 1.
bool is_operator_system(const Theta& theta, double tol);

}  // namespace opgraph::graph
