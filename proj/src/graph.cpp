#include "opgraph/graph.hpp"

#include <stdexcept>

namespace opgraph::graph {

CMatrix GraphElement::materialize() const {
  return build_graph_element(a, b, c, d, theta);
}

CMatrix build_graph_element(const Scalar& a, const Scalar& b, const Scalar& c,
                            const Scalar& d, const Theta& theta) {
  const Backend backend = theta.backend();
  for (const Scalar* s : {&a, &b, &c, &d}) {
    if (s->backend() != backend) {
      throw std::invalid_argument("scalar backend mismatch (exact vs float)");
    }
  }
  const Scalar ct = c * theta.value;
  const Scalar ci = c * theta.inverse();
  CMatrix m(4, 4, backend);
  // Positions quoted 1-based.
  for (int i = 0; i < 4; ++i) m.at(i, i) = a;                    // diagonal
  m.at(0, 1) = m.at(1, 0) = m.at(2, 3) = m.at(3, 2) = b;         // (1,2)...
  m.at(0, 2) = ct;                                               // (1,3)
  m.at(1, 3) = ci;                                               // (2,4)
  m.at(2, 0) = ci;                                               // (3,1)
  m.at(3, 1) = ct;                                               // (4,2)
  m.at(0, 3) = m.at(1, 2) = m.at(2, 1) = m.at(3, 0) = d;         // antidiag
  return m;
}

GraphGenerators build_generators(const Theta& theta) {
  const Backend backend = theta.backend();
  const Scalar zero = Scalar::zero(backend);
  const Scalar one = Scalar::one(backend);
  GraphGenerators g{
      build_graph_element(zero, one, zero, zero, theta),
      build_graph_element(zero, zero, one, zero, theta),
      build_graph_element(zero, zero, zero, one, theta),
      theta,
  };
  return g;
}

RelationReport check_relations(const GraphGenerators& gens, double tol) {
  const Backend backend = gens.theta.backend();
  const CMatrix id = CMatrix::identity(4, backend);
  const CMatrix& x = gens.x;
  const CMatrix& y = gens.y;
  const CMatrix& z = gens.z;
  const Scalar lambda = gens.theta.value + gens.theta.inverse();

  RelationReport report;
  auto push = [&](const std::string& name, const CMatrix& lhs,
                  const CMatrix& rhs) {
    RelationCheck c;
    c.name = name;
    c.residual = max_abs_diff(lhs, rhs);
    c.ok = (backend == Backend::kExact) ? (lhs == rhs) : (c.residual <= tol);
    report.max_residual = std::max(report.max_residual, c.residual);
    report.ok = report.ok && c.ok;
    report.checks.push_back(std::move(c));
  };

  push("x^2 = 1", x * x, id);
  push("y^2 = 1", y * y, id);
  push("z^2 = 1", z * z, id);
  push("xz = zx", x * z, z * x);
  push("yz = zy", y * z, z * y);
  push("xy + yx = (theta + 1/theta) z", x * y + y * x, z.scaled(lambda));

  const bool klein = scalar_equals_int(gens.theta.value, 1, 0, tol) ||
                     scalar_equals_int(gens.theta.value, -1, 0, tol);
  if (klein) {
    // At theta = -1 the anticommutator identity gives xy = yx = -z.
    push("xy = yx", x * y, y * x);
    push("xy = theta z", x * y, z.scaled(gens.theta.value));
  }
  return report;
}

Subspace graph_span(const Theta& theta, double tol) {
  GraphGenerators g = build_generators(theta);
  const CMatrix id = CMatrix::identity(4, theta.backend());
  return Subspace::span_matrices({id, g.x, g.y, g.z}, tol);
}

bool is_operator_system(const Theta& theta, double tol) {
  GraphGenerators g = build_generators(theta);
  const CMatrix id = CMatrix::identity(4, theta.backend());
  Subspace span = Subspace::span_matrices({id, g.x, g.y, g.z}, tol);
  for (const CMatrix* m :
       std::initializer_list<const CMatrix*>{&id, &g.x, &g.y, &g.z}) {
    if (!span.contains(m->adjoint())) return false;
  }
  return true;
}

}  // namespace opgraph::graph
