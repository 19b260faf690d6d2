#pragma once

#include <optional>
#include <string>
#include <vector>

#include "opgraph/matrix.hpp"
#include "opgraph/scalar.hpp"

namespace opgraph {

// Dense univariate polynomial, coefficients indexed by power.
struct Poly {
  Backend backend = Backend::kExact;
  std::vector<Scalar> coeff;  // coeff[k] multiplies t^k

  int degree() const;
  Scalar eval(const Scalar& t) const;
  std::string str(const std::string& var = "t") const;
};

// Monic minimal polynomial of a square matrix, located through the first
// linear dependency among I, m, m^2, ...  Works on both backends; tol feeds
// the float span engine.
Poly minimal_polynomial(const CMatrix& m, double tol);

// Square root in Q(i) when one exists.  The returned root is canonical:
// positive real part, or nonnegative imaginary part when the real part
// vanishes.
std::optional<Scalar> exact_sqrt(const Scalar& s);

struct RootSearch {
  std::vector<Scalar> roots;  // distinct roots in Q(i)
  bool complete = false;      // polynomial splits into linear factors over Q(i)
};

// Distinct Gaussian-rational roots, found by closed forms up to degree two
// and divisor search over Z[i] beyond that.  complete stays false when some
// nonlinear factor has no root in Q(i) or its constant term could not be
// factored.
RootSearch gaussian_rational_roots(const Poly& p);

}  // namespace opgraph
