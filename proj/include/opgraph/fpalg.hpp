#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "opgraph/matrix.hpp"
#include "opgraph/scalar.hpp"
#include "opgraph/subspace.hpp"

namespace opgraph::fp {

// lambda = theta + 1/theta decides the shape of the deformation algebra:
// generic (lambda != 0, +-2), klein (theta = +-1) where the algebra picks up
// a nilpotent ideal downstream, clifford (theta = +-i) where z survives as
// an independent basis symbol.
enum class Regime { kGeneric, kKlein, kClifford };

const char* regime_name(Regime r);

// Presentation with relations x^2 = y^2 = z^2 = 1, xz = zx, yz = zy,
// xy + yx = lambda*z, realized on the normal-form basis
//   {1, g, g^2, g^3, x, xg, xg^2, xg^3}   (g = xy, theta != +-i)
//   {1, g, x, z, xg, xz, gz, xgz}         (theta = +-i).
// For theta != +-i every element is P(g) + x*Q(g) with deg P,Q <= 3, where
// g^4 = (lambda^2-2) g^2 - 1 and conjugation by x inverts g; sigma caches
// the powers of g^{-1} in the g-power basis.
struct FPPresentation {
  Theta theta;
  Scalar lambda;
  Regime regime;
  std::array<std::array<Scalar, 4>, 4> sigma;

  Backend backend() const { return theta.backend(); }
};

FPPresentation make_presentation(const Theta& theta, double tol);

const std::array<std::string, 8>& basis_names(Regime r);

// Element in normal form: a fixed-length coefficient vector over the active
// basis.  The regime tag guards against mixing bases.
struct FPElement {
  Regime regime = Regime::kGeneric;
  ScalarVec coeffs;  // length 8
};

FPElement fp_zero(const FPPresentation& pres);
FPElement fp_one(const FPPresentation& pres);
// sym is one of 'x', 'y', 'z', 'g'.
FPElement fp_generator(const FPPresentation& pres, char sym);

FPElement fp_add(const FPElement& u, const FPElement& v);
FPElement fp_scale(const FPElement& u, const Scalar& c);
FPElement fp_multiply(const FPElement& u, const FPElement& v,
                      const FPPresentation& pres);

// Rewrites a word over {x, y, z, g} (whitespace ignored) into normal form by
// left-to-right multiplication of generator images; multiplicative by
// construction.
FPElement fp_normal_form(const std::string& word, const FPPresentation& pres);

bool fp_is_zero(const FPElement& u, double tol);
std::string fp_str(const FPElement& u);

// The morphism onto the concrete algebra: x -> X, y -> Y, z -> Z, g -> XY.
CMatrix psi(const FPElement& u, const FPPresentation& pres);

// Kernel of psi as a subspace of the 8-dim coefficient space: zero for
// theta != +-1, the four-dimensional ideal J for theta = +-1.
Subspace kernel_of_psi(const FPPresentation& pres, double tol);

// Coefficient vectors of the ideal generators g^2-1, x(g^2-1), g(g^2-1),
// xg(g^2-1) (meaningful in the klein regime).
std::vector<FPElement> ideal_basis(const FPPresentation& pres);

struct TheoremCheck {
  std::string name;
  bool ok = false;
  double residual = 0.0;
};

struct Theorem2Report {
  Regime regime = Regime::kGeneric;
  std::vector<TheoremCheck> checks;
  bool ok = true;
};

// theta = +-1: nilpotency of (g^2-1), J^2 == 0, psi(J) == 0, and the induced
// isomorphism onto the four-dimensional concrete algebra.  Otherwise: psi is
// a bijection from the 8-dim algebra onto the concrete one.
Theorem2Report verify_theorem2(const Theta& theta, double tol);

// ---- the group G and its algebra -----------------------------------------

// Normal form g^a z^c x^b with a over the integers and c, b bits; the
// eight-element support {1, g, g^2, g^3} * {1, x} is what the finite
// quotients use in practice.
struct GroupElement {
  long g_pow = 0;
  bool z_bit = false;
  bool x_bit = false;

  auto operator<=>(const GroupElement&) const = default;
};

GroupElement group_mul(const GroupElement& u, const GroupElement& v);
GroupElement group_inverse(const GroupElement& u);

struct GroupAlgebraElement {
  std::map<GroupElement, Scalar> coeff;
};

GroupAlgebraElement ga_add(const GroupAlgebraElement& u,
                           const GroupAlgebraElement& v);
GroupAlgebraElement ga_mul(const GroupAlgebraElement& u,
                           const GroupAlgebraElement& v);

// The representation phi: x -> X, y -> Y, z -> Z, hence
// g^a z^c x^b -> (XY)^a Z^c X^b, extended linearly to the group algebra.
CMatrix phi(const GroupElement& e, const Theta& theta);
CMatrix phi(const GroupAlgebraElement& u, const Theta& theta);

}  // namespace opgraph::fp
