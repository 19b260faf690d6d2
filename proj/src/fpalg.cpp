#include "opgraph/fpalg.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "opgraph/algebra.hpp"
#include "opgraph/graph.hpp"

namespace opgraph::fp {

namespace {

using Poly4 = std::array<Scalar, 4>;

Poly4 zero_poly(Backend b) {
  return {Scalar::zero(b), Scalar::zero(b), Scalar::zero(b), Scalar::zero(b)};
}

// Product in F[g]/(g^4 - (lambda^2-2) g^2 + 1).
Poly4 mulmod(const Poly4& a, const Poly4& b, const Scalar& lambda) {
  const Backend be = lambda.backend();
  std::array<Scalar, 7> conv{Scalar::zero(be), Scalar::zero(be),
                             Scalar::zero(be), Scalar::zero(be),
                             Scalar::zero(be), Scalar::zero(be),
                             Scalar::zero(be)};
  for (int i = 0; i < 4; ++i) {
    if (a[i].is_exactly_zero()) continue;
    for (int j = 0; j < 4; ++j) conv[i + j] += a[i] * b[j];
  }
  const Scalar q = lambda * lambda - Scalar::one(be) - Scalar::one(be);
  for (int k = 6; k >= 4; --k) {
    if (conv[k].is_exactly_zero()) continue;
    conv[k - 2] += q * conv[k];
    conv[k - 4] -= conv[k];
    conv[k] = Scalar::zero(be);
  }
  return {conv[0], conv[1], conv[2], conv[3]};
}

Poly4 apply_sigma(const FPPresentation& pres, const Poly4& p) {
  Poly4 out = zero_poly(pres.backend());
  for (int k = 0; k < 4; ++k) {
    if (p[k].is_exactly_zero()) continue;
    for (int j = 0; j < 4; ++j) out[j] += p[k] * pres.sigma[k][j];
  }
  return out;
}

// Split/join between the coefficient vector and the P + x*Q pair (g-power
// regimes).
void split_gx(const FPElement& u, Poly4& p, Poly4& q) {
  for (int k = 0; k < 4; ++k) {
    p[k] = u.coeffs[k];
    q[k] = u.coeffs[4 + k];
  }
}

// Clifford-regime split: element = A + B*z with A, B in span{1, g, x, xg}.
// Coefficient slots: [0]=1 [1]=g [2]=x [3]=z [4]=xg [5]=xz [6]=gz [7]=xgz.
void split_z(const FPElement& u, Poly4& a, Poly4& b) {
  a = {u.coeffs[0], u.coeffs[1], u.coeffs[2], u.coeffs[4]};
  b = {u.coeffs[3], u.coeffs[6], u.coeffs[5], u.coeffs[7]};
}

// Multiplication table of span{1, g, x, xg} with g^2 = -1, x^2 = 1,
// gx = -xg.
constexpr int kHIdx[4][4] = {
    {0, 1, 2, 3},
    {1, 0, 3, 2},
    {2, 3, 0, 1},
    {3, 2, 1, 0},
};
constexpr int kHSgn[4][4] = {
    {1, 1, 1, 1},
    {1, -1, -1, 1},
    {1, 1, 1, 1},
    {1, -1, -1, 1},
};

Poly4 hmul(const Poly4& a, const Poly4& b, Backend be) {
  Poly4 out = zero_poly(be);
  for (int i = 0; i < 4; ++i) {
    if (a[i].is_exactly_zero()) continue;
    for (int j = 0; j < 4; ++j) {
      Scalar term = a[i] * b[j];
      if (kHSgn[i][j] < 0) term = -term;
      out[kHIdx[i][j]] += term;
    }
  }
  return out;
}

FPElement join_gx(Regime regime, const Poly4& p, const Poly4& q) {
  FPElement out;
  out.regime = regime;
  out.coeffs = {p[0], p[1], p[2], p[3], q[0], q[1], q[2], q[3]};
  return out;
}

FPElement join_z(const Poly4& a, const Poly4& b) {
  FPElement out;
  out.regime = Regime::kClifford;
  out.coeffs = {a[0], a[1], a[2], b[0], a[3], b[2], b[1], b[3]};
  return out;
}

std::vector<CMatrix> basis_images(const FPPresentation& pres) {
  graph::GraphGenerators gen = graph::build_generators(pres.theta);
  const CMatrix id = CMatrix::identity(4, pres.backend());
  const CMatrix g = gen.x * gen.y;
  std::vector<CMatrix> img;
  img.reserve(8);
  if (pres.regime == Regime::kClifford) {
    img = {id,          g,           gen.x,        gen.z,
           gen.x * g,   gen.x * gen.z, g * gen.z,  gen.x * g * gen.z};
  } else {
    const CMatrix g2 = g * g;
    img = {id,        g,         g2,         g2 * g,
           gen.x,     gen.x * g, gen.x * g2, gen.x * g2 * g};
  }
  return img;
}

}  // namespace

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::kGeneric:
      return "generic";
    case Regime::kKlein:
      return "klein";
    case Regime::kClifford:
      return "clifford";
  }
  return "unknown";
}

const std::array<std::string, 8>& basis_names(Regime r) {
  static const std::array<std::string, 8> kGx = {
      "1", "g", "g^2", "g^3", "x", "xg", "xg^2", "xg^3"};
  static const std::array<std::string, 8> kZ = {
      "1", "g", "x", "z", "xg", "xz", "gz", "xgz"};
  return r == Regime::kClifford ? kZ : kGx;
}

FPPresentation make_presentation(const Theta& theta, double tol) {
  FPPresentation pres;
  pres.theta = theta;
  pres.lambda = theta.value + theta.inverse();
  if (scalar_equals_int(pres.lambda, 0, 0, tol)) {
    pres.regime = Regime::kClifford;
  } else if (scalar_equals_int(pres.lambda, 2, 0, tol) ||
             scalar_equals_int(pres.lambda, -2, 0, tol)) {
    pres.regime = Regime::kKlein;
  } else {
    pres.regime = Regime::kGeneric;
  }

  const Backend be = pres.backend();
  for (auto& row : pres.sigma) row = zero_poly(be);
  if (pres.regime != Regime::kClifford) {
    const Scalar q =
        pres.lambda * pres.lambda - Scalar::one(be) - Scalar::one(be);
    Poly4 inv = zero_poly(be);
    inv[1] = q;
    inv[3] = -Scalar::one(be);
    pres.sigma[0] = zero_poly(be);
    pres.sigma[0][0] = Scalar::one(be);
    pres.sigma[1] = inv;
    pres.sigma[2] = mulmod(inv, inv, pres.lambda);
    pres.sigma[3] = mulmod(pres.sigma[2], inv, pres.lambda);
  }
  return pres;
}

FPElement fp_zero(const FPPresentation& pres) {
  FPElement out;
  out.regime = pres.regime;
  out.coeffs = zero_vec(8, pres.backend());
  return out;
}

FPElement fp_one(const FPPresentation& pres) {
  FPElement out = fp_zero(pres);
  out.coeffs[0] = Scalar::one(pres.backend());
  return out;
}

FPElement fp_generator(const FPPresentation& pres, char sym) {
  FPElement out = fp_zero(pres);
  const Backend be = pres.backend();
  const bool clifford = pres.regime == Regime::kClifford;
  switch (sym) {
    case 'g':
      out.coeffs[1] = Scalar::one(be);
      return out;
    case 'x':
      out.coeffs[clifford ? 2 : 4] = Scalar::one(be);
      return out;
    case 'y':
      out.coeffs[clifford ? 4 : 5] = Scalar::one(be);
      return out;
    case 'z':
      if (clifford) {
        out.coeffs[3] = Scalar::one(be);
      } else {
        // z = (g + g^{-1}) / lambda = ((lambda^2-1) g - g^3) / lambda.
        const Scalar linv = pres.lambda.inverse();
        out.coeffs[1] = (pres.lambda * pres.lambda - Scalar::one(be)) * linv;
        out.coeffs[3] = -linv;
      }
      return out;
    default:
      throw std::invalid_argument(std::string("unknown generator symbol: '") +
                                  sym + "'");
  }
}

FPElement fp_add(const FPElement& u, const FPElement& v) {
  if (u.regime != v.regime) {
    throw std::invalid_argument("presentation regime mismatch");
  }
  FPElement out = u;
  for (int k = 0; k < 8; ++k) out.coeffs[k] += v.coeffs[k];
  return out;
}

FPElement fp_scale(const FPElement& u, const Scalar& c) {
  FPElement out = u;
  for (int k = 0; k < 8; ++k) out.coeffs[k] *= c;
  return out;
}

FPElement fp_multiply(const FPElement& u, const FPElement& v,
                      const FPPresentation& pres) {
  if (u.regime != v.regime || u.regime != pres.regime) {
    throw std::invalid_argument("presentation regime mismatch");
  }
  const Backend be = pres.backend();
  if (pres.regime == Regime::kClifford) {
    Poly4 a1, b1, a2, b2;
    split_z(u, a1, b1);
    split_z(v, a2, b2);
    Poly4 a = hmul(a1, a2, be);
    const Poly4 bb = hmul(b1, b2, be);
    for (int k = 0; k < 4; ++k) a[k] += bb[k];
    Poly4 b = hmul(a1, b2, be);
    const Poly4 ba = hmul(b1, a2, be);
    for (int k = 0; k < 4; ++k) b[k] += ba[k];
    return join_z(a, b);
  }
  // (P1 + x Q1)(P2 + x Q2) with P x = x sigma(P) and x^2 = 1.
  Poly4 p1 = zero_poly(be), q1 = zero_poly(be);
  Poly4 p2 = zero_poly(be), q2 = zero_poly(be);
  split_gx(u, p1, q1);
  split_gx(v, p2, q2);
  Poly4 p = mulmod(p1, p2, pres.lambda);
  const Poly4 pq = mulmod(apply_sigma(pres, q1), q2, pres.lambda);
  for (int k = 0; k < 4; ++k) p[k] += pq[k];
  Poly4 q = mulmod(apply_sigma(pres, p1), q2, pres.lambda);
  const Poly4 qp = mulmod(q1, p2, pres.lambda);
  for (int k = 0; k < 4; ++k) q[k] += qp[k];
  return join_gx(pres.regime, p, q);
}

FPElement fp_normal_form(const std::string& word, const FPPresentation& pres) {
  FPElement acc = fp_one(pres);
  for (char c : word) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    acc = fp_multiply(acc, fp_generator(pres, c), pres);
  }
  return acc;
}

bool fp_is_zero(const FPElement& u, double tol) {
  for (const Scalar& c : u.coeffs) {
    if (!c.is_zero(tol)) return false;
  }
  return true;
}

std::string fp_str(const FPElement& u) {
  const auto& names = basis_names(u.regime);
  std::string out;
  for (int k = 0; k < 8; ++k) {
    const Scalar& c = u.coeffs[k];
    if (c.is_exactly_zero()) continue;
    std::string cs = c.str();
    std::string sign = out.empty() ? "" : " + ";
    if (!out.empty() && !cs.empty() && cs[0] == '-') {
      sign = " - ";
      cs = (-c).str();
    }
    std::string term;
    if (k == 0) {
      term = cs;
    } else if (c.is_one()) {
      term = names[k];
    } else if ((-c).is_one()) {
      term = (out.empty() ? "-" : "") + names[k];
    } else {
      bool parens = cs.find('+') != std::string::npos ||
                    cs.find('-', 1) != std::string::npos;
      term = (parens ? "(" + cs + ")" : cs) + "*" + names[k];
    }
    out += sign + term;
  }
  return out.empty() ? "0" : out;
}

CMatrix psi(const FPElement& u, const FPPresentation& pres) {
  if (u.regime != pres.regime) {
    throw std::invalid_argument("presentation regime mismatch");
  }
  std::vector<CMatrix> img = basis_images(pres);
  CMatrix out = CMatrix::zeros(4, 4, pres.backend());
  for (int k = 0; k < 8; ++k) {
    if (u.coeffs[k].is_exactly_zero()) continue;
    out = out + img[k].scaled(u.coeffs[k]);
  }
  return out;
}

Subspace kernel_of_psi(const FPPresentation& pres, double tol) {
  std::vector<CMatrix> img = basis_images(pres);
  std::vector<ScalarVec> flat;
  flat.reserve(8);
  for (const CMatrix& m : img) flat.push_back(m.flatten());
  std::vector<ScalarVec> equations;
  for (int pos = 0; pos < 16; ++pos) {
    ScalarVec row(8, Scalar::zero(pres.backend()));
    for (int k = 0; k < 8; ++k) row[k] = flat[k][pos];
    equations.push_back(std::move(row));
  }
  auto kernel = solve_homogeneous(equations, 8, pres.backend(), tol);
  return Subspace::span(kernel, 8, pres.backend(), tol);
}

std::vector<FPElement> ideal_basis(const FPPresentation& pres) {
  FPElement g2m1 = fp_add(fp_normal_form("gg", pres),
                          fp_scale(fp_one(pres), -Scalar::one(pres.backend())));
  std::vector<FPElement> out;
  out.push_back(g2m1);
  for (const char* w : {"x", "g", "xg"}) {
    out.push_back(fp_multiply(fp_normal_form(w, pres), g2m1, pres));
  }
  return out;
}

Theorem2Report verify_theorem2(const Theta& theta, double tol) {
  FPPresentation pres = make_presentation(theta, tol);
  Theorem2Report report;
  report.regime = pres.regime;

  auto push = [&](const std::string& name, bool ok, double residual) {
    report.checks.push_back({name, ok, residual});
    report.ok = report.ok && ok;
  };
  auto coeff_residual = [&](const FPElement& e) {
    double m = 0.0;
    for (const Scalar& c : e.coeffs) m = std::max(m, c.abs());
    return m;
  };

  graph::GraphGenerators gen = graph::build_generators(theta);
  alg::MatrixAlgebra concrete =
      alg::generate_algebra({gen.x, gen.y, gen.z}, true, tol);
  Subspace concrete_span = Subspace::span_matrices(concrete.basis, tol);

  std::vector<CMatrix> images;
  for (int k = 0; k < 8; ++k) {
    FPElement e = fp_zero(pres);
    e.coeffs[k] = Scalar::one(pres.backend());
    images.push_back(psi(e, pres));
  }
  Subspace image_span = Subspace::span_matrices(images, tol);
  Subspace kernel = kernel_of_psi(pres, tol);

  if (pres.regime == Regime::kKlein) {
    FPElement g2m1 =
        fp_add(fp_normal_form("gg", pres),
               fp_scale(fp_one(pres), -Scalar::one(pres.backend())));
    FPElement sq = fp_multiply(g2m1, g2m1, pres);
    push("(g^2-1)^2 = 0", fp_is_zero(sq, tol), coeff_residual(sq));

    std::vector<FPElement> ideal = ideal_basis(pres);
    double jj_res = 0.0;
    bool jj_ok = true;
    for (const FPElement& u : ideal) {
      for (const FPElement& v : ideal) {
        FPElement w = fp_multiply(u, v, pres);
        jj_ok = jj_ok && fp_is_zero(w, tol);
        jj_res = std::max(jj_res, coeff_residual(w));
      }
    }
    push("J*J = 0", jj_ok, jj_res);

    double pj_res = 0.0;
    bool pj_ok = true;
    for (const FPElement& u : ideal) {
      CMatrix m = psi(u, pres);
      pj_res = std::max(pj_res, m.max_abs());
      pj_ok = pj_ok && (pres.backend() == Backend::kExact
                            ? m.max_abs() == 0.0
                            : m.max_abs() <= tol);
    }
    push("psi(J) = 0", pj_ok, pj_res);

    std::vector<ScalarVec> ideal_coeffs;
    for (const FPElement& u : ideal) ideal_coeffs.push_back(u.coeffs);
    Subspace ideal_span =
        Subspace::span(ideal_coeffs, 8, pres.backend(), tol);
    bool quotient_ok = kernel.dim() == 4 && subspace_equal(kernel, ideal_span) &&
                       concrete.dim() == 4 && image_span.dim() == 4 &&
                       subspace_equal(image_span, concrete_span);
    push("A/J isomorphic to the concrete algebra", quotient_ok, 0.0);
  } else {
    push("psi injective", kernel.dim() == 0, 0.0);
    bool surj = concrete.dim() == 8 && image_span.dim() == 8 &&
                subspace_equal(image_span, concrete_span);
    push("psi bijective onto the 8-dim concrete algebra", surj, 0.0);
  }
  return report;
}

// ---- group layer -----------------------------------------------------------

GroupElement group_mul(const GroupElement& u, const GroupElement& v) {
  GroupElement out;
  out.g_pow = u.g_pow + (u.x_bit ? -v.g_pow : v.g_pow);
  out.z_bit = u.z_bit != v.z_bit;
  out.x_bit = u.x_bit != v.x_bit;
  return out;
}

GroupElement group_inverse(const GroupElement& u) {
  GroupElement out;
  out.g_pow = u.x_bit ? u.g_pow : -u.g_pow;
  out.z_bit = u.z_bit;
  out.x_bit = u.x_bit;
  return out;
}

GroupAlgebraElement ga_add(const GroupAlgebraElement& u,
                           const GroupAlgebraElement& v) {
  GroupAlgebraElement out = u;
  for (const auto& [e, c] : v.coeff) {
    auto it = out.coeff.find(e);
    if (it == out.coeff.end()) {
      out.coeff.emplace(e, c);
    } else {
      it->second += c;
      if (it->second.is_exactly_zero()) out.coeff.erase(it);
    }
  }
  return out;
}

GroupAlgebraElement ga_mul(const GroupAlgebraElement& u,
                           const GroupAlgebraElement& v) {
  GroupAlgebraElement out;
  for (const auto& [e1, c1] : u.coeff) {
    for (const auto& [e2, c2] : v.coeff) {
      GroupElement e = group_mul(e1, e2);
      Scalar c = c1 * c2;
      auto it = out.coeff.find(e);
      if (it == out.coeff.end()) {
        out.coeff.emplace(e, c);
      } else {
        it->second += c;
        if (it->second.is_exactly_zero()) out.coeff.erase(it);
      }
    }
  }
  return out;
}

CMatrix phi(const GroupElement& e, const Theta& theta) {
  graph::GraphGenerators gen = graph::build_generators(theta);
  CMatrix out = (gen.x * gen.y).pow(e.g_pow);
  if (e.z_bit) out = out * gen.z;
  if (e.x_bit) out = out * gen.x;
  return out;
}

CMatrix phi(const GroupAlgebraElement& u, const Theta& theta) {
  CMatrix out = CMatrix::zeros(4, 4, theta.backend());
  for (const auto& [e, c] : u.coeff) {
    out = out + phi(e, theta).scaled(c);
  }
  return out;
}

}  // namespace opgraph::fp
