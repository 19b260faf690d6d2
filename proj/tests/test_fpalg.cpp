#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "opgraph/algebra.hpp"
#include "opgraph/fpalg.hpp"
#include "opgraph/graph.hpp"
#include "opgraph/rng.hpp"
#include "test_support.hpp"

using namespace opgraph;
using namespace opgraph::fp;

namespace {

FPPresentation pres_for(const std::string& theta_text,
                        Backend be = Backend::kExact) {
  return make_presentation(parse_theta(theta_text, be), kDefaultTol);
}

Scalar q(const std::string& text) {
  return parse_scalar(text, Backend::kExact);
}

FPElement random_element(const FPPresentation& pres, Rng& rng) {
  FPElement out = fp_zero(pres);
  for (int k = 0; k < 8; ++k) out.coeffs[k] = rng.small_scalar(pres.backend());
  return out;
}

std::string random_word(Rng& rng, int max_len) {
  static const char kSyms[] = {'x', 'y', 'z', 'g'};
  int len = static_cast<int>(rng.uniform_int(1, max_len));
  std::string w;
  for (int i = 0; i < len; ++i) {
    w += kSyms[rng.uniform_int(0, 3)];
  }
  return w;
}

}  // namespace

TEST_CASE("regime selection follows lambda") {
  CHECK(pres_for("2").regime == Regime::kGeneric);
  CHECK(pres_for("3/5+4/5i").regime == Regime::kGeneric);
  CHECK(pres_for("1").regime == Regime::kKlein);
  CHECK(pres_for("-1").regime == Regime::kKlein);
  CHECK(pres_for("i").regime == Regime::kClifford);
  CHECK(pres_for("-i").regime == Regime::kClifford);
  CHECK(pres_for("exp(i*pi/3)", Backend::kFloat).regime == Regime::kGeneric);
  CHECK(pres_for("i", Backend::kFloat).regime == Regime::kClifford);
  CHECK(pres_for("1", Backend::kFloat).regime == Regime::kKlein);
  CHECK(std::string(regime_name(Regime::kKlein)) == "klein");
}

TEST_CASE("normal forms of short words at theta = 2") {
  FPPresentation pres = pres_for("2");

  FPElement one = fp_one(pres);
  for (const char* w : {"xx", "yy", "zz", "xgxg"}) {
    FPElement u = fp_normal_form(w, pres);
    CAPTURE(w);
    CHECK(u.coeffs == one.coeffs);
  }
  CHECK(fp_normal_form("gxg", pres).coeffs ==
        fp_generator(pres, 'x').coeffs);

  FPElement g = fp_normal_form("xy", pres);
  CHECK(g.coeffs == fp_generator(pres, 'g').coeffs);

  // g^4 reduces through g^4 = (lambda^2 - 2) g^2 - 1 with lambda = 5/2.
  FPElement g4 = fp_normal_form("gggg", pres);
  CHECK(g4.coeffs[0] == q("-1"));
  CHECK(g4.coeffs[2] == q("17/4"));
  for (int k : {1, 3, 4, 5, 6, 7}) CHECK(g4.coeffs[k].is_exactly_zero());

  FPElement z = fp_generator(pres, 'z');
  CHECK(z.coeffs[1] == q("21/10"));
  CHECK(z.coeffs[3] == q("-2/5"));

  // Defining relations hold as normal-form identities.
  CHECK(fp_normal_form("xz", pres).coeffs == fp_normal_form("zx", pres).coeffs);
  CHECK(fp_normal_form("yz", pres).coeffs == fp_normal_form("zy", pres).coeffs);
  FPElement anti = fp_add(fp_normal_form("xy", pres),
                          fp_normal_form("yx", pres));
  CHECK(anti.coeffs == fp_scale(z, pres.lambda).coeffs);

  CHECK(fp_normal_form("y", pres).coeffs ==
        fp_normal_form("xg", pres).coeffs);
}

TEST_CASE("clifford regime keeps z as an independent symbol") {
  FPPresentation pres = pres_for("i");
  CHECK(pres.regime == Regime::kClifford);

  FPElement g2 = fp_normal_form("gg", pres);
  CHECK(g2.coeffs[0] == q("-1"));
  for (int k = 1; k < 8; ++k) CHECK(g2.coeffs[k].is_exactly_zero());

  CHECK(fp_normal_form("zz", pres).coeffs == fp_one(pres).coeffs);
  CHECK(fp_normal_form("zg", pres).coeffs == fp_normal_form("gz", pres).coeffs);
  CHECK(fp_normal_form("zx", pres).coeffs == fp_normal_form("xz", pres).coeffs);

  // xy + yx = lambda z = 0 here.
  FPElement anti = fp_add(fp_normal_form("xy", pres),
                          fp_normal_form("yx", pres));
  CHECK(fp_is_zero(anti, 0.0));

  CHECK(fp_normal_form("y", pres).coeffs ==
        fp_normal_form("xg", pres).coeffs);
}

TEST_CASE("psi sends generators to the concrete matrices") {
  for (const char* text : {"2", "1", "-1", "i"}) {
    CAPTURE(text);
    FPPresentation pres = pres_for(text);
    graph::GraphGenerators gen = graph::build_generators(pres.theta);
    CHECK(psi(fp_generator(pres, 'x'), pres) == gen.x);
    CHECK(psi(fp_generator(pres, 'y'), pres) == gen.y);
    CHECK(psi(fp_generator(pres, 'z'), pres) == gen.z);
    CHECK(psi(fp_generator(pres, 'g'), pres) == gen.x * gen.y);
  }

  FPPresentation pres = pres_for("2");
  CMatrix m = psi(fp_generator(pres, 'g'), pres);
  CHECK(m.at(0, 3) == q("1/2"));
  CHECK(m.at(1, 2) == q("2"));
  CHECK(m.at(2, 1) == q("2"));
  CHECK(m.at(3, 0) == q("1/2"));
  int zeros = 0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (m.at(i, j).is_exactly_zero()) ++zeros;
    }
  }
  CHECK(zeros == 12);
}

TEST_CASE("psi is an algebra homomorphism") {
  Rng rng(411);
  for (const char* text : {"2", "3", "1", "i"}) {
    CAPTURE(text);
    FPPresentation pres = pres_for(text);
    for (int trial = 0; trial < 12; ++trial) {
      FPElement u = random_element(pres, rng);
      FPElement v = random_element(pres, rng);
      CMatrix lhs = psi(fp_multiply(u, v, pres), pres);
      CMatrix rhs = psi(u, pres) * psi(v, pres);
      CHECK(max_abs_diff(lhs, rhs) == 0.0);
    }
  }

  FPPresentation fpres = pres_for("exp(i*pi/5)", Backend::kFloat);
  for (int trial = 0; trial < 12; ++trial) {
    FPElement u = random_element(fpres, rng);
    FPElement v = random_element(fpres, rng);
    CMatrix lhs = psi(fp_multiply(u, v, fpres), fpres);
    CMatrix rhs = psi(u, fpres) * psi(v, fpres);
    CHECK(max_abs_diff(lhs, rhs) <= 1e-10);
  }
}

TEST_CASE("rewriting is confluent on random words") {
  Rng rng(902);
  for (const char* text : {"2", "1", "i"}) {
    CAPTURE(text);
    FPPresentation pres = pres_for(text);
    for (int trial = 0; trial < 170; ++trial) {
      std::string w = random_word(rng, 8);
      CAPTURE(w);
      FPElement left = fp_normal_form(w, pres);

      // Fold from the right instead.
      FPElement right = fp_one(pres);
      for (auto it = w.rbegin(); it != w.rend(); ++it) {
        right = fp_multiply(fp_generator(pres, *it), right, pres);
      }
      CHECK(left.coeffs == right.coeffs);

      // Multiplicative across an arbitrary split.
      auto cut = w.size() / 2;
      FPElement split = fp_multiply(fp_normal_form(w.substr(0, cut), pres),
                                    fp_normal_form(w.substr(cut), pres), pres);
      CHECK(left.coeffs == split.coeffs);
    }
  }
}

TEST_CASE("kernel of psi matches the regime") {
  CHECK(kernel_of_psi(pres_for("2"), kDefaultTol).dim() == 0);
  CHECK(kernel_of_psi(pres_for("i"), kDefaultTol).dim() == 0);
  CHECK(kernel_of_psi(pres_for("3/5+4/5i"), kDefaultTol).dim() == 0);

  for (const char* text : {"1", "-1"}) {
    CAPTURE(text);
    FPPresentation pres = pres_for(text);
    Subspace ker = kernel_of_psi(pres, kDefaultTol);
    CHECK(ker.dim() == 4);

    std::vector<ScalarVec> coeffs;
    for (const FPElement& u : ideal_basis(pres)) coeffs.push_back(u.coeffs);
    Subspace ideal = Subspace::span(coeffs, 8, pres.backend(), kDefaultTol);
    CHECK(ideal.dim() == 4);
    CHECK(subspace_equal(ker, ideal));
  }
}

TEST_CASE("ideal generators have the expected coordinates") {
  FPPresentation pres = pres_for("1");
  std::vector<FPElement> ideal = ideal_basis(pres);
  REQUIRE(ideal.size() == 4);
  // Coefficient slots: g^2 - 1, x g^2 - x, g^3 - g, x g^3 - x g.
  const int plus[] = {2, 6, 3, 7};
  const int minus[] = {0, 4, 1, 5};
  for (int t = 0; t < 4; ++t) {
    CAPTURE(t);
    for (int k = 0; k < 8; ++k) {
      Scalar want = Scalar::zero(Backend::kExact);
      if (k == plus[t]) want = q("1");
      if (k == minus[t]) want = q("-1");
      CHECK(ideal[t].coeffs[k] == want);
    }
  }
}

TEST_CASE("deformation structure report across regimes") {
  for (const char* text : {"3", "2", "i", "-i", "3/5+4/5i"}) {
    CAPTURE(text);
    Theorem2Report rep = verify_theorem2(parse_theta(text, Backend::kExact),
                                         kDefaultTol);
    CHECK(rep.ok);
    CHECK(rep.checks.size() == 2);
    for (const auto& c : rep.checks) {
      CAPTURE(c.name);
      CHECK(c.ok);
      CHECK(c.residual == 0.0);
    }
  }

  for (const char* text : {"1", "-1"}) {
    CAPTURE(text);
    Theorem2Report rep = verify_theorem2(parse_theta(text, Backend::kExact),
                                         kDefaultTol);
    CHECK(rep.regime == Regime::kKlein);
    CHECK(rep.ok);
    REQUIRE(rep.checks.size() == 4);
    for (const auto& c : rep.checks) {
      CAPTURE(c.name);
      CHECK(c.ok);
      CHECK(c.residual == 0.0);
    }
  }

  Theorem2Report frep = verify_theorem2(
      parse_theta("exp(i*pi/7)", Backend::kFloat), 1e-9);
  CHECK(frep.regime == Regime::kGeneric);
  CHECK(frep.ok);
}

TEST_CASE("regular representation of the klein algebra has radical J") {
  FPPresentation pres = pres_for("1");

  std::vector<FPElement> basis;
  for (int k = 0; k < 8; ++k) {
    FPElement e = fp_zero(pres);
    e.coeffs[k] = q("1");
    basis.push_back(e);
  }
  auto regular = [&](const FPElement& u) {
    CMatrix m = CMatrix::zeros(8, 8, Backend::kExact);
    for (int j = 0; j < 8; ++j) {
      FPElement col = fp_multiply(u, basis[j], pres);
      for (int i = 0; i < 8; ++i) m.at(i, j) = col.coeffs[i];
    }
    return m;
  };

  std::vector<CMatrix> gens;
  for (const FPElement& b : basis) gens.push_back(regular(b));
  alg::MatrixAlgebra reg = alg::generate_algebra(gens, true, kDefaultTol);
  CHECK(reg.dim() == 8);

  Subspace rad = alg::radical(reg, kDefaultTol);
  CHECK(rad.dim() == 4);
  for (const FPElement& u : ideal_basis(pres)) {
    CHECK(rad.contains(regular(u)));
  }
}

TEST_CASE("group normal form multiplies and inverts correctly") {
  Rng rng(5533);
  auto random_el = [&] {
    GroupElement e;
    e.g_pow = rng.uniform_int(-6, 6);
    e.z_bit = rng.uniform_int(0, 1) == 1;
    e.x_bit = rng.uniform_int(0, 1) == 1;
    return e;
  };
  GroupElement id;
  for (int trial = 0; trial < 60; ++trial) {
    GroupElement a = random_el(), b = random_el(), c = random_el();
    CHECK(group_mul(group_mul(a, b), c) == group_mul(a, group_mul(b, c)));
    CHECK(group_mul(a, group_inverse(a)) == id);
    CHECK(group_mul(group_inverse(a), a) == id);
    CHECK(group_mul(a, id) == a);
  }

  // x conjugates g to its inverse.
  GroupElement g{1, false, false};
  GroupElement x{0, false, true};
  CHECK(group_mul(group_mul(x, g), x) == group_inverse(g));
}

TEST_CASE("phi represents the group and its algebra") {
  Rng rng(7210);
  Theta theta = parse_theta("2", Backend::kExact);
  graph::GraphGenerators gen = graph::build_generators(theta);

  GroupElement y{-1, false, true};
  CHECK(phi(y, theta) == gen.y);
  GroupElement z{0, true, false};
  CHECK(phi(z, theta) == gen.z);

  auto random_el = [&] {
    GroupElement e;
    e.g_pow = rng.uniform_int(-5, 5);
    e.z_bit = rng.uniform_int(0, 1) == 1;
    e.x_bit = rng.uniform_int(0, 1) == 1;
    return e;
  };
  for (int trial = 0; trial < 40; ++trial) {
    GroupElement a = random_el(), b = random_el();
    CHECK(phi(group_mul(a, b), theta) == phi(a, theta) * phi(b, theta));
    CHECK(phi(group_inverse(a), theta) == phi(a, theta).inverse());
  }

  // The eight support elements g^a x^b span the full 8-dim algebra.
  std::vector<CMatrix> images;
  for (long a = 0; a < 4; ++a) {
    for (int b = 0; b < 2; ++b) {
      images.push_back(phi(GroupElement{a, false, b == 1}, theta));
    }
  }
  CHECK(Subspace::span_matrices(images, kDefaultTol).dim() == 8);

  auto random_ga = [&] {
    GroupAlgebraElement u;
    for (int t = 0; t < 3; ++t) {
      u.coeff[random_el()] = rng.small_scalar(Backend::kExact);
    }
    return u;
  };
  for (int trial = 0; trial < 25; ++trial) {
    GroupAlgebraElement u = random_ga(), v = random_ga();
    CHECK(phi(ga_mul(u, v), theta) == phi(u, theta) * phi(v, theta));
    CHECK(phi(ga_add(u, v), theta) == phi(u, theta) + phi(v, theta));
  }
}

TEST_CASE("printing and error paths") {
  FPPresentation pres = pres_for("2");
  CHECK(fp_str(fp_zero(pres)) == "0");
  CHECK(fp_str(fp_one(pres)) == "1");
  CHECK(fp_str(fp_generator(pres, 'g')) == "g");
  std::string g4 = fp_str(fp_normal_form("gggg", pres));
  CHECK(g4.find("g^2") != std::string::npos);
  CHECK(g4.find("17/4") != std::string::npos);

  CHECK_THROWS_AS(fp_generator(pres, 'w'), std::invalid_argument);
  CHECK_THROWS_WITH(
      fp_multiply(fp_one(pres), fp_one(pres_for("1")), pres),
      "presentation regime mismatch");
}
