#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "opgraph/channel.hpp"
#include "opgraph/rng.hpp"
#include "test_support.hpp"

using namespace opgraph;
using namespace opgraph::chan;
using namespace testsup;

namespace {

CMatrix unit(int i, int j, int n, Backend be) {
  CMatrix m = CMatrix::zeros(n, n, be);
  m.at(i, j) = Scalar::one(be);
  return m;
}

// Direct evaluation of the frame map, independent of the Kraus extraction.
CMatrix frame_map(const GramFrame& f, const CMatrix& rho) {
  const int m = static_cast<int>(f.vectors.size());
  CMatrix out = CMatrix::zeros(m, m, Backend::kFloat);
  for (int j = 0; j < m; ++j) {
    for (int k = 0; k < m; ++k) {
      Scalar inner = Scalar::zero(Backend::kFloat);
      for (size_t a = 0; a < f.vectors[j].size(); ++a) {
        for (size_t b = 0; b < f.vectors[k].size(); ++b) {
          inner += f.vectors[j][a].conj() * rho.at(static_cast<int>(a),
                                                   static_cast<int>(b)) *
                   f.vectors[k][b];
        }
      }
      out.at(j, k) = f.gram.at(j, k) * inner;
    }
  }
  return out;
}

GramFrame mercedes_frame() {
  const double scale = std::sqrt(2.0 / 3.0);
  GramFrame f;
  CMatrix gram = CMatrix::zeros(3, 3, Backend::kFloat);
  for (int k = 0; k < 3; ++k) {
    const double angle = 2.0 * M_PI * k / 3.0;
    f.vectors.push_back({Scalar::floating(scale * std::cos(angle), 0.0),
                         Scalar::floating(scale * std::sin(angle), 0.0)});
    for (int j = 0; j < 3; ++j) {
      gram.at(k, j) = Scalar::floating(k == j ? 1.0 : -0.5, 0.0);
    }
  }
  f.gram = gram;
  return f;
}

bool contains_adjoints(const Subspace& s, int n, Backend be) {
  for (const ScalarVec& v : s.basis()) {
    if (!s.contains(CMatrix::unflatten(v, n, n, be).adjoint())) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("channel construction validates its input") {
  CHECK_THROWS_WITH(make_channel({}),
                    "channel requires at least one Kraus operator");

  CMatrix a = CMatrix::identity(2, Backend::kExact);
  CMatrix b = CMatrix::zeros(3, 2, Backend::kExact);
  CHECK_THROWS_WITH(make_channel({a, b}), "matrix dimension mismatch");
  CHECK_THROWS_WITH(make_channel({a, CMatrix::identity(2, Backend::kFloat)}),
                    "matrix backend mismatch (exact vs float)");

  KrausChannel rect = make_channel({b});
  CHECK(rect.dim_in == 2);
  CHECK(rect.dim_out == 3);
  CHECK(rect.env_dim() == 1);
}

TEST_CASE("apply reproduces hand-computed channels") {
  std::mt19937_64 rng(4004);
  const Backend be = Backend::kExact;

  KrausChannel identity = make_channel({CMatrix::identity(3, be)});
  CMatrix rho = random_matrix(3, be, rng);
  CHECK(apply(identity, rho) == rho);
  CHECK(is_trace_preserving(identity, kDefaultTol));

  // V_1 = |0><0|, V_2 = |0><1| collapses everything onto |0><0|.
  KrausChannel collapse =
      make_channel({unit(0, 0, 2, be), unit(0, 1, 2, be)});
  CHECK(is_trace_preserving(collapse, kDefaultTol));
  CMatrix q = random_matrix(2, be, rng);
  CMatrix out = apply(collapse, q);
  CHECK(out == unit(0, 0, 2, be).scaled(q.at(0, 0) + q.at(1, 1)));
  CHECK(out.trace() == q.trace());

  CHECK_THROWS_WITH(apply(collapse, rho), "matrix dimension mismatch");
}

TEST_CASE("dual pairs with apply under the trace") {
  std::mt19937_64 rng(515);
  const Backend be = Backend::kExact;

  KrausChannel collapse =
      make_channel({unit(0, 0, 2, be), unit(0, 1, 2, be)});
  CMatrix x = random_matrix(2, be, rng);
  CMatrix rho = random_matrix(2, be, rng);
  CHECK((apply(collapse, rho) * x).trace() ==
        (rho * dual(collapse, x)).trace());
  CHECK(dual(collapse, CMatrix::identity(2, be)) ==
        CMatrix::identity(2, be));

  Rng crng(77);
  for (int trial = 0; trial < 20; ++trial) {
    KrausChannel ch = random_trace_preserving_channel(3, 3, 2, crng);
    CHECK(is_trace_preserving(ch, 1e-10));
    CMatrix frho = random_matrix(3, Backend::kFloat, rng);
    CMatrix fx = random_matrix(3, Backend::kFloat, rng);
    Scalar lhs = (apply(ch, frho) * fx).trace();
    Scalar rhs = (frho * dual(ch, fx)).trace();
    CHECK((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
    CHECK(max_abs_diff(dual(ch, CMatrix::identity(3, Backend::kFloat)),
                       CMatrix::identity(3, Backend::kFloat)) <= 1e-10);
  }
}

TEST_CASE("complementary outputs live on the environment") {
  std::mt19937_64 rng(626);
  const Backend be = Backend::kExact;

  KrausChannel identity = make_channel({CMatrix::identity(2, be)});
  CMatrix rho = random_matrix(2, be, rng);
  CMatrix comp = complementary(identity, rho);
  CHECK(comp.rows() == 1);
  CHECK(comp.at(0, 0) == rho.trace());

  KrausChannel dephase = make_channel({unit(0, 0, 2, be), unit(1, 1, 2, be)});
  CMatrix dc = complementary(dephase, rho);
  CHECK(dc.at(0, 0) == rho.at(0, 0));
  CHECK(dc.at(1, 1) == rho.at(1, 1));
  CHECK(dc.at(0, 1).is_exactly_zero());
  CHECK(dc.at(1, 0).is_exactly_zero());
  CHECK(dc.trace() == rho.trace());

  // The complementary map has its own Kraus form, and both agree.
  CHECK(apply(complementary_channel(dephase), rho) == dc);

  Rng crng(88);
  for (int trial = 0; trial < 10; ++trial) {
    KrausChannel ch = random_trace_preserving_channel(3, 2, 3, crng);
    CMatrix frho = random_matrix(3, Backend::kFloat, rng);
    CMatrix direct = complementary(ch, frho);
    CHECK((direct.trace() - frho.trace()).abs() <= 1e-10);
    CHECK(max_abs_diff(apply(complementary_channel(ch), frho), direct) <=
          1e-12);
  }
}

TEST_CASE("pseudo-diagonal extraction matches the frame map") {
  std::mt19937_64 rng(737);

  // Identity Gram with the standard basis gives the dephasing channel.
  GramFrame dephase;
  dephase.gram = CMatrix::identity(3, Backend::kFloat);
  for (int k = 0; k < 3; ++k) {
    ScalarVec e(3, Scalar::zero(Backend::kFloat));
    e[k] = Scalar::one(Backend::kFloat);
    dephase.vectors.push_back(e);
  }
  KrausChannel dch = pseudo_diagonal(dephase);
  CHECK(is_trace_preserving(dch, 1e-10));
  CMatrix rho = random_matrix(3, Backend::kFloat, rng);
  CMatrix out = apply(dch, rho);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      Scalar want = i == j ? rho.at(i, i) : Scalar::zero(Backend::kFloat);
      CHECK((out.at(i, j) - want).abs() <= 1e-9);
    }
  }

  // All-ones Gram with the standard basis is the identity map.
  GramFrame ones = dephase;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      ones.gram.at(i, j) = Scalar::one(Backend::kFloat);
    }
  }
  KrausChannel ich = pseudo_diagonal(ones);
  CHECK(ich.env_dim() == 1);
  CHECK(max_abs_diff(apply(ich, rho), rho) <= 1e-9);

  // An equiangular frame in dimension two.
  GramFrame mercedes = mercedes_frame();
  KrausChannel mch = pseudo_diagonal(mercedes);
  CHECK(is_trace_preserving(mch, 1e-10));
  for (int trial = 0; trial < 5; ++trial) {
    CMatrix q = random_matrix(2, Backend::kFloat, rng);
    CHECK(max_abs_diff(apply(mch, q), frame_map(mercedes, q)) <= 1e-9);
  }
}

TEST_CASE("pseudo-diagonal rejects bad frames") {
  GramFrame f;
  f.gram = CMatrix::identity(2, Backend::kFloat);
  ScalarVec e0(2, Scalar::zero(Backend::kFloat));
  e0[0] = Scalar::one(Backend::kFloat);
  f.vectors = {e0, e0};
  CHECK_THROWS_WITH(pseudo_diagonal(f), "invalid frame");

  GramFrame g;
  g.gram = CMatrix::zeros(2, 2, Backend::kFloat);
  g.gram.at(0, 0) = Scalar::one(Backend::kFloat);
  g.gram.at(1, 1) = Scalar::one(Backend::kFloat);
  g.gram.at(0, 1) = Scalar::floating(2.0, 0.0);
  g.gram.at(1, 0) = Scalar::floating(2.0, 0.0);
  ScalarVec e1(2, Scalar::zero(Backend::kFloat));
  e1[1] = Scalar::one(Backend::kFloat);
  g.vectors = {e0, e1};
  CHECK_THROWS_WITH(pseudo_diagonal(g), "invalid Gram matrix");

  GramFrame h = g;
  h.gram.at(0, 1) = Scalar::zero(Backend::kFloat);
  h.gram.at(1, 0) = Scalar::zero(Backend::kFloat);
  h.gram.at(1, 1) = Scalar::floating(2.0, 0.0);
  CHECK_THROWS_WITH(pseudo_diagonal(h), "invalid Gram matrix");
}

TEST_CASE("nc_graph spans the kraus products") {
  const Backend be = Backend::kExact;

  KrausChannel identity = make_channel({CMatrix::identity(2, be)});
  Subspace triv = nc_graph(identity, kDefaultTol);
  CHECK(triv.dim() == 1);
  CHECK(triv.contains(CMatrix::identity(2, be)));

  KrausChannel collapse =
      make_channel({unit(0, 0, 2, be), unit(0, 1, 2, be)});
  Subspace full = nc_graph(collapse, kDefaultTol);
  CHECK(full.dim() == 4);

  KrausChannel dephase = make_channel({unit(0, 0, 2, be), unit(1, 1, 2, be)});
  Subspace diag = nc_graph(dephase, kDefaultTol);
  CHECK(diag.dim() == 2);
  CHECK(diag.contains(unit(0, 0, 2, be)));
  CHECK(diag.contains(unit(1, 1, 2, be)));
  CHECK_FALSE(diag.contains(unit(0, 1, 2, be)));

  // Operator system: contains the identity, closed under adjoints.
  for (const Subspace& s : {triv, full, diag}) {
    CHECK(s.contains(CMatrix::identity(2, be)));
    CHECK(contains_adjoints(s, 2, be));
  }
}

TEST_CASE("the dual route computes the same graph") {
  const Backend be = Backend::kExact;
  KrausChannel collapse =
      make_channel({unit(0, 0, 2, be), unit(0, 1, 2, be)});
  Subspace direct = nc_graph(collapse, kDefaultTol);
  Subspace routed = graph_via_dual(collapse, kDefaultTol);
  CHECK(routed.dim() == 4);
  CHECK(subspace_equal(direct, routed));

  Rng crng(99);
  for (int trial = 0; trial < 12; ++trial) {
    int din = static_cast<int>(crng.uniform_int(2, 4));
    int dout = static_cast<int>(crng.uniform_int(2, 4));
    int env = static_cast<int>(crng.uniform_int(1, 4));
    if (dout * env < din) env = (din + dout - 1) / dout;
    KrausChannel ch = random_trace_preserving_channel(din, dout, env, crng);
    Subspace a = nc_graph(ch, kDefaultTol);
    Subspace b = graph_via_dual(ch, kDefaultTol);
    CHECK(subspace_equal(a, b));
    CHECK(a.contains(CMatrix::identity(din, Backend::kFloat)));
    CHECK(contains_adjoints(a, din, Backend::kFloat));
  }
}

TEST_CASE("kraus mixing leaves the graph unchanged") {
  Rng crng(111);
  std::mt19937_64 rng(222);
  for (int trial = 0; trial < 6; ++trial) {
    KrausChannel ch = random_trace_preserving_channel(3, 3, 3, crng);

    // A random 3x3 unitary: the single Kraus operator of an env = 1
    // trace-preserving channel with square shape.
    CMatrix w = random_trace_preserving_channel(3, 3, 1, crng).kraus[0];
    std::vector<CMatrix> mixed;
    for (int j = 0; j < 3; ++j) {
      CMatrix acc = CMatrix::zeros(3, 3, Backend::kFloat);
      for (int k = 0; k < 3; ++k) acc = acc + ch.kraus[k].scaled(w.at(j, k));
      mixed.push_back(acc);
    }
    KrausChannel mixed_ch = make_channel(mixed);
    CHECK(is_trace_preserving(mixed_ch, 1e-10));
    CMatrix rho = random_matrix(3, Backend::kFloat, rng);
    CHECK(max_abs_diff(apply(mixed_ch, rho), apply(ch, rho)) <= 1e-10);
    CHECK(subspace_equal(nc_graph(ch, kDefaultTol),
                         nc_graph(mixed_ch, kDefaultTol)));
  }
}
