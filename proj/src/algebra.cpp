#include "opgraph/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "opgraph/eigensolve.hpp"
#include "opgraph/exactpoly.hpp"
#include "opgraph/rng.hpp"

namespace opgraph::alg {

namespace {

std::vector<CMatrix> rows_to_matrices(const RowSpan& span, int n,
                                      Backend backend) {
  std::vector<CMatrix> out;
  out.reserve(span.rows().size());
  for (const ScalarVec& row : span.rows()) {
    out.push_back(CMatrix::unflatten(row, n, n, backend));
  }
  return out;
}

// basis[i]*basis[j] expanded over the basis for all pairs.
std::vector<std::vector<ScalarVec>> compute_structure_constants(
    const std::vector<CMatrix>& basis, int n, Backend backend, double tol) {
  RowSpan span(n * n, backend, tol, true);
  for (const CMatrix& b : basis) {
    if (!span.add(b.flatten())) {
      throw std::runtime_error("algebra basis is linearly dependent");
    }
  }
  const int k = static_cast<int>(basis.size());
  std::vector<std::vector<ScalarVec>> c(k, std::vector<ScalarVec>(k));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      c[i][j] = span.represent((basis[i] * basis[j]).flatten());
    }
  }
  return c;
}

int isqrt_exact(int v) {
  int m = static_cast<int>(std::lround(std::sqrt(static_cast<double>(v))));
  return (m * m == v) ? m : 0;
}

// Left-regular action of the coordinate vector z on the algebra:
// (Lz)[l][j] = sum_i z_i c[i][j][l].
CMatrix regular_action(const MatrixAlgebra& a, const ScalarVec& z) {
  const int k = a.dim();
  CMatrix lz(k, k, a.backend);
  for (int i = 0; i < k; ++i) {
    if (z[i].is_exactly_zero()) continue;
    for (int j = 0; j < k; ++j) {
      for (int l = 0; l < k; ++l) {
        lz.at(l, j) += z[i] * a.structure_constants[i][j][l];
      }
    }
  }
  return lz;
}

MatrixAlgebra to_float_algebra(const MatrixAlgebra& a, double tol) {
  std::vector<CMatrix> fb;
  fb.reserve(a.basis.size());
  for (const CMatrix& b : a.basis) fb.push_back(to_float_matrix(b));
  double ftol = tol > 0 ? tol : kDefaultTol;
  return generate_algebra(fb, false, ftol);
}

// Distinct scalars through which a central element acts on the blocks.
struct SpectralSplit {
  std::vector<Scalar> values;
  bool exact_failed = false;
};

SpectralSplit central_spectrum(const MatrixAlgebra& a, const ScalarVec& z,
                               double tol) {
  CMatrix lz = regular_action(a, z);
  SpectralSplit out;
  if (a.backend == Backend::kExact) {
    Poly mp = minimal_polynomial(lz, 0.0);
    RootSearch rs = gaussian_rational_roots(mp);
    if (!rs.complete) {
      out.exact_failed = true;
      return out;
    }
    out.values = rs.roots;
    return out;
  }
  double scale = std::max(1.0, lz.max_abs());
  double cluster = std::max(tol, 1e-10) * scale;
  for (const auto& v : cluster_values(float_eigenvalues(lz), cluster)) {
    out.values.push_back(Scalar::floating(v));
  }
  return out;
}

MatrixAlgebra subalgebra_from_span(const std::vector<CMatrix>& elements,
                                   int n, Backend backend, double tol) {
  RowSpan span(n * n, backend, tol, false);
  for (const CMatrix& m : elements) span.add(m.flatten());
  MatrixAlgebra block;
  block.ambient_dim = n;
  block.backend = backend;
  block.tol = tol;
  block.basis = rows_to_matrices(span, n, backend);
  block.structure_constants =
      compute_structure_constants(block.basis, n, backend, tol);
  block.contains_identity =
      span.contains(CMatrix::identity(n, backend).flatten());
  return block;
}

}  // namespace

MatrixAlgebra generate_algebra(const std::vector<CMatrix>& gens,
                               bool include_identity, double tol) {
  if (gens.empty()) {
    throw std::invalid_argument("empty matrix list has no ambient space");
  }
  const int n = gens.front().rows();
  const Backend backend = gens.front().backend();
  for (const CMatrix& g : gens) {
    if (!g.is_square() || g.rows() != n) {
      throw std::invalid_argument("matrix dimension mismatch");
    }
    if (g.backend() != backend) {
      throw std::invalid_argument("matrix backend mismatch (exact vs float)");
    }
  }

  RowSpan span(n * n, backend, tol, false);
  if (include_identity) span.add(CMatrix::identity(n, backend).flatten());
  for (const CMatrix& g : gens) span.add(g.flatten());

  while (true) {
    std::vector<CMatrix> basis = rows_to_matrices(span, n, backend);
    const int before = span.dim();
    for (const CMatrix& x : basis) {
      for (const CMatrix& y : basis) {
        span.add((x * y).flatten());
      }
    }
    if (span.dim() == before) break;
  }

  MatrixAlgebra a;
  a.ambient_dim = n;
  a.backend = backend;
  a.tol = tol;
  a.basis = rows_to_matrices(span, n, backend);
  a.structure_constants =
      compute_structure_constants(a.basis, n, backend, tol);
  a.contains_identity = span.contains(CMatrix::identity(n, backend).flatten());
  return a;
}

std::vector<ScalarVec> center_coordinates(const MatrixAlgebra& a, double tol) {
  const int k = a.dim();
  const int nn = a.ambient_dim * a.ambient_dim;
  // z = sum_j alpha_j b_j commutes with every b_i.
  std::vector<ScalarVec> equations;
  equations.reserve(static_cast<size_t>(k) * nn);
  for (int i = 0; i < k; ++i) {
    std::vector<ScalarVec> comms;
    comms.reserve(k);
    for (int j = 0; j < k; ++j) {
      comms.push_back(commutator(a.basis[j], a.basis[i]).flatten());
    }
    for (int pos = 0; pos < nn; ++pos) {
      ScalarVec row(k, Scalar::zero(a.backend));
      for (int j = 0; j < k; ++j) row[j] = comms[j][pos];
      equations.push_back(std::move(row));
    }
  }
  return solve_homogeneous(equations, k, a.backend, tol);
}

Subspace center(const MatrixAlgebra& a, double tol) {
  std::vector<ScalarVec> coords = center_coordinates(a, tol);
  std::vector<ScalarVec> flat;
  flat.reserve(coords.size());
  for (const ScalarVec& c : coords) {
    flat.push_back(from_coordinates(a, c).flatten());
  }
  return Subspace::span(flat, a.ambient_dim * a.ambient_dim, a.backend, tol);
}

std::vector<ScalarVec> radical_coordinates(const MatrixAlgebra& a, double tol) {
  const int k = a.dim();
  std::vector<ScalarVec> gram(k, ScalarVec(k, Scalar::zero(a.backend)));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      gram[i][j] = (a.basis[i] * a.basis[j]).trace();
    }
  }
  return solve_homogeneous(gram, k, a.backend, tol);
}

Subspace radical(const MatrixAlgebra& a, double tol) {
  std::vector<ScalarVec> coords = radical_coordinates(a, tol);
  std::vector<ScalarVec> flat;
  flat.reserve(coords.size());
  for (const ScalarVec& c : coords) {
    flat.push_back(from_coordinates(a, c).flatten());
  }
  return Subspace::span(flat, a.ambient_dim * a.ambient_dim, a.backend, tol);
}

CMatrix from_coordinates(const MatrixAlgebra& a, const ScalarVec& coords) {
  if (coords.size() != static_cast<size_t>(a.dim())) {
    throw std::invalid_argument("ambient dimension mismatch");
  }
  CMatrix out(a.ambient_dim, a.ambient_dim, a.backend);
  for (int i = 0; i < a.dim(); ++i) {
    out = out + a.basis[i].scaled(coords[i]);
  }
  return out;
}

CMatrix algebra_unit(const MatrixAlgebra& a) {
  if (a.contains_identity) {
    return CMatrix::identity(a.ambient_dim, a.backend);
  }
  // Solve u * b_i == b_i over coordinates of u; a left identity of an
  // algebra with a two-sided unit is that unit.
  const int k = a.dim();
  // Build the inhomogeneous system as a homogeneous one with an extra
  // variable t: u*b_i - t*b_i == 0, then normalize t to 1.
  std::vector<ScalarVec> equations;
  const int nn = a.ambient_dim * a.ambient_dim;
  for (int i = 0; i < k; ++i) {
    std::vector<ScalarVec> prods;
    prods.reserve(k);
    for (int j = 0; j < k; ++j) {
      prods.push_back((a.basis[j] * a.basis[i]).flatten());
    }
    ScalarVec target = a.basis[i].flatten();
    for (int pos = 0; pos < nn; ++pos) {
      ScalarVec row(k + 1, Scalar::zero(a.backend));
      for (int j = 0; j < k; ++j) row[j] = prods[j][pos];
      row[k] = -target[pos];
      equations.push_back(std::move(row));
    }
  }
  auto kernel = solve_homogeneous(equations, k + 1, a.backend, a.tol);
  for (const ScalarVec& v : kernel) {
    if (!v[k].is_zero(a.tol)) {
      Scalar inv = v[k].inverse();
      ScalarVec coords(v.begin(), v.begin() + k);
      for (Scalar& c : coords) c *= inv;
      return from_coordinates(a, coords);
    }
  }
  throw std::runtime_error("algebra has no unit");
}

CentralSplit central_idempotents(const MatrixAlgebra& a, double tol,
                                 uint64_t seed) {
  CentralSplit out;
  const int n = a.ambient_dim;
  std::vector<ScalarVec> cen = center_coordinates(a, tol);
  const int c = static_cast<int>(cen.size());
  CMatrix unit = algebra_unit(a);

  if (c == 1) {
    out.idempotents.push_back(unit);
    out.blocks.push_back(a);
    return out;
  }

  Rng rng(seed);
  std::vector<Scalar> values;
  ScalarVec zc;
  bool found = false;
  for (int attempt = 0; attempt < 10 && !found; ++attempt) {
    zc = ScalarVec(a.dim(), Scalar::zero(a.backend));
    for (const ScalarVec& cv : cen) {
      Scalar w = rng.small_scalar(a.backend);
      for (int i = 0; i < a.dim(); ++i) zc[i] += w * cv[i];
    }
    SpectralSplit split = central_spectrum(a, zc, tol);
    if (split.exact_failed) {
      MatrixAlgebra fa = to_float_algebra(a, tol);
      CentralSplit fs = central_idempotents(fa, std::max(tol, kDefaultTol),
                                            seed + 1);
      fs.used_float_fallback = true;
      return fs;
    }
    if (static_cast<int>(split.values.size()) == c) {
      values = split.values;
      found = true;
    }
  }
  if (!found) throw std::runtime_error("degenerate random element");

  CMatrix z = from_coordinates(a, zc);
  for (int t = 0; t < c; ++t) {
    CMatrix e = unit;
    for (int s = 0; s < c; ++s) {
      if (s == t) continue;
      Scalar denom = values[t] - values[s];
      e = e * (z - unit.scaled(values[s])).scaled(denom.inverse());
    }
    out.idempotents.push_back(e);
    std::vector<CMatrix> elements;
    elements.reserve(a.dim());
    for (const CMatrix& b : a.basis) elements.push_back(e * b);
    out.blocks.push_back(subalgebra_from_span(elements, n, a.backend, tol));
  }
  return out;
}

StructureReport block_decompose(const MatrixAlgebra& a, double tol,
                                uint64_t seed) {
  StructureReport report;
  report.dimension = a.dim();
  report.center_dim = static_cast<int>(center_coordinates(a, tol).size());
  std::vector<ScalarVec> rad = radical_coordinates(a, tol);
  report.radical_dim = static_cast<int>(rad.size());

  const MatrixAlgebra* target = &a;
  MatrixAlgebra quotient;
  if (report.radical_dim > 0) {
    if (report.radical_dim == report.dimension) {
      return report;  // nilpotent algebra, nothing semisimple left
    }
    // Quotient structure constants over a complement of the radical, then
    // the left-regular representation realizes A/rad concretely.
    const int k = a.dim();
    RowSpan radspan(k, a.backend, tol, false);
    for (const ScalarVec& r : rad) radspan.add(r);
    std::vector<int> free_idx;
    {
      std::vector<bool> is_pivot(k, false);
      for (int p : radspan.pivot_columns()) is_pivot[p] = true;
      for (int j = 0; j < k; ++j) {
        if (!is_pivot[j]) free_idx.push_back(j);
      }
    }
    const int q = static_cast<int>(free_idx.size());
    auto project = [&](ScalarVec v) {
      // Reduce modulo the radical rows, then restrict to free coordinates.
      for (size_t r = 0; r < radspan.rows().size(); ++r) {
        int p = radspan.pivot_columns()[r];
        Scalar f = v[p];
        if (f.is_exactly_zero()) continue;
        for (int j = 0; j < k; ++j) v[j] -= f * radspan.rows()[r][j];
        v[p] = Scalar::zero(a.backend);
      }
      ScalarVec out(q, Scalar::zero(a.backend));
      for (int j = 0; j < q; ++j) out[j] = v[free_idx[j]];
      return out;
    };
    std::vector<std::vector<ScalarVec>> gamma(
        q, std::vector<ScalarVec>(q));
    for (int i = 0; i < q; ++i) {
      for (int j = 0; j < q; ++j) {
        gamma[i][j] =
            project(a.structure_constants[free_idx[i]][free_idx[j]]);
      }
    }
    std::vector<CMatrix> regs;
    regs.reserve(q);
    for (int i = 0; i < q; ++i) {
      CMatrix li(q, q, a.backend);
      for (int j = 0; j < q; ++j) {
        for (int l = 0; l < q; ++l) li.at(l, j) = gamma[i][j][l];
      }
      regs.push_back(std::move(li));
    }
    quotient = generate_algebra(regs, false, tol);
    target = &quotient;
  }

  CentralSplit split = central_idempotents(*target, tol, seed);
  report.used_float_fallback = split.used_float_fallback;
  for (const MatrixAlgebra& block : split.blocks) {
    BlockInfo info;
    info.block_dim = block.dim();
    const int m = isqrt_exact(block.dim());
    const int bc =
        static_cast<int>(center_coordinates(block, tol).size());
    info.is_full_matrix_algebra = (m > 0 && bc == 1);
    info.matrix_size = info.is_full_matrix_algebra ? m : 0;
    report.blocks.push_back(info);
  }
  std::sort(report.blocks.begin(), report.blocks.end(),
            [](const BlockInfo& x, const BlockInfo& y) {
              return x.block_dim > y.block_dim;
            });
  return report;
}

}  // namespace opgraph::alg
