#include "opgraph/rep.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "opgraph/eigensolve.hpp"
#include "opgraph/exactpoly.hpp"
#include "opgraph/graph.hpp"
#include "opgraph/rng.hpp"

namespace opgraph::rep {

namespace {

ScalarVec matvec(const CMatrix& m, const ScalarVec& v) {
  ScalarVec out(static_cast<size_t>(m.rows()), Scalar::zero(m.backend()));
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (m.at(i, j).is_exactly_zero()) continue;
      out[i] += m.at(i, j) * v[j];
    }
  }
  return out;
}

// Lexicographic (re, im) comparison used to pick a canonical eigenvalue.
bool lex_greater(const Scalar& a, const Scalar& b) {
  if (a.backend() == Backend::kExact && b.backend() == Backend::kExact) {
    const auto& ea = a.exact_value();
    const auto& eb = b.exact_value();
    if (ea.re != eb.re) return ea.re > eb.re;
    return ea.im > eb.im;
  }
  const auto ca = a.to_complex();
  const auto cb = b.to_complex();
  const double eps = 1e-9 * (1.0 + std::abs(ca) + std::abs(cb));
  if (ca.real() > cb.real() + eps) return true;
  if (cb.real() > ca.real() + eps) return false;
  return ca.imag() > cb.imag() + eps;
}

// Distinct eigenvalues of a matrix known to be diagonalizable with exactly
// want distinct eigenvalues; empty result signals a miss.
std::vector<Scalar> distinct_eigenvalues(const CMatrix& m, int want,
                                         double tol) {
  std::vector<Scalar> out;
  if (m.backend() == Backend::kExact) {
    Poly mp = minimal_polynomial(m, tol);
    RootSearch rs = gaussian_rational_roots(mp);
    if (!rs.complete || static_cast<int>(rs.roots.size()) != want) return {};
    out = rs.roots;
  } else {
    auto clustered =
        cluster_values(float_eigenvalues(m), std::max(tol, 1e-8));
    if (static_cast<int>(clustered.size()) != want) return {};
    for (const auto& v : clustered) out.push_back(Scalar::floating(v));
  }
  return out;
}

struct Block {
  std::vector<ScalarVec> basis;  // vectors in C^4
  CMatrix rx, ry, rz, rg;
  Character chi;
};

// Action of m restricted to the span of basis, in that basis.  Throws when
// the span is not invariant.
CMatrix restricted_action(const CMatrix& m, const std::vector<ScalarVec>& basis,
                          double tol) {
  const int d = static_cast<int>(basis.size());
  RowSpan span(m.rows(), m.backend(), tol, true);
  for (const ScalarVec& b : basis) span.add(b);
  CMatrix out = CMatrix::zeros(d, d, m.backend());
  for (int j = 0; j < d; ++j) {
    ScalarVec combo = span.represent(matvec(m, basis[j]));
    for (int i = 0; i < d; ++i) out.at(i, j) = combo[i];
  }
  return out;
}

}  // namespace

InducedRep induce(const Character& chi) {
  if (chi.chi_g.is_exactly_zero()) {
    throw std::invalid_argument("character must be nonzero on g");
  }
  if (!scalar_equals_int(chi.chi_z * chi.chi_z, 1, 0, kDefaultTol)) {
    throw std::invalid_argument("character value on z must square to one");
  }
  const Backend be = chi.chi_g.backend();
  InducedRep rep{CMatrix::zeros(2, 2, be), CMatrix::zeros(2, 2, be),
                 CMatrix::zeros(2, 2, be), CMatrix::zeros(2, 2, be)};
  rep.r_g.at(0, 0) = chi.chi_g;
  rep.r_g.at(1, 1) = chi.chi_g.inverse();
  rep.r_z = CMatrix::identity(2, be).scaled(chi.chi_z);
  rep.r_x.at(0, 1) = Scalar::one(be);
  rep.r_x.at(1, 0) = Scalar::one(be);
  rep.r_y = rep.r_x * rep.r_g;
  return rep;
}

Subspace commutant(const std::vector<CMatrix>& mats, double tol) {
  if (mats.empty()) {
    throw std::invalid_argument("empty matrix list has no ambient space");
  }
  const int n = mats[0].rows();
  const Backend be = mats[0].backend();
  std::vector<ScalarVec> rows;
  rows.reserve(mats.size() * static_cast<size_t>(n) * n);
  for (const CMatrix& a : mats) {
    if (a.rows() != n || a.cols() != n || a.backend() != be) {
      throw std::invalid_argument("matrix dimension mismatch");
    }
    // (m a - a m)[i][j] == 0, unknowns m flattened row-major.
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        ScalarVec row(static_cast<size_t>(n) * n, Scalar::zero(be));
        for (int k = 0; k < n; ++k) {
          row[static_cast<size_t>(i) * n + k] += a.at(k, j);
          row[static_cast<size_t>(k) * n + j] -= a.at(i, k);
        }
        rows.push_back(std::move(row));
      }
    }
  }
  auto kernel = solve_homogeneous(rows, n * n, be, tol);
  return Subspace::span(kernel, n * n, be, tol);
}

bool is_irreducible(const InducedRep& r, double tol) {
  return commutant({r.r_x, r.r_y, r.r_z}, tol).dim() == 1;
}

DecompositionReport decompose_phi(const Theta& theta, double tol,
                                  uint64_t seed) {
  const Backend be = theta.backend();
  graph::GraphGenerators gen = graph::build_generators(theta);
  const CMatrix g = gen.x * gen.y;
  const CMatrix id = CMatrix::identity(4, be);

  Subspace comm = commutant({gen.x, gen.y, gen.z}, tol);
  const int k = comm.dim();

  Rng rng(seed);
  for (int attempt = 0; attempt < 10; ++attempt) {
    CMatrix c = CMatrix::zeros(4, 4, be);
    for (const ScalarVec& b : comm.basis()) {
      c = c + CMatrix::unflatten(b, 4, 4, be).scaled(rng.small_scalar(be));
    }
    std::vector<Scalar> vals = distinct_eigenvalues(c, k, tol);
    if (vals.empty()) continue;

    // Lagrange eigenprojections of c carve out the invariant subspaces.
    std::vector<Block> blocks;
    int total = 0;
    bool bad = false;
    for (int t = 0; t < k && !bad; ++t) {
      CMatrix proj = id;
      for (int s = 0; s < k; ++s) {
        if (s == t) continue;
        proj = (proj * (c - id.scaled(vals[s])))
                   .scaled((vals[t] - vals[s]).inverse());
      }
      RowSpan cols(4, be, tol, false);
      for (int j = 0; j < 4; ++j) {
        ScalarVec col(4, Scalar::zero(be));
        for (int i = 0; i < 4; ++i) col[i] = proj.at(i, j);
        cols.add(col);
      }
      if (cols.dim() == 0) {
        bad = true;
        break;
      }
      Block blk;
      blk.basis = cols.rows();
      total += cols.dim();
      blocks.push_back(std::move(blk));
    }
    if (bad || total != 4) continue;

    for (Block& blk : blocks) {
      blk.rx = restricted_action(gen.x, blk.basis, tol);
      blk.ry = restricted_action(gen.y, blk.basis, tol);
      blk.rz = restricted_action(gen.z, blk.basis, tol);
      blk.rg = restricted_action(g, blk.basis, tol);
    }

    if (k == 2) {
      // Identify the chi_z = +1 block and put it first.
      auto z_is_plus = [&](const Block& blk) {
        return scalar_equals_int(blk.rz.at(0, 0), 1, 0,
                                 std::max(tol, 1e-6));
      };
      if (!z_is_plus(blocks[0])) std::swap(blocks[0], blocks[1]);
      if (!z_is_plus(blocks[0]) || z_is_plus(blocks[1])) continue;

      std::vector<Scalar> primary_eigs =
          distinct_eigenvalues(blocks[0].rg, 2, tol);
      if (primary_eigs.empty()) continue;
      Scalar chi_g = lex_greater(primary_eigs[0], primary_eigs[1])
                         ? primary_eigs[0]
                         : primary_eigs[1];
      blocks[0].chi = {chi_g, blocks[0].rz.at(0, 0)};

      // The partner block carries the negated character.
      Scalar partner = -chi_g;
      std::vector<Scalar> second_eigs =
          distinct_eigenvalues(blocks[1].rg, 2, tol);
      if (second_eigs.empty()) continue;
      bool found = false;
      for (const Scalar& v : second_eigs) {
        if ((v - partner).is_zero(std::max(tol, 1e-6))) {
          found = true;
          break;
        }
      }
      if (!found) {
        partner = lex_greater(second_eigs[0], second_eigs[1])
                      ? second_eigs[0]
                      : second_eigs[1];
      }
      blocks[1].chi = {partner, blocks[1].rz.at(0, 0)};

      // Rebase each block onto {v, x.v} with g v = chi(g) v so the blocks
      // literally equal the induced matrices.
      for (Block& blk : blocks) {
        std::vector<ScalarVec> rows(2);
        for (int i = 0; i < 2; ++i) {
          ScalarVec row(2, Scalar::zero(be));
          for (int j = 0; j < 2; ++j) {
            row[j] = blk.rg.at(i, j);
            if (i == j) row[j] -= blk.chi.chi_g;
          }
          rows[i] = std::move(row);
        }
        auto kern = solve_homogeneous(rows, 2, be, tol);
        if (kern.size() != 1) {
          bad = true;
          break;
        }
        ScalarVec v = kern[0];
        ScalarVec w = matvec(blk.rx, v);
        auto lift = [&](const ScalarVec& coords) {
          ScalarVec out(4, Scalar::zero(be));
          for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 4; ++j) out[j] += coords[i] * blk.basis[i][j];
          }
          return out;
        };
        blk.basis = {lift(v), lift(w)};
      }
      if (bad) continue;
    } else {
      for (Block& blk : blocks) {
        blk.chi = {blk.rg.at(0, 0), blk.rz.at(0, 0)};
      }
      std::sort(blocks.begin(), blocks.end(),
                [](const Block& a, const Block& b) {
                  if (lex_greater(a.chi.chi_z, b.chi.chi_z)) return true;
                  if (lex_greater(b.chi.chi_z, a.chi.chi_z)) return false;
                  return lex_greater(a.chi.chi_g, b.chi.chi_g);
                });
    }

    DecompositionReport report;
    report.basis_change = CMatrix::zeros(4, 4, be);
    int col = 0;
    for (const Block& blk : blocks) {
      report.characters.push_back(blk.chi);
      report.block_dims.push_back(static_cast<int>(blk.basis.size()));
      for (const ScalarVec& v : blk.basis) {
        for (int i = 0; i < 4; ++i) report.basis_change.at(i, col) = v[i];
        ++col;
      }
    }

    const CMatrix u = report.basis_change;
    const CMatrix uinv = u.inverse();
    double residual = 0.0;
    auto conj_residual = [&](const CMatrix& m, int which) {
      CMatrix t = uinv * m * u;
      int off = 0;
      for (size_t bidx = 0; bidx < blocks.size(); ++bidx) {
        const int d = static_cast<int>(blocks[bidx].basis.size());
        // Off-block entries.
        for (int i = 0; i < 4; ++i) {
          for (int j = off; j < off + d; ++j) {
            if (i >= off && i < off + d) continue;
            residual = std::max(residual, t.at(i, j).abs());
          }
        }
        // In-block deviation from the advertised block data.
        if (d == 2) {
          InducedRep ind = induce(blocks[bidx].chi);
          const CMatrix& want = which == 0   ? ind.r_x
                                : which == 1 ? ind.r_y
                                             : ind.r_z;
          for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
              residual = std::max(
                  residual,
                  (t.at(off + i, off + j) - want.at(i, j)).abs());
            }
          }
        } else if (which == 2) {
          residual = std::max(
              residual, (t.at(off, off) - blocks[bidx].chi.chi_z).abs());
        }
        off += d;
      }
    };
    conj_residual(gen.x, 0);
    conj_residual(gen.y, 1);
    conj_residual(gen.z, 2);
    if (k != 2) {
      // One-dimensional blocks: the g scalar must match chi_g.
      CMatrix t = uinv * g * u;
      for (int i = 0; i < 4; ++i) {
        residual = std::max(residual,
                            (t.at(i, i) - report.characters[i].chi_g).abs());
      }
    }
    report.residual = residual;
    return report;
  }
  throw std::runtime_error("degenerate random element");
}

}  // namespace opgraph::rep
