#include "opgraph/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace opgraph {

namespace {

using cplx = std::complex<double>;
using Dense = std::vector<std::vector<cplx>>;

Dense to_dense(const CMatrix& m) {
  if (m.backend() != Backend::kFloat) {
    throw std::invalid_argument("float eigensolver requires the float backend");
  }
  if (!m.is_square()) {
    throw std::invalid_argument("eigensolver requires a square matrix");
  }
  Dense a(m.rows(), std::vector<cplx>(m.cols()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) a[i][j] = m.at(i, j).to_complex();
  return a;
}

void hessenberg(Dense& a) {
  const int n = static_cast<int>(a.size());
  for (int k = 0; k + 2 < n; ++k) {
    double norm = 0.0;
    for (int i = k + 1; i < n; ++i) norm = std::hypot(norm, std::abs(a[i][k]));
    if (norm < 1e-300) continue;
    cplx x0 = a[k + 1][k];
    cplx alpha = (std::abs(x0) > 0.0) ? -(x0 / std::abs(x0)) * norm
                                      : cplx(-norm, 0.0);
    std::vector<cplx> v(n, 0.0);
    for (int i = k + 1; i < n; ++i) v[i] = a[i][k];
    v[k + 1] -= alpha;
    double vnorm = 0.0;
    for (int i = k + 1; i < n; ++i) vnorm = std::hypot(vnorm, std::abs(v[i]));
    if (vnorm < 1e-300) continue;
    for (int i = k + 1; i < n; ++i) v[i] /= vnorm;

    // A <- P A with P = I - 2 v v*.
    for (int j = 0; j < n; ++j) {
      cplx dot = 0.0;
      for (int i = k + 1; i < n; ++i) dot += std::conj(v[i]) * a[i][j];
      for (int i = k + 1; i < n; ++i) a[i][j] -= 2.0 * v[i] * dot;
    }
    // A <- A P.
    for (int i = 0; i < n; ++i) {
      cplx dot = 0.0;
      for (int j = k + 1; j < n; ++j) dot += a[i][j] * v[j];
      for (int j = k + 1; j < n; ++j) a[i][j] -= 2.0 * dot * std::conj(v[j]);
    }
    a[k + 1][k] = alpha;
    for (int i = k + 2; i < n; ++i) a[i][k] = 0.0;
  }
}

std::pair<cplx, cplx> quadratic_eigs(cplx x, cplx y, cplx z, cplx w) {
  cplx half = (x + w) / 2.0;
  cplx disc = std::sqrt(half * half - (x * w - y * z));
  return {half + disc, half - disc};
}

}  // namespace

std::vector<cplx> float_eigenvalues(const CMatrix& m) {
  const int n = m.rows();
  Dense h = to_dense(m);
  std::vector<cplx> eigs;
  if (n == 0) return eigs;
  if (n == 1) return {h[0][0]};
  hessenberg(h);

  const double kTol = 1e-13;
  int hi = n - 1;
  int iter = 0;
  while (hi >= 0) {
    if (hi == 0) {
      eigs.push_back(h[0][0]);
      break;
    }
    // Zero out negligible subdiagonals, then locate the active block.
    int lo = hi;
    while (lo > 0) {
      double sub = std::abs(h[lo][lo - 1]);
      double local = std::abs(h[lo - 1][lo - 1]) + std::abs(h[lo][lo]);
      if (sub <= kTol * std::max(local, 1e-30)) {
        h[lo][lo - 1] = 0.0;
        break;
      }
      --lo;
    }
    if (lo == hi) {
      eigs.push_back(h[hi][hi]);
      --hi;
      iter = 0;
      continue;
    }
    if (lo == hi - 1) {
      auto [l1, l2] = quadratic_eigs(h[lo][lo], h[lo][hi], h[hi][lo], h[hi][hi]);
      eigs.push_back(l1);
      eigs.push_back(l2);
      hi -= 2;
      iter = 0;
      continue;
    }

    if (++iter > 200) {
      throw std::runtime_error("eigenvalue iteration failed to converge");
    }
    cplx mu;
    if (iter % 12 == 0) {
      mu = h[hi][hi] + std::abs(h[hi][hi - 1]) * cplx(1.0, 0.5);
    } else {
      auto [l1, l2] =
          quadratic_eigs(h[hi - 1][hi - 1], h[hi - 1][hi], h[hi][hi - 1],
                         h[hi][hi]);
      mu = (std::abs(l1 - h[hi][hi]) < std::abs(l2 - h[hi][hi])) ? l1 : l2;
    }

    for (int i = lo; i <= hi; ++i) h[i][i] -= mu;
    // Givens QR of the Hessenberg window, then RQ recombination.
    std::vector<cplx> gc(hi - lo, 0.0), gs(hi - lo, 0.0);
    for (int k = lo; k < hi; ++k) {
      cplx a0 = h[k][k], b0 = h[k + 1][k];
      double r = std::hypot(std::abs(a0), std::abs(b0));
      cplx c = 1.0, s = 0.0;
      if (r > 1e-300) {
        c = std::conj(a0) / r;
        s = std::conj(b0) / r;
      }
      gc[k - lo] = c;
      gs[k - lo] = s;
      for (int j = k; j <= hi; ++j) {
        cplx t1 = h[k][j], t2 = h[k + 1][j];
        h[k][j] = c * t1 + s * t2;
        h[k + 1][j] = -std::conj(s) * t1 + std::conj(c) * t2;
      }
      h[k + 1][k] = 0.0;
    }
    for (int k = lo; k < hi; ++k) {
      cplx c = gc[k - lo], s = gs[k - lo];
      for (int i = lo; i <= std::min(k + 2, hi); ++i) {
        cplx t1 = h[i][k], t2 = h[i][k + 1];
        h[i][k] = t1 * std::conj(c) + t2 * std::conj(s);
        h[i][k + 1] = -t1 * s + t2 * c;
      }
    }
    for (int i = lo; i <= hi; ++i) h[i][i] += mu;
  }
  return eigs;
}

HermitianEigen hermitian_eigen(const CMatrix& m) {
  const int n = m.rows();
  Dense a = to_dense(m);
  Dense v(n, std::vector<cplx>(n, 0.0));
  for (int i = 0; i < n; ++i) v[i][i] = 1.0;

  double norm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) norm = std::max(norm, std::abs(a[i][j]));
  const double stop = 1e-14 * std::max(norm, 1.0);

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off = std::max(off, std::abs(a[i][j]));
    if (off <= stop) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double r = std::abs(a[p][q]);
        if (r <= stop * 1e-2) continue;
        cplx phase = a[p][q] / r;
        double app = a[p][p].real(), aqq = a[q][q].real();
        double tau = (aqq - app) / (2.0 * r);
        double t = (tau >= 0.0) ? -1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                : 1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double sigma = t * c;
        cplx s = sigma * std::conj(phase);
        // Columns p,q: B = A U with U = [[c, -conj(s)], [s, c]].
        for (int i = 0; i < n; ++i) {
          cplx t1 = a[i][p], t2 = a[i][q];
          a[i][p] = c * t1 + s * t2;
          a[i][q] = -std::conj(s) * t1 + c * t2;
        }
        // Rows p,q: A = U* B.
        for (int j = 0; j < n; ++j) {
          cplx t1 = a[p][j], t2 = a[q][j];
          a[p][j] = c * t1 + std::conj(s) * t2;
          a[q][j] = -s * t1 + c * t2;
        }
        a[p][q] = std::conj(a[q][p]);
        for (int i = 0; i < n; ++i) {
          cplx t1 = v[i][p], t2 = v[i][q];
          v[i][p] = c * t1 + s * t2;
          v[i][q] = -std::conj(s) * t1 + c * t2;
        }
      }
    }
  }

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return a[x][x].real() < a[y][y].real(); });

  HermitianEigen out;
  out.values.reserve(n);
  out.vectors.reserve(n);
  for (int k : order) {
    out.values.push_back(a[k][k].real());
    std::vector<cplx> col(n);
    for (int i = 0; i < n; ++i) col[i] = v[i][k];
    out.vectors.push_back(std::move(col));
  }
  return out;
}

std::vector<cplx> cluster_values(const std::vector<cplx>& vals, double tol) {
  std::vector<cplx> reps;
  for (const cplx& v : vals) {
    bool known = false;
    for (const cplx& r : reps) {
      if (std::abs(v - r) <= tol) {
        known = true;
        break;
      }
    }
    if (!known) reps.push_back(v);
  }
  return reps;
}

}  // namespace opgraph
