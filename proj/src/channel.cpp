#include "opgraph/channel.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "opgraph/eigensolve.hpp"

namespace opgraph::chan {

namespace {

void require_input_shape(const KrausChannel& ch, const CMatrix& rho) {
  if (rho.rows() != ch.dim_in || rho.cols() != ch.dim_in) {
    throw std::invalid_argument("matrix dimension mismatch");
  }
  if (rho.backend() != ch.backend()) {
    throw std::invalid_argument("matrix backend mismatch (exact vs float)");
  }
}

CMatrix float_from(const CMatrix& m) {
  return m.backend() == Backend::kFloat ? m : to_float_matrix(m);
}

}  // namespace

KrausChannel make_channel(std::vector<CMatrix> kraus) {
  if (kraus.empty()) {
    throw std::invalid_argument("channel requires at least one Kraus operator");
  }
  const int rows = kraus.front().rows();
  const int cols = kraus.front().cols();
  const Backend be = kraus.front().backend();
  for (const CMatrix& v : kraus) {
    if (v.rows() != rows || v.cols() != cols) {
      throw std::invalid_argument("matrix dimension mismatch");
    }
    if (v.backend() != be) {
      throw std::invalid_argument("matrix backend mismatch (exact vs float)");
    }
  }
  KrausChannel ch;
  ch.dim_in = cols;
  ch.dim_out = rows;
  ch.kraus = std::move(kraus);
  return ch;
}

bool is_trace_preserving(const KrausChannel& ch, double tol) {
  CMatrix acc = CMatrix::zeros(ch.dim_in, ch.dim_in, ch.backend());
  for (const CMatrix& v : ch.kraus) acc = acc + v.adjoint() * v;
  const CMatrix id = CMatrix::identity(ch.dim_in, ch.backend());
  if (ch.backend() == Backend::kExact) return acc == id;
  return max_abs_diff(acc, id) <= tol;
}

KrausChannel random_trace_preserving_channel(int dim_in, int dim_out, int env,
                                             Rng& rng) {
  if (dim_in < 1 || dim_out < 1 || env < 1 || dim_out * env < dim_in) {
    throw std::invalid_argument("matrix dimension mismatch");
  }
  const int total = dim_out * env;
  std::normal_distribution<double> gauss(0.0, 1.0);

  // Random matrix with orthonormalized columns: an isometry C^dim_in into
  // the stacked output-environment space.
  std::vector<ScalarVec> cols;
  for (int c = 0; c < dim_in; ++c) {
    ScalarVec v(static_cast<size_t>(total), Scalar::zero(Backend::kFloat));
    for (int r = 0; r < total; ++r) {
      v[r] = Scalar::floating(gauss(rng.engine()), gauss(rng.engine()));
    }
    for (const ScalarVec& prev : cols) {
      Scalar overlap = Scalar::zero(Backend::kFloat);
      for (int r = 0; r < total; ++r) overlap += prev[r].conj() * v[r];
      for (int r = 0; r < total; ++r) v[r] -= overlap * prev[r];
    }
    double norm2 = 0.0;
    for (int r = 0; r < total; ++r) norm2 += std::norm(v[r].float_value());
    const double norm = std::sqrt(norm2);
    if (norm < 1e-8) {
      // Vanishingly unlikely; resample this column.
      --c;
      continue;
    }
    Scalar inv = Scalar::floating(1.0 / norm, 0.0);
    for (int r = 0; r < total; ++r) v[r] *= inv;
    cols.push_back(std::move(v));
  }

  std::vector<CMatrix> kraus;
  for (int k = 0; k < env; ++k) {
    CMatrix v = CMatrix::zeros(dim_out, dim_in, Backend::kFloat);
    for (int j = 0; j < dim_out; ++j) {
      for (int i = 0; i < dim_in; ++i) {
        v.at(j, i) = cols[i][static_cast<size_t>(k) * dim_out + j];
      }
    }
    kraus.push_back(std::move(v));
  }
  return make_channel(std::move(kraus));
}

CMatrix apply(const KrausChannel& ch, const CMatrix& rho) {
  require_input_shape(ch, rho);
  CMatrix acc = CMatrix::zeros(ch.dim_out, ch.dim_out, ch.backend());
  for (const CMatrix& v : ch.kraus) acc = acc + v * rho * v.adjoint();
  return acc;
}

CMatrix dual(const KrausChannel& ch, const CMatrix& x) {
  if (x.rows() != ch.dim_out || x.cols() != ch.dim_out) {
    throw std::invalid_argument("matrix dimension mismatch");
  }
  if (x.backend() != ch.backend()) {
    throw std::invalid_argument("matrix backend mismatch (exact vs float)");
  }
  CMatrix acc = CMatrix::zeros(ch.dim_in, ch.dim_in, ch.backend());
  for (const CMatrix& v : ch.kraus) acc = acc + v.adjoint() * x * v;
  return acc;
}

CMatrix complementary(const KrausChannel& ch, const CMatrix& rho) {
  require_input_shape(ch, rho);
  const int m = ch.env_dim();
  CMatrix out = CMatrix::zeros(m, m, ch.backend());
  for (int j = 0; j < m; ++j) {
    for (int k = 0; k < m; ++k) {
      out.at(j, k) = (ch.kraus[j] * rho * ch.kraus[k].adjoint()).trace();
    }
  }
  return out;
}

KrausChannel complementary_channel(const KrausChannel& ch) {
  std::vector<CMatrix> ops;
  for (int a = 0; a < ch.dim_out; ++a) {
    CMatrix w = CMatrix::zeros(ch.env_dim(), ch.dim_in, ch.backend());
    for (int j = 0; j < ch.env_dim(); ++j) {
      for (int i = 0; i < ch.dim_in; ++i) {
        w.at(j, i) = ch.kraus[j].at(a, i);
      }
    }
    ops.push_back(std::move(w));
  }
  return make_channel(std::move(ops));
}

KrausChannel pseudo_diagonal(const GramFrame& frame) {
  const int m = static_cast<int>(frame.vectors.size());
  if (m == 0 || frame.gram.rows() != m || frame.gram.cols() != m) {
    throw std::invalid_argument("invalid Gram matrix");
  }
  const int d = static_cast<int>(frame.vectors.front().size());
  for (const ScalarVec& v : frame.vectors) {
    if (static_cast<int>(v.size()) != d) {
      throw std::invalid_argument("invalid frame");
    }
  }

  // Everything runs on floats from here on.
  CMatrix gram = float_from(frame.gram);
  std::vector<ScalarVec> psi;
  for (const ScalarVec& v : frame.vectors) {
    ScalarVec fv;
    for (const Scalar& s : v) fv.push_back(Scalar::floating(s.to_complex()));
    psi.push_back(std::move(fv));
  }

  const double gscale = std::max(1.0, gram.max_abs());
  if (max_abs_diff(gram, gram.adjoint()) > 1e-9 * gscale) {
    throw std::invalid_argument("invalid Gram matrix");
  }
  for (int j = 0; j < m; ++j) {
    if (std::abs(gram.at(j, j).float_value() - 1.0) > 1e-8) {
      throw std::invalid_argument("invalid Gram matrix");
    }
  }
  HermitianEigen geig = hermitian_eigen(gram);
  if (!geig.values.empty() && geig.values.front() < -1e-8 * gscale) {
    throw std::invalid_argument("invalid Gram matrix");
  }

  CMatrix resolution = CMatrix::zeros(d, d, Backend::kFloat);
  for (const ScalarVec& v : psi) {
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        resolution.at(i, j) += v[i] * v[j].conj();
      }
    }
  }
  if (max_abs_diff(resolution, CMatrix::identity(d, Backend::kFloat)) > 1e-8) {
    throw std::invalid_argument("invalid frame");
  }

  // Choi matrix of rho -> sum_{j,k} c_jk <psi_j|rho|psi_k> |j><k|, indexed
  // by (input a, output j).
  const int choi_dim = d * m;
  CMatrix choi = CMatrix::zeros(choi_dim, choi_dim, Backend::kFloat);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      // Phi(|a><b|)[j][k] = c_jk conj(psi_j[a]) psi_k[b].
      for (int j = 0; j < m; ++j) {
        for (int k = 0; k < m; ++k) {
          choi.at(a * m + j, b * m + k) =
              gram.at(j, k) * psi[j][a].conj() * psi[k][b];
        }
      }
    }
  }
  choi = (choi + choi.adjoint()).scaled(Scalar::floating(0.5, 0.0));

  HermitianEigen eig = hermitian_eigen(choi);
  double top = 0.0;
  for (double v : eig.values) top = std::max(top, std::abs(v));
  const double cutoff = 1e-10 * std::max(1.0, top);

  std::vector<CMatrix> kraus;
  for (size_t t = 0; t < eig.values.size(); ++t) {
    if (eig.values[t] <= cutoff) continue;
    const double root = std::sqrt(eig.values[t]);
    CMatrix v = CMatrix::zeros(m, d, Backend::kFloat);
    for (int j = 0; j < m; ++j) {
      for (int a = 0; a < d; ++a) {
        v.at(j, a) = Scalar::floating(root * eig.vectors[t][a * m + j]);
      }
    }
    kraus.push_back(std::move(v));
  }
  if (kraus.empty()) {
    throw std::invalid_argument("invalid Gram matrix");
  }
  return make_channel(std::move(kraus));
}

Subspace nc_graph(const KrausChannel& ch, double tol) {
  std::vector<CMatrix> products;
  for (const CMatrix& a : ch.kraus) {
    for (const CMatrix& b : ch.kraus) {
      products.push_back(a.adjoint() * b);
    }
  }
  return Subspace::span_matrices(products, tol);
}

Subspace graph_via_dual(const KrausChannel& ch, double tol) {
  KrausChannel comp = complementary_channel(ch);
  const int m = ch.env_dim();
  std::vector<CMatrix> images;
  for (int p = 0; p < m; ++p) {
    for (int q = 0; q < m; ++q) {
      CMatrix unit = CMatrix::zeros(m, m, ch.backend());
      unit.at(p, q) = Scalar::one(ch.backend());
      images.push_back(dual(comp, unit));
    }
  }
  return Subspace::span_matrices(images, tol);
}

}  // namespace opgraph::chan
