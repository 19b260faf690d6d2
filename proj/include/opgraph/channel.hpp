#pragma once

#include <vector>

#include "opgraph/matrix.hpp"
#include "opgraph/rng.hpp"
#include "opgraph/scalar.hpp"
#include "opgraph/subspace.hpp"

namespace opgraph::chan {

// Completely positive map in Kraus form: rho -> sum_k V_k rho V_k*.  The
// environment dimension is the number of Kraus operators.
struct KrausChannel {
  int dim_in = 0;
  int dim_out = 0;
  std::vector<CMatrix> kraus;  // each dim_out x dim_in

  int env_dim() const { return static_cast<int>(kraus.size()); }
  Backend backend() const { return kraus.front().backend(); }
};

// Validates shapes and backends (throws std::invalid_argument); trace
// preservation is a property, not a construction requirement.
KrausChannel make_channel(std::vector<CMatrix> kraus);

// sum_k V_k* V_k == I within tol (exactly on the exact backend).
bool is_trace_preserving(const KrausChannel& ch, double tol);

// Haar-flavored random trace-preserving channel: a random isometry from
// C^dim_in into C^dim_out (x) C^env, sliced into env Kraus blocks.  Float
// backend.  Requires dim_out * env >= dim_in.
KrausChannel random_trace_preserving_channel(int dim_in, int dim_out, int env,
                                             Rng& rng);

CMatrix apply(const KrausChannel& ch, const CMatrix& rho);

// Adjoint map x -> sum_k V_k* x V_k with Tr(rho dual(x)) == Tr(apply(rho) x).
CMatrix dual(const KrausChannel& ch, const CMatrix& x);

// Environment-side output: the env_dim x env_dim matrix with (j,k) entry
// Tr(V_j rho V_k*).
CMatrix complementary(const KrausChannel& ch, const CMatrix& rho);

// The complementary map in its own Kraus form: W_a[j][i] = V_j[a][i], one
// operator per output index a.  apply(complementary_channel(ch), rho) agrees
// with complementary(ch, rho).
KrausChannel complementary_channel(const KrausChannel& ch);

// Collection of vectors psi_i resolving the identity together with a Gram
// matrix of unit vectors; defines the map
// rho -> sum_{j,k} c_jk <psi_j|rho|psi_k> |j><k|.
struct GramFrame {
  std::vector<ScalarVec> vectors;  // m vectors of length d
  CMatrix gram;                    // m x m
};

// Realizes the frame's map as a Kraus channel: builds the Choi matrix and
// extracts Kraus operators from its spectral decomposition, truncating
// eigenvalues below 1e-10 relative.  Runs on the float backend; exact input
// is converted.  Throws "invalid Gram matrix" when C is not PSD with unit
// diagonal, "invalid frame" when the vectors do not resolve the identity.
KrausChannel pseudo_diagonal(const GramFrame& frame);

// Non-commutative graph: the span of all products V_j* V_k inside Mat_n
// with n = dim_in.
Subspace nc_graph(const KrausChannel& ch, double tol);

// Same subspace computed the long way around: the dual of the complementary
// channel applied to a basis of environment matrix units.
Subspace graph_via_dual(const KrausChannel& ch, double tol);

}  // namespace opgraph::chan
