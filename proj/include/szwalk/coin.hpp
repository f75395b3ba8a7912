#pragma once

#include <string>
#include <vector>

#include "szwalk/graph.hpp"
#include "szwalk/types.hpp"

namespace szwalk {

// Per-vertex orthonormal families xi_u^(1..p_u) over X_u, stored in canonical
// X_u order. Row j of vertex u starts at xi[xi_offset[u] + j*deg(u)]. The
// flattened (u;j) index space has dimension dim_v(), vertex u occupying
// [v_offset[u], v_offset[u+1]). The per-arc vectors w_a are the conjugated
// columns of the row stack and are derived on the fly.
struct CoinFamily {
  std::vector<int32_t> p;          // rank p_u per vertex
  std::vector<int32_t> v_offset;   // prefix sums of p, size n+1
  std::vector<int32_t> xi_offset;  // start of vertex u's rows, size n+1
  std::vector<cxd> xi;
  // Vertices where p_u == deg(u) with deg > 1: the local coin degenerates to
  // the identity there. Construction succeeds; callers may want to warn.
  std::vector<int32_t> identity_vertices;
  bool is_grover = false;
  std::string kind;  // "grover" | "basis" | "hamiltonian" | "lattice3d"

  int dim_v() const { return v_offset.back(); }
  const cxd* row(const Graph& g, int u, int j) const {
    return xi.data() + xi_offset[u] +
           static_cast<std::size_t>(j) * g.degree(u);
  }
};

CoinFamily grover_coin(const Graph& g);

// Basis-file format, one stanza per vertex:
//   v <u> <p_u>
//   <re,im> ... deg(u) entries     (p_u such rows, canonical X_u order)
// '#' starts a comment. Rows are validated orthonormal within 1e-10.
CoinFamily coin_from_basis(const Graph& g, const std::string& text);

// Coin induced by a symmetric, elementwise-nonnegative, zero-diagonal matrix
// whose support equals the adjacency of g. The resulting discriminant equals
// ham / lambda_max.
CoinFamily coin_from_hamiltonian(const Graph& g, const Eigen::MatrixXd& ham);

// The two-row omega coin on a torus3d graph (p_u = 2 everywhere).
CoinFamily lattice3d_coin(const Graph& g);

// (d psi)(u;j) = <xi_u^(j), psi restricted to X_u>
VertexState boundary_apply(const Graph& g, const CoinFamily& cf,
                           const ArcState& psi);
// (d* f)(a) = <w_a, f[t(a)]>; adjoint of boundary_apply
ArcState coboundary_apply(const Graph& g, const CoinFamily& cf,
                          const VertexState& f);
// C psi with C = 2 d* d - I, applied blockwise
ArcState apply_coin(const Graph& g, const CoinFamily& cf, const ArcState& psi);

Eigen::MatrixXcd coin_dense(const Graph& g, const CoinFamily& cf);
Eigen::MatrixXcd boundary_dense(const Graph& g, const CoinFamily& cf);

}  // namespace szwalk
