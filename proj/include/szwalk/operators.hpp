#pragma once

#include <memory>

#include "szwalk/coin.hpp"

namespace szwalk {

// Above this arc count the dense forms are refused and callers must stay on
// the matrix-free path.
inline constexpr int kDenseArcBudget = 4096;

// [[T, 2T^2], [0, -T]] on the doubled vertex-block space.
Eigen::MatrixXcd tilde_t_from(const Eigen::MatrixXcd& t);

// A graph/coin pair with matrix-free applications of the walk operators and,
// when built with dense support, cached dense forms of S_o, C, d, H, T, L,
// T-tilde plus eigendecompositions of H and T. All caches are populated at
// construction; instances are immutable afterwards and safe to share across
// threads.
class WalkOperators {
 public:
  WalkOperators(Graph g, CoinFamily coin, bool with_dense = true);

  const Graph& graph() const { return graph_; }
  const CoinFamily& coin_family() const { return coin_; }
  int num_arcs() const { return graph_.num_arcs(); }
  int dim_v() const { return coin_.dim_v(); }
  bool has_dense() const { return dense_ != nullptr; }

  // matrix-free applications
  ArcState flip_flop(const ArcState& psi) const;               // S_o
  ArcState shift(double eps, const ArcState& psi) const;       // S(eps)
  ArcState coin(const ArcState& psi) const;                    // C
  ArcState step(double eps, const ArcState& psi) const;        // U(eps)=S(eps)C
  ArcState hamiltonian(const ArcState& psi) const;             // (S_o+CS_oC)/2
  ArcState lifted(const VertexState& f1, const VertexState& f2) const;
  VertexState boundary(const ArcState& psi) const;             // d
  ArcState coboundary(const VertexState& f) const;             // d*

  // dense forms; throw std::runtime_error when built without dense support
  const Eigen::MatrixXcd& so_dense() const;
  const Eigen::MatrixXcd& coin_dense() const;
  const Eigen::MatrixXcd& boundary_dense() const;      // d, dim_v x |A|
  const Eigen::MatrixXcd& hamiltonian_dense() const;   // H
  const Eigen::MatrixXcd& discriminant_dense() const;  // T = d S_o d*
  const Eigen::MatrixXcd& lifted_dense() const;        // L = [d*, S_o d*]
  const Eigen::MatrixXcd& tilde_t_dense() const;
  Eigen::MatrixXcd step_dense(double eps) const;

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>& h_eig() const;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>& t_eig() const;

 private:
  struct DenseCache;
  const DenseCache& dense() const;

  Graph graph_;
  CoinFamily coin_;
  std::shared_ptr<const DenseCache> dense_;
};

}  // namespace szwalk
