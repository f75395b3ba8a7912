#include "szwalk/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "szwalk/kernels.hpp"

namespace szwalk {

namespace {

void check_eps(double eps) {
  if (!(eps >= 0.0 && eps <= 1.0))
    throw std::invalid_argument("mobility parameter must lie in [0,1], got " +
                                std::to_string(eps));
}

}  // namespace

Eigen::MatrixXcd tilde_t_from(const Eigen::MatrixXcd& t) {
  const Eigen::Index m = t.rows();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(2 * m, 2 * m);
  out.topLeftCorner(m, m) = t;
  out.topRightCorner(m, m) = 2.0 * t * t;
  out.bottomRightCorner(m, m) = -t;
  return out;
}

struct WalkOperators::DenseCache {
  Eigen::MatrixXcd so, c, d, h, t, l, tilde_t;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> h_eig, t_eig;
};

WalkOperators::WalkOperators(Graph g, CoinFamily coin, bool with_dense)
    : graph_(std::move(g)), coin_(std::move(coin)) {
  if (static_cast<int>(coin_.p.size()) != graph_.n_vertices)
    throw std::invalid_argument("coin family does not match graph");
  if (!with_dense) return;
  if (graph_.num_arcs() > kDenseArcBudget)
    throw std::invalid_argument(
        "graph has " + std::to_string(graph_.num_arcs()) +
        " arcs, above the dense budget of " + std::to_string(kDenseArcBudget) +
        "; construct with with_dense=false and use the matrix-free path");

  auto cache = std::make_shared<DenseCache>();
  const int n_arcs = graph_.num_arcs();
  cache->so = Eigen::MatrixXcd::Zero(n_arcs, n_arcs);
  for (int a = 0; a < n_arcs; ++a) cache->so(a, graph_.inv[a]) = 1.0;
  cache->c = szwalk::coin_dense(graph_, coin_);
  cache->d = szwalk::boundary_dense(graph_, coin_);
  cache->h = 0.5 * (cache->so + cache->c * cache->so * cache->c);
  cache->t = cache->d * cache->so * cache->d.adjoint();
  const Eigen::MatrixXcd dstar = cache->d.adjoint();
  cache->l = Eigen::MatrixXcd(n_arcs, 2 * coin_.dim_v());
  cache->l << dstar, cache->so * dstar;
  cache->tilde_t = tilde_t_from(cache->t);
  cache->h_eig.compute(cache->h);
  cache->t_eig.compute(cache->t);
  if (cache->h_eig.info() != Eigen::Success ||
      cache->t_eig.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed");
  dense_ = std::move(cache);
}

const WalkOperators::DenseCache& WalkOperators::dense() const {
  if (!dense_)
    throw std::runtime_error(
        "dense operator forms unavailable (built with with_dense=false)");
  return *dense_;
}

ArcState WalkOperators::flip_flop(const ArcState& psi) const {
  if (psi.size() != num_arcs())
    throw std::invalid_argument("flip_flop: dimension mismatch");
  ArcState out(num_arcs());
  kernels::active().permute(out.data(), psi.data(), graph_.inv.data(),
                            static_cast<std::size_t>(num_arcs()));
  return out;
}

ArcState WalkOperators::shift(double eps, const ArcState& psi) const {
  check_eps(eps);
  if (psi.size() != num_arcs())
    throw std::invalid_argument("shift: dimension mismatch");
  ArcState out(num_arcs());
  const cxd c{std::sqrt(1.0 - eps * eps), 0.0};
  const cxd s{0.0, eps};
  kernels::active().permute_axpby(out.data(), psi.data(), graph_.inv.data(), c,
                                  s, static_cast<std::size_t>(num_arcs()));
  return out;
}

ArcState WalkOperators::coin(const ArcState& psi) const {
  return apply_coin(graph_, coin_, psi);
}

ArcState WalkOperators::step(double eps, const ArcState& psi) const {
  return shift(eps, coin(psi));
}

ArcState WalkOperators::hamiltonian(const ArcState& psi) const {
  ArcState so_psi = flip_flop(psi);
  ArcState csc_psi = coin(flip_flop(coin(psi)));
  return 0.5 * (so_psi + csc_psi);
}

ArcState WalkOperators::lifted(const VertexState& f1,
                               const VertexState& f2) const {
  return coboundary(f1) + flip_flop(coboundary(f2));
}

VertexState WalkOperators::boundary(const ArcState& psi) const {
  return boundary_apply(graph_, coin_, psi);
}

ArcState WalkOperators::coboundary(const VertexState& f) const {
  return coboundary_apply(graph_, coin_, f);
}

const Eigen::MatrixXcd& WalkOperators::so_dense() const { return dense().so; }
const Eigen::MatrixXcd& WalkOperators::coin_dense() const { return dense().c; }
const Eigen::MatrixXcd& WalkOperators::boundary_dense() const {
  return dense().d;
}
const Eigen::MatrixXcd& WalkOperators::hamiltonian_dense() const {
  return dense().h;
}
const Eigen::MatrixXcd& WalkOperators::discriminant_dense() const {
  return dense().t;
}
const Eigen::MatrixXcd& WalkOperators::lifted_dense() const {
  return dense().l;
}
const Eigen::MatrixXcd& WalkOperators::tilde_t_dense() const {
  return dense().tilde_t;
}

Eigen::MatrixXcd WalkOperators::step_dense(double eps) const {
  check_eps(eps);
  const auto& dc = dense();
  const int n_arcs = num_arcs();
  Eigen::MatrixXcd s =
      std::sqrt(1.0 - eps * eps) *
          Eigen::MatrixXcd::Identity(n_arcs, n_arcs) +
      cxd{0.0, 1.0} * eps * dc.so;
  return s * dc.c;
}

const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>& WalkOperators::h_eig()
    const {
  return dense().h_eig;
}
const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>& WalkOperators::t_eig()
    const {
  return dense().t_eig;
}

}  // namespace szwalk
