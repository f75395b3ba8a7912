#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>
#include <sstream>

#include "szwalk/coin.hpp"
#include "szwalk/evolution.hpp"
#include "szwalk/operators.hpp"
#include "szwalk/spectral.hpp"

using namespace szwalk;

namespace {

const cxd kOmega = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

// Assembles C directly from the projector formula as an oracle for apply_coin
// and coin_dense.
Eigen::MatrixXcd coin_oracle(const Graph& g, const CoinFamily& cf) {
  const int n_arcs = g.num_arcs();
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n_arcs, n_arcs);
  for (int u = 0; u < g.n_vertices; ++u) {
    const int deg = g.degree(u), off = g.x_offset[u];
    Eigen::MatrixXcd pi = Eigen::MatrixXcd::Zero(deg, deg);
    for (int j = 0; j < cf.p[u]; ++j) {
      Eigen::VectorXcd xi(deg);
      for (int k = 0; k < deg; ++k) xi(k) = cf.row(g, u, j)[k];
      pi += xi * xi.adjoint();
    }
    c.block(off, off, deg, deg) =
        2.0 * pi - Eigen::MatrixXcd::Identity(deg, deg);
  }
  return c;
}

void check_coisometry(const Graph& g, const CoinFamily& cf) {
  WalkOperators ops(g, cf);
  const int m = cf.dim_v();
  const auto& d = ops.boundary_dense();
  CHECK(operator_norm(d * d.adjoint() -
                      Eigen::MatrixXcd::Identity(m, m)) < 1e-12);
  const auto& c = ops.coin_dense();
  const Eigen::MatrixXcd eye =
      Eigen::MatrixXcd::Identity(g.num_arcs(), g.num_arcs());
  CHECK(operator_norm(c - (2.0 * d.adjoint() * d - eye)) < 1e-12);
  CHECK(operator_norm(c * c - eye) < 1e-12);
  CHECK(operator_norm(c - c.adjoint()) < 1e-12);
}

}  // namespace

TEST_CASE("grover coin rows") {
  const Graph k3 = complete_graph(3);
  const CoinFamily cf = grover_coin(k3);
  for (int u = 0; u < 3; ++u) {
    CHECK(cf.p[u] == 1);
    CHECK(cf.row(k3, u, 0)[0].real() ==
          doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(cf.row(k3, u, 0)[1].real() ==
          doctest::Approx(1.0 / std::sqrt(2.0)));
  }

  const Graph p2 = path_graph(2);
  const CoinFamily leaf = grover_coin(p2);
  CHECK(leaf.row(p2, 0, 0)[0] == cxd{1.0, 0.0});
  CHECK(leaf.row(p2, 1, 0)[0] == cxd{1.0, 0.0});
  CHECK(max_abs(coin_dense(p2, leaf) - Eigen::MatrixXcd::Identity(2, 2)) ==
        0.0);

  const Graph star = star_graph(3);
  const CoinFamily sc = grover_coin(star);
  for (int k = 0; k < 3; ++k)
    CHECK(sc.row(star, 0, 0)[k].real() ==
          doctest::Approx(1.0 / std::sqrt(3.0)));
}

TEST_CASE("grover blocks match the closed form") {
  // Gr(3) on the star center
  const Graph star = star_graph(3);
  WalkOperators ops(star, grover_coin(star));
  const auto& c = ops.coin_dense();
  Eigen::MatrixXcd gr3(3, 3);
  gr3 << -1.0 / 3, 2.0 / 3, 2.0 / 3, 2.0 / 3, -1.0 / 3, 2.0 / 3, 2.0 / 3,
      2.0 / 3, -1.0 / 3;
  CHECK(max_abs(c.block(star.x_offset[0], star.x_offset[0], 3, 3) - gr3) <
        1e-15);

  // Gr(2) on a cycle vertex
  const Graph c3 = cycle_graph(3);
  WalkOperators ops3(c3, grover_coin(c3));
  Eigen::MatrixXcd gr2(2, 2);
  gr2 << 0, 1, 1, 0;
  CHECK(max_abs(ops3.coin_dense().block(0, 0, 2, 2) - gr2) < 1e-15);
}

TEST_CASE("basis file reproduces grover") {
  const Graph k3 = complete_graph(3);
  const double r = 1.0 / std::sqrt(2.0);
  std::ostringstream file;
  file.precision(17);
  for (int u = 0; u < 3; ++u)
    file << "v " << u << " 1\n" << r << ",0 " << r << ",0\n";
  const CoinFamily cf = coin_from_basis(k3, file.str());
  const CoinFamily gr = grover_coin(k3);
  for (std::size_t i = 0; i < cf.xi.size(); ++i)
    CHECK(std::abs(cf.xi[i] - gr.xi[i]) == 0.0);
  CHECK_FALSE(cf.is_grover);  // provenance differs, data identical
}

TEST_CASE("basis file: identity coin is flagged, reflection row is exact") {
  const Graph p3 = path_graph(3);  // middle vertex has degree 2
  // vertex 1 gets the full basis -> C_1 = I, flagged
  const std::string text =
      "v 0 1\n1,0\n"
      "v 1 2\n1,0 0,0\n0,0 1,0\n"
      "v 2 1\n1,0\n";
  const CoinFamily cf = coin_from_basis(p3, text);
  REQUIRE(cf.identity_vertices.size() == 1);
  CHECK(cf.identity_vertices[0] == 1);
  const Eigen::MatrixXcd c = coin_dense(p3, cf);
  CHECK(max_abs(c - Eigen::MatrixXcd::Identity(4, 4)) < 1e-15);

  // single row (1/sqrt2)[1,-1] at the middle vertex
  const double r = 1.0 / std::sqrt(2.0);
  std::ostringstream f2;
  f2.precision(17);
  f2 << "v 0 1\n1,0\nv 1 1\n" << r << ",0 " << -r << ",0\nv 2 1\n1,0\n";
  const CoinFamily cf2 = coin_from_basis(p3, f2.str());
  Eigen::MatrixXcd expect(2, 2);
  expect << 0, -1, -1, 0;
  const Eigen::MatrixXcd block =
      coin_dense(p3, cf2).block(p3.x_offset[1], p3.x_offset[1], 2, 2);
  CHECK(max_abs(block - expect) < 1e-12);
  // oracle: 2 xi xi* - I computed directly
  Eigen::VectorXcd xi(2);
  xi << r, -r;
  CHECK(max_abs(block - (2.0 * xi * xi.adjoint() -
                         Eigen::MatrixXcd::Identity(2, 2))) < 1e-12);
}

TEST_CASE("basis file rejections") {
  const Graph p3 = path_graph(3);
  // non-orthonormal rows: error names the vertex and the residual
  const std::string bad =
      "v 0 1\n1,0\n"
      "v 1 2\n1,0 0,0\n0.5,0 0.8,0\n"
      "v 2 1\n1,0\n";
  CHECK_THROWS_WITH_AS(coin_from_basis(p3, bad),
                       doctest::Contains("vertex 1"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(coin_from_basis(p3, bad),
                       doctest::Contains("Gram residual"),
                       std::invalid_argument);
  // wrong row length
  const std::string short_row = "v 0 1\n1,0\nv 1 1\n1,0\nv 2 1\n1,0\n";
  CHECK_THROWS_WITH_AS(coin_from_basis(p3, short_row),
                       doctest::Contains("degree"), std::invalid_argument);
  // missing stanza
  CHECK_THROWS_WITH_AS(coin_from_basis(p3, "v 0 1\n1,0\nv 1 2\n1,0 0,0\n0,0 1,0\n"),
                       doctest::Contains("missing"), std::invalid_argument);
  // rank above degree
  CHECK_THROWS_AS(
      coin_from_basis(p3, "v 0 2\n1,0\n0,0\nv 1 1\n1,0 0,0\nv 2 1\n1,0\n"),
      std::invalid_argument);
  // malformed token
  CHECK_THROWS_AS(
      coin_from_basis(p3, "v 0 1\nfoo\nv 1 1\n1,0 0,0\nv 2 1\n1,0\n"),
      std::invalid_argument);
}

TEST_CASE("hamiltonian coin on P2") {
  const Graph p2 = path_graph(2);
  Eigen::MatrixXd ham(2, 2);
  ham << 0, 1, 1, 0;
  const CoinFamily cf = coin_from_hamiltonian(p2, ham);
  CHECK(std::abs(cf.xi[0] - cxd{1.0, 0.0}) < 1e-12);
  CHECK(std::abs(cf.xi[1] - cxd{1.0, 0.0}) < 1e-12);
  WalkOperators ops(p2, cf);
  Eigen::MatrixXcd t_expect(2, 2);
  t_expect << 0, 1, 1, 0;  // lambda_max = 1, T = ham
  CHECK(max_abs(ops.discriminant_dense() - t_expect) < 1e-12);
}

TEST_CASE("hamiltonian coin on K3 reproduces the grover discriminant") {
  const Graph k3 = complete_graph(3);
  Eigen::MatrixXd ham(3, 3);
  ham << 0, 1, 1, 1, 0, 1, 1, 1, 0;  // lambda_max = 2, Perron uniform
  WalkOperators hops(k3, coin_from_hamiltonian(k3, ham));
  WalkOperators gops(k3, grover_coin(k3));
  CHECK(max_abs(hops.discriminant_dense() - gops.discriminant_dense()) <
        1e-12);
  CHECK(max_abs(hops.discriminant_dense() -
                Eigen::MatrixXcd((ham / 2.0).cast<cxd>())) < 1e-10);
}

TEST_CASE("hamiltonian coin rejections") {
  const Graph k3 = complete_graph(3);
  Eigen::MatrixXd neg(3, 3);
  neg << 0, -1, 1, -1, 0, 1, 1, 1, 0;
  CHECK_THROWS_WITH_AS(coin_from_hamiltonian(k3, neg),
                       doctest::Contains("negative"), std::invalid_argument);
  Eigen::MatrixXd miss(3, 3);
  miss << 0, 1, 0, 1, 0, 1, 0, 1, 0;  // edge {0,2} missing from support
  CHECK_THROWS_WITH_AS(coin_from_hamiltonian(k3, miss),
                       doctest::Contains("support"), std::invalid_argument);
  Eigen::MatrixXd asym(3, 3);
  asym << 0, 1, 2, 1, 0, 1, 1, 1, 0;
  CHECK_THROWS_AS(coin_from_hamiltonian(k3, asym), std::invalid_argument);
  Eigen::MatrixXd diag(3, 3);
  diag << 1, 1, 1, 1, 0, 1, 1, 1, 0;
  CHECK_THROWS_AS(coin_from_hamiltonian(k3, diag), std::invalid_argument);
}

TEST_CASE("lattice3d coin: w vectors, coin block, discriminant blocks") {
  const Graph g = torus3d(3);
  const CoinFamily cf = lattice3d_coin(g);
  const double r6 = 1.0 / std::sqrt(6.0);

  // w_a = conjugated column of the row stack; compare against the published
  // direction-resolved values
  for (int a = 0; a < g.num_arcs(); ++a) {
    const int u = g.arc_terminus[a];
    const int k = a - g.x_offset[u];
    const cxd w1 = std::conj(cf.row(g, u, 0)[k]);
    const cxd w2 = std::conj(cf.row(g, u, 1)[k]);
    switch (std::abs(static_cast<int>(g.arc_dir[a]))) {
      case 1:
        CHECK(std::abs(w1 - r6) < 1e-15);
        CHECK(std::abs(w2 - r6) < 1e-15);
        break;
      case 2:
        CHECK(std::abs(w1 - r6 * kOmega * kOmega) < 1e-15);
        CHECK(std::abs(w2 - r6 * kOmega) < 1e-15);
        break;
      case 3:
        CHECK(std::abs(w1 - r6 * kOmega) < 1e-15);
        CHECK(std::abs(w2 - r6 * kOmega * kOmega) < 1e-15);
        break;
      default:
        FAIL("unlabeled arc");
    }
  }

  // C_x = -sigma Gr(6): entry (a,b) = [dir(b) == -dir(a)] - 1/3
  const Eigen::MatrixXcd c = coin_dense(g, cf);
  for (int u = 0; u < g.n_vertices; ++u) {
    const int off = g.x_offset[u];
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) {
        const double swap =
            g.arc_dir[off + i] == -g.arc_dir[off + j] ? 1.0 : 0.0;
        CHECK(std::abs(c(off + i, off + j) - (swap - 1.0 / 3.0)) < 1e-12);
      }
  }
  check_coisometry(g, cf);

  // discriminant blocks: movement weights along each axis
  WalkOperators ops(g, cf);
  const auto& t = ops.discriminant_dense();
  const int m = g.torus_side;
  auto vid = [m](int x, int y, int z) {
    return ((x % m + m) % m) + m * (((y % m + m) % m) + m * ((z % m + m) % m));
  };
  Eigen::Matrix2cd w1m, w2m, w3m;
  w1m << 1, 1, 1, 1;
  w2m << 1, kOmega, kOmega * kOmega, 1;
  w3m << 1, kOmega * kOmega, kOmega, 1;
  w1m /= 6.0;
  w2m /= 6.0;
  w3m /= 6.0;
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y)
      for (int z = 0; z < m; ++z) {
        const int v = vid(x, y, z);
        auto block = [&](int u) {
          return Eigen::Matrix2cd(
              t.block(cf.v_offset[v], cf.v_offset[u], 2, 2));
        };
        CHECK(max_abs(block(vid(x - 1, y, z)) - w1m) < 1e-12);
        CHECK(max_abs(block(vid(x + 1, y, z)) - w1m) < 1e-12);
        CHECK(max_abs(block(vid(x, y - 1, z)) - w2m) < 1e-12);
        CHECK(max_abs(block(vid(x, y + 1, z)) - w2m) < 1e-12);
        CHECK(max_abs(block(vid(x, y, z - 1)) - w3m) < 1e-12);
        CHECK(max_abs(block(vid(x, y, z + 1)) - w3m) < 1e-12);
      }

  CHECK_THROWS_AS(lattice3d_coin(cycle_graph(4)), std::invalid_argument);
}

TEST_CASE("boundary and coboundary") {
  const Graph k3 = complete_graph(3);
  const CoinFamily cf = grover_coin(k3);

  // psi = xi_u embedded on X_u -> d psi = delta_u
  for (int u = 0; u < 3; ++u) {
    ArcState psi = ArcState::Zero(6);
    for (int k = 0; k < k3.degree(u); ++k)
      psi(k3.x_offset[u] + k) = cf.row(k3, u, 0)[k];
    const VertexState f = boundary_apply(k3, cf, psi);
    for (int v = 0; v < 3; ++v)
      CHECK(std::abs(f(v) - (v == u ? 1.0 : 0.0)) < 1e-14);
  }

  // psi orthogonal to every xi_u -> d psi = 0
  ArcState anti = ArcState::Zero(6);
  anti(k3.x_offset[0]) = 1.0 / std::sqrt(2.0);
  anti(k3.x_offset[0] + 1) = -1.0 / std::sqrt(2.0);
  CHECK(boundary_apply(k3, cf, anti).norm() < 1e-14);

  // P2: deg-1 vertices, delta_a -> delta_{t(a)}
  const Graph p2 = path_graph(2);
  const CoinFamily pcf = grover_coin(p2);
  ArcState da = ArcState::Zero(2);
  da(0) = 1.0;
  const VertexState dres = boundary_apply(p2, pcf, da);
  CHECK(std::abs(dres(p2.arc_terminus[0]) - 1.0) < 1e-15);

  // grover coboundary of a vertex delta spreads uniformly over X_u
  VertexState delta0 = VertexState::Zero(3);
  delta0(1) = 1.0;
  const ArcState lift = coboundary_apply(k3, cf, delta0);
  for (int a = 0; a < 6; ++a) {
    const double expect =
        k3.arc_terminus[a] == 1 ? 1.0 / std::sqrt(2.0) : 0.0;
    CHECK(std::abs(lift(a) - expect) < 1e-15);
  }

  // d d* = I and adjointness on random data
  auto rng = seeded_rng(kDefaultSeed);
  for (int rep = 0; rep < 5; ++rep) {
    const VertexState f = random_unit_state(3, rng);
    CHECK((boundary_apply(k3, cf, coboundary_apply(k3, cf, f)) - f).norm() <
          1e-13);
    const ArcState psi = random_unit_state(6, rng);
    const cxd lhs = boundary_apply(k3, cf, psi).dot(f);  // <d psi, f>
    const cxd rhs = psi.dot(coboundary_apply(k3, cf, f));
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }

  CHECK_THROWS_AS(boundary_apply(k3, cf, ArcState::Zero(5)),
                  std::invalid_argument);
  CHECK_THROWS_AS(coboundary_apply(k3, cf, VertexState::Zero(4)),
                  std::invalid_argument);
}

TEST_CASE("apply_coin equals dense coin for every family") {
  auto rng = seeded_rng(1234);
  const Graph graphs[] = {path_graph(4), cycle_graph(5), complete_graph(4),
                          star_graph(3)};
  for (const Graph& g : graphs) {
    std::vector<CoinFamily> coins;
    coins.push_back(grover_coin(g));
    Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(g.n_vertices, g.n_vertices);
    for (auto [u, v] : g.edges) adj(u, v) = adj(v, u) = 1.0;
    coins.push_back(coin_from_hamiltonian(g, adj));
    // a genuinely complex rank-1 family (not closed under conjugation)
    {
      std::ostringstream file;
      file.precision(17);
      for (int u = 0; u < g.n_vertices; ++u) {
        file << "v " << u << " 1\n";
        const int deg = g.degree(u);
        for (int k = 0; k < deg; ++k) {
          const cxd z =
              std::polar(1.0 / std::sqrt(double(deg)),
                         2.0 * std::numbers::pi * (k + 1) / (deg + 2));
          file << z.real() << ',' << z.imag() << (k + 1 < deg ? " " : "\n");
        }
      }
      coins.push_back(coin_from_basis(g, file.str()));
    }
    for (const CoinFamily& cf : coins) {
      const Eigen::MatrixXcd oracle = coin_oracle(g, cf);
      CHECK(max_abs(coin_dense(g, cf) - oracle) < 1e-14);
      const ArcState psi = random_unit_state(g.num_arcs(), rng);
      CHECK((apply_coin(g, cf, psi) - oracle * psi).norm() < 1e-13);
      check_coisometry(g, cf);
    }
  }
}
