#include "szwalk/coin.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "szwalk/kernels.hpp"

namespace szwalk {

namespace {

constexpr double kGramTol = 1e-10;

CoinFamily make_layout(const Graph& g, const std::vector<int32_t>& p) {
  CoinFamily cf;
  cf.p = p;
  const int n = g.n_vertices;
  cf.v_offset.assign(n + 1, 0);
  cf.xi_offset.assign(n + 1, 0);
  for (int u = 0; u < n; ++u) {
    cf.v_offset[u + 1] = cf.v_offset[u] + p[u];
    cf.xi_offset[u + 1] = cf.xi_offset[u] + p[u] * g.degree(u);
  }
  cf.xi.assign(cf.xi_offset[n], cxd{0.0, 0.0});
  for (int u = 0; u < n; ++u)
    if (p[u] == g.degree(u) && g.degree(u) > 1) cf.identity_vertices.push_back(u);
  return cf;
}

void check_orthonormal(const Graph& g, const CoinFamily& cf, int u,
                       double tol) {
  const int deg = g.degree(u);
  double worst = 0.0;
  for (int i = 0; i < cf.p[u]; ++i)
    for (int j = i; j < cf.p[u]; ++j) {
      cxd gram = 0.0;
      const cxd* ri = cf.row(g, u, i);
      const cxd* rj = cf.row(g, u, j);
      for (int k = 0; k < deg; ++k) gram += std::conj(ri[k]) * rj[k];
      worst = std::max(worst, std::abs(gram - (i == j ? 1.0 : 0.0)));
    }
  if (worst > tol) {
    std::ostringstream msg;
    msg << "vertex " << u << ": rows are not orthonormal (Gram residual "
        << worst << ")";
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

CoinFamily grover_coin(const Graph& g) {
  CoinFamily cf = make_layout(g, std::vector<int32_t>(g.n_vertices, 1));
  for (int u = 0; u < g.n_vertices; ++u) {
    const double w = 1.0 / std::sqrt(static_cast<double>(g.degree(u)));
    cxd* r = cf.xi.data() + cf.xi_offset[u];
    for (int k = 0; k < g.degree(u); ++k) r[k] = w;
  }
  cf.is_grover = true;
  cf.kind = "grover";
  return cf;
}

CoinFamily coin_from_basis(const Graph& g, const std::string& text) {
  const int n = g.n_vertices;
  std::vector<int32_t> p(n, 0);
  std::vector<std::vector<cxd>> rows(n);
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  int current = -1, rows_needed = 0;

  auto parse_cplx = [&](const std::string& tok) {
    const auto comma = tok.find(',');
    std::size_t used = 0;
    try {
      if (comma == std::string::npos) {
        double re = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return cxd{re, 0.0};
      }
      double re = std::stod(tok.substr(0, comma), &used);
      if (used != comma) throw std::invalid_argument(tok);
      double im = std::stod(tok.substr(comma + 1), &used);
      if (used != tok.size() - comma - 1) throw std::invalid_argument(tok);
      return cxd{re, im};
    } catch (const std::exception&) {
      throw std::invalid_argument("basis file line " + std::to_string(line_no) +
                                  ": bad complex token '" + tok + "'");
    }
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (auto pos = line.find('#'); pos != std::string::npos) line.resize(pos);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "v") {
      if (rows_needed != 0)
        throw std::invalid_argument("basis file line " +
                                    std::to_string(line_no) +
                                    ": previous vertex stanza incomplete");
      int u, pu;
      if (!(ls >> u >> pu))
        throw std::invalid_argument("basis file line " +
                                    std::to_string(line_no) +
                                    ": expected 'v <vertex> <rank>'");
      if (u < 0 || u >= n)
        throw std::invalid_argument("basis file line " +
                                    std::to_string(line_no) +
                                    ": vertex id out of range");
      if (p[u] != 0)
        throw std::invalid_argument("basis file line " +
                                    std::to_string(line_no) +
                                    ": duplicate stanza for vertex " +
                                    std::to_string(u));
      if (pu < 1 || pu > g.degree(u))
        throw std::invalid_argument(
            "basis file line " + std::to_string(line_no) + ": rank " +
            std::to_string(pu) + " invalid for vertex of degree " +
            std::to_string(g.degree(u)));
      p[u] = pu;
      current = u;
      rows_needed = pu;
      continue;
    }
    if (rows_needed == 0)
      throw std::invalid_argument("basis file line " + std::to_string(line_no) +
                                  ": row outside a vertex stanza");
    std::vector<cxd> row;
    row.push_back(parse_cplx(tok));
    while (ls >> tok) row.push_back(parse_cplx(tok));
    if (static_cast<int>(row.size()) != g.degree(current))
      throw std::invalid_argument(
          "basis file line " + std::to_string(line_no) + ": vertex " +
          std::to_string(current) + " row has " + std::to_string(row.size()) +
          " entries, degree is " + std::to_string(g.degree(current)));
    rows[current].insert(rows[current].end(), row.begin(), row.end());
    --rows_needed;
  }
  if (rows_needed != 0)
    throw std::invalid_argument("basis file ends mid-stanza");
  for (int u = 0; u < n; ++u)
    if (p[u] == 0)
      throw std::invalid_argument("basis file missing stanza for vertex " +
                                  std::to_string(u));

  CoinFamily cf = make_layout(g, p);
  for (int u = 0; u < n; ++u)
    std::copy(rows[u].begin(), rows[u].end(), cf.xi.begin() + cf.xi_offset[u]);
  for (int u = 0; u < n; ++u) check_orthonormal(g, cf, u, kGramTol);
  cf.kind = "basis";
  return cf;
}

CoinFamily coin_from_hamiltonian(const Graph& g, const Eigen::MatrixXd& ham) {
  const int n = g.n_vertices;
  if (ham.rows() != n || ham.cols() != n)
    throw std::invalid_argument("hamiltonian size does not match graph");
  const double scale = std::max(1.0, ham.cwiseAbs().maxCoeff());
  if ((ham - ham.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("hamiltonian is not symmetric");
  if (ham.minCoeff() < 0.0)
    throw std::invalid_argument("hamiltonian has a negative entry");
  for (int u = 0; u < n; ++u)
    if (ham(u, u) != 0.0)
      throw std::invalid_argument("hamiltonian has a nonzero diagonal entry");
  // support pattern must be exactly the adjacency
  Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(n, n);
  for (auto [u, v] : g.edges) adj(u, v) = adj(v, u) = 1.0;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if ((ham(u, v) > 0.0) != (adj(u, v) > 0.0))
        throw std::invalid_argument(
            "hamiltonian support does not match the graph adjacency at (" +
            std::to_string(u) + "," + std::to_string(v) + ")");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ham);
  const double lambda_max = es.eigenvalues()(n - 1);
  Eigen::VectorXd nu = es.eigenvectors().col(n - 1);
  if (nu.sum() < 0.0) nu = -nu;
  if (nu.minCoeff() <= 0.0)
    throw std::runtime_error("Perron vector is not strictly positive");

  CoinFamily cf = make_layout(g, std::vector<int32_t>(n, 1));
  for (int u = 0; u < n; ++u) {
    cxd* r = cf.xi.data() + cf.xi_offset[u];
    for (int k = 0; k < g.degree(u); ++k) {
      const int a = g.x_offset[u] + k;
      const int o = g.arc_origin[a];
      r[k] = std::sqrt(ham(u, o) * nu(o) / nu(u)) / std::sqrt(lambda_max);
    }
    double norm = 0.0;
    for (int k = 0; k < g.degree(u); ++k) norm += std::norm(r[k]);
    if (std::abs(norm - 1.0) > kGramTol)
      throw std::runtime_error("induced coin row at vertex " +
                               std::to_string(u) + " is not unit norm");
  }
  cf.kind = "hamiltonian";
  return cf;
}

CoinFamily lattice3d_coin(const Graph& g) {
  if (g.torus_side < 3)
    throw std::invalid_argument("lattice3d coin requires a torus3d graph");
  const cxd omega = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  const cxd omega2 = std::conj(omega);
  const double w = 1.0 / std::sqrt(6.0);
  CoinFamily cf = make_layout(g, std::vector<int32_t>(g.n_vertices, 2));
  for (int u = 0; u < g.n_vertices; ++u) {
    cxd* r1 = cf.xi.data() + cf.xi_offset[u];
    cxd* r2 = r1 + g.degree(u);
    for (int k = 0; k < g.degree(u); ++k) {
      const int a = g.x_offset[u] + k;
      switch (std::abs(static_cast<int>(g.arc_dir[a]))) {
        case 1:
          r1[k] = w;
          r2[k] = w;
          break;
        case 2:
          r1[k] = w * omega;
          r2[k] = w * omega2;
          break;
        case 3:
          r1[k] = w * omega2;
          r2[k] = w * omega;
          break;
        default:
          throw std::invalid_argument("torus graph lacks direction labels");
      }
    }
  }
  cf.kind = "lattice3d";
  return cf;
}

VertexState boundary_apply(const Graph& g, const CoinFamily& cf,
                           const ArcState& psi) {
  if (psi.size() != g.num_arcs())
    throw std::invalid_argument("boundary_apply: state has dimension " +
                                std::to_string(psi.size()) + ", expected " +
                                std::to_string(g.num_arcs()));
  const auto& K = kernels::active();
  VertexState out(cf.dim_v());
  for (int u = 0; u < g.n_vertices; ++u) {
    const cxd* blk = psi.data() + g.x_offset[u];
    for (int j = 0; j < cf.p[u]; ++j)
      out(cf.v_offset[u] + j) = K.dotc(cf.row(g, u, j), blk, g.degree(u));
  }
  return out;
}

ArcState coboundary_apply(const Graph& g, const CoinFamily& cf,
                          const VertexState& f) {
  if (f.size() != cf.dim_v())
    throw std::invalid_argument("coboundary_apply: state has dimension " +
                                std::to_string(f.size()) + ", expected " +
                                std::to_string(cf.dim_v()));
  const auto& K = kernels::active();
  ArcState out = ArcState::Zero(g.num_arcs());
  for (int u = 0; u < g.n_vertices; ++u) {
    cxd* blk = out.data() + g.x_offset[u];
    for (int j = 0; j < cf.p[u]; ++j)
      K.axpy(blk, f(cf.v_offset[u] + j), cf.row(g, u, j), g.degree(u));
  }
  return out;
}

ArcState apply_coin(const Graph& g, const CoinFamily& cf, const ArcState& psi) {
  if (psi.size() != g.num_arcs())
    throw std::invalid_argument("apply_coin: dimension mismatch");
  const auto& K = kernels::active();
  ArcState out(g.num_arcs());
  if (cf.is_grover) {
    K.grover_reflect(out.data(), psi.data(), g.x_offset.data(),
                     static_cast<std::size_t>(g.n_vertices));
    return out;
  }
  for (int u = 0; u < g.n_vertices; ++u) {
    const int deg = g.degree(u);
    const cxd* in_blk = psi.data() + g.x_offset[u];
    cxd* out_blk = out.data() + g.x_offset[u];
    for (int k = 0; k < deg; ++k) out_blk[k] = -in_blk[k];
    for (int j = 0; j < cf.p[u]; ++j) {
      const cxd y = K.dotc(cf.row(g, u, j), in_blk, deg);
      K.axpy(out_blk, 2.0 * y, cf.row(g, u, j), deg);
    }
  }
  return out;
}

Eigen::MatrixXcd coin_dense(const Graph& g, const CoinFamily& cf) {
  const int n_arcs = g.num_arcs();
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n_arcs, n_arcs);
  for (int u = 0; u < g.n_vertices; ++u) {
    const int deg = g.degree(u), off = g.x_offset[u];
    // rows of K_u are the conjugated families, so K_u* K_u = sum_j xi xi*
    Eigen::MatrixXcd k(cf.p[u], deg);
    for (int j = 0; j < cf.p[u]; ++j)
      for (int a = 0; a < deg; ++a) k(j, a) = std::conj(cf.row(g, u, j)[a]);
    c.block(off, off, deg, deg) =
        2.0 * k.adjoint() * k - Eigen::MatrixXcd::Identity(deg, deg);
  }
  return c;
}

Eigen::MatrixXcd boundary_dense(const Graph& g, const CoinFamily& cf) {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(cf.dim_v(), g.num_arcs());
  for (int u = 0; u < g.n_vertices; ++u)
    for (int j = 0; j < cf.p[u]; ++j)
      for (int a = 0; a < g.degree(u); ++a)
        d(cf.v_offset[u] + j, g.x_offset[u] + a) =
            std::conj(cf.row(g, u, j)[a]);
  return d;
}

}  // namespace szwalk
