// Command-line front end: build graphs and coins, run walks, measure the
// discrete-to-continuous convergence, and verify the spectral structure.
// Exit status encodes scientific pass/fail (0 pass, 1 fail, 2 usage error).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "szwalk/evolution.hpp"
#include "szwalk/io.hpp"
#include "szwalk/spectral.hpp"

namespace {

using namespace szwalk;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Config {
  std::string graph;
  int size = 0;
  std::string coin;
  double t = 1.0;
  bool t_given = false;
  double eps = -1.0;
  long steps = -1;
  std::string n_list;
  std::string state;
  std::uint64_t seed = kDefaultSeed;
  std::string out;
  std::string format = "both";
  std::string metric = "norm";
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spill(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write file: " + path);
  out << content;
}

Eigen::MatrixXd read_matrix(const std::string& path) {
  std::istringstream in(slurp(path));
  int n = 0;
  if (!(in >> n) || n < 1)
    throw std::invalid_argument("matrix file must start with the dimension");
  Eigen::MatrixXd m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (!(in >> m(r, c)))
        throw std::invalid_argument("matrix file truncated at row " +
                                    std::to_string(r));
  return m;
}

bool is_builtin(const std::string& name) {
  return name == "path" || name == "cycle" || name == "complete" ||
         name == "star" || name == "torus3d";
}

Graph build_graph(const Config& cfg, std::string& desc) {
  if (cfg.graph.empty()) throw std::invalid_argument("--graph is required");
  if (is_builtin(cfg.graph)) {
    if (cfg.size < 1)
      throw std::invalid_argument("builtin graph '" + cfg.graph +
                                  "' requires --size");
    desc = cfg.graph + "(" + std::to_string(cfg.size) + ")";
    if (cfg.graph == "path") return path_graph(cfg.size);
    if (cfg.graph == "cycle") return cycle_graph(cfg.size);
    if (cfg.graph == "complete") return complete_graph(cfg.size);
    if (cfg.graph == "star") return star_graph(cfg.size);
    return torus3d(cfg.size);
  }
  desc = "edge-list:" + cfg.graph;
  return parse_edge_list(slurp(cfg.graph));
}

CoinFamily build_coin(const Config& cfg, const Graph& g, std::string& desc) {
  if (cfg.coin.empty())
    throw std::invalid_argument("--coin is required (grover, lattice3d, "
                                "basis:<file>, hamiltonian:<file>)");
  desc = cfg.coin;
  if (cfg.coin == "grover") return grover_coin(g);
  if (cfg.coin == "lattice3d") return lattice3d_coin(g);
  if (cfg.coin.rfind("basis:", 0) == 0)
    return coin_from_basis(g, slurp(cfg.coin.substr(6)));
  if (cfg.coin.rfind("hamiltonian:", 0) == 0)
    return coin_from_hamiltonian(g, read_matrix(cfg.coin.substr(12)));
  throw std::invalid_argument("unknown coin kind: " + cfg.coin);
}

std::vector<long> parse_n_list(const std::string& s) {
  std::vector<long> out;
  std::istringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stol(tok));
  }
  if (out.empty()) throw std::invalid_argument("--n-list is empty");
  return out;
}

ArcState build_state(const Config& cfg, const WalkOperators& ops) {
  const std::string& s = cfg.state;
  if (s.empty())
    throw std::invalid_argument(
        "--state is required (arc:<i>, vertex:<u>, file:<path>)");
  if (s.rfind("arc:", 0) == 0) {
    const int a = std::stoi(s.substr(4));
    if (a < 0 || a >= ops.num_arcs())
      throw std::invalid_argument("arc index out of range");
    ArcState psi = ArcState::Zero(ops.num_arcs());
    psi(a) = 1.0;
    return psi;
  }
  if (s.rfind("vertex:", 0) == 0) {
    const int u = std::stoi(s.substr(7));
    if (u < 0 || u >= ops.graph().n_vertices)
      throw std::invalid_argument("vertex index out of range");
    VertexState f = VertexState::Zero(ops.dim_v());
    f(ops.coin_family().v_offset[u]) = 1.0;  // d* lift of the vertex delta
    return ops.coboundary(f);
  }
  if (s.rfind("file:", 0) == 0) {
    std::istringstream in(slurp(s.substr(5)));
    std::vector<cxd> amps;
    std::string line;
    while (std::getline(in, line)) {
      if (auto pos = line.find('#'); pos != std::string::npos) line.resize(pos);
      std::istringstream ls(line);
      std::string tok;
      if (!(ls >> tok)) continue;
      const auto comma = tok.find(',');
      if (comma == std::string::npos)
        throw std::invalid_argument("state file: expected 're,im' per line");
      amps.emplace_back(std::stod(tok.substr(0, comma)),
                        std::stod(tok.substr(comma + 1)));
    }
    if (static_cast<int>(amps.size()) != ops.num_arcs())
      throw std::invalid_argument(
          "state file has " + std::to_string(amps.size()) +
          " amplitudes, graph has " + std::to_string(ops.num_arcs()) +
          " arcs");
    return Eigen::Map<const ArcState>(amps.data(), amps.size());
  }
  throw std::invalid_argument("unknown state spec: " + s);
}

void emit(const Config& cfg, const std::string& content) {
  if (cfg.out.empty())
    std::cout << content;
  else
    spill(cfg.out, content);
}

int cmd_info(const Config& cfg) {
  std::string gdesc, cdesc;
  Graph g = build_graph(cfg, gdesc);
  CoinFamily cf = build_coin(cfg, g, cdesc);
  std::cout << "graph: " << gdesc << "\n";
  std::cout << "coin: " << cdesc << "\n";
  std::cout << "vertices: " << g.n_vertices << "\n";
  std::cout << "arcs: " << g.num_arcs() << "\n";
  std::cout << "edges: " << g.num_edges() << "\n";
  std::cout << "degrees:";
  if (g.n_vertices <= 64) {
    for (int u = 0; u < g.n_vertices; ++u) std::cout << ' ' << g.degree(u);
  } else {
    int dmin = g.degree(0), dmax = g.degree(0);
    for (int u = 0; u < g.n_vertices; ++u) {
      dmin = std::min(dmin, g.degree(u));
      dmax = std::max(dmax, g.degree(u));
    }
    std::cout << " min " << dmin << " max " << dmax;
  }
  std::cout << "\n";
  std::cout << "dim_v (sum p_u): " << cf.dim_v() << "\n";
  if (!cf.identity_vertices.empty()) {
    std::cout << "identity-coin vertices:";
    for (int u : cf.identity_vertices) std::cout << ' ' << u;
    std::cout << "\n";
  }
  if (g.num_arcs() <= kDenseArcBudget) {
    WalkOperators ops(std::move(g), std::move(cf));
    const auto bs = birth_spaces(ops);
    std::cout << "dim_inherited: " << inherited_space(ops).dim() << "\n";
    std::cout << "dim_birth_plus: " << bs.b_plus.dim() << "\n";
    std::cout << "dim_birth_minus: " << bs.b_minus.dim() << "\n";
  } else {
    std::cout << "(dense budget exceeded; subspace dimensions skipped)\n";
  }
  return kExitPass;
}

int cmd_converge(const Config& cfg) {
  std::string gdesc, cdesc;
  Graph g = build_graph(cfg, gdesc);
  CoinFamily cf = build_coin(cfg, g, cdesc);
  const auto ns = parse_n_list(cfg.n_list);
  const auto metric = cfg.metric == "probe" ? ErrorMetric::state_probe
                                            : ErrorMetric::operator_norm;
  const bool need_dense = metric == ErrorMetric::operator_norm;
  if (need_dense && g.num_arcs() > kDenseArcBudget) {
    std::cerr << "error: " << g.num_arcs()
              << " arcs exceed the dense budget; rerun with --metric probe\n";
    return kExitUsage;
  }
  WalkOperators ops(std::move(g), std::move(cf), need_dense);
  ConvergenceRecord rec = convergence_scan(ops, cfg.t, ns, metric, cfg.seed);
  rec.graph_desc = gdesc;
  rec.coin_desc = cdesc;

  if (cfg.out.empty()) {
    std::cout << convergence_json(rec);
  } else if (cfg.format == "csv") {
    spill(cfg.out, convergence_csv(rec));
  } else if (cfg.format == "json") {
    spill(cfg.out, convergence_json(rec));
  } else {
    spill(cfg.out + ".csv", convergence_csv(rec));
    spill(cfg.out + ".json", convergence_json(rec));
  }

  if (rec.exact) return kExitPass;
  if (!rec.slope) {
    std::cerr << "warning: slope omitted (need >= 2 N values with nonzero "
                 "errors)\n";
    return kExitPass;
  }
  const bool ok = *rec.slope >= -1.3 && *rec.slope <= -0.8;
  if (!ok)
    std::cerr << "slope " << *rec.slope << " outside [-1.3, -0.8]\n";
  return ok ? kExitPass : kExitFail;
}

int cmd_spectrum(const Config& cfg) {
  std::string gdesc, cdesc;
  Graph g = build_graph(cfg, gdesc);
  CoinFamily cf = build_coin(cfg, g, cdesc);
  WalkOperators ops(std::move(g), std::move(cf));
  SpectralReport rep = spectrum_report(ops);
  rep.graph_desc = gdesc;
  rep.coin_desc = cdesc;
  emit(cfg, spectral_report_json(rep));
  if (!rep.pass && !cfg.out.empty())
    for (const auto& d : rep.diagnostics) std::cerr << d << "\n";
  return rep.pass ? kExitPass : kExitFail;
}

int cmd_evolve(const Config& cfg) {
  std::string gdesc, cdesc;
  Graph g = build_graph(cfg, gdesc);
  CoinFamily cf = build_coin(cfg, g, cdesc);
  const bool discrete = cfg.steps >= 0;
  const bool continuous = cfg.t_given;
  if (!discrete && !continuous)
    throw std::invalid_argument("nothing to do: pass --steps and/or --t");
  const bool with_dense = continuous;
  if (with_dense && g.num_arcs() > kDenseArcBudget)
    throw std::invalid_argument(
        "continuous evolution needs dense forms; graph exceeds the budget");
  WalkOperators ops(std::move(g), std::move(cf), with_dense);
  const ArcState psi0 = build_state(cfg, ops);

  double eps = cfg.eps;
  if (discrete && eps < 0.0) {
    if (cfg.steps == 0)
      eps = 0.0;  // no step is applied
    else if (continuous)
      eps = cfg.t / static_cast<double>(cfg.steps);
    else
      throw std::invalid_argument(
          "--steps needs --eps (or --t to derive eps = t/N)");
  }

  std::optional<ArcState> psi_d, psi_c;
  if (discrete) psi_d = discrete_evolve(ops, psi0, eps, cfg.steps);
  if (continuous) psi_c = continuous_evolve(ops, psi0, cfg.t);

  std::ostringstream out;
  io::JsonWriter w(out);
  w.begin_object();
  w.key("graph").value(gdesc);
  w.key("coin").value(cdesc);
  w.key("state").value(cfg.state);
  w.key("n_arcs").value(ops.num_arcs());
  auto dump = [&w](const char* name, const std::optional<ArcState>& s) {
    w.key(name);
    if (!s) {
      w.null();
      return;
    }
    w.begin_array();
    for (Eigen::Index i = 0; i < s->size(); ++i) {
      w.begin_array();
      w.value((*s)(i).real());
      w.value((*s)(i).imag());
      w.end_array();
    }
    w.end_array();
  };
  if (discrete) {
    w.key("steps").value(cfg.steps);
    w.key("eps").value(eps);
  }
  if (continuous) w.key("t").value(cfg.t);
  dump("discrete", psi_d);
  dump("continuous", psi_c);
  if (psi_d && psi_c) {
    const Eigen::VectorXd diff = (*psi_d - *psi_c).cwiseAbs();
    w.key("per_arc_diff").begin_array();
    for (Eigen::Index i = 0; i < diff.size(); ++i) w.value(diff(i));
    w.end_array();
    w.key("max_abs_diff").value(diff.maxCoeff());
  }
  w.end_object();
  out << '\n';
  emit(cfg, out.str());
  return kExitPass;
}

int cmd_verify(const Config& cfg) {
  std::string gdesc, cdesc;
  Graph g = build_graph(cfg, gdesc);
  CoinFamily cf = build_coin(cfg, g, cdesc);
  WalkOperators ops(std::move(g), std::move(cf));
  const int n_arcs = ops.num_arcs();
  const int m = ops.dim_v();
  const Eigen::MatrixXcd eye_a = Eigen::MatrixXcd::Identity(n_arcs, n_arcs);
  const Eigen::MatrixXcd eye_v = Eigen::MatrixXcd::Identity(m, m);
  const auto& so = ops.so_dense();
  const auto& c = ops.coin_dense();
  const auto& d = ops.boundary_dense();
  const auto& h = ops.hamiltonian_dense();
  const auto& t = ops.discriminant_dense();
  const auto& l = ops.lifted_dense();
  const auto& tt = ops.tilde_t_dense();
  const Eigen::MatrixXcd dstar = d.adjoint();

  int failures = 0;
  auto check = [&](const std::string& name, double value, double tol) {
    const bool ok = value < tol;
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << " = "
              << io::fmt_sig(value, 3) << " (tol " << io::fmt_sig(tol, 3)
              << ")\n";
    if (!ok) ++failures;
  };

  check("||d d* - I||", operator_norm(d * dstar - eye_v), 1e-12);
  check("||C - (2 d* d - I)||",
        operator_norm(c - (2.0 * dstar * d - eye_a)), 1e-12);
  check("||C^2 - I||", operator_norm(c * c - eye_a), 1e-12);
  check("||S_o^2 - I||", operator_norm(so * so - eye_a), 1e-12);
  for (double eps : {0.0, 0.1, 0.5, 1.0}) {
    const Eigen::MatrixXcd u = ops.step_dense(eps);
    check("||U(" + std::to_string(eps) + ")* U - I||",
          operator_norm(u.adjoint() * u - eye_a), 1e-12);
  }
  check("||H|| - 1 (clamped at 0)",
        std::max(0.0, operator_norm(h) - 1.0), 1e-12);
  check("||H L - L Ttilde||", operator_norm(h * l - l * tt), 1e-11);
  check("||H d* - d* T||", operator_norm(h * dstar - dstar * t), 1e-11);
  check("||d H - T d||", operator_norm(d * h - t * d), 1e-11);
  check("||H S_o d* - (2 d* T^2 - S_o d* T)||",
        operator_norm(h * so * dstar -
                      (2.0 * dstar * t * t - so * dstar * t)),
        1e-11);

  const double tval = cfg.t_given ? cfg.t : 1.0;
  {
    const auto& es = ops.h_eig();
    Eigen::VectorXcd phases(n_arcs);
    for (int i = 0; i < n_arcs; ++i)
      phases(i) = std::polar(1.0, tval * es.eigenvalues()(i));
    const Eigen::MatrixXcd expm = es.eigenvectors() * phases.asDiagonal() *
                                  es.eigenvectors().adjoint();
    check("||e^{itH} L - L e^{it Ttilde}||",
          operator_norm(expm * l - l * exp_tilde_t(ops, tval)), 1e-10);
  }

  const auto bs = birth_spaces(ops);
  const auto inh = inherited_space(ops);
  std::cout << "dim I = " << inh.dim() << ", dim B+ = " << bs.b_plus.dim()
            << ", dim B- = " << bs.b_minus.dim() << " (|A| = " << n_arcs
            << ")\n";
  if (inh.dim() + bs.b.dim() != n_arcs) {
    std::cout << "[FAIL] dim I + dim B != |A|\n";
    ++failures;
  } else {
    std::cout << "[PASS] dim I + dim B == |A|\n";
  }

  auto rng = seeded_rng(cfg.seed);
  auto leakage = [&](const Eigen::MatrixXcd& in_basis,
                     const Eigen::MatrixXcd& out_basis) {
    Eigen::VectorXcd coeff = random_unit_state(in_basis.cols(), rng);
    ArcState phi = in_basis * coeff;
    phi /= phi.norm();
    const ArcState evolved = continuous_evolve(ops, phi, tval);
    const ArcState stepped = ops.step(0.3, phi);
    return std::max((out_basis.adjoint() * evolved).norm(),
                    (out_basis.adjoint() * stepped).norm());
  };
  check("inherited-subspace leakage", leakage(inh.q, bs.b.q), 1e-10);
  if (bs.b.dim() > 0) {
    check("birth-subspace leakage", leakage(bs.b.q, inh.q), 1e-10);
    double worst = 0.0;
    for (int i = 0; i < bs.b_plus.dim(); ++i)
      worst = std::max(worst,
                       (h * bs.b_plus.q.col(i) - bs.b_plus.q.col(i)).norm());
    for (int i = 0; i < bs.b_minus.dim(); ++i)
      worst = std::max(
          worst, (h * bs.b_minus.q.col(i) + bs.b_minus.q.col(i)).norm());
    check("||H b -+ b|| on birth eigenvectors", worst, 1e-10);
  }
  check("ker-L structure residual", ker_l_structure_check(ops), 1e-8);

  std::cout << (failures == 0 ? "VERIFY PASS" : "VERIFY FAIL") << "\n";
  return failures == 0 ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"epsilon-Szegedy quantum walk simulator and verifier"};
  app.require_subcommand(1);
  Config cfg;

  auto add_common = [&cfg](CLI::App* sub) {
    sub->add_option("--graph", cfg.graph,
                    "builtin (path|cycle|complete|star|torus3d) or edge-list "
                    "file");
    sub->add_option("--size", cfg.size, "size for builtin graphs");
    sub->add_option("--coin", cfg.coin,
                    "grover | lattice3d | basis:<file> | hamiltonian:<file>");
    sub->add_option("--seed", cfg.seed, "RNG seed");
    sub->add_option("--out", cfg.out, "output path (stdout if omitted)");
  };

  CLI::App* info = app.add_subcommand("info", "print structural quantities");
  add_common(info);

  CLI::App* conv = app.add_subcommand(
      "converge", "measure || e^{itH} - U(t/2N)^{2N} || over an N list");
  add_common(conv);
  auto* conv_t = conv->add_option("--t", cfg.t, "evolution time");
  conv->add_option("--n-list", cfg.n_list, "comma-separated step counts")
      ->required();
  conv->add_option("--format", cfg.format, "csv | json | both");
  conv->add_option("--metric", cfg.metric,
                   "norm (dense operator norm) | probe (seeded states)");

  CLI::App* spec = app.add_subcommand("spectrum",
                                      "verify the spectral structure of H");
  add_common(spec);

  CLI::App* evo = app.add_subcommand("evolve", "run the walk and dump states");
  add_common(evo);
  auto* evo_t = evo->add_option("--t", cfg.t, "continuous evolution time");
  evo->add_option("--steps", cfg.steps, "discrete step count");
  evo->add_option("--eps", cfg.eps, "mobility parameter for discrete steps");
  evo->add_option("--state", cfg.state, "arc:<i> | vertex:<u> | file:<path>");

  CLI::App* ver = app.add_subcommand(
      "verify", "coisometry, intertwining and invariant-subspace suite");
  add_common(ver);
  auto* ver_t = ver->add_option("--t", cfg.t, "time for dynamic checks");

  CLI11_PARSE(app, argc, argv);
  cfg.t_given = (conv_t && conv_t->count() > 0) ||
                (evo_t && evo_t->count() > 0) || (ver_t && ver_t->count() > 0);

  try {
    if (*info) return cmd_info(cfg);
    if (*conv) return cmd_converge(cfg);
    if (*spec) return cmd_spectrum(cfg);
    if (*evo) return cmd_evolve(cfg);
    if (*ver) return cmd_verify(cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
