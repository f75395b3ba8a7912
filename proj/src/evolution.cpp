#include "szwalk/evolution.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <functional>

#include "szwalk/io.hpp"
#include "szwalk/kernels.hpp"
#include "szwalk/spectral.hpp"

namespace szwalk {

namespace {

// V f(Lambda) V^* x for a Hermitian eigendecomposition
Eigen::VectorXcd apply_spectral(
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>& es,
    const std::function<cxd(double)>& f, const Eigen::VectorXcd& x) {
  Eigen::VectorXcd y = es.eigenvectors().adjoint() * x;
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) *= f(es.eigenvalues()(i));
  return es.eigenvectors() * y;
}

Eigen::MatrixXcd spectral_matrix(
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>& es,
    const std::function<cxd(double)>& f) {
  const Eigen::Index n = es.eigenvalues().size();
  Eigen::VectorXcd diag(n);
  for (Eigen::Index i = 0; i < n; ++i) diag(i) = f(es.eigenvalues()(i));
  return es.eigenvectors() * diag.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::MatrixXcd mat_pow(Eigen::MatrixXcd base, long e) {
  Eigen::MatrixXcd acc =
      Eigen::MatrixXcd::Identity(base.rows(), base.cols());
  while (e > 0) {
    if (e & 1) acc = acc * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return acc;
}

}  // namespace

std::mt19937_64 seeded_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

Eigen::VectorXcd random_unit_state(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    v(i) = cxd{re, im};
  }
  v /= v.norm();
  return v;
}

ArcState discrete_evolve(const WalkOperators& ops, const ArcState& psi0,
                         double eps, long n_steps) {
  if (n_steps < 0) throw std::invalid_argument("step count must be >= 0");
  if (!(eps >= 0.0 && eps <= 1.0))
    throw std::invalid_argument("mobility parameter must lie in [0,1]");
  if (psi0.size() != ops.num_arcs())
    throw std::invalid_argument("discrete_evolve: dimension mismatch");
  ArcState cur = psi0;
  const double half = eps / 2.0;
  for (long n = 0; n < n_steps; ++n) {
    cur = ops.step(half, cur);
    cur = ops.step(half, cur);
  }
  return cur;
}

ArcState continuous_evolve(const WalkOperators& ops, const ArcState& phi0,
                           double t) {
  if (phi0.size() != ops.num_arcs())
    throw std::invalid_argument("continuous_evolve: dimension mismatch");
  return apply_spectral(
      ops.h_eig(), [t](double lam) { return std::polar(1.0, t * lam); }, phi0);
}

ArcState continuous_evolve_chebyshev(const WalkOperators& ops,
                                     const ArcState& phi0, double t,
                                     double tol) {
  if (t < 0.0)
    throw std::invalid_argument("chebyshev propagation requires t >= 0");
  if (phi0.size() != ops.num_arcs())
    throw std::invalid_argument("continuous_evolve_chebyshev: dimension mismatch");
  if (t == 0.0) return phi0;
  // e^{itH} = J_0(t) + 2 sum_{k>=1} i^k J_k(t) T_k(H), safe since ||H|| <= 1
  const cxd iunit{0.0, 1.0};
  ArcState tkm1 = phi0;            // T_0
  ArcState tk = ops.hamiltonian(phi0);  // T_1
  ArcState acc = std::cyl_bessel_j(0, t) * tkm1 +
                 2.0 * iunit * std::cyl_bessel_j(1, t) * tk;
  cxd phase = iunit;
  int small_run = 0;
  for (int k = 2; k < 20000; ++k) {
    ArcState tkp1 = 2.0 * ops.hamiltonian(tk) - tkm1;
    tkm1.swap(tk);
    tk.swap(tkp1);
    phase *= iunit;
    const double coeff = 2.0 * std::cyl_bessel_j(k, t);
    acc += phase * coeff * tk;
    if (std::abs(coeff) < tol && k > t) {
      if (++small_run >= 3) return acc;
    } else {
      small_run = 0;
    }
  }
  throw std::runtime_error("chebyshev propagation did not converge");
}

Eigen::MatrixXcd exp_tilde_t(const WalkOperators& ops, double t) {
  // Every block of T-tilde is a polynomial in T, so in T's eigenbasis it
  // decouples into 2x2 triangles [[lam, 2 lam^2], [0, -lam]] with closed-form
  // exponential; the off-diagonal divided difference collapses to
  // 2 i lam sin(t lam).
  const auto& es = ops.t_eig();
  const Eigen::Index m = es.eigenvalues().size();
  const cxd iunit{0.0, 1.0};
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(2 * m, 2 * m);
  out.topLeftCorner(m, m) = spectral_matrix(
      es, [t](double lam) { return std::polar(1.0, t * lam); });
  out.bottomRightCorner(m, m) = spectral_matrix(
      es, [t](double lam) { return std::polar(1.0, -t * lam); });
  out.topRightCorner(m, m) = spectral_matrix(es, [t, iunit](double lam) {
    return 2.0 * iunit * lam * std::sin(t * lam);
  });
  return out;
}

ConvergenceRecord convergence_scan(const WalkOperators& ops, double t,
                                   const std::vector<long>& n_values,
                                   ErrorMetric metric, std::uint64_t seed) {
  if (n_values.empty()) throw std::invalid_argument("empty N list");
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (n_values[i] < 1) throw std::invalid_argument("N values must be >= 1");
    if (i > 0 && n_values[i] <= n_values[i - 1])
      throw std::invalid_argument("N values must be strictly increasing");
  }
  if (t < 0.0) throw std::invalid_argument("t must be >= 0");
  if (t > 0.0 && 0.5 * t / static_cast<double>(n_values.front()) > 1.0)
    throw std::invalid_argument("t too large for smallest N: eps/2 > 1");

  ConvergenceRecord rec;
  rec.t = t;
  rec.n_values = n_values;
  rec.metric = metric;
  rec.seed = seed;

  if (t == 0.0) {
    rec.errors.assign(n_values.size(), 0.0);
    rec.exact = true;
    rec.c0_estimate = 0.0;
    return rec;
  }

  if (metric == ErrorMetric::operator_norm) {
    const Eigen::MatrixXcd expm = spectral_matrix(
        ops.h_eig(), [t](double lam) { return std::polar(1.0, t * lam); });
    for (long n : n_values) {
      const double half = 0.5 * t / static_cast<double>(n);
      const Eigen::MatrixXcd u = ops.step_dense(half);
      rec.errors.push_back(operator_norm(expm - mat_pow(u * u, n)));
    }
  } else {
    constexpr int kProbes = 8;
    auto rng = seeded_rng(seed);
    std::vector<ArcState> probes, refs;
    for (int j = 0; j < kProbes; ++j)
      probes.push_back(random_unit_state(ops.num_arcs(), rng));
    for (const auto& p : probes)
      refs.push_back(continuous_evolve_chebyshev(ops, p, t));
    for (long n : n_values) {
      double worst = 0.0;
      const double eps = t / static_cast<double>(n);
      for (int j = 0; j < kProbes; ++j) {
        const ArcState fin = discrete_evolve(ops, probes[j], eps, n);
        worst = std::max(worst, (refs[j] - fin).norm());
      }
      rec.errors.push_back(worst);
    }
  }

  for (std::size_t i = 0; i < n_values.size(); ++i)
    rec.c0_estimate = std::max(
        rec.c0_estimate, static_cast<double>(n_values[i]) * rec.errors[i]);

  bool fittable = n_values.size() >= 2;
  for (double e : rec.errors) fittable = fittable && e > 0.0;
  if (fittable) {
    // least-squares slope of log(error) against log(N)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(n_values.size());
    for (std::size_t i = 0; i < n_values.size(); ++i) {
      const double x = std::log(static_cast<double>(n_values[i]));
      const double y = std::log(rec.errors[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    rec.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  }
  return rec;
}

double vertex_schrodinger_check(const WalkOperators& ops,
                                const VertexState& g0, double t) {
  if (g0.size() != ops.dim_v())
    throw std::invalid_argument("vertex_schrodinger_check: dimension mismatch");
  const VertexState lhs = apply_spectral(
      ops.t_eig(), [t](double lam) { return std::polar(1.0, t * lam); }, g0);
  const VertexState rhs =
      ops.boundary(continuous_evolve(ops, ops.coboundary(g0), t));
  return (lhs - rhs).norm();
}

LaplacianResiduals laplacian_reproduction_check(const WalkOperators& ops,
                                                const VertexState& g0,
                                                double t, long n_steps) {
  if (!ops.coin_family().is_grover)
    throw std::invalid_argument(
        "normalized-Laplacian reproduction requires the Grover coin");
  if (g0.size() != ops.dim_v())
    throw std::invalid_argument("laplacian check: dimension mismatch");
  if (n_steps < 1) throw std::invalid_argument("step count must be >= 1");
  // f_t solves -i df/dt = (T - I) f, so f_t = e^{it(T-I)} g0
  const cxd shrink = std::polar(1.0, -t);
  const VertexState f_exact =
      shrink * apply_spectral(
                   ops.t_eig(),
                   [t](double lam) { return std::polar(1.0, t * lam); }, g0);
  const ArcState lift = ops.coboundary(g0);
  const VertexState via_limit =
      shrink * ops.boundary(continuous_evolve(ops, lift, t));
  const VertexState via_walk =
      shrink *
      ops.boundary(discrete_evolve(ops, lift, t / static_cast<double>(n_steps),
                                   n_steps));
  return {(f_exact - via_limit).norm(), (f_exact - via_walk).norm()};
}

double difference_quotient_check(const WalkOperators& ops, const ArcState& psi,
                                 double eps) {
  if (!(eps > 0.0 && eps <= 0.5))
    throw std::invalid_argument("difference quotient requires 0 < eps <= 0.5");
  if (psi.size() != ops.num_arcs())
    throw std::invalid_argument("difference_quotient_check: dimension mismatch");
  const ArcState stepped = ops.step(eps / 2.0, ops.step(eps / 2.0, psi));
  const cxd minus_i{0.0, -1.0};
  const ArcState quotient = minus_i * (stepped - psi) / eps;
  return (quotient - ops.hamiltonian(psi)).norm();
}

std::string convergence_csv(const ConvergenceRecord& rec) {
  std::ostringstream out;
  out << "N,error,N_error\n";
  for (std::size_t i = 0; i < rec.n_values.size(); ++i) {
    const double err = rec.errors[i];
    out << rec.n_values[i] << ',' << io::fmt_sig(err, io::kCsvSigDigits) << ','
        << io::fmt_sig(static_cast<double>(rec.n_values[i]) * err,
                       io::kCsvSigDigits)
        << '\n';
  }
  return out.str();
}

std::string convergence_json(const ConvergenceRecord& rec) {
  std::ostringstream out;
  io::JsonWriter w(out);
  w.begin_object();
  w.key("graph").value(rec.graph_desc);
  w.key("coin").value(rec.coin_desc);
  w.key("t").value(rec.t);
  w.key("metric").value(rec.metric == ErrorMetric::operator_norm
                            ? "operator_norm"
                            : "state_probe");
  w.key("seed").value(static_cast<unsigned long long>(rec.seed));
  w.key("exact").value(rec.exact);
  w.key("n_values").begin_array();
  for (long n : rec.n_values) w.value(n);
  w.end_array();
  w.key("errors").begin_array();
  for (double e : rec.errors) w.value(e);
  w.end_array();
  w.key("n_times_error").begin_array();
  for (std::size_t i = 0; i < rec.n_values.size(); ++i)
    w.value(static_cast<double>(rec.n_values[i]) * rec.errors[i]);
  w.end_array();
  w.key("slope");
  if (rec.slope)
    w.value(*rec.slope);
  else
    w.null();
  w.key("c0_estimate").value(rec.c0_estimate);
  w.end_object();
  out << '\n';
  return out.str();
}

}  // namespace szwalk
