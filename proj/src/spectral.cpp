#include "szwalk/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "szwalk/io.hpp"

namespace szwalk {

namespace {

constexpr double kClusterTol = 1e-8;
constexpr double kSvdRelTol = 1e-10;

Eigen::MatrixXcd projector(const Eigen::MatrixXcd& q) {
  return q * q.adjoint();
}

double projector_residual(const Eigen::MatrixXcd& q1,
                          const Eigen::MatrixXcd& q2) {
  return (projector(q1) - projector(q2)).norm();  // Frobenius
}

// Orthonormal basis of the column span (tolerant of rank-deficient input).
Eigen::MatrixXcd orthonormalize(const Eigen::MatrixXcd& cols) {
  if (cols.cols() == 0) return cols;
  return range_basis(cols, kSvdRelTol);
}

int mult_at(const std::vector<EigCluster>& clusters, double lambda,
            double tol) {
  int m = 0;
  for (const auto& c : clusters)
    if (std::abs(c.lambda - lambda) <= tol) m += c.mult;
  return m;
}

}  // namespace

double operator_norm(const Eigen::MatrixXcd& m) {
  return m.jacobiSvd().singularValues()(0);
}

Eigen::MatrixXcd null_space_basis(const Eigen::MatrixXcd& m, double rel_tol) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (smax > 0.0 && s(i) > rel_tol * smax) ++rank;
  return svd.matrixV().rightCols(m.cols() - rank);
}

Eigen::MatrixXcd range_basis(const Eigen::MatrixXcd& m, double rel_tol) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (smax > 0.0 && s(i) > rel_tol * smax) ++rank;
  return svd.matrixU().leftCols(rank);
}

BirthSpaces birth_spaces(const WalkOperators& ops) {
  const int n_arcs = ops.num_arcs();
  const auto& d = ops.boundary_dense();
  const auto& so = ops.so_dense();
  const auto& c = ops.coin_dense();
  const Eigen::MatrixXcd eye =
      Eigen::MatrixXcd::Identity(n_arcs, n_arcs);

  Eigen::MatrixXcd stacked(2 * d.rows(), n_arcs);
  stacked << d, d * so;
  BirthSpaces out;
  out.b = {null_space_basis(stacked), "B"};

  Eigen::MatrixXcd plus(2 * n_arcs, n_arcs);
  plus << c + eye, so - eye;
  out.b_plus = {null_space_basis(plus), "B+"};

  Eigen::MatrixXcd minus(2 * n_arcs, n_arcs);
  minus << c + eye, so + eye;
  out.b_minus = {null_space_basis(minus), "B-"};

  if (out.b.dim() != out.b_plus.dim() + out.b_minus.dim())
    throw std::runtime_error("birth space does not split: dim B = " +
                             std::to_string(out.b.dim()) + ", dim B+ = " +
                             std::to_string(out.b_plus.dim()) + ", dim B- = " +
                             std::to_string(out.b_minus.dim()));
  Eigen::MatrixXcd both(n_arcs, out.b.dim());
  both << out.b_plus.q, out.b_minus.q;
  if (projector_residual(out.b.q, orthonormalize(both)) > 1e-8)
    throw std::runtime_error("birth space does not equal B+ (+) B-");
  return out;
}

SubspaceBasis inherited_space(const WalkOperators& ops) {
  return {range_basis(ops.lifted_dense(), kSvdRelTol), "I"};
}

std::vector<EigCluster> cluster_eigenvalues(const Eigen::VectorXd& vals,
                                            double tol) {
  std::vector<double> v(vals.data(), vals.data() + vals.size());
  std::sort(v.begin(), v.end());
  std::vector<EigCluster> out;
  std::size_t i = 0;
  while (i < v.size()) {
    std::size_t j = i + 1;
    double sum = v[i];
    while (j < v.size() && v[j] - v[j - 1] <= tol) sum += v[j++];
    out.push_back({sum / static_cast<double>(j - i), static_cast<int>(j - i)});
    i = j;
  }
  return out;
}

std::vector<EigCluster> predicted_spectrum(const Eigen::VectorXd& eig_t,
                                           int dim_b_plus, int dim_b_minus,
                                           int n_arcs) {
  const auto t_clusters = cluster_eigenvalues(eig_t, kClusterTol);
  auto is_one = [](double x) { return std::abs(x - 1.0) <= kClusterTol; };
  auto is_minus_one = [](double x) { return std::abs(x + 1.0) <= kClusterTol; };

  std::vector<double> candidates;
  for (const auto& c : t_clusters) {
    if (is_one(c.lambda) || is_minus_one(c.lambda)) continue;
    candidates.push_back(c.lambda);
    candidates.push_back(-c.lambda);
  }
  std::sort(candidates.begin(), candidates.end());

  std::vector<EigCluster> out;
  const int m_plus = mult_at(t_clusters, 1.0, kClusterTol) + dim_b_plus;
  const int m_minus = mult_at(t_clusters, -1.0, kClusterTol) + dim_b_minus;
  if (m_minus > 0) out.push_back({-1.0, m_minus});

  std::size_t i = 0;
  while (i < candidates.size()) {
    std::size_t j = i + 1;
    double sum = candidates[i];
    while (j < candidates.size() && candidates[j] - candidates[j - 1] <= kClusterTol)
      sum += candidates[j++];
    const double mu = sum / static_cast<double>(j - i);
    out.push_back({mu, mult_at(t_clusters, mu, kClusterTol) +
                           mult_at(t_clusters, -mu, kClusterTol)});
    i = j;
  }
  if (m_plus > 0) out.push_back({1.0, m_plus});
  std::sort(out.begin(), out.end(),
            [](const EigCluster& a, const EigCluster& b) {
              return a.lambda < b.lambda;
            });

  int total = 0;
  for (const auto& c : out) total += c.mult;
  if (total != n_arcs) {
    std::ostringstream msg;
    msg << "predicted multiplicities sum to " << total << " but |A| = "
        << n_arcs << " (deficit " << n_arcs - total
        << "); ker L accounting is inconsistent";
    throw std::runtime_error(msg.str());
  }
  return out;
}

namespace {

struct FormulaSpace {
  Eigen::MatrixXcd q;  // orthonormal columns of the formula-built eigenspace
};

FormulaSpace build_formula_space(const WalkOperators& ops, double lambda,
                                 const BirthSpaces& bs) {
  const auto& t = ops.discriminant_dense();
  const auto& so = ops.so_dense();
  const Eigen::MatrixXcd dstar = ops.boundary_dense().adjoint();
  const Eigen::MatrixXcd eye_v =
      Eigen::MatrixXcd::Identity(t.rows(), t.cols());
  const Eigen::MatrixXcd eye_a =
      Eigen::MatrixXcd::Identity(so.rows(), so.cols());

  Eigen::MatrixXcd cols;
  if (std::abs(lambda - 1.0) <= kClusterTol ||
      std::abs(lambda + 1.0) <= kClusterTol) {
    const double sgn = lambda > 0 ? 1.0 : -1.0;
    const Eigen::MatrixXcd z = null_space_basis(t - sgn * eye_v, kSvdRelTol);
    const Eigen::MatrixXcd part = so * (dstar * z);
    const Eigen::MatrixXcd& birth = sgn > 0 ? bs.b_plus.q : bs.b_minus.q;
    cols.resize(so.rows(), part.cols() + birth.cols());
    cols << part, birth;
  } else {
    const Eigen::MatrixXcd z1 = null_space_basis(t - lambda * eye_v, kSvdRelTol);
    const Eigen::MatrixXcd z2 = null_space_basis(t + lambda * eye_v, kSvdRelTol);
    const Eigen::MatrixXcd p1 = dstar * z1;
    const Eigen::MatrixXcd p2 = (lambda * eye_a + so) * (dstar * z2);
    cols.resize(so.rows(), p1.cols() + p2.cols());
    cols << p1, p2;
  }
  return {orthonormalize(cols)};
}

}  // namespace

namespace {

EigenspaceCheck eigenspace_check_impl(const WalkOperators& ops, double lambda,
                                      const BirthSpaces& bs) {
  const auto& es = ops.h_eig();
  const auto h_clusters = cluster_eigenvalues(es.eigenvalues(), kClusterTol);
  // locate the numeric cluster for this lambda
  int best = -1;
  double best_gap = 1e-6;  // generous acceptance window around predictions
  int col0 = 0, best_col0 = 0, best_mult = 0;
  for (const auto& c : h_clusters) {
    const double gap = std::abs(c.lambda - lambda);
    if (gap < best_gap) {
      best_gap = gap;
      best = static_cast<int>(&c - h_clusters.data());
      best_col0 = col0;
      best_mult = c.mult;
    }
    col0 += c.mult;
  }
  if (best < 0)
    throw std::invalid_argument("lambda = " + std::to_string(lambda) +
                                " is not in the computed spectrum of H");
  const Eigen::MatrixXcd q_num =
      es.eigenvectors().middleCols(best_col0, best_mult);

  const FormulaSpace fs = build_formula_space(ops, lambda, bs);

  EigenspaceCheck out;
  out.dim_formula = static_cast<int>(fs.q.cols());
  out.dim_numeric = best_mult;
  out.projector_residual = projector_residual(fs.q, q_num);
  out.eigvec_residual = 0.0;
  const auto& h = ops.hamiltonian_dense();
  for (Eigen::Index c = 0; c < fs.q.cols(); ++c)
    out.eigvec_residual = std::max(
        out.eigvec_residual, (h * fs.q.col(c) - lambda * fs.q.col(c)).norm());
  return out;
}

}  // namespace

EigenspaceCheck eigenspace_check(const WalkOperators& ops, double lambda) {
  return eigenspace_check_impl(ops, lambda, birth_spaces(ops));
}

SpectralReport spectrum_report(const WalkOperators& ops) {
  SpectralReport rep;
  rep.n_arcs = ops.num_arcs();
  rep.dim_v = ops.dim_v();

  const auto& h_vals = ops.h_eig().eigenvalues();
  const auto& t_vals = ops.t_eig().eigenvalues();
  rep.eig_h.assign(h_vals.data(), h_vals.data() + h_vals.size());
  rep.eig_t.assign(t_vals.data(), t_vals.data() + t_vals.size());

  rep.bounds_ok = true;
  for (double lam : rep.eig_h)
    if (std::abs(lam) > 1.0 + 1e-10) rep.bounds_ok = false;

  const BirthSpaces bs = birth_spaces(ops);
  const SubspaceBasis inh = inherited_space(ops);
  rep.dim_inherited = inh.dim();
  rep.dim_b_plus = bs.b_plus.dim();
  rep.dim_b_minus = bs.b_minus.dim();
  rep.dims_ok =
      rep.dim_inherited + rep.dim_b_plus + rep.dim_b_minus == rep.n_arcs;
  if (!rep.dims_ok)
    rep.diagnostics.push_back(
        "dim I + dim B+ + dim B- = " +
        std::to_string(rep.dim_inherited + rep.dim_b_plus + rep.dim_b_minus) +
        " does not equal |A| = " + std::to_string(rep.n_arcs));

  std::vector<EigCluster> predicted;
  try {
    predicted =
        predicted_spectrum(t_vals, rep.dim_b_plus, rep.dim_b_minus, rep.n_arcs);
  } catch (const std::exception& e) {
    rep.diagnostics.push_back(e.what());
    rep.pass = false;
    return rep;
  }

  const auto computed = cluster_eigenvalues(h_vals, kClusterTol);
  std::vector<char> consumed(computed.size(), 0);
  rep.multiset_match = true;

  for (const auto& pc : predicted) {
    auto gather = [&](double tol, bool mark) {
      int m = 0;
      for (std::size_t i = 0; i < computed.size(); ++i) {
        if (consumed[i]) continue;
        if (std::abs(computed[i].lambda - pc.lambda) <= tol) {
          m += computed[i].mult;
          if (mark) consumed[i] = 1;
        }
      }
      return m;
    };
    int m = gather(kClusterTol, false);
    double used_tol = kClusterTol;
    if (m != pc.mult) {
      // widen once at cluster boundaries rather than silently absorbing
      const int wide = gather(10 * kClusterTol, false);
      if (wide == pc.mult) {
        used_tol = 10 * kClusterTol;
        m = wide;
      }
    }
    gather(used_tol, true);

    EigenspaceCheck chk;
    double residual = -1.0;
    if (m > 0) {
      chk = eigenspace_check_impl(ops, pc.lambda, bs);
      residual = chk.projector_residual;
      rep.max_residual = std::max(rep.max_residual, chk.projector_residual);
      rep.max_eigvec_residual =
          std::max(rep.max_eigvec_residual, chk.eigvec_residual);
    }
    rep.clusters.push_back({pc.lambda, pc.mult, m, residual});
    if (m != pc.mult) {
      rep.multiset_match = false;
      std::ostringstream msg;
      msg << "eigenvalue " << pc.lambda << ": predicted multiplicity "
          << pc.mult << ", computed " << m;
      rep.diagnostics.push_back(msg.str());
    }
  }
  for (std::size_t i = 0; i < computed.size(); ++i) {
    if (!consumed[i]) {
      rep.multiset_match = false;
      std::ostringstream msg;
      msg << "computed eigenvalue " << computed[i].lambda << " (multiplicity "
          << computed[i].mult << ") is not predicted";
      rep.diagnostics.push_back(msg.str());
    }
  }

  rep.pass = rep.multiset_match && rep.dims_ok && rep.bounds_ok &&
             rep.max_residual < 1e-8 && rep.max_eigvec_residual < 1e-9;
  return rep;
}

double ker_l_structure_check(const WalkOperators& ops) {
  const auto& t = ops.discriminant_dense();
  const auto& l = ops.lifted_dense();
  const auto& tilde = ops.tilde_t_dense();
  const Eigen::Index m = t.rows();
  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(m, m);

  double worst = 0.0;

  // ker L = {(z1 + z-1, -z1 + z-1)}
  {
    const Eigen::MatrixXcd numeric = null_space_basis(l, kSvdRelTol);
    const Eigen::MatrixXcd z1 = null_space_basis(t - eye, kSvdRelTol);
    const Eigen::MatrixXcd zm = null_space_basis(t + eye, kSvdRelTol);
    Eigen::MatrixXcd cols(2 * m, z1.cols() + zm.cols());
    cols.setZero();
    cols.topLeftCorner(m, z1.cols()) = z1;
    cols.bottomLeftCorner(m, z1.cols()) = -z1;
    cols.topRightCorner(m, zm.cols()) = zm;
    cols.bottomRightCorner(m, zm.cols()) = zm;
    worst = std::max(worst, projector_residual(orthonormalize(cols), numeric));
  }

  // ker(T-tilde - lambda) = {(z_lam + lambda z_-lam, z_-lam)}
  Eigen::VectorXd both(2 * m);
  both << ops.t_eig().eigenvalues(), (-ops.t_eig().eigenvalues()).eval();
  for (const auto& c : cluster_eigenvalues(both, kClusterTol)) {
    const double lam = c.lambda;
    const Eigen::MatrixXcd numeric = null_space_basis(
        tilde - lam * Eigen::MatrixXcd::Identity(2 * m, 2 * m), kSvdRelTol);
    const Eigen::MatrixXcd zp = null_space_basis(t - lam * eye, kSvdRelTol);
    const Eigen::MatrixXcd zn = null_space_basis(t + lam * eye, kSvdRelTol);
    Eigen::MatrixXcd cols(2 * m, zp.cols() + zn.cols());
    cols.setZero();
    cols.topLeftCorner(m, zp.cols()) = zp;
    cols.topRightCorner(m, zn.cols()) = lam * zn;
    cols.bottomRightCorner(m, zn.cols()) = zn;
    worst = std::max(worst, projector_residual(orthonormalize(cols), numeric));
  }
  return worst;
}

std::string spectral_report_json(const SpectralReport& rep) {
  std::ostringstream out;
  io::JsonWriter w(out);
  w.begin_object();
  w.key("graph").value(rep.graph_desc);
  w.key("coin").value(rep.coin_desc);
  w.key("n_arcs").value(rep.n_arcs);
  w.key("dim_v").value(rep.dim_v);
  w.key("dim_inherited").value(rep.dim_inherited);
  w.key("dim_birth_plus").value(rep.dim_b_plus);
  w.key("dim_birth_minus").value(rep.dim_b_minus);
  w.key("eig_h").begin_array();
  for (double v : rep.eig_h) w.value(v);
  w.end_array();
  w.key("eig_t").begin_array();
  for (double v : rep.eig_t) w.value(v);
  w.end_array();
  w.key("clusters").begin_array();
  for (const auto& c : rep.clusters) {
    w.begin_object();
    w.key("lambda").value(c.lambda);
    w.key("mult_predicted").value(c.mult_predicted);
    w.key("mult_computed").value(c.mult_computed);
    w.key("residual").value(c.residual);
    w.end_object();
  }
  w.end_array();
  w.key("max_residual").value(rep.max_residual);
  w.key("max_eigvec_residual").value(rep.max_eigvec_residual);
  w.key("multiset_match").value(rep.multiset_match);
  w.key("dims_ok").value(rep.dims_ok);
  w.key("bounds_ok").value(rep.bounds_ok);
  w.key("diagnostics").begin_array();
  for (const auto& d : rep.diagnostics) w.value(d);
  w.end_array();
  w.key("pass").value(rep.pass);
  w.end_object();
  out << '\n';
  return out.str();
}

}  // namespace szwalk
