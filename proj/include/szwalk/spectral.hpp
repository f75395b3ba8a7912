#pragma once

#include <string>
#include <vector>

#include "szwalk/operators.hpp"

namespace szwalk {

struct SubspaceBasis {
  Eigen::MatrixXcd q;  // orthonormal columns
  std::string label;
  int dim() const { return static_cast<int>(q.cols()); }
};

// Largest singular value.
double operator_norm(const Eigen::MatrixXcd& m);

// Orthonormal basis of ker(m) / range(m) by singular-value thresholding at
// rel_tol * sigma_max.
Eigen::MatrixXcd null_space_basis(const Eigen::MatrixXcd& m,
                                  double rel_tol = 1e-10);
Eigen::MatrixXcd range_basis(const Eigen::MatrixXcd& m,
                             double rel_tol = 1e-10);

struct BirthSpaces {
  SubspaceBasis b;        // ker(d) /\ ker(d S_o)
  SubspaceBasis b_plus;   // ker(C+1) /\ ker(S_o-1)
  SubspaceBasis b_minus;  // ker(C+1) /\ ker(S_o+1)
};
// Verifies B = B+ (+) B- before returning.
BirthSpaces birth_spaces(const WalkOperators& ops);

// Orthonormal basis of range(L) = d*V + S_o d*V.
SubspaceBasis inherited_space(const WalkOperators& ops);

struct EigCluster {
  double lambda;
  int mult;
};
std::vector<EigCluster> cluster_eigenvalues(const Eigen::VectorXd& vals,
                                            double tol = 1e-8);

// Multiplicity rule: M(lambda) = M_T(lambda) + M_T(-lambda) away from +-1,
// M(+-1) = M_T(+-1) + dim B_+-. Throws when the total does not add up to
// n_arcs (a ker-L accounting bug).
std::vector<EigCluster> predicted_spectrum(const Eigen::VectorXd& eig_t,
                                           int dim_b_plus, int dim_b_minus,
                                           int n_arcs);

struct EigenspaceCheck {
  double projector_residual;  // ||P_formula - P_numeric||_F
  double eigvec_residual;     // max ||H v - lambda v|| over formula vectors
  int dim_formula;
  int dim_numeric;
};
EigenspaceCheck eigenspace_check(const WalkOperators& ops, double lambda);

struct ClusterRow {
  double lambda;
  int mult_predicted;
  int mult_computed;
  double residual;  // projector residual for this cluster
};

struct SpectralReport {
  int n_arcs = 0;
  int dim_v = 0;
  int dim_inherited = 0;
  int dim_b_plus = 0;
  int dim_b_minus = 0;
  std::vector<double> eig_h;  // ascending
  std::vector<double> eig_t;  // ascending
  std::vector<ClusterRow> clusters;
  double max_residual = 0.0;
  double max_eigvec_residual = 0.0;
  bool multiset_match = false;
  bool dims_ok = false;
  bool bounds_ok = false;  // all |lambda| <= 1 + 1e-10
  bool pass = false;
  std::vector<std::string> diagnostics;
  std::string graph_desc;
  std::string coin_desc;
};

SpectralReport spectrum_report(const WalkOperators& ops);
std::string spectral_report_json(const SpectralReport& rep);

// Verifies the null-space parametrizations of L and of (T-tilde - lambda);
// returns the max projector residual over all checks.
double ker_l_structure_check(const WalkOperators& ops);

}  // namespace szwalk
