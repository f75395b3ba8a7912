#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "szwalk/operators.hpp"

namespace szwalk {

enum class ErrorMetric { operator_norm, state_probe };

struct ConvergenceRecord {
  double t = 0.0;
  std::vector<long> n_values;
  std::vector<double> errors;        // || e^{itH} - U(t/2N)^{2N} || per N
  std::optional<double> slope;       // log-log fit; absent if undefined
  double c0_estimate = 0.0;          // max over N of N*error
  bool exact = false;                // t == 0 short-circuit
  ErrorMetric metric = ErrorMetric::operator_norm;
  std::uint64_t seed = kDefaultSeed;
  std::string graph_desc;
  std::string coin_desc;
};

std::string convergence_csv(const ConvergenceRecord& rec);
std::string convergence_json(const ConvergenceRecord& rec);

// N applications of U(eps/2)^2, matrix-free.
ArcState discrete_evolve(const WalkOperators& ops, const ArcState& psi0,
                         double eps, long n_steps);

// e^{itH} phi0 via the cached Hermitian eigendecomposition of H.
ArcState continuous_evolve(const WalkOperators& ops, const ArcState& phi0,
                           double t);

// e^{itH} phi0 via a Chebyshev/Bessel expansion (valid because ||H|| <= 1);
// fully matrix-free, used as the continuous reference in state-probe mode.
// Requires t >= 0.
ArcState continuous_evolve_chebyshev(const WalkOperators& ops,
                                     const ArcState& phi0, double t,
                                     double tol = 1e-14);

// exp(it T-tilde) assembled blockwise from the eigendecomposition of T.
Eigen::MatrixXcd exp_tilde_t(const WalkOperators& ops, double t);

ConvergenceRecord convergence_scan(
    const WalkOperators& ops, double t, const std::vector<long>& n_values,
    ErrorMetric metric = ErrorMetric::operator_norm,
    std::uint64_t seed = kDefaultSeed);

// || e^{itT} g0 - d e^{itH} d* g0 ||
double vertex_schrodinger_check(const WalkOperators& ops,
                                const VertexState& g0, double t);

struct LaplacianResiduals {
  double exact;     // || f_t - e^{-it} d e^{itH} d* g0 ||
  double finite_n;  // || f_t - e^{-it} d psi_N ||
};
// f_t = e^{it(T-I)} g0; requires a Grover coin.
LaplacianResiduals laplacian_reproduction_check(const WalkOperators& ops,
                                                const VertexState& g0,
                                                double t, long n_steps);

// || -i (U(eps/2)^2 psi - psi)/eps - H psi ||, 0 < eps <= 0.5
double difference_quotient_check(const WalkOperators& ops, const ArcState& psi,
                                 double eps);

std::mt19937_64 seeded_rng(std::uint64_t seed);
Eigen::VectorXcd random_unit_state(int dim, std::mt19937_64& rng);

}  // namespace szwalk
