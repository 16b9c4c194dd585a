#pragma once

#include <utility>
#include <vector>

#include "core/cumulants.hpp"
#include "core/step_function.hpp"

namespace fsc {

// Free cumulants of the law of int f dX: r_k(nu) = r_k(mu) ||f||_k^k.
CumulantSequence integral_cumulants(const StepFunction& f, const CumulantSequence& r);

// Free cumulants of the k-th diagonal measure: r_n(Delta_k(t)) = t r_{nk},
// listed for n = 1..n_max. The mean phi[Delta_k(t)] = t r_k is entry n = 1.
CumulantSequence diagonal_cumulants(const CumulantSequence& r, int k, const Rational& t, int n_max);

// The exact inner partition sum ||f||_{n,mu}^n (n even, nonnegative regime).
Rational mu_norm_power(const StepFunction& f, const CumulantSequence& r, int n);

// ||f||_{n,mu}, the real n-th root of the above.
double mu_norm(const StepFunction& f, const CumulantSequence& r, int n);

struct MuNormTail {
  std::vector<std::pair<int, double>> values;  // (n, ||f||_{n,mu}) for n = 2,4,..,n_max
  double extrapolated;                         // Aitken-accelerated tail estimate, diagnostic only
};

MuNormTail mu_norm_tail(const StepFunction& f, const CumulantSequence& r, int n_max);

struct MomentFlowResult {
  std::vector<double> moments;  // phi[M(t)^n] for n = 1..n_max
  bool accuracy_warning = false;  // step count below the advisory floor
};

// RK4 integration of the coupled moment system
//   d/dt phi[M^n] = sum_k r_k f(t)^k sum_{i_1+..+i_k = n-k} (i_1 + 1) prod_j phi[M^{i_j}]
// from phi[M(0)^n] = 0, on a grid refined so f's discontinuities fall on nodes.
MomentFlowResult moment_flow(const StepFunction& f, const CumulantSequence& r, int n_max, double t,
                             int steps);

struct BdgReport {
  double lhs;  // ||f||_{n, mu^k}
  double rhs;  // || |f|^{1/k} ||_{nk, mu}^k
  bool holds;
};

// Preliminary lower-bound comparison for the k-th diagonal measure.
BdgReport bdg_check(const StepFunction& f, const CumulantSequence& r, int k, int n);

}  // namespace fsc
