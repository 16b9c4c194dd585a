#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/cumulants.hpp"
#include "core/operator_tensor.hpp"
#include "core/rng.hpp"
#include "core/scalar_integrals.hpp"
#include "core/step_function.hpp"
#include "core/tensor_poly.hpp"
#include "core/transforms.hpp"

namespace fsc {

enum class MatrixModel {
  gaussian_hermitian,  // GUE increments; semicircular base only
  haar_quantile,       // deterministic quantile spectrum under a Haar rotation
};

struct MatrixModelConfig {
  int dim = 64;
  int steps = 64;
  double horizon = 1.0;
  CumulantSequence base = semicircular();
  int trials = 1;
  std::uint64_t master_seed = 1;
  MatrixModel model = MatrixModel::gaussian_hermitian;
  int threads = 0;            // 0: hardware concurrency
  double quantile_eps = 1e-6;
  double tolerance = 0.05;    // trace tolerance for the contracted checks
  bool operator_norm = false; // accumulate full matrices and report norm diagnostics

  double dt() const { return horizon / steps; }
  void validate() const;
};

// Haar-distributed unitary: QR of a complex Ginibre matrix with the
// R-diagonal phase correction.
Matrix haar_unitary(int n, std::mt19937_64& rng);

/// Streams the i.i.d.-in-law Hermitian increments of one path; increments for
/// mu_dt are sampled directly from the dt-semigroup law.
class IncrementSampler {
public:
  explicit IncrementSampler(const MatrixModelConfig& cfg);

  Matrix sample(std::mt19937_64& rng) const;

  // Spectrum used by the haar_quantile model (empty for gaussian_hermitian).
  // Quantiles of mu_dt, affinely corrected so the column's first two moments
  // match m_1(mu_dt), m_2(mu_dt) exactly.
  const std::vector<double>& spectrum() const { return spectrum_; }

private:
  const MatrixModelConfig& cfg_;
  std::vector<double> spectrum_;
};

Matrix sample_increment(const MatrixModelConfig& cfg, std::mt19937_64& rng);

/// Materialized path: increments X_1..X_S for steps [t_{j-1}, t_j) plus cached
/// partial sums. Intended for desk-scale dims; the verification drivers stream
/// increments instead of building one of these at N = 512.
struct SamplePath {
  std::vector<Matrix> increments;
  std::vector<Matrix> partials;  // partials[j] = X(t_j), partials[0] = 0

  static SamplePath generate(const MatrixModelConfig& cfg, int trial);

  int steps() const { return static_cast<int>(increments.size()); }
  const Matrix& increment(int j) const { return increments.at(static_cast<size_t>(j)); }
  const Matrix& value(int j) const { return partials.at(static_cast<size_t>(j)); }
};

/// Adapted view handed to biprocess rules at step j: only X(t_i) with i <= j
/// is visible; asking for later data is a contract violation.
class PathView {
public:
  PathView(const SamplePath& path, int limit) : path_(path), limit_(limit) {}

  int limit() const { return limit_; }
  const Matrix& value(int i) const;

private:
  const SamplePath& path_;
  int limit_;
};

/// A simple adapted biprocess: step index -> arity-2 tensor built from
/// constants and visible path values.
struct AdaptedBiprocess {
  std::function<OperatorTensor(int step, const PathView& past)> rule;

  // A x B 1_[a,b): constant elementary tensor supported on [a, b).
  static AdaptedBiprocess constant(OperatorTensor value, double start, double end, double dt);
};

// sum_j u(t_j) # X_{j+1} with left endpoints.
Matrix integrate_biprocess(const SamplePath& path, const AdaptedBiprocess& u);

// Delta_k over the path partition: sum_j (X_j)^k.
Matrix diagonal_measure(const SamplePath& path, int k);

/// One verification outcome; serialized as the report JSON.
struct CheckReport {
  std::string check;
  double predicted = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  bool pass = false;
  std::map<std::string, double> details;
};

// Constant elementary-tensor biprocess descriptor for the closed-form sides.
struct ConstantBiprocess {
  OperatorTensor value;
  double start = 0.0;
  double end = 1.0;
};

// phi[N M*] vs the Ito-isometry closed form
//   int <V(s), U(s)> ds + r_1^2 phi[(int m(V)) (int m(U))*].
CheckReport verify_ito_isometry(const MatrixModelConfig& cfg, const ConstantBiprocess& v,
                                const ConstantBiprocess& u);

// phi[int u # dX] vs r_1 int phi[m(u(s))] ds.
CheckReport verify_trace_formula(const MatrixModelConfig& cfg, const ConstantBiprocess& u);

// Two-sided decomposition of N M for N = int v # dDelta_i, M = int u # dDelta_j:
// raw diagonal block (exact algebra) and contracted block via Delta_{i+j}.
CheckReport verify_product_formula(const MatrixModelConfig& cfg, int i, int j, const ConstantBiprocess& v,
                                   const ConstantBiprocess& u);

// Functional Ito formula for p(M), M = int u # dX, via per-step Riemann sums of
// (1/k!) phi_{k+1}[d^k p(M(s)) # m_k(u,..,u)] # (dX)^k.
CheckReport verify_functional_ito(const MatrixModelConfig& cfg, const Polynomial& p,
                                  const ConstantBiprocess& u);

// |phi[M_1..M_n]| <= phi[N_1..N_n] with the scalar majorant side exact.
CheckReport verify_moment_inequality(const MatrixModelConfig& cfg, const std::vector<ConstantBiprocess>& vs);

// phi[|M|^n]^{1/n} vs ||f||_{n,mu} for the scalar integrand f (equality case).
CheckReport verify_contraction(const MatrixModelConfig& cfg, const StepFunction& f, int n);

// Normalized trace of Delta_k(T) vs T r_k.
CheckReport verify_diagonal(const MatrixModelConfig& cfg, int k);

// Operator-level resolvent expansion at z (stretch test; z far from spectrum).
CheckReport verify_resolvent(const MatrixModelConfig& cfg, Complex z, int k_max);

// Kolmogorov-Smirnov distance of the spectrum of X(horizon) to the law with
// the configured base cumulants (via the quantile table).
CheckReport verify_spectrum_ks(const MatrixModelConfig& cfg);

// Eigenvalues of X(horizon) for one trial, for CSV spectra dumps.
std::vector<double> simulate_spectrum(const MatrixModelConfig& cfg, int trial);

// Exact phi[prod_i c_i (X(b_i) - X(a_i))] for a free Levy process with the
// given cumulants: sum over NC(n) of prod_B r_|B| |interval intersection of B|.
Rational mixed_increment_moment(const CumulantSequence& r,
                                const std::vector<std::pair<Rational, Rational>>& intervals,
                                const std::vector<Rational>& scales);

}  // namespace fsc
