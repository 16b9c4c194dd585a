#include "core/matrix_lab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numeric>
#include <optional>
#include <thread>

#include "core/nc_partitions.hpp"
#include "core/tensor_poly.hpp"
#include "core/transforms.hpp"

namespace fsc {

namespace {

constexpr double kPi = 3.14159265358979323846;

double phi_re(const Matrix& a) { return a.trace().real() / static_cast<double>(a.rows()); }

// tr(a b)/N without forming the product.
Scalar phi_prod(const Matrix& a, const Matrix& b) {
  return a.cwiseProduct(b.transpose()).sum() / static_cast<double>(a.rows());
}

int snap_step(double time, double dt) { return static_cast<int>(std::lround(time / dt)); }

}  // namespace

void MatrixModelConfig::validate() const {
  if (dim < 2) fail(ErrorCode::invalid_argument, "matrix dimension must be at least 2");
  if (steps < 1) fail(ErrorCode::invalid_argument, "need at least one time step");
  if (!(horizon > 0)) fail(ErrorCode::invalid_argument, "horizon must be positive");
  if (trials < 1) fail(ErrorCode::invalid_argument, "need at least one trial");
  if (model == MatrixModel::gaussian_hermitian && !base.is_semicircular_standard())
    fail(ErrorCode::invalid_argument,
         "gaussian_hermitian increments realize the standard semicircular base only");
}

Matrix haar_unitary(int n, std::mt19937_64& rng) {
  if (n < 1) fail(ErrorCode::invalid_argument, "unitary dimension must be positive");
  std::normal_distribution<double> nd;
  Matrix g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = Scalar(nd(rng), nd(rng));
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Phase correction: without it QR is not Haar-distributed.
  for (int j = 0; j < n; ++j) {
    const Scalar d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0) q.col(j) *= d / mag;
  }
  return q;
}

IncrementSampler::IncrementSampler(const MatrixModelConfig& cfg) : cfg_(cfg) {
  cfg.validate();
  if (cfg.model != MatrixModel::haar_quantile) return;

  // Spectrum of mu_dt via Stieltjes inversion. The exact dyadic rational of
  // the double dt keeps the semigroup scaling deterministic.
  const CumulantSequence law = semigroup_cumulants(cfg.base, Rational(cfg.dt()));
  spectrum_ = quantiles(law, cfg.dim, cfg.quantile_eps);

  // Affine moment correction: the quantile column is deterministic, so any
  // quantization bias in its first two moments would survive trial averaging
  // undamped. Matching m_1 and m_2 of mu_dt removes that bias exactly.
  const double dt = cfg.dt();
  const double r1 = cfg.base.order() >= 1 ? to_double(cfg.base.cumulant(1)) : 0.0;
  const double r2 = cfg.base.order() >= 2 ? to_double(cfg.base.cumulant(2)) : 0.0;
  const double target1 = dt * r1;
  const double target2 = dt * r2 + dt * dt * r1 * r1;
  const double n = static_cast<double>(cfg.dim);
  double q1 = 0.0, q2 = 0.0;
  for (double v : spectrum_) {
    q1 += v / n;
    q2 += v * v / n;
  }
  const double var_q = q2 - q1 * q1;
  const double var_t = target2 - target1 * target1;
  const double scale = (var_q > 1e-30 && var_t >= 0) ? std::sqrt(var_t / var_q) : 1.0;
  for (double& v : spectrum_) v = target1 + scale * (v - q1);
  std::sort(spectrum_.begin(), spectrum_.end());
}

Matrix IncrementSampler::sample(std::mt19937_64& rng) const {
  const int n = cfg_.dim;
  const double dt = cfg_.dt();
  if (dt == 0.0) return Matrix::Zero(n, n);

  if (cfg_.model == MatrixModel::gaussian_hermitian) {
    std::normal_distribution<double> nd;
    constexpr double kInvSqrt2 = 0.70710678118654752440;
    Matrix g(n, n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) g(i, j) = Scalar(nd(rng) * kInvSqrt2, nd(rng) * kInvSqrt2);
    Matrix h = (g + g.adjoint()) / std::sqrt(2.0 * n);
    h *= std::sqrt(dt);
    return h;
  }

  const Matrix u = haar_unitary(n, rng);
  Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(spectrum_.data(), n);
  return u * d.asDiagonal() * u.adjoint();
}

Matrix sample_increment(const MatrixModelConfig& cfg, std::mt19937_64& rng) {
  if (cfg.horizon == 0.0) return Matrix::Zero(cfg.dim, cfg.dim);
  return IncrementSampler(cfg).sample(rng);
}

SamplePath SamplePath::generate(const MatrixModelConfig& cfg, int trial) {
  cfg.validate();
  const double bytes = 2.0 * (cfg.steps + 1) * 16.0 * cfg.dim * cfg.dim;
  if (bytes > 1.5e9)
    fail(ErrorCode::size, "materialized path would exceed the memory budget; use the streaming checks");
  IncrementSampler sampler(cfg);
  auto rng = trial_engine(cfg.master_seed, trial);
  SamplePath path;
  path.increments.reserve(static_cast<size_t>(cfg.steps));
  path.partials.reserve(static_cast<size_t>(cfg.steps) + 1);
  path.partials.push_back(Matrix::Zero(cfg.dim, cfg.dim));
  for (int j = 0; j < cfg.steps; ++j) {
    path.increments.push_back(sampler.sample(rng));
    path.partials.push_back(path.partials.back() + path.increments.back());
  }
  return path;
}

const Matrix& PathView::value(int i) const {
  if (i < 0 || i > limit_)
    fail(ErrorCode::contract, "adaptedness violation: biprocess rule requested future path data");
  return path_.value(i);
}

AdaptedBiprocess AdaptedBiprocess::constant(OperatorTensor value, double start, double end, double dt) {
  const int j0 = snap_step(start, dt);
  const int j1 = snap_step(end, dt);
  return AdaptedBiprocess{[value = std::move(value), j0, j1](int step, const PathView& past) {
    if (step >= j0 && step < j1) return value;
    return OperatorTensor(2, past.value(0).rows());
  }};
}

Matrix integrate_biprocess(const SamplePath& path, const AdaptedBiprocess& u) {
  if (path.steps() == 0) fail(ErrorCode::invalid_argument, "empty path");
  const int n = static_cast<int>(path.increment(0).rows());
  Matrix acc = Matrix::Zero(n, n);
  for (int j = 0; j < path.steps(); ++j) {
    const PathView view(path, j);
    const OperatorTensor val = u.rule(j, view);
    if (val.zero()) continue;
    acc += val.sharp(path.increment(j));
  }
  return acc;
}

Matrix diagonal_measure(const SamplePath& path, int k) {
  if (k < 1) fail(ErrorCode::invalid_argument, "diagonal measure index must be positive");
  if (path.steps() == 0) fail(ErrorCode::invalid_argument, "empty path");
  const int n = static_cast<int>(path.increment(0).rows());
  Matrix acc = Matrix::Zero(n, n);
  for (int j = 0; j < path.steps(); ++j) {
    Matrix p = path.increment(j);
    for (int i = 1; i < k; ++i) p = p * path.increment(j);
    acc += p;
  }
  return acc;
}

namespace {

// Runs cfg.trials independent trials, each on its own RNG substream, and
// returns the per-trial statistic vectors in trial order regardless of the
// thread schedule.
std::vector<std::vector<double>> run_trials(
    const MatrixModelConfig& cfg, const std::function<std::vector<double>(int)>& per_trial) {
  const int workers =
      std::max(1, std::min(cfg.trials, cfg.threads > 0 ? cfg.threads
                                                       : static_cast<int>(std::thread::hardware_concurrency())));
  std::vector<std::vector<double>> results(static_cast<size_t>(cfg.trials));
  if (workers == 1) {
    for (int t = 0; t < cfg.trials; ++t) results[static_cast<size_t>(t)] = per_trial(t);
    return results;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex error_mutex;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const int t = next.fetch_add(1);
        if (t >= cfg.trials) return;
        try {
          results[static_cast<size_t>(t)] = per_trial(t);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
  return results;
}

struct Summary {
  double mean = 0.0;
  double std_error = 0.0;
};

Summary summarize(const std::vector<std::vector<double>>& stats, size_t component) {
  Summary s;
  const double n = static_cast<double>(stats.size());
  for (const auto& row : stats) s.mean += row.at(component);
  s.mean /= n;
  if (stats.size() > 1) {
    double var = 0.0;
    for (const auto& row : stats) var += (row.at(component) - s.mean) * (row.at(component) - s.mean);
    var /= (n - 1.0);
    s.std_error = std::sqrt(var / n);
  }
  return s;
}

double mean_of(const std::vector<std::vector<double>>& stats, size_t component) {
  return summarize(stats, component).mean;
}

double max_of(const std::vector<std::vector<double>>& stats, size_t component) {
  double m = 0.0;
  for (const auto& row : stats) m = std::max(m, std::abs(row.at(component)));
  return m;
}

// Pass gate for "within 3 standard errors": the machine-epsilon floor keeps
// exact configurations (zero spread, zero bias) from failing on roundoff.
bool within_3se(double estimate, double predicted, double se) {
  return std::abs(estimate - predicted) <= 3.0 * se + 1e-12 * std::max(1.0, std::abs(predicted));
}

// <A x B, C x D> = phi[C* A] phi[B D*], extended bilinearly.
Scalar tensor_inner(const OperatorTensor& v, const OperatorTensor& u) {
  Scalar acc(0.0, 0.0);
  for (const auto& s : v.terms())
    for (const auto& t : u.terms())
      acc += state(t[0].adjoint() * s[0]) * state(s[1] * t[1].adjoint());
  return acc;
}

Matrix tensor_multiply(const OperatorTensor& u) {
  Matrix acc = Matrix::Zero(u.dim(), u.dim());
  for (const auto& t : u.terms()) acc += t[0] * t[1];
  return acc;
}

double operator_norm(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.adjoint() * a, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

std::optional<double> scalar_coefficient(const OperatorTensor& u) {
  if (u.terms().size() != 1) return std::nullopt;
  const auto& t = u.terms().front();
  if (!t[1].isIdentity(0.0)) return std::nullopt;
  const Scalar c = t[0](0, 0);
  if (std::abs(c.imag()) > 0.0) return std::nullopt;
  Matrix scaled = Matrix::Identity(u.dim(), u.dim());
  scaled *= c;
  if (!t[0].isApprox(scaled, 0.0)) return std::nullopt;
  return c.real();
}

struct StepRange {
  int first;
  int last;  // exclusive
  bool contains(int j) const { return j >= first && j < last; }
};

StepRange snap_range(const ConstantBiprocess& b, const MatrixModelConfig& cfg) {
  StepRange r{snap_step(b.start, cfg.dt()), snap_step(b.end, cfg.dt())};
  r.first = std::max(0, r.first);
  r.last = std::min(cfg.steps, r.last);
  return r;
}

}  // namespace

Rational mixed_increment_moment(const CumulantSequence& r,
                                const std::vector<std::pair<Rational, Rational>>& intervals,
                                const std::vector<Rational>& scales) {
  const int n = static_cast<int>(intervals.size());
  if (n < 1 || scales.size() != intervals.size())
    fail(ErrorCode::invalid_argument, "need matching interval and scale lists");
  Rational total(0);
  for_each_noncrossing(n, [&](const SetPartition& pi) {
    Rational prod(1);
    for (const auto& block : pi.blocks) {
      Rational lo = intervals[static_cast<size_t>(block.front()) - 1].first;
      Rational hi = intervals[static_cast<size_t>(block.front()) - 1].second;
      for (int e : block) {
        const auto& iv = intervals[static_cast<size_t>(e) - 1];
        if (iv.first > lo) lo = iv.first;
        if (iv.second < hi) hi = iv.second;
      }
      const Rational len = hi > lo ? hi - lo : Rational(0);
      prod *= r.cumulant(static_cast<int>(block.size())) * len;
      if (prod == 0) break;
    }
    total += prod;
    return true;
  });
  for (const auto& c : scales) total *= c;
  return total;
}

CheckReport verify_ito_isometry(const MatrixModelConfig& cfg, const ConstantBiprocess& v,
                                const ConstantBiprocess& u) {
  cfg.validate();
  const double r1 = to_double(cfg.base.cumulant(1));
  const double overlap = std::max(0.0, std::min(v.end, u.end) - std::max(v.start, u.start));
  const Scalar inner = tensor_inner(v.value, u.value);
  const Matrix mv = tensor_multiply(v.value);
  const Matrix mu = tensor_multiply(u.value);
  const Scalar drift = state(mv * mu.adjoint());
  const double predicted =
      overlap * inner.real() + r1 * r1 * (v.end - v.start) * (u.end - u.start) * drift.real();

  const StepRange vr = snap_range(v, cfg);
  const StepRange ur = snap_range(u, cfg);
  const auto stats = run_trials(cfg, [&](int trial) {
    IncrementSampler sampler(cfg);
    auto rng = trial_engine(cfg.master_seed, trial);
    Matrix nm = Matrix::Zero(cfg.dim, cfg.dim);
    Matrix mm = Matrix::Zero(cfg.dim, cfg.dim);
    for (int j = 0; j < cfg.steps; ++j) {
      const Matrix x = sampler.sample(rng);
      if (vr.contains(j)) nm += v.value.sharp(x);
      if (ur.contains(j)) mm += u.value.sharp(x);
    }
    const Scalar val = phi_prod(nm, mm.adjoint().eval());
    return std::vector<double>{val.real(), std::abs(val.imag())};
  });

  const Summary s = summarize(stats, 0);
  CheckReport rep;
  rep.check = "ito_isometry";
  rep.predicted = predicted;
  rep.estimate = s.mean;
  rep.std_error = s.std_error;
  rep.pass = within_3se(s.mean, predicted, s.std_error);
  rep.details["imag_magnitude"] = mean_of(stats, 1);
  rep.details["trials"] = cfg.trials;
  return rep;
}

CheckReport verify_trace_formula(const MatrixModelConfig& cfg, const ConstantBiprocess& u) {
  cfg.validate();
  const double r1 = to_double(cfg.base.cumulant(1));
  const Matrix mu = tensor_multiply(u.value);
  const double predicted = r1 * (u.end - u.start) * state(mu).real();

  const StepRange ur = snap_range(u, cfg);
  const auto stats = run_trials(cfg, [&](int trial) {
    IncrementSampler sampler(cfg);
    auto rng = trial_engine(cfg.master_seed, trial);
    Scalar acc(0.0, 0.0);
    for (int j = 0; j < cfg.steps; ++j) {
      const Matrix x = sampler.sample(rng);
      if (!ur.contains(j)) continue;
      // phi[A x B] = tr(BA x)/N for each elementary term
      for (const auto& t : u.value.terms()) acc += phi_prod(t[1] * t[0], x);
    }
    return std::vector<double>{acc.real(), std::abs(acc.imag())};
  });

  const Summary s = summarize(stats, 0);
  CheckReport rep;
  rep.check = "trace_formula";
  rep.predicted = predicted;
  rep.estimate = s.mean;
  rep.std_error = s.std_error;
  rep.pass = within_3se(s.mean, predicted, s.std_error);
  rep.details["imag_magnitude"] = mean_of(stats, 1);
  return rep;
}

namespace {

struct PairKernel {
  bool diagonal = false;
  Matrix p, q;                  // P = D A, Q = B C
  Eigen::VectorXcd pd, qd;
  Scalar phi_q{0.0, 0.0};

  static PairKernel build(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& d) {
    PairKernel k;
    k.p = d * a;
    k.q = b * c;
    k.phi_q = state(k.q);
    const bool pd = (k.p - Matrix(k.p.diagonal().asDiagonal())).norm() == 0.0;
    const bool qd = (k.q - Matrix(k.q.diagonal().asDiagonal())).norm() == 0.0;
    k.diagonal = pd && qd;
    if (k.diagonal) {
      k.pd = k.p.diagonal();
      k.qd = k.q.diagonal();
    }
    return k;
  }

  // tr(P y Q z)/N
  Scalar trace4(const Matrix& y, const Matrix& z) const {
    const double n = static_cast<double>(y.rows());
    if (diagonal) {
      return ((pd.asDiagonal() * y * qd.asDiagonal()).cwiseProduct(z.transpose())).sum() / n;
    }
    return ((p * y * q).cwiseProduct(z.transpose())).sum() / n;
  }

  // tr(P y)/N
  Scalar trace2(const Matrix& y) const {
    const double n = static_cast<double>(y.rows());
    if (diagonal) return (pd.asDiagonal() * y).trace() / n;
    return phi_prod(p, y);
  }
};

Matrix matrix_power(const Matrix& a, int k) {
  Matrix out = a;
  for (int i = 1; i < k; ++i) out = out * a;
  return out;
}

}  // namespace

CheckReport verify_product_formula(const MatrixModelConfig& cfg, int i, int j, const ConstantBiprocess& v,
                                   const ConstantBiprocess& u) {
  cfg.validate();
  if (i < 1 || j < 1) fail(ErrorCode::invalid_argument, "diagonal-measure indices must be positive");
  if (v.value.terms().size() != 1 || u.value.terms().size() != 1)
    fail(ErrorCode::invalid_argument, "product-formula check takes single elementary tensors");

  const auto& vt = v.value.terms().front();
  const auto& ut = u.value.terms().front();
  const PairKernel kern = PairKernel::build(vt[0], vt[1], ut[0], ut[1]);
  const StepRange vr = snap_range(v, cfg);
  const StepRange ur = snap_range(u, cfg);
  const bool full = cfg.operator_norm;

  const auto stats = run_trials(cfg, [&](int trial) {
    IncrementSampler sampler(cfg);
    auto rng = trial_engine(cfg.master_seed, trial);
    const int n = cfg.dim;
    Matrix sv = Matrix::Zero(n, n);  // sum of Delta^i over v's steps so far
    Matrix su = Matrix::Zero(n, n);
    Scalar below(0.0, 0.0), above(0.0, 0.0), diag_raw(0.0, 0.0), diag_con(0.0, 0.0);
    Matrix below_m, above_m, raw_m, con_m;
    if (full) {
      below_m = above_m = raw_m = con_m = Matrix::Zero(n, n);
    }
    for (int s = 0; s < cfg.steps; ++s) {
      const Matrix x = sampler.sample(rng);
      const Matrix xi = i == 1 ? x : matrix_power(x, i);
      const Matrix xj = j == 1 ? x : matrix_power(x, j);
      const bool inv = vr.contains(s);
      const bool inu = ur.contains(s);
      if (inu) below += kern.trace4(sv, xj);
      if (inv) above += kern.trace4(xi, su);
      if (inv && inu) {
        diag_raw += kern.trace4(xi, xj);
        const Matrix xij = matrix_power(x, i + j);
        diag_con += kern.phi_q * kern.trace2(xij);
        if (full) {
          raw_m += vt[0] * xi * vt[1] * ut[0] * xj * ut[1];
          con_m += kern.phi_q * (vt[0] * xij * ut[1]);
        }
      }
      if (full) {
        if (inu) below_m += vt[0] * sv * vt[1] * ut[0] * xj * ut[1];
        if (inv) above_m += vt[0] * xi * vt[1] * ut[0] * su * ut[1];
      }
      if (inv) sv += xi;
      if (inu) su += xj;
    }
    const Scalar lhs = kern.trace4(sv, su);
    const Scalar rhs_raw = below + above + diag_raw;
    const Scalar rhs_con = below + above + diag_con;
    std::vector<double> row{std::abs(lhs - rhs_con), std::abs(lhs - rhs_raw), lhs.real(), rhs_con.real()};
    if (full) {
      const Matrix lhs_m = vt[0] * sv * vt[1] * ut[0] * su * ut[1];
      row.push_back(operator_norm(lhs_m - (below_m + above_m + raw_m)));
      row.push_back(operator_norm(lhs_m - (below_m + above_m + con_m)));
    }
    return row;
  });

  CheckReport rep;
  rep.check = "product_formula";
  rep.predicted = 0.0;
  rep.estimate = mean_of(stats, 0);
  rep.std_error = summarize(stats, 0).std_error;
  rep.pass = rep.estimate <= cfg.tolerance;
  rep.details["raw_trace_residual"] = max_of(stats, 1);
  rep.details["lhs_trace"] = mean_of(stats, 2);
  rep.details["rhs_trace"] = mean_of(stats, 3);
  rep.details["max_contracted_diff"] = max_of(stats, 0);
  if (full) {
    rep.details["raw_norm_residual"] = max_of(stats, 4);
    rep.details["contracted_norm_diff"] = mean_of(stats, 5);
  }
  return rep;
}

CheckReport verify_functional_ito(const MatrixModelConfig& cfg, const Polynomial& p,
                                  const ConstantBiprocess& u) {
  cfg.validate();
  const int deg = static_cast<int>(p.size()) - 1;
  if (deg < 1 || deg > 6) fail(ErrorCode::invalid_argument, "polynomial degree must be 1..6");
  if (!p.empty() && p[0] != 0)
    fail(ErrorCode::invalid_argument, "the functional formula takes polynomials without constant term");

  const std::optional<double> scal = scalar_coefficient(u.value);
  const StepRange ur = snap_range(u, cfg);
  const bool fast = scal.has_value() && deg <= 3;
  if (!fast && cfg.dim > 192)
    fail(ErrorCode::size,
         "general functional-Ito evaluation materializes tensors; keep dim <= 192 or use a scalar biprocess");

  std::vector<double> coeff(7, 0.0);
  for (int d = 1; d <= deg; ++d) coeff[static_cast<size_t>(d)] = to_double(p[static_cast<size_t>(d)]);

  // Scalar prediction phi[p(M)] = sum_d a_d m_d(nu), nu the law of the scalar
  // integral; available whenever u is scalar.
  double predicted = 0.0;
  bool have_prediction = false;
  if (scal.has_value()) {
    const Rational len(Rational(u.end) - Rational(u.start));
    if (len > 0) {
      StepFunction f({Rational(u.start), Rational(u.end)}, {Rational(*scal)});
      const CumulantSequence nu = integral_cumulants(f, cfg.base);
      const MomentSequence m = moments_from_cumulants(nu, deg);
      for (int d = 1; d <= deg; ++d) predicted += coeff[static_cast<size_t>(d)] * to_double(m.moment(d));
      have_prediction = true;
    }
  }

  const auto stats = run_trials(cfg, [&](int trial) -> std::vector<double> {
    IncrementSampler sampler(cfg);
    auto rng = trial_engine(cfg.master_seed, trial);
    const int n = cfg.dim;
    if (fast) {
      const double c = *scal;
      Matrix xr = Matrix::Zero(n, n);   // M(t_s)
      Matrix xr2 = Matrix::Zero(n, n);  // M(t_s)^2
      double rhs = 0.0;
      for (int s = 0; s < cfg.steps; ++s) {
        Matrix dx = sampler.sample(rng);
        if (!ur.contains(s)) continue;
        if (c != 1.0) dx *= c;
        const double phi_x = phi_re(xr);
        const Scalar phi_xd = phi_prod(xr, dx);
        const Matrix dx2 = dx * dx;
        const Scalar phi_d2 = state(dx2);
        const Scalar phi_xd2 = phi_prod(xr, dx2);
        const Scalar phi_d3 = phi_prod(dx2, dx);
        const Scalar phi_x2d = phi_prod(xr2, dx);
        double term = coeff[1] * state(dx).real();
        term += coeff[2] * (2.0 * phi_xd.real() + phi_d2.real());
        term += coeff[3] * (3.0 * phi_x2d.real() + 2.0 * phi_xd2.real() + phi_x * phi_d2.real() +
                            phi_d3.real());
        rhs += term;
        const Matrix cross = xr * dx;
        xr2 += cross + cross.adjoint() + dx2;
        xr += dx;
      }
      const double phi_x = phi_re(xr);
      const double phi_x2 = phi_re(xr2);
      const double phi_x3 = phi_prod(xr2, xr).real();
      const double lhs = coeff[1] * phi_x + coeff[2] * phi_x2 + coeff[3] * phi_x3;
      return {std::abs(lhs - rhs), lhs, rhs};
    }

    // General route: symbolic difference quotients evaluated on the running
    // integral, sandwiched with u, contracted, and applied to (dX)^k.
    std::vector<TensorPolynomial> dq;
    for (int k = 1; k <= deg; ++k) dq.push_back(partial_k(p, k));
    Matrix m_run = Matrix::Zero(n, n);
    Matrix rhs_m = Matrix::Zero(n, n);
    Matrix lhs_m;
    for (int s = 0; s < cfg.steps; ++s) {
      const Matrix dx = sampler.sample(rng);
      if (!ur.contains(s)) continue;
      std::vector<Matrix> mpow(static_cast<size_t>(deg) + 1);
      mpow[0] = Matrix::Identity(n, n);
      for (int d = 1; d <= deg; ++d) mpow[static_cast<size_t>(d)] = mpow[static_cast<size_t>(d) - 1] * m_run;
      std::vector<Matrix> dxpow(static_cast<size_t>(deg) + 1);
      dxpow[1] = dx;
      for (int k = 2; k <= deg; ++k) dxpow[static_cast<size_t>(k)] = dxpow[static_cast<size_t>(k) - 1] * dx;
      double kfact = 1.0;
      for (int k = 1; k <= deg; ++k) {
        kfact *= k;
        const TensorPolynomial& tp = dq[static_cast<size_t>(k) - 1];
        if (tp.zero()) continue;
        std::vector<OperatorTensor> sandwich(static_cast<size_t>(k), u.value);
        OperatorTensor acc2(2, n);
        for (const auto& [word, c] : tp.terms()) {
          std::vector<Matrix> z;
          z.reserve(word.size());
          for (int e : word) z.push_back(mpow[static_cast<size_t>(e)]);
          acc2 = acc2 + OperatorTensor::elementary(std::move(z)).sharp_m(sandwich).phi_contract().scaled(
                            Scalar(to_double(c), 0.0));
        }
        rhs_m += acc2.scaled(Scalar(1.0 / kfact, 0.0)).sharp(dxpow[static_cast<size_t>(k)]);
      }
      m_run += u.value.sharp(dx);
    }
    lhs_m = Matrix::Zero(n, n);
    Matrix mp = Matrix::Identity(n, n);
    for (int d = 1; d <= deg; ++d) {
      mp = mp * m_run;
      lhs_m += coeff[static_cast<size_t>(d)] * mp;
    }
    const double lhs = phi_re(lhs_m);
    const double rhs = phi_re(rhs_m);
    return {std::abs(lhs - rhs), lhs, rhs, operator_norm(lhs_m - rhs_m)};
  });

  CheckReport rep;
  rep.check = "functional_ito";
  rep.estimate = mean_of(stats, 0);
  rep.std_error = summarize(stats, 0).std_error;
  rep.predicted = 0.0;
  rep.pass = rep.estimate <= cfg.tolerance;
  rep.details["lhs_trace"] = mean_of(stats, 1);
  rep.details["rhs_trace"] = mean_of(stats, 2);
  rep.details["max_trace_diff"] = max_of(stats, 0);
  if (have_prediction) {
    rep.details["scalar_prediction"] = predicted;
    rep.details["prediction_gap"] = std::abs(mean_of(stats, 1) - predicted);
  }
  if (!fast) rep.details["norm_diff"] = mean_of(stats, 3);
  return rep;
}

CheckReport verify_moment_inequality(const MatrixModelConfig& cfg,
                                     const std::vector<ConstantBiprocess>& vs) {
  cfg.validate();
  const int n = static_cast<int>(vs.size());
  if (n < 1 || n > 4) fail(ErrorCode::invalid_argument, "moment inequality is checked for 1 <= n <= 4");
  for (const auto& v : vs)
    if (v.value.terms().size() != 1)
      fail(ErrorCode::invalid_argument, "moment inequality takes elementary tensors");

  // Exact scalar majorant: N_i = ||V_i|| (X(b_i) - X(a_i)).
  std::vector<std::pair<Rational, Rational>> intervals;
  std::vector<Rational> scales;
  for (const auto& v : vs) {
    intervals.emplace_back(Rational(v.start), Rational(v.end));
    const auto& t = v.value.terms().front();
    scales.push_back(Rational(operator_norm(t[0]) * operator_norm(t[1])));
  }
  const double rhs = to_double(mixed_increment_moment(cfg.base, intervals, scales));

  std::vector<StepRange> ranges;
  ranges.reserve(vs.size());
  for (const auto& v : vs) ranges.push_back(snap_range(v, cfg));

  const auto stats = run_trials(cfg, [&](int trial) {
    IncrementSampler sampler(cfg);
    auto rng = trial_engine(cfg.master_seed, trial);
    std::vector<Matrix> sums(static_cast<size_t>(n), Matrix::Zero(cfg.dim, cfg.dim));
    for (int s = 0; s < cfg.steps; ++s) {
      const Matrix x = sampler.sample(rng);
      for (int idx = 0; idx < n; ++idx)
        if (ranges[static_cast<size_t>(idx)].contains(s)) sums[static_cast<size_t>(idx)] += x;
    }
    Matrix prod = Matrix::Identity(cfg.dim, cfg.dim);
    for (int idx = 0; idx < n; ++idx) {
      const auto& t = vs[static_cast<size_t>(idx)].value.terms().front();
      prod = prod * (t[0] * sums[static_cast<size_t>(idx)] * t[1]);
    }
    return std::vector<double>{std::abs(state(prod))};
  });

  const Summary s = summarize(stats, 0);
  CheckReport rep;
  rep.check = "moment_inequality";
  rep.predicted = rhs;
  rep.estimate = s.mean;
  rep.std_error = s.std_error;
  rep.pass = s.mean <= rhs + 3.0 * s.std_error + 1e-12 * std::max(1.0, rhs);
  rep.details["slack"] = rhs - s.mean;
  return rep;
}

CheckReport verify_contraction(const MatrixModelConfig& cfg, const StepFunction& f, int n) {
  cfg.validate();
  const double predicted = mu_norm(f, cfg.base, n);  // raises the regime error if needed

  const auto stats = run_trials(cfg, [&](int trial) {
    IncrementSampler sampler(cfg);
    auto rng = trial_engine(cfg.master_seed, trial);
    Matrix m = Matrix::Zero(cfg.dim, cfg.dim);
    for (int s = 0; s < cfg.steps; ++s) {
      const Matrix x = sampler.sample(rng);
      const double fv = f.value_at(s * cfg.dt());
      if (fv != 0.0) m += fv * x;
    }
    Matrix power = m;
    for (int k = 1; k < n; ++k) power = power * m;
    const double moment = std::max(0.0, phi_re(power));
    return std::vector<double>{std::pow(moment, 1.0 / n)};
  });

  const Summary s = summarize(stats, 0);
  CheckReport rep;
  rep.check = "contraction";
  rep.predicted = predicted;
  rep.estimate = s.mean;
  rep.std_error = s.std_error;
  rep.pass = std::abs(s.mean - predicted) <= cfg.tolerance;
  rep.details["abs_error"] = std::abs(s.mean - predicted);
  return rep;
}

CheckReport verify_diagonal(const MatrixModelConfig& cfg, int k) {
  cfg.validate();
  if (k < 1) fail(ErrorCode::invalid_argument, "diagonal index must be positive");
  const double predicted = cfg.horizon * to_double(cfg.base.cumulant(k));

  const auto stats = run_trials(cfg, [&](int trial) {
    IncrementSampler sampler(cfg);
    auto rng = trial_engine(cfg.master_seed, trial);
    Scalar acc(0.0, 0.0);
    double herm_defect = 0.0;
    for (int s = 0; s < cfg.steps; ++s) {
      const Matrix x = sampler.sample(rng);
      herm_defect = std::max(herm_defect, (x - x.adjoint().eval()).cwiseAbs().maxCoeff());
      if (k == 1) {
        acc += state(x);
      } else if (k == 2) {
        acc += phi_prod(x, x);
      } else {
        Matrix p = x * x;
        for (int i = 3; i < k; ++i) p = p * x;
        acc += phi_prod(p, x);
      }
    }
    return std::vector<double>{acc.real(), std::abs(acc.imag()), herm_defect};
  });

  const Summary s = summarize(stats, 0);
  CheckReport rep;
  rep.check = "diagonal";
  rep.predicted = predicted;
  rep.estimate = s.mean;
  rep.std_error = s.std_error;
  rep.pass = std::abs(s.mean - predicted) <= cfg.tolerance;
  rep.details["imag_magnitude"] = max_of(stats, 1);
  rep.details["hermiticity_defect"] = max_of(stats, 2);
  rep.details["k"] = k;
  return rep;
}

CheckReport verify_resolvent(const MatrixModelConfig& cfg, Complex z, int k_max) {
  cfg.validate();
  if (cfg.dim > 256) fail(ErrorCode::size, "resolvent stretch check is desk-scale; keep dim <= 256");
  if (k_max < 1) fail(ErrorCode::invalid_argument, "need k_max >= 1");
  const Scalar zz(z.real(), z.imag());

  const auto stats = run_trials(cfg, [&](int trial) {
    IncrementSampler sampler(cfg);
    auto rng = trial_engine(cfg.master_seed, trial);
    const int n = cfg.dim;
    const Matrix id = Matrix::Identity(n, n);
    Matrix x = Matrix::Zero(n, n);
    Matrix rhs = (zz * id).inverse();
    for (int s = 0; s < cfg.steps; ++s) {
      const Matrix res = (zz * id - x).inverse();
      const Scalar g = state(res);
      const Matrix dx = sampler.sample(rng);
      Matrix dxk = dx;
      Scalar gpow(1.0, 0.0);
      for (int k = 1; k <= k_max; ++k) {
        rhs += gpow * (res * dxk * res);
        gpow *= g;
        if (k < k_max) dxk = dxk * dx;
      }
      x += dx;
    }
    const Matrix lhs = (zz * id - x).inverse();
    return std::vector<double>{operator_norm(lhs - rhs), std::abs(state(lhs) - state(rhs))};
  });

  CheckReport rep;
  rep.check = "resolvent";
  rep.predicted = 0.0;
  rep.estimate = mean_of(stats, 0);
  rep.std_error = summarize(stats, 0).std_error;
  rep.pass = rep.estimate <= cfg.tolerance;
  rep.details["trace_diff"] = mean_of(stats, 1);
  rep.details["k_max"] = k_max;
  return rep;
}

std::vector<double> simulate_spectrum(const MatrixModelConfig& cfg, int trial) {
  cfg.validate();
  IncrementSampler sampler(cfg);
  auto rng = trial_engine(cfg.master_seed, trial);
  Matrix x = Matrix::Zero(cfg.dim, cfg.dim);
  for (int s = 0; s < cfg.steps; ++s) x += sampler.sample(rng);
  Eigen::SelfAdjointEigenSolver<Matrix> es((x + x.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
  std::vector<double> out(static_cast<size_t>(cfg.dim));
  Eigen::Map<Eigen::VectorXd>(out.data(), cfg.dim) = es.eigenvalues();
  return out;
}

CheckReport verify_spectrum_ks(const MatrixModelConfig& cfg) {
  cfg.validate();
  const bool semicircle = cfg.base.is_semicircular_standard();
  std::vector<double> ref;
  if (!semicircle) {
    const CumulantSequence law = semigroup_cumulants(cfg.base, Rational(cfg.horizon));
    ref = quantiles(law, 4096, cfg.quantile_eps);
  }
  const double t = cfg.horizon;
  auto reference_cdf = [&](double x) {
    if (semicircle) {
      const double r = 2.0 * std::sqrt(t);
      if (x <= -r) return 0.0;
      if (x >= r) return 1.0;
      return 0.5 + x * std::sqrt(r * r - x * x) / (2.0 * kPi * t) + std::asin(x / r) / kPi;
    }
    const auto it = std::upper_bound(ref.begin(), ref.end(), x);
    return static_cast<double>(it - ref.begin()) / static_cast<double>(ref.size());
  };

  const auto stats = run_trials(cfg, [&](int trial) {
    std::vector<double> eig = simulate_spectrum(cfg, trial);
    std::sort(eig.begin(), eig.end());
    double ks = 0.0;
    const double n = static_cast<double>(eig.size());
    for (size_t idx = 0; idx < eig.size(); ++idx) {
      const double fr = reference_cdf(eig[idx]);
      ks = std::max(ks, std::abs((idx + 1) / n - fr));
      ks = std::max(ks, std::abs(idx / n - fr));
    }
    return std::vector<double>{ks};
  });

  CheckReport rep;
  rep.check = "spectrum_ks";
  rep.predicted = 0.0;
  rep.estimate = mean_of(stats, 0);
  rep.std_error = summarize(stats, 0).std_error;
  rep.pass = rep.estimate <= cfg.tolerance;
  rep.details["max_ks"] = max_of(stats, 0);
  return rep;
}

}  // namespace fsc
