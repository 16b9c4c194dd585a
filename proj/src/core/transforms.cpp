#include "core/transforms.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fsc {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kResidualTarget = 1e-13;

std::vector<double> cumulant_doubles(const CumulantSequence& r) {
  std::vector<double> out;
  out.reserve(static_cast<size_t>(r.order()));
  for (const auto& v : r.values()) out.push_back(to_double(v));
  return out;
}

Complex horner(const std::vector<double>& coeffs, Complex g) {
  Complex acc(0.0, 0.0);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * g + *it;
  return acc;
}

Complex horner_derivative(const std::vector<double>& coeffs, Complex g) {
  Complex acc(0.0, 0.0);
  for (size_t k = coeffs.size(); k >= 2; --k) acc = acc * g + static_cast<double>(k - 1) * coeffs[k - 1];
  return acc;
}

}  // namespace

RModel RModel::polynomial(std::vector<double> cumulants) {
  return RModel{std::move(cumulants), {1.0}};
}

RModel RModel::from(const CumulantSequence& r) {
  const AnalyticR& a = r.analytic();
  if (a.kind == AnalyticRKind::free_poisson) {
    // R(g) = rate / (1 - g)
    return RModel{{to_double(a.rate)}, {1.0, -1.0}};
  }
  if (a.kind == AnalyticRKind::compound_point) {
    // R(g) = rate*atom / (1 - atom*g)
    return RModel{{to_double(a.rate * a.atom)}, {1.0, -to_double(a.atom)}};
  }
  return polynomial(cumulant_doubles(r));
}

Complex RModel::eval(Complex g) const { return horner(num, g) / horner(den, g); }

Complex RModel::deriv(Complex g) const {
  const Complex d = horner(den, g);
  return (horner_derivative(num, g) * d - horner(num, g) * horner_derivative(den, g)) / (d * d);
}

RModel RModel::scaled(double t) const {
  RModel out(*this);
  for (auto& c : out.num) c *= t;
  return out;
}

double RModel::support_radius() const {
  double mx = 1.0;
  for (size_t k = 1; k <= num.size(); ++k)
    mx = std::max(mx, std::pow(std::abs(num[k - 1]), 1.0 / static_cast<double>(k)));
  for (size_t k = 2; k <= den.size(); ++k) mx = std::max(mx, std::abs(den[k - 1]));
  return 2.0 * mx * static_cast<double>(num.size() + den.size());
}

Complex evaluate_r_transform(const std::vector<double>& cumulants, Complex w) {
  return horner(cumulants, w);
}

namespace {

Complex fp_residual(const RModel& r, Complex z, Complex g) { return g - 1.0 / (z - r.eval(g)); }

// Damped fixed-point iteration G <- G/2 + (1/2)/(z - R(G)) from 1/z.
// Contractive away from the support; inside the bulk the fixed point can turn
// repelling, in which case this reports failure and a fallback runs.
bool damped_fixed_point(const RModel& r, Complex z, Complex& g, int max_iter) {
  g = 1.0 / z;
  for (int iter = 0; iter < max_iter; ++iter) {
    const Complex denom = z - r.eval(g);
    if (std::abs(denom) < 1e-300) return false;
    g = 0.5 * g + 0.5 / denom;
    if (std::abs(fp_residual(r, z, g)) < kResidualTarget * std::max(1.0, std::abs(g))) return true;
  }
  return std::abs(fp_residual(r, z, g)) < 1e-12 * std::max(1.0, std::abs(g));
}

// All roots of g (z - R(g)) = 1 with R = num/den, cleared of denominators:
// P(g) = z g den(g) - g num(g) - den(g).
Eigen::VectorXcd resolvent_roots(const RModel& r, Complex z) {
  const size_t deg_guess = std::max(r.num.size() + 1, r.den.size() + 1) + 1;
  std::vector<Complex> poly(deg_guess + 1, Complex(0.0, 0.0));
  for (size_t i = 0; i < r.den.size(); ++i) {
    poly[i + 1] += z * r.den[i];  // z g den
    poly[i] -= r.den[i];          // -den
  }
  for (size_t i = 0; i < r.num.size(); ++i) poly[i + 1] -= r.num[i];  // -g num
  while (poly.size() > 2 && std::abs(poly.back()) == 0.0) poly.pop_back();
  const int deg = static_cast<int>(poly.size()) - 1;
  if (deg == 1) {
    Eigen::VectorXcd single(1);
    single(0) = -poly[0] / poly[1];
    return single;
  }
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -poly[static_cast<size_t>(i)] / poly.back();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion, /*computeEigenvectors=*/false);
  return es.eigenvalues();
}

Complex nearest_root(const Eigen::VectorXcd& roots, Complex g) {
  Complex best = roots(0);
  double dist = std::abs(roots(0) - g);
  for (int i = 1; i < roots.size(); ++i) {
    const double d = std::abs(roots(i) - g);
    if (d < dist) {
      dist = d;
      best = roots(i);
    }
  }
  return best;
}

}  // namespace

Complex cauchy_numeric(const RModel& r, Complex z) {
  if (!(z.imag() > 0)) fail(ErrorCode::invalid_argument, "cauchy transform is evaluated in the upper half-plane");
  Complex g;
  if (damped_fixed_point(r, z, g, 1500)) return g;

  // Track the branch that behaves like 1/z from deep in the upper half-plane
  // down to the requested point through the exact polynomial roots.
  double y = std::max(r.support_radius(), 2.0 * std::abs(z) + 2.0);
  g = 1.0 / Complex(z.real(), y);
  for (int level = 0; level < 512; ++level) {
    const Complex zy(z.real(), y);
    g = nearest_root(resolvent_roots(r, zy), g);
    if (y <= z.imag()) break;
    y = std::max(z.imag(), 0.82 * y);
  }
  // Newton polish at the exact target.
  for (int iter = 0; iter < 8; ++iter) {
    const Complex rv = r.eval(g);
    const Complex df = z - rv - g * r.deriv(g);
    if (std::abs(df) < 1e-300) break;
    g -= (g * (z - rv) - 1.0) / df;
  }
  if (std::abs(fp_residual(r, z, g)) < 1e-12 * std::max(1.0, std::abs(g))) return g;

  std::ostringstream msg;
  msg << "cauchy transform did not converge at z = (" << z.real() << ", " << z.imag() << "); residual "
      << std::abs(fp_residual(r, z, g));
  fail(ErrorCode::numeric, msg.str());
}

Complex cauchy_numeric(const std::vector<double>& cumulants, Complex z) {
  return cauchy_numeric(RModel::polynomial(cumulants), z);
}

Complex cauchy_numeric(const CumulantSequence& r, Complex z) {
  return cauchy_numeric(RModel::from(r), z);
}

double density(const CumulantSequence& r, double x, double eps) {
  if (!(eps >= 1e-8 && eps <= 1e-2))
    fail(ErrorCode::invalid_argument, "stieltjes smoothing eps must lie in [1e-8, 1e-2]");
  const double val = -cauchy_numeric(r, Complex(x, eps)).imag() / kPi;
  return std::max(val, 0.0);
}

double support_bound(const CumulantSequence& r) {
  double mx = 1.0;
  for (int k = 1; k <= r.order(); ++k)
    mx = std::max(mx, std::pow(std::abs(to_double(r.cumulant(k))), 1.0 / k));
  return 2.0 * mx * (r.order() + 1);
}

namespace {

struct CdfNode {
  double x;
  double mass;  // cumulative mass up to x
};

double smoothed_density(const RModel& r, double x, double eps, Complex& warm) {
  // Warm-started Newton first; full branch tracking only when it drifts.
  Complex g = warm;
  for (int iter = 0; iter < 12; ++iter) {
    const Complex rv = r.eval(g);
    const Complex df = Complex(x, eps) - rv - g * r.deriv(g);
    if (std::abs(df) < 1e-300) break;
    g -= (g * (Complex(x, eps) - rv) - 1.0) / df;
  }
  if (!(std::abs(fp_residual(r, Complex(x, eps), g)) < 1e-12 * std::max(1.0, std::abs(g))) ||
      g.imag() > 1e-9)
    g = cauchy_numeric(r, Complex(x, eps));
  warm = g;
  return std::max(0.0, -g.imag() / kPi);
}

// Adaptive Simpson refinement of one cell; appends (right-endpoint, cell mass)
// pairs of the final subdivision, left to right.
void refine_cell(const RModel& r, double eps, double xl, double fl, double xr, double fr, double tol,
                 int depth, Complex warm, std::vector<std::pair<double, double>>& pieces) {
  const double xm = 0.5 * (xl + xr);
  const double fm = smoothed_density(r, xm, eps, warm);
  const double w = xr - xl;
  const double trap = 0.5 * (fl + fr) * w;
  const double simpson = (fl + 4.0 * fm + fr) * w / 6.0;
  if (depth >= 42 || std::abs(simpson - trap) <= tol) {
    // Split the Simpson mass between the two halves proportionally to the
    // trapezoid halves so the recorded CDF stays monotone.
    const double left_trap = 0.25 * (fl + fm) * w;
    const double right_trap = 0.25 * (fm + fr) * w;
    const double total_trap = left_trap + right_trap;
    const double left_mass = total_trap > 0 ? simpson * (left_trap / total_trap) : 0.5 * simpson;
    pieces.emplace_back(xm, left_mass);
    pieces.emplace_back(xr, simpson - left_mass);
    return;
  }
  refine_cell(r, eps, xl, fl, xm, fm, 0.5 * tol, depth + 1, warm, pieces);
  refine_cell(r, eps, xm, fm, xr, fr, 0.5 * tol, depth + 1, warm, pieces);
}

}  // namespace

std::vector<double> quantiles(const CumulantSequence& r, int count, double eps) {
  if (count < 1) fail(ErrorCode::invalid_argument, "quantile count must be positive");
  if (!(eps >= 1e-8 && eps <= 1e-2))
    fail(ErrorCode::invalid_argument, "stieltjes smoothing eps must lie in [1e-8, 1e-2]");
  const RModel model = RModel::from(r);
  const double m = support_bound(r);

  const int coarse = 256;
  std::vector<double> xs(static_cast<size_t>(coarse) + 1);
  std::vector<double> fs(static_cast<size_t>(coarse) + 1);
  Complex warm(0.0, -1.0);
  for (int i = 0; i <= coarse; ++i) {
    xs[static_cast<size_t>(i)] = -m + 2.0 * m * i / coarse;
    warm = 1.0 / Complex(xs[static_cast<size_t>(i)], eps);
    fs[static_cast<size_t>(i)] = smoothed_density(model, xs[static_cast<size_t>(i)], eps, warm);
  }
  std::vector<std::pair<double, double>> pieces;  // (x, incremental mass)
  pieces.reserve(4096);
  for (int i = 0; i < coarse; ++i)
    refine_cell(model, eps, xs[static_cast<size_t>(i)], fs[static_cast<size_t>(i)],
                xs[static_cast<size_t>(i) + 1], fs[static_cast<size_t>(i) + 1], 2e-7, 0,
                1.0 / Complex(xs[static_cast<size_t>(i)], eps), pieces);

  std::vector<CdfNode> cdf;
  cdf.reserve(pieces.size() + 1);
  cdf.push_back({-m, 0.0});
  double acc = 0.0;
  for (const auto& [x, dm] : pieces) {
    acc += std::max(dm, 0.0);
    cdf.push_back({x, acc});
  }
  const double mass = acc;
  if (std::abs(mass - 1.0) > 1e-3) {
    std::ostringstream msg;
    msg << "density mass calibration failed: recovered " << mass << " on [-" << m << ", " << m << "]";
    fail(ErrorCode::numeric, msg.str());
  }

  std::vector<double> out(static_cast<size_t>(count));
  size_t lo = 0;
  for (int k = 1; k <= count; ++k) {
    const double target = mass * (k - 0.5) / count;
    while (lo + 1 < cdf.size() && cdf[lo + 1].mass < target) ++lo;
    const auto& a = cdf[lo];
    const auto& b = cdf[lo + 1];
    const double span = b.mass - a.mass;
    const double frac = span > 0 ? (target - a.mass) / span : 0.5;
    out[static_cast<size_t>(k) - 1] = a.x + frac * (b.x - a.x);
  }
  return out;
}

double pde_residual(const CumulantSequence& r, Complex z, double t, double h) {
  if (!(z.imag() >= 0.5)) fail(ErrorCode::invalid_argument, "pde residual is probed at Im z >= 0.5");
  if (!(h >= 1e-5 && h <= 1e-2)) fail(ErrorCode::invalid_argument, "finite-difference step must lie in [1e-5, 1e-2]");
  if (!(t > h)) fail(ErrorCode::invalid_argument, "need t > h for the centered time difference");

  const RModel base = RModel::from(r);
  const RModel at_t = base.scaled(t);
  const Complex g = cauchy_numeric(at_t, z);
  const Complex dgdt = (cauchy_numeric(base.scaled(t + h), z) - cauchy_numeric(base.scaled(t - h), z)) / (2.0 * h);
  const Complex dgdz = (cauchy_numeric(at_t, z + h) - cauchy_numeric(at_t, z - h)) / (2.0 * h);
  return std::abs(dgdt + base.eval(g) * dgdz);
}

}  // namespace fsc
