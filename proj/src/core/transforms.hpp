#pragma once

#include <complex>
#include <vector>

#include "core/cumulants.hpp"

namespace fsc {

using Complex = std::complex<double>;

/// R-transform as a rational function num(g)/den(g). Laws carrying an exact
/// analytic form use it; otherwise the truncated polynomial from the cumulant
/// list (den = 1).
struct RModel {
  std::vector<double> num;  // ascending coefficients in g
  std::vector<double> den;

  static RModel from(const CumulantSequence& r);
  static RModel polynomial(std::vector<double> cumulants);

  Complex eval(Complex g) const;
  Complex deriv(Complex g) const;
  RModel scaled(double t) const;  // R of mu_t: numerator scaled by t
  double support_radius() const;  // crude bracket for the spectrum
};

// R(w) = sum_k r_k w^{k-1} with the finitely many cumulants supplied.
Complex evaluate_r_transform(const std::vector<double>& cumulants, Complex w);

// Solves G = 1/(z - R(G)) by the damped fixed-point iteration
// G <- G/2 + (1/2)/(z - R(G)) started at 1/z, falling back to exact
// polynomial root tracking from deep in the upper half-plane when the fixed
// point is repelling. Requires Im z > 0; the returned value satisfies
// |G - 1/(z - R(G))| < 1e-12 max(1, |G|) or an ErrorCode::numeric is raised
// (near an atom |G| ~ 1/eps, where an absolute gate would sit below one ulp).
Complex cauchy_numeric(const RModel& r, Complex z);
Complex cauchy_numeric(const std::vector<double>& cumulants, Complex z);
Complex cauchy_numeric(const CumulantSequence& r, Complex z);

// Stieltjes inversion with a fixed smoothing: -Im G(x + i eps)/pi, clamped at 0.
double density(const CumulantSequence& r, double x, double eps);

// Support bracket M = 2 max(1, max_k |r_k|^{1/k}) (K+1); crude moment bound.
double support_bound(const CumulantSequence& r);

// x_k with CDF(x_k) = (k - 1/2)/count, CDF from adaptive Simpson integration
// of the smoothed density over [-M, M]. Output is nondecreasing. Raises a
// calibration error when the recovered total mass is off 1 by more than 1e-3.
std::vector<double> quantiles(const CumulantSequence& r, int count, double eps = 1e-6);

// |d/dt G_t(z) + R(G_t(z)) d/dz G_t(z)| by central differences at step h,
// where G_t is the Cauchy transform of the semigroup law mu_t.
double pde_residual(const CumulantSequence& r, Complex z, double t, double h);

}  // namespace fsc
