#pragma once

#include <complex>
#include <vector>

#include "core/cumulants.hpp"
#include "core/rational.hpp"

namespace fsc {

/// Dense truncated power series sum_{k=0..trunc} c_k z^k over the rationals.
/// Arithmetic never produces (or reads) coefficients beyond the truncation.
class PowerSeries {
public:
  explicit PowerSeries(int trunc) : c_(static_cast<size_t>(trunc) + 1, Rational(0)) {}

  int trunc() const { return static_cast<int>(c_.size()) - 1; }
  const Rational& coeff(int k) const { return c_[static_cast<size_t>(k)]; }
  Rational& coeff(int k) { return c_[static_cast<size_t>(k)]; }

  PowerSeries operator*(const PowerSeries& other) const;
  PowerSeries& add_scaled(const PowerSeries& other, const Rational& scale, int shift);

  // Multiplicative inverse; requires a unit constant term.
  PowerSeries inverse() const;

private:
  std::vector<Rational> c_;
};

/// Laurent series with finitely many terms, sum_{j} c_j z^j for j in
/// [min_power, min_power + size). Used for expansions around infinity.
struct LaurentSeries {
  int min_power = 0;
  std::vector<Rational> coeffs;

  Rational coeff(int power) const;
  std::complex<double> evaluate(std::complex<double> z) const;
};

// G(z) = sum_{k=0..order} m_k z^-(k+1), the expansion of the Cauchy transform
// around infinity (m_0 = 1).
LaurentSeries cauchy_series(const MomentSequence& m, int order);

// Coefficients of z^1..z^order of G(1/z + R(z)) - z, where G is built from the
// given moments and R from the given cumulants. All zero iff (m, r) satisfy
// the moment-cumulant relation through the checked order.
std::vector<Rational> functional_relation_residual(const MomentSequence& m, const CumulantSequence& r,
                                                   int order);

// True iff the defining relation G(1/z + R(z)) = z holds exactly through the
// given order with the moments computed from r. order <= 12.
bool verify_functional_relation(const CumulantSequence& r, int order);

}  // namespace fsc
