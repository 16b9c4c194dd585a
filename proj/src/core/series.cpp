#include "core/series.hpp"

#include <string>

namespace fsc {

PowerSeries PowerSeries::operator*(const PowerSeries& other) const {
  const int t = trunc();
  PowerSeries out(t);
  for (int i = 0; i <= t; ++i) {
    if (c_[static_cast<size_t>(i)] == 0) continue;
    for (int j = 0; i + j <= t && j <= other.trunc(); ++j)
      out.coeff(i + j) += c_[static_cast<size_t>(i)] * other.coeff(j);
  }
  return out;
}

PowerSeries& PowerSeries::add_scaled(const PowerSeries& other, const Rational& scale, int shift) {
  for (int j = 0; j <= other.trunc() && j + shift <= trunc(); ++j)
    coeff(j + shift) += scale * other.coeff(j);
  return *this;
}

PowerSeries PowerSeries::inverse() const {
  if (coeff(0) == 0) fail(ErrorCode::invalid_argument, "series inverse needs a nonzero constant term");
  const int t = trunc();
  PowerSeries out(t);
  const Rational inv0 = Rational(1) / coeff(0);
  out.coeff(0) = inv0;
  for (int n = 1; n <= t; ++n) {
    Rational acc(0);
    for (int j = 1; j <= n; ++j) acc += coeff(j) * out.coeff(n - j);
    out.coeff(n) = -inv0 * acc;
  }
  return out;
}

Rational LaurentSeries::coeff(int power) const {
  const int idx = power - min_power;
  if (idx < 0 || idx >= static_cast<int>(coeffs.size())) return Rational(0);
  return coeffs[static_cast<size_t>(idx)];
}

std::complex<double> LaurentSeries::evaluate(std::complex<double> z) const {
  std::complex<double> acc(0.0, 0.0);
  std::complex<double> zp = std::pow(z, min_power);
  for (const auto& c : coeffs) {
    acc += to_double(c) * zp;
    zp *= z;
  }
  return acc;
}

LaurentSeries cauchy_series(const MomentSequence& m, int order) {
  if (order < 0) fail(ErrorCode::invalid_argument, "series order must be nonnegative");
  if (order > m.order())
    fail(ErrorCode::truncation, "cauchy series order " + std::to_string(order) + " beyond available moments");
  LaurentSeries g;
  g.min_power = -(order + 1);
  g.coeffs.resize(static_cast<size_t>(order) + 1);
  // coefficient of z^-(k+1) is m_k; stored lowest power first
  for (int k = 0; k <= order; ++k) g.coeffs[static_cast<size_t>(order - k)] = m.moment(k);
  return g;
}

std::vector<Rational> functional_relation_residual(const MomentSequence& m, const CumulantSequence& r,
                                                   int order) {
  if (order < 1) fail(ErrorCode::invalid_argument, "relation order must be positive");
  // 1/z + R(z) = A(z)/z with A(z) = 1 + sum_k r_k z^k, so
  // G(1/z + R(z)) = sum_k m_k z^{k+1} A(z)^-(k+1), a bona fide power series.
  PowerSeries a(order);
  a.coeff(0) = Rational(1);
  for (int k = 1; k <= order; ++k) a.coeff(k) = r.cumulant(k);
  const PowerSeries ainv = a.inverse();

  PowerSeries composed(order);
  PowerSeries apow = ainv;  // A^-(k+1) as k advances
  for (int k = 0; k + 1 <= order; ++k) {
    composed.add_scaled(apow, m.moment(k), k + 1);
    if (k + 2 <= order) apow = apow * ainv;
  }
  composed.coeff(1) -= 1;

  std::vector<Rational> res;
  res.reserve(static_cast<size_t>(order));
  for (int j = 1; j <= order; ++j) res.push_back(composed.coeff(j));
  return res;
}

bool verify_functional_relation(const CumulantSequence& r, int order) {
  if (order > 12) fail(ErrorCode::size, "functional relation checked up to order 12");
  const MomentSequence m =
      order >= 2 ? moments_from_cumulants(r, order - 1) : MomentSequence{{r.cumulant(1)}};
  for (const auto& c : functional_relation_residual(m, r, order))
    if (c != 0) return false;
  return true;
}

}  // namespace fsc
