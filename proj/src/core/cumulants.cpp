#include "core/cumulants.hpp"

#include <string>

namespace fsc {

CumulantSequence::CumulantSequence(std::vector<Rational> values, Support support, AnalyticR analytic)
    : values_(std::move(values)), support_(support), analytic_(std::move(analytic)) {
  if (values_.empty()) fail(ErrorCode::invalid_argument, "cumulant sequence needs at least r_1");
}

Rational CumulantSequence::cumulant(int k) const {
  if (k < 1) fail(ErrorCode::invalid_argument, "cumulant index must be positive");
  if (k <= order()) return values_[static_cast<size_t>(k) - 1];
  if (finitely_supported()) return Rational(0);
  fail(ErrorCode::truncation,
       "cumulant r_" + std::to_string(k) + " requested beyond truncation order " + std::to_string(order()));
}

bool CumulantSequence::all_nonnegative(int up_to) const {
  for (int k = 1; k <= up_to; ++k)
    if (cumulant(k) < 0) return false;
  return true;
}

int CumulantSequence::effective_order() const {
  for (int k = order(); k >= 1; --k)
    if (values_[static_cast<size_t>(k) - 1] != 0) return k;
  return 0;
}

bool CumulantSequence::is_semicircular_standard() const {
  if (!finitely_supported()) return false;
  if (order() < 2 || cumulant(2) != 1) return false;
  for (int k = 1; k <= order(); ++k)
    if (k != 2 && cumulant(k) != 0) return false;
  return true;
}

Rational MomentSequence::moment(int k) const {
  if (k == 0) return Rational(1);
  if (k < 0 || k > order()) fail(ErrorCode::truncation, "moment m_" + std::to_string(k) + " not available");
  return values[static_cast<size_t>(k) - 1];
}

namespace {

// Collects r_1..r_n, enforcing the truncation contract once up front.
std::vector<Rational> padded_cumulants(const CumulantSequence& r, int n) {
  std::vector<Rational> out;
  out.reserve(static_cast<size_t>(n));
  for (int k = 1; k <= n; ++k) out.push_back(r.cumulant(k));
  return out;
}

}  // namespace

MomentSequence moments_from_cumulants(const CumulantSequence& r, int n) {
  if (n < 1) fail(ErrorCode::invalid_argument, "moment order must be positive");
  if (n > kMaxMomentOrder)
    fail(ErrorCode::size, "moment order " + std::to_string(n) + " exceeds the desk-scale cap 14");
  return MomentSequence{moment_recursion(padded_cumulants(r, n), n)};
}

CumulantSequence cumulants_from_moments(const MomentSequence& m, int n) {
  if (n < 1 || n > m.order()) fail(ErrorCode::truncation, "not enough moments");
  std::vector<Rational> r;
  r.reserve(static_cast<size_t>(n));
  for (int k = 1; k <= n; ++k) {
    // With r_k temporarily 0, the k-th moment of the partial sequence differs
    // from m_k exactly by the missing full-block term r_k.
    r.push_back(Rational(0));
    Rational partial = moment_recursion(r, k).back();
    r.back() = m.moment(k) - partial;
  }
  return CumulantSequence(std::move(r), Support::truncated);
}

CumulantSequence semigroup_cumulants(const CumulantSequence& r, const Rational& t) {
  if (t < 0) fail(ErrorCode::invalid_argument, "semigroup time must be nonnegative");
  std::vector<Rational> scaled = r.values();
  for (auto& v : scaled) v *= t;
  AnalyticR analytic = r.analytic();
  analytic.rate *= t;
  return CumulantSequence(std::move(scaled), r.support(), analytic);
}

Rational small_time_ratio(const CumulantSequence& r, int p, const Rational& t) {
  if (p < 1 || p % 2 != 0) fail(ErrorCode::invalid_argument, "small-time slope is probed at even p");
  if (t <= 0 || t > 1) fail(ErrorCode::invalid_argument, "small-time slope needs 0 < t <= 1");
  MomentSequence m = moments_from_cumulants(semigroup_cumulants(r, t), p);
  return m.moment(p) / t;
}

CumulantSequence semicircular() {
  return CumulantSequence({Rational(0), Rational(1)}, Support::finitely_supported);
}

CumulantSequence free_poisson(const Rational& rate, int order) {
  if (order < 1) fail(ErrorCode::invalid_argument, "catalog order must be positive");
  return CumulantSequence(std::vector<Rational>(static_cast<size_t>(order), rate), Support::truncated,
                          AnalyticR{AnalyticRKind::free_poisson, rate, Rational(1)});
}

CumulantSequence free_compound_poisson(const Rational& rate, const std::vector<Rational>& jump_moments) {
  if (jump_moments.empty()) fail(ErrorCode::invalid_argument, "need at least one jump moment");
  std::vector<Rational> r;
  r.reserve(jump_moments.size());
  for (const auto& jm : jump_moments) r.push_back(rate * jm);
  return CumulantSequence(std::move(r), Support::truncated);
}

CumulantSequence free_compound_poisson_point(const Rational& rate, const Rational& atom, int order) {
  if (order < 1) fail(ErrorCode::invalid_argument, "catalog order must be positive");
  std::vector<Rational> r;
  r.reserve(static_cast<size_t>(order));
  Rational power(1);
  for (int k = 1; k <= order; ++k) {
    power *= atom;
    r.push_back(rate * power);
  }
  return CumulantSequence(std::move(r), Support::truncated,
                          AnalyticR{AnalyticRKind::compound_point, rate, atom});
}

}  // namespace fsc
