#pragma once

#include <vector>

#include "core/rational.hpp"

namespace fsc {

// Whether a cumulant list means "exactly these, zero beyond" or "unknown beyond".
enum class Support { finitely_supported, truncated };

// Exact analytic form of the R-transform, when the law comes from the catalog:
// free_poisson has R(g) = rate/(1 - g), a point-jump compound Poisson has
// R(g) = rate*atom/(1 - atom*g). Transform evaluations use these instead of
// the truncated polynomial, which fails to be the transform of any positive
// measure at moderate rates.
enum class AnalyticRKind { none, free_poisson, compound_point };

struct AnalyticR {
  AnalyticRKind kind = AnalyticRKind::none;
  Rational rate{0};
  Rational atom{1};
};

/// Free cumulants r_1..r_K of a compactly supported distribution.
///
/// Reading past K is an explicit truncation error unless the sequence is
/// finitely supported, in which case the tail is zero. Silent zero padding of
/// a truncated sequence would corrupt every moment beyond K.
class CumulantSequence {
public:
  CumulantSequence(std::vector<Rational> values, Support support, AnalyticR analytic = {});

  int order() const { return static_cast<int>(values_.size()); }
  Support support() const { return support_; }
  bool finitely_supported() const { return support_ == Support::finitely_supported; }
  const std::vector<Rational>& values() const { return values_; }
  const AnalyticR& analytic() const { return analytic_; }

  // r_k, 1-based.
  Rational cumulant(int k) const;

  // True iff r_k >= 0 for k = 1..up_to (the section-5 regime).
  bool all_nonnegative(int up_to) const;

  // Largest index with a nonzero entry (0 for the zero sequence).
  int effective_order() const;

  bool is_semicircular_standard() const;  // exactly r_2 = 1, everything else 0

private:
  std::vector<Rational> values_;
  Support support_;
  AnalyticR analytic_;
};

struct MomentSequence {
  std::vector<Rational> values;  // m_1..m_K; m_0 = 1 implicit

  int order() const { return static_cast<int>(values.size()); }
  Rational moment(int k) const;  // 1-based, moment(0) = 1
};

// Largest n for which the partition-sum moment formulas are evaluated.
inline constexpr int kMaxMomentOrder = 14;

// m_1..m_n of the distribution with free cumulants r. Equals the noncrossing
// partition sum sum_{pi in NC(n)} prod_B r_{|B|}, computed by conditioning on
// the block containing 1 (triangular recursion, exact arithmetic).
MomentSequence moments_from_cumulants(const CumulantSequence& r, int n);

// Inverse of the above; unique since the relation is triangular.
CumulantSequence cumulants_from_moments(const MomentSequence& m, int n);

// Cumulants of mu_t: each r_i scaled by t. Requires t >= 0.
CumulantSequence semigroup_cumulants(const CumulantSequence& r, const Rational& t);

// m_p(t)/t for the small-time slope check m_p(t) = t r_p + o(t).
Rational small_time_ratio(const CumulantSequence& r, int p, const Rational& t);

// Base distribution catalog.
CumulantSequence semicircular();
CumulantSequence free_poisson(const Rational& rate, int order);
// r_k = rate * jump_moments[k-1].
CumulantSequence free_compound_poisson(const Rational& rate, const std::vector<Rational>& jump_moments);
// Jumps at a single point: jump moments atom^k, with the exact analytic R.
CumulantSequence free_compound_poisson_point(const Rational& rate, const Rational& atom, int order);

// The recursion underneath moments_from_cumulants, usable with plain doubles
// (needed at orders where root-weighted cumulants are irrational). r must
// hold r_1..r_n; returns m_1..m_n.
template <typename T>
std::vector<T> moment_recursion(const std::vector<T>& r, int n) {
  std::vector<T> m(static_cast<size_t>(n) + 1, T(0));
  m[0] = T(1);
  // conv[s][t] = sum over compositions t = i_1+..+i_s (i_j >= 0) of m_{i_1}..m_{i_s};
  // rebuilt row by row as new moments become available.
  for (int k = 1; k <= n; ++k) {
    std::vector<std::vector<T>> conv(static_cast<size_t>(k) + 1,
                                     std::vector<T>(static_cast<size_t>(k), T(0)));
    conv[0][0] = T(1);
    for (int s = 1; s <= k; ++s)
      for (int t = 0; t < k; ++t)
        for (int j = 0; j <= t; ++j) conv[static_cast<size_t>(s)][static_cast<size_t>(t)] += m[static_cast<size_t>(j)] * conv[static_cast<size_t>(s) - 1][static_cast<size_t>(t - j)];
    T acc(0);
    for (int s = 1; s <= k; ++s) acc += r[static_cast<size_t>(s) - 1] * conv[static_cast<size_t>(s)][static_cast<size_t>(k - s)];
    m[static_cast<size_t>(k)] = acc;
  }
  return std::vector<T>(m.begin() + 1, m.end());
}

}  // namespace fsc
