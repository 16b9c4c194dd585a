// Test-only oracles, kept independent of the implementation paths they check.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "core/nc_partitions.hpp"
#include "core/rational.hpp"

namespace oracle {

using fsc::Rational;
using fsc::SetPartition;

// Every set partition of {1..n} via restricted-growth strings.
inline std::vector<SetPartition> all_partitions(int n) {
  std::vector<SetPartition> out;
  std::vector<int> label(static_cast<size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int i, int max_label) {
    if (i == n) {
      SetPartition p;
      p.n = n;
      p.blocks.assign(static_cast<size_t>(max_label) + 1, {});
      for (int e = 0; e < n; ++e) p.blocks[static_cast<size_t>(label[static_cast<size_t>(e)])].push_back(e + 1);
      out.push_back(std::move(p));
      return;
    }
    for (int l = 0; l <= max_label + 1; ++l) {
      label[static_cast<size_t>(i)] = l;
      rec(i + 1, std::max(max_label, l));
    }
  };
  rec(0, -1);
  return out;
}

// Literal definition: a crossing is a < b < c < d with {a,c} and {b,d} split
// across two blocks.
inline bool noncrossing_by_definition(const SetPartition& p) {
  std::vector<int> label(static_cast<size_t>(p.n) + 1, -1);
  for (size_t b = 0; b < p.blocks.size(); ++b)
    for (int e : p.blocks[b]) label[static_cast<size_t>(e)] = static_cast<int>(b);
  for (int a = 1; a <= p.n; ++a)
    for (int b = a + 1; b <= p.n; ++b)
      for (int c = b + 1; c <= p.n; ++c)
        for (int d = c + 1; d <= p.n; ++d)
          if (label[static_cast<size_t>(a)] == label[static_cast<size_t>(c)] &&
              label[static_cast<size_t>(b)] == label[static_cast<size_t>(d)] &&
              label[static_cast<size_t>(a)] != label[static_cast<size_t>(b)])
            return true;
  return false;
}

// m_n as the literal partition sum over brute-force-enumerated NC(n).
inline Rational moment_by_partition_sum(const std::vector<Rational>& cumulants, int n) {
  Rational total(0);
  for (const auto& p : all_partitions(n)) {
    if (noncrossing_by_definition(p)) continue;  // crossing found
    Rational prod(1);
    for (const auto& block : p.blocks) prod *= cumulants.at(block.size() - 1);
    total += prod;
  }
  return total;
}

// Cauchy transform of the truncated-R law as a root of the polynomial
// G (z - R(G)) = 1, branch selected by G ~ 1/z and Im G <= 0.
inline std::complex<double> cauchy_by_root(const std::vector<double>& cumulants,
                                           std::complex<double> z) {
  // sum_k r_k G^k - z G + 1 = 0, degree max(K, 1)
  const int k = static_cast<int>(cumulants.size());
  std::vector<std::complex<double>> poly(static_cast<size_t>(std::max(k, 1)) + 1,
                                         std::complex<double>(0.0, 0.0));
  poly[0] = 1.0;
  poly[1] = -z;
  for (int i = 1; i <= k; ++i) poly[static_cast<size_t>(i)] += cumulants[static_cast<size_t>(i) - 1];
  while (poly.size() > 2 && std::abs(poly.back()) == 0.0) poly.pop_back();
  const int deg = static_cast<int>(poly.size()) - 1;
  if (deg == 1) return -poly[0] / poly[1];

  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -poly[static_cast<size_t>(i)] / poly.back();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion);

  // Pick the root closest to the resolvent-like branch: Im G <= 0 and minimal
  // distance to 1/z among those.
  std::complex<double> best = 1.0 / z;
  double best_score = 1e300;
  for (int i = 0; i < deg; ++i) {
    const std::complex<double> g = es.eigenvalues()(i);
    if (g.imag() > 1e-9) continue;
    const double score = std::abs(g - 1.0 / z);
    if (score < best_score) {
      best_score = score;
      best = g;
    }
  }
  return best;
}

// CDF of the standard semicircle law on [-2, 2].
inline double semicircle_cdf(double x) {
  constexpr double pi = 3.14159265358979323846;
  if (x <= -2) return 0.0;
  if (x >= 2) return 1.0;
  return 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * pi) + std::asin(x / 2.0) / pi;
}

inline double solve_semicircle_quantile(double level) {
  double lo = -2.0, hi = 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (semicircle_cdf(mid) < level ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Deterministic random rationals with small denominators.
struct RationalGen {
  std::mt19937_64 rng;
  explicit RationalGen(std::uint64_t seed) : rng(seed) {}

  Rational positive(int max_num = 6, int max_den = 4) {
    std::uniform_int_distribution<int> num(0, max_num);
    std::uniform_int_distribution<int> den(1, max_den);
    return Rational(num(rng), den(rng));
  }
  Rational signed_value(int max_num = 6, int max_den = 4) {
    std::uniform_int_distribution<int> sign(0, 1);
    const Rational v = positive(max_num, max_den);
    return sign(rng) ? v : -v;
  }
};

}  // namespace oracle
