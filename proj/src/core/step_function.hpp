#pragma once

#include <vector>

#include "core/rational.hpp"

namespace fsc {

/// Piecewise-constant compactly supported integrand: value v_i on
/// [t_{i-1}, t_i), zero outside [t_0, t_m).
class StepFunction {
public:
  StepFunction(std::vector<Rational> breakpoints, std::vector<Rational> values);

  int segments() const { return static_cast<int>(values_.size()); }
  const std::vector<Rational>& breakpoints() const { return breaks_; }
  const std::vector<Rational>& values() const { return values_; }
  const Rational& support_begin() const { return breaks_.front(); }
  const Rational& support_end() const { return breaks_.back(); }

  Rational value_at(const Rational& t) const;
  double value_at(double t) const;

  // ||f||_p^p = sum_i |v_i|^p (t_i - t_{i-1}), exact.
  Rational lp_power(int p) const;

  // Signed integral of f.
  Rational integral() const;

  // sum_i |v_i|^{p/k} (t_i - t_{i-1}); irrational in general, hence double.
  double lp_power_of_root(int p, int k) const;

  bool nonnegative() const;

  StepFunction operator+(const StepFunction& other) const;
  StepFunction scaled(const Rational& c) const;

private:
  std::vector<Rational> breaks_;
  std::vector<Rational> values_;
};

}  // namespace fsc
