#include "core/step_function.hpp"

#include <algorithm>
#include <cmath>

namespace fsc {

namespace {

Rational rational_pow(Rational base, int p) {
  Rational acc(1);
  while (p > 0) {
    if (p & 1) acc *= base;
    base *= base;
    p >>= 1;
  }
  return acc;
}

}  // namespace

StepFunction::StepFunction(std::vector<Rational> breakpoints, std::vector<Rational> values)
    : breaks_(std::move(breakpoints)), values_(std::move(values)) {
  if (values_.empty()) fail(ErrorCode::invalid_argument, "step function needs at least one segment");
  if (breaks_.size() != values_.size() + 1)
    fail(ErrorCode::invalid_argument, "step function needs one more breakpoint than values");
  for (size_t i = 1; i < breaks_.size(); ++i)
    if (!(breaks_[i - 1] < breaks_[i]))
      fail(ErrorCode::invalid_argument, "step function breakpoints must be strictly increasing");
}

Rational StepFunction::value_at(const Rational& t) const {
  if (t < breaks_.front() || t >= breaks_.back()) return Rational(0);
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
  return values_[static_cast<size_t>(it - breaks_.begin()) - 1];
}

double StepFunction::value_at(double t) const {
  if (t < to_double(breaks_.front()) || t >= to_double(breaks_.back())) return 0.0;
  // segments are few; a linear scan keeps the rational comparisons exact
  for (size_t i = 1; i < breaks_.size(); ++i)
    if (t < to_double(breaks_[i])) return to_double(values_[i - 1]);
  return 0.0;
}

Rational StepFunction::lp_power(int p) const {
  if (p < 1) fail(ErrorCode::invalid_argument, "lp power needs p >= 1");
  Rational acc(0);
  for (size_t i = 0; i < values_.size(); ++i)
    acc += rational_pow(abs(values_[i]), p) * (breaks_[i + 1] - breaks_[i]);
  return acc;
}

Rational StepFunction::integral() const {
  Rational acc(0);
  for (size_t i = 0; i < values_.size(); ++i) acc += values_[i] * (breaks_[i + 1] - breaks_[i]);
  return acc;
}

double StepFunction::lp_power_of_root(int p, int k) const {
  double acc = 0.0;
  for (size_t i = 0; i < values_.size(); ++i) {
    const double v = std::abs(to_double(values_[i]));
    acc += std::pow(v, static_cast<double>(p) / k) * to_double(breaks_[i + 1] - breaks_[i]);
  }
  return acc;
}

bool StepFunction::nonnegative() const {
  return std::all_of(values_.begin(), values_.end(), [](const Rational& v) { return v >= 0; });
}

StepFunction StepFunction::operator+(const StepFunction& other) const {
  std::vector<Rational> merged = breaks_;
  merged.insert(merged.end(), other.breaks_.begin(), other.breaks_.end());
  std::sort(merged.begin(), merged.end());
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
  std::vector<Rational> vals;
  vals.reserve(merged.size() - 1);
  for (size_t i = 0; i + 1 < merged.size(); ++i) vals.push_back(value_at(merged[i]) + other.value_at(merged[i]));
  return StepFunction(std::move(merged), std::move(vals));
}

StepFunction StepFunction::scaled(const Rational& c) const {
  std::vector<Rational> vals = values_;
  for (auto& v : vals) v *= c;
  return StepFunction(breaks_, std::move(vals));
}

}  // namespace fsc
