#include "core/tensor_poly.hpp"

#include <string>

namespace fsc {

TensorPolynomial::TensorPolynomial(int arity) : arity_(arity) {
  if (arity < 1) fail(ErrorCode::invalid_argument, "tensor arity must be at least 1");
}

void TensorPolynomial::add_term(const TensorWord& word, const Rational& coeff) {
  if (static_cast<int>(word.size()) != arity_)
    fail(ErrorCode::invalid_argument, "tensor word arity mismatch");
  if (coeff == 0) return;
  auto [it, inserted] = terms_.emplace(word, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

TensorPolynomial TensorPolynomial::operator+(const TensorPolynomial& other) const {
  if (arity_ != other.arity_) fail(ErrorCode::invalid_argument, "tensor arity mismatch in sum");
  TensorPolynomial out(*this);
  for (const auto& [w, c] : other.terms_) out.add_term(w, c);
  return out;
}

TensorPolynomial TensorPolynomial::scaled(const Rational& c) const {
  TensorPolynomial out(arity_);
  if (c == 0) return out;
  for (const auto& [w, coeff] : terms_) out.terms_.emplace(w, coeff * c);
  return out;
}

TensorPolynomial TensorPolynomial::multiply_last_by_x() const {
  TensorPolynomial out(arity_);
  for (const auto& [w, c] : terms_) {
    TensorWord bumped(w);
    ++bumped.back();
    out.terms_.emplace(std::move(bumped), c);
  }
  return out;
}

TensorPolynomial TensorPolynomial::tensor_with_unit() const {
  TensorPolynomial out(arity_ + 1);
  for (const auto& [w, c] : terms_) {
    TensorWord extended(w);
    extended.push_back(0);
    out.terms_.emplace(std::move(extended), c);
  }
  return out;
}

namespace {

void compositions_into(int total, int parts, TensorWord& word, const Rational& coeff,
                       TensorPolynomial& out) {
  if (parts == 1) {
    word.push_back(total);
    out.add_term(word, coeff);
    word.pop_back();
    return;
  }
  for (int first = 0; first <= total; ++first) {
    word.push_back(first);
    compositions_into(total - first, parts - 1, word, coeff, out);
    word.pop_back();
  }
}

}  // namespace

TensorPolynomial partial_k(const Polynomial& p, int k) {
  if (k < 0) fail(ErrorCode::invalid_argument, "difference quotient order must be nonnegative");
  TensorPolynomial out(k + 1);
  Rational kfact(1);
  for (int i = 2; i <= k; ++i) kfact *= i;
  for (int n = 0; n < static_cast<int>(p.size()); ++n) {
    const Rational& c = p[static_cast<size_t>(n)];
    if (c == 0 || n < k) continue;
    TensorWord word;
    word.reserve(static_cast<size_t>(k) + 1);
    compositions_into(n - k, k + 1, word, c * kfact, out);
  }
  return out;
}

bool derivation_identity_check(const Polynomial& p, int k) {
  if (k < 1) fail(ErrorCode::invalid_argument, "the derivation identity needs k >= 1");
  Polynomial px(p.size() + 1, Rational(0));
  for (size_t i = 0; i < p.size(); ++i) px[i + 1] = p[i];

  const TensorPolynomial lhs = partial_k(px, k);
  const TensorPolynomial rhs =
      partial_k(p, k).multiply_last_by_x() + partial_k(p, k - 1).tensor_with_unit().scaled(Rational(k));
  return lhs == rhs;
}

Polynomial resolvent_series(const Rational& z, int d) {
  if (z == 0) fail(ErrorCode::invalid_argument, "resolvent series needs z != 0");
  Polynomial p(static_cast<size_t>(d) + 1);
  Rational zpow = Rational(1) / z;
  for (int j = 0; j <= d; ++j) {
    p[static_cast<size_t>(j)] = zpow;
    zpow /= z;
  }
  return p;
}

}  // namespace fsc
