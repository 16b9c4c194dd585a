#pragma once

#include <map>
#include <vector>

#include "core/rational.hpp"

namespace fsc {

// coeffs[i] is the coefficient of x^i.
using Polynomial = std::vector<Rational>;

// Exponents (i_0, .., i_k) of an elementary tensor x^{i_0} x .. x x^{i_k}.
using TensorWord = std::vector<int>;

/// Formal linear combination of tensor words of one fixed arity.
class TensorPolynomial {
public:
  explicit TensorPolynomial(int arity);

  int arity() const { return arity_; }
  bool zero() const { return terms_.empty(); }
  const std::map<TensorWord, Rational>& terms() const { return terms_; }

  void add_term(const TensorWord& word, const Rational& coeff);

  TensorPolynomial operator+(const TensorPolynomial& other) const;
  TensorPolynomial scaled(const Rational& c) const;
  bool operator==(const TensorPolynomial& other) const = default;

  // Left multiplication of the last factor by x (exponent bump).
  TensorPolynomial multiply_last_by_x() const;

  // p x 1: appends a zero exponent, raising the arity by one.
  TensorPolynomial tensor_with_unit() const;

private:
  int arity_;
  std::map<TensorWord, Rational> terms_;
};

// The k-th free difference quotient: on monomials
//   d^k x^n = k! sum_{i_0+..+i_k = n-k} x^{i_0} x x^{i_1} x .. x x^{i_k},
// extended linearly; k = 0 embeds p as an arity-1 tensor. Zero when k > deg p.
TensorPolynomial partial_k(const Polynomial& p, int k);

// Checks d^k(p x) = (1 x .. x x) d^k p + k d^{k-1} p x 1 exactly.
bool derivation_identity_check(const Polynomial& p, int k);

// Truncated resolvent series sum_{j=0..d} z^{-(j+1)} x^j with z = num/den,
// used by the resolvent-derivative tests.
Polynomial resolvent_series(const Rational& z, int d);

}  // namespace fsc
