#pragma once

#include <Eigen/Dense>

#include <vector>

#include "core/errors.hpp"

namespace fsc {

using Matrix = Eigen::MatrixXcd;
using Scalar = std::complex<double>;

// Normalized trace tr/N, the fixed state of the matrix model.
inline Scalar state(const Matrix& a) { return a.trace() / static_cast<double>(a.rows()); }

/// Element of the (k+1)-fold tensor algebra over N x N matrices, stored as a
/// finite sum of elementary tensors. All paper operations (sharp, phi_k,
/// otimes_2) act factor-wise, so flattening is never required.
class OperatorTensor {
public:
  OperatorTensor(int arity, int dim);

  static OperatorTensor elementary(std::vector<Matrix> factors);
  static OperatorTensor scalar_unit(int arity, int dim);  // 1 x 1 x .. x 1

  int arity() const { return arity_; }
  int dim() const { return dim_; }
  bool zero() const { return terms_.empty(); }
  const std::vector<std::vector<Matrix>>& terms() const { return terms_; }

  void add_term(std::vector<Matrix> factors, Scalar coeff = Scalar(1.0, 0.0));

  OperatorTensor operator+(const OperatorTensor& other) const;
  OperatorTensor operator-(const OperatorTensor& other) const;
  OperatorTensor scaled(Scalar c) const;

  // (A x B)* = B* x A* (arity 2).
  OperatorTensor adjoint() const;

  // u # a = sum A a B (arity 2).
  Matrix sharp(const Matrix& a) const;

  // Algebra product on A x A^op (arity 2): (X x Y)(A x B) = XA x BY.
  OperatorTensor mul2(const OperatorTensor& other) const;

  // phi_{k+1} = I x phi^{x(k-1)} x I: traces out all middle factors.
  OperatorTensor phi_contract() const;

  // Right action # m_k(U_1..U_k): sandwiches U_j at the j-th tensor gap,
  // (Z_0 x .. x Z_k) -> (Z_0 A_1) x (B_1 Z_1 A_2) x .. x (B_k Z_k).
  OperatorTensor sharp_m(const std::vector<OperatorTensor>& us) const;

  // U x_2 V = phi_3[(U x 1)(1 x V)]; on elementary tensors phi[BC] (A x D).
  static OperatorTensor otimes2(const OperatorTensor& u, const OperatorTensor& v);

  // Matrix of the map a -> u # a (arity 2 only); a faithful representative,
  // used to compare tensors across different elementary-sum presentations.
  Matrix flatten2() const;

private:
  int arity_;
  int dim_;
  std::vector<std::vector<Matrix>> terms_;
};

// The Ito coefficient U_{m,n} of the expansion of M^n, closed form:
//   U_{m,n} = sum_{k=1..m} (1/k!) phi_{k+1}[ d^k(x^n)(M) # S(m,k) ],
// with S(m,k) the sum over compositions i_1+..+i_k = m of # m_k(U_{i_1},..).
// Entries of `us` beyond the list are zero; m > n*K gives the zero tensor.
OperatorTensor ito_coeff_closed(int n, int m, const std::vector<OperatorTensor>& us, const Matrix& big_m);

// Same family through the product-formula recursion
//   U_{m,n+1} = (M^n x 1) # U_m + (1 x M) # U_{m,n} + sum_{i+j=m} U_{i,n} x_2 U_j
// unrolled from U_{m,1} = U_m. Returns U_{m,n} for m = 1..n*K.
std::vector<OperatorTensor> ito_coeff_recursive(int n, const std::vector<OperatorTensor>& us,
                                                const Matrix& big_m);

}  // namespace fsc
