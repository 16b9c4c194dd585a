#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "core/operator_tensor.hpp"
#include "core/tensor_poly.hpp"
#include "oracles.hpp"

using fsc::Matrix;
using fsc::OperatorTensor;
using fsc::Polynomial;
using fsc::Rational;
using fsc::Scalar;
using fsc::TensorPolynomial;
using fsc::TensorWord;

namespace {

// Iterated-derivation route: d^k = k (1 x .. x d) d^{k-1}, with d acting on
// the last factor by d x^m = sum_{a+b=m-1} x^a x x^b.
TensorPolynomial partial_k_iterated(const Polynomial& p, int k) {
  TensorPolynomial cur(1);
  for (size_t i = 0; i < p.size(); ++i)
    if (p[i] != 0) cur.add_term({static_cast<int>(i)}, p[i]);
  for (int step = 1; step <= k; ++step) {
    TensorPolynomial next(step + 1);
    for (const auto& [word, coeff] : cur.terms()) {
      const int m = word.back();
      for (int a = 0; a + 1 <= m; ++a) {
        TensorWord w(word.begin(), word.end() - 1);
        w.push_back(a);
        w.push_back(m - 1 - a);
        next.add_term(w, coeff * Rational(step));
      }
    }
    cur = next;
  }
  return cur;
}

std::mt19937_64 rng(20260810);

Matrix random_matrix(int n) {
  std::normal_distribution<double> nd;
  Matrix m(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) m(i, j) = Scalar(nd(rng), nd(rng));
  return m;
}

Polynomial random_polynomial(int deg, oracle::RationalGen& gen) {
  Polynomial p(static_cast<size_t>(deg) + 1);
  for (auto& c : p) c = gen.signed_value(4, 3);
  return p;
}

double tensor_distance(const OperatorTensor& a, const OperatorTensor& b) {
  return (a.flatten2() - b.flatten2()).norm();
}

}  // namespace

TEST_CASE("difference quotient on monomials") {
  SUBCASE("d x = 1 x 1") {
    const TensorPolynomial d = fsc::partial_k({0, 1}, 1);
    REQUIRE(d.terms().size() == 1);
    CHECK(d.terms().begin()->first == TensorWord{0, 0});
    CHECK(d.terms().begin()->second == 1);
  }
  SUBCASE("d^2 x^3 = 2 (sum of the three unit words)") {
    const TensorPolynomial d = fsc::partial_k({0, 0, 0, 1}, 2);
    REQUIRE(d.terms().size() == 3);
    for (const auto& [w, c] : d.terms()) CHECK(c == 2);
    CHECK(d.terms().count({1, 0, 0}) == 1);
    CHECK(d.terms().count({0, 1, 0}) == 1);
    CHECK(d.terms().count({0, 0, 1}) == 1);
  }
  SUBCASE("k beyond the degree vanishes") {
    CHECK(fsc::partial_k({0, 0, 1}, 3).zero());
  }
}

TEST_CASE("derivation identity") {
  CHECK(fsc::derivation_identity_check({0, 0, 1}, 1));  // p = x^2
  CHECK(fsc::derivation_identity_check({1}, 1));        // p = 1
  oracle::RationalGen gen(17);
  for (int trial = 0; trial < 25; ++trial) {
    const Polynomial p = random_polynomial(1 + trial % 6, gen);
    const int k = 1 + trial % 4;
    CHECK(fsc::derivation_identity_check(p, k));
  }
}

TEST_CASE("closed monomial formula equals the iterated derivation") {
  oracle::RationalGen gen(18);
  for (int deg = 0; deg <= 8; ++deg) {
    const Polynomial p = random_polynomial(deg, gen);
    for (int k = 1; k <= 5; ++k) CHECK(fsc::partial_k(p, k) == partial_k_iterated(p, k));
  }
}

TEST_CASE("resolvent series derivative identity") {
  // d^k p_d / k! agrees with the (d-k)-truncation of the (k+1)-fold tensor
  // power of the series sum_j z^-(j+1) x^j.
  const Rational z(3, 2);
  for (int d = 1; d <= 6; ++d) {
    const Polynomial pd = fsc::resolvent_series(z, d);
    for (int k = 1; k <= 3 && k <= d; ++k) {
      Rational kfact(1);
      for (int i = 2; i <= k; ++i) kfact *= i;
      const TensorPolynomial got = fsc::partial_k(pd, k).scaled(Rational(1) / kfact);

      TensorPolynomial expect(k + 1);
      std::function<void(TensorWord&, int)> build = [&](TensorWord& word, int depth) {
        if (depth == k + 1) {
          int total = 0;
          for (int e : word) total += e;
          if (total > d - k) return;
          Rational coeff(1);
          for (int e : word) coeff *= pd[static_cast<size_t>(e)];
          // shared z-powers: prod z^-(e_i+1) equals the coefficient product
          expect.add_term(word, coeff);
          return;
        }
        for (int e = 0; e <= d; ++e) {
          word.push_back(e);
          build(word, depth + 1);
          word.pop_back();
        }
      };
      TensorWord word;
      build(word, 0);
      CHECK(got == expect);
    }
  }
}

TEST_CASE("sharp action") {
  const int n = 3;
  const Matrix a = random_matrix(n);
  SUBCASE("unit tensor is the identity action") {
    CHECK((OperatorTensor::scalar_unit(2, n).sharp(a) - a).norm() < 1e-14);
  }
  SUBCASE("sharp against the identity multiplies the factors") {
    const Matrix a1 = random_matrix(n), b1 = random_matrix(n);
    const OperatorTensor u = OperatorTensor::elementary({a1, b1});
    CHECK((u.sharp(Matrix::Identity(n, n)) - a1 * b1).norm() < 1e-13);
  }
  SUBCASE("matches the literal triple product") {
    const Matrix a1 = random_matrix(n), b1 = random_matrix(n);
    const OperatorTensor u = OperatorTensor::elementary({a1, b1});
    CHECK((u.sharp(a) - a1 * a * b1).norm() < 1e-13);
  }
}

TEST_CASE("involution compatibility") {
  const int n = 4;
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix a1 = random_matrix(n), b1 = random_matrix(n), x = random_matrix(n);
    const OperatorTensor u = OperatorTensor::elementary({a1, b1});
    const Matrix lhs = u.sharp(x).adjoint();
    const Matrix rhs = u.adjoint().sharp(x.adjoint());
    CHECK((lhs - rhs).norm() < 1e-12);
  }
}

TEST_CASE("phi contractions") {
  const int n = 3;
  const Matrix a = random_matrix(n), b = random_matrix(n), c = random_matrix(n), d = random_matrix(n);
  SUBCASE("arity 2 is the identity") {
    const OperatorTensor u = OperatorTensor::elementary({a, b});
    CHECK(tensor_distance(u.phi_contract(), u) < 1e-14);
  }
  SUBCASE("arity 3 traces the middle factor") {
    const OperatorTensor t = OperatorTensor::elementary({a, b, c});
    const OperatorTensor expect = OperatorTensor::elementary({a, c}).scaled(fsc::state(b));
    CHECK(tensor_distance(t.phi_contract(), expect) < 1e-13);
  }
  SUBCASE("arity 4 traces both middles") {
    const OperatorTensor t = OperatorTensor::elementary({a, b, c, d});
    const OperatorTensor expect = OperatorTensor::elementary({a, d}).scaled(fsc::state(b) * fsc::state(c));
    CHECK(tensor_distance(t.phi_contract(), expect) < 1e-13);
  }
}

TEST_CASE("otimes2") {
  const int n = 3;
  const Matrix a = random_matrix(n), b = random_matrix(n), c = random_matrix(n), d = random_matrix(n);
  const Matrix id = Matrix::Identity(n, n);
  SUBCASE("(A x 1) x2 (1 x D) = A x D") {
    const OperatorTensor got =
        OperatorTensor::otimes2(OperatorTensor::elementary({a, id}), OperatorTensor::elementary({id, d}));
    CHECK(tensor_distance(got, OperatorTensor::elementary({a, d})) < 1e-13);
  }
  SUBCASE("(1 x B) x2 (C x 1) = phi[BC] 1 x 1") {
    const OperatorTensor got =
        OperatorTensor::otimes2(OperatorTensor::elementary({id, b}), OperatorTensor::elementary({c, id}));
    const OperatorTensor expect = OperatorTensor::scalar_unit(2, n).scaled(fsc::state(b * c));
    CHECK(tensor_distance(got, expect) < 1e-13);
  }
  SUBCASE("random tensors match the explicit arity-3 contraction") {
    // phi_3[(U x 1)(1 x V)] with U = A x B, V = C x D is phi[BC] (A x D);
    // built here directly from the trace, independent of phi_contract.
    const Scalar w = (b * c).trace() / static_cast<double>(n);
    Matrix expect_flat = Matrix::Zero(n * n, n * n);
    const Matrix dt = d.transpose();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) expect_flat.block(i * n, j * n, n, n) += w * dt(i, j) * a;
    const OperatorTensor got =
        OperatorTensor::otimes2(OperatorTensor::elementary({a, b}), OperatorTensor::elementary({c, d}));
    CHECK((got.flatten2() - expect_flat).norm() < 1e-12);
  }
}

TEST_CASE("ito coefficients: hand-checked small cases") {
  const int n = 3;
  const Matrix m = random_matrix(n);
  const Matrix a = random_matrix(n), b = random_matrix(n);
  const std::vector<OperatorTensor> us{OperatorTensor::elementary({a, b})};
  const Matrix id = Matrix::Identity(n, n);

  SUBCASE("n = 1 returns the integrand") {
    CHECK(tensor_distance(fsc::ito_coeff_closed(1, 1, us, m), us[0]) < 1e-13);
    const auto rec = fsc::ito_coeff_recursive(1, us, m);
    REQUIRE(rec.size() == 1);
    CHECK(tensor_distance(rec[0], us[0]) < 1e-13);
  }
  SUBCASE("K = 1, n = 2, m = 1: (M x 1)#U + (1 x M)#U") {
    const OperatorTensor expect = OperatorTensor::elementary({m * a, b}) + OperatorTensor::elementary({a, b * m});
    CHECK(tensor_distance(fsc::ito_coeff_closed(2, 1, us, m), expect) < 1e-12);
  }
  SUBCASE("K = 1, n = 2, m = 2: U x2 U") {
    const OperatorTensor expect = OperatorTensor::otimes2(us[0], us[0]);
    CHECK(tensor_distance(fsc::ito_coeff_closed(2, 2, us, m), expect) < 1e-12);
  }
  SUBCASE("m beyond n K vanishes") {
    CHECK(fsc::ito_coeff_closed(2, 3, us, m).zero());
  }
}

TEST_CASE("ito coefficients: closed form equals the recursion") {
  for (int n_dim : {2, 3, 4}) {
    for (int kk = 1; kk <= 2; ++kk) {
      std::vector<OperatorTensor> us;
      for (int i = 0; i < kk; ++i) us.push_back(OperatorTensor::elementary({random_matrix(n_dim), random_matrix(n_dim)}));
      const Matrix m = random_matrix(n_dim);
      for (int n = 1; n <= 5; ++n) {
        const auto rec = fsc::ito_coeff_recursive(n, us, m);
        for (int mm = 1; mm <= std::min(5, n * kk); ++mm) {
          const OperatorTensor closed = fsc::ito_coeff_closed(n, mm, us, m);
          const double scale = std::max(1.0, closed.flatten2().norm());
          CHECK(tensor_distance(closed, rec[static_cast<size_t>(mm) - 1]) <= 1e-10 * scale);
        }
      }
    }
  }
}

TEST_CASE("tensor bookkeeping errors") {
  const int n = 2;
  const OperatorTensor u = OperatorTensor::scalar_unit(2, n);
  CHECK_THROWS_AS(u.sharp(Matrix::Zero(3, 3)), fsc::Error);
  CHECK_THROWS_AS(OperatorTensor::otimes2(u, OperatorTensor::scalar_unit(2, 3)), fsc::Error);
  CHECK_THROWS_AS(OperatorTensor::scalar_unit(1, 2).phi_contract(), fsc::Error);
  TensorPolynomial tp(2);
  CHECK_THROWS_AS(tp.add_term({1, 2, 3}, Rational(1)), fsc::Error);
}
