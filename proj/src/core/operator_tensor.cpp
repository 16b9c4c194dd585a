#include "core/operator_tensor.hpp"

#include <functional>

namespace fsc {

OperatorTensor::OperatorTensor(int arity, int dim) : arity_(arity), dim_(dim) {
  if (arity < 1) fail(ErrorCode::invalid_argument, "tensor arity must be at least 1");
  if (dim < 1) fail(ErrorCode::invalid_argument, "tensor dimension must be positive");
}

OperatorTensor OperatorTensor::elementary(std::vector<Matrix> factors) {
  if (factors.empty()) fail(ErrorCode::invalid_argument, "elementary tensor needs at least one factor");
  OperatorTensor out(static_cast<int>(factors.size()), static_cast<int>(factors.front().rows()));
  out.add_term(std::move(factors));
  return out;
}

OperatorTensor OperatorTensor::scalar_unit(int arity, int dim) {
  std::vector<Matrix> factors(static_cast<size_t>(arity), Matrix::Identity(dim, dim));
  return elementary(std::move(factors));
}

void OperatorTensor::add_term(std::vector<Matrix> factors, Scalar coeff) {
  if (static_cast<int>(factors.size()) != arity_)
    fail(ErrorCode::contract, "tensor term arity mismatch");
  for (const auto& f : factors)
    if (f.rows() != dim_ || f.cols() != dim_) fail(ErrorCode::contract, "tensor factor dimension mismatch");
  if (coeff == Scalar(0.0, 0.0)) return;
  factors.front() *= coeff;
  terms_.push_back(std::move(factors));
}

OperatorTensor OperatorTensor::operator+(const OperatorTensor& other) const {
  if (arity_ != other.arity_ || dim_ != other.dim_)
    fail(ErrorCode::contract, "tensor shape mismatch in sum");
  OperatorTensor out(*this);
  out.terms_.insert(out.terms_.end(), other.terms_.begin(), other.terms_.end());
  return out;
}

OperatorTensor OperatorTensor::operator-(const OperatorTensor& other) const {
  return *this + other.scaled(Scalar(-1.0, 0.0));
}

OperatorTensor OperatorTensor::scaled(Scalar c) const {
  OperatorTensor out(arity_, dim_);
  if (c == Scalar(0.0, 0.0)) return out;
  out.terms_ = terms_;
  for (auto& t : out.terms_) t.front() *= c;
  return out;
}

OperatorTensor OperatorTensor::adjoint() const {
  if (arity_ != 2) fail(ErrorCode::contract, "involution implemented on arity-2 tensors");
  OperatorTensor out(2, dim_);
  for (const auto& t : terms_) out.terms_.push_back({t[1].adjoint(), t[0].adjoint()});
  return out;
}

Matrix OperatorTensor::sharp(const Matrix& a) const {
  if (arity_ != 2) fail(ErrorCode::contract, "# acts on arity-2 tensors");
  if (a.rows() != dim_ || a.cols() != dim_) fail(ErrorCode::contract, "# operand dimension mismatch");
  Matrix out = Matrix::Zero(dim_, dim_);
  for (const auto& t : terms_) out.noalias() += t[0] * a * t[1];
  return out;
}

OperatorTensor OperatorTensor::mul2(const OperatorTensor& other) const {
  if (arity_ != 2 || other.arity_ != 2) fail(ErrorCode::contract, "algebra product is arity-2 only");
  if (dim_ != other.dim_) fail(ErrorCode::contract, "algebra product dimension mismatch");
  OperatorTensor out(2, dim_);
  for (const auto& s : terms_)
    for (const auto& t : other.terms_) out.terms_.push_back({s[0] * t[0], t[1] * s[1]});
  return out;
}

OperatorTensor OperatorTensor::phi_contract() const {
  if (arity_ < 2) fail(ErrorCode::contract, "contraction needs arity >= 2");
  OperatorTensor out(2, dim_);
  for (const auto& t : terms_) {
    Scalar middle(1.0, 0.0);
    for (int j = 1; j + 1 < arity_; ++j) middle *= state(t[static_cast<size_t>(j)]);
    if (middle == Scalar(0.0, 0.0)) continue;
    out.terms_.push_back({middle * t.front(), t.back()});
  }
  return out;
}

OperatorTensor OperatorTensor::sharp_m(const std::vector<OperatorTensor>& us) const {
  const int k = static_cast<int>(us.size());
  if (arity_ != k + 1) fail(ErrorCode::contract, "# m_k needs an arity k+1 tensor");
  for (const auto& u : us)
    if (u.arity_ != 2 || u.dim_ != dim_) fail(ErrorCode::contract, "# m_k factors must be arity-2, same dim");

  OperatorTensor out(arity_, dim_);
  // Multilinear expansion over the elementary terms of each U_j.
  std::vector<const std::vector<Matrix>*> choice(static_cast<size_t>(k));
  std::function<void(const std::vector<Matrix>&, int)> expand = [&](const std::vector<Matrix>& z, int depth) {
    if (depth == k) {
      std::vector<Matrix> w(static_cast<size_t>(arity_));
      w[0] = z[0] * (*choice[0])[0];
      for (int j = 1; j < k; ++j) w[static_cast<size_t>(j)] = (*choice[static_cast<size_t>(j) - 1])[1] * z[static_cast<size_t>(j)] * (*choice[static_cast<size_t>(j)])[0];
      w[static_cast<size_t>(k)] = (*choice[static_cast<size_t>(k) - 1])[1] * z[static_cast<size_t>(k)];
      out.terms_.push_back(std::move(w));
      return;
    }
    for (const auto& term : us[static_cast<size_t>(depth)].terms_) {
      choice[static_cast<size_t>(depth)] = &term;
      expand(z, depth + 1);
    }
  };
  for (const auto& z : terms_) expand(z, 0);
  return out;
}

OperatorTensor OperatorTensor::otimes2(const OperatorTensor& u, const OperatorTensor& v) {
  if (u.arity_ != 2 || v.arity_ != 2) fail(ErrorCode::contract, "x_2 is arity-2 only");
  if (u.dim_ != v.dim_) fail(ErrorCode::contract, "x_2 dimension mismatch");
  OperatorTensor out(2, u.dim_);
  for (const auto& s : u.terms_)
    for (const auto& t : v.terms_) {
      const Scalar w = state(s[1] * t[0]);
      if (w == Scalar(0.0, 0.0)) continue;
      out.terms_.push_back({w * s[0], t[1]});
    }
  return out;
}

Matrix OperatorTensor::flatten2() const {
  if (arity_ != 2) fail(ErrorCode::contract, "flatten is arity-2 only");
  const int n = dim_;
  Matrix out = Matrix::Zero(n * n, n * n);
  for (const auto& t : terms_) {
    const Matrix bt = t[1].transpose();
    // kron(B^T, A): the matrix of a -> A a B on column-stacked a
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out.block(i * n, j * n, n, n) += bt(i, j) * t[0];
  }
  return out;
}

namespace {

void compositions_positive(int total, int parts, std::vector<int>& parts_out,
                           const std::function<void(const std::vector<int>&)>& fn) {
  if (parts == 1) {
    if (total >= 1) {
      parts_out.push_back(total);
      fn(parts_out);
      parts_out.pop_back();
    }
    return;
  }
  for (int first = 1; first + (parts - 1) <= total; ++first) {
    parts_out.push_back(first);
    compositions_positive(total - first, parts - 1, parts_out, fn);
    parts_out.pop_back();
  }
}

void compositions_nonnegative(int total, int parts, std::vector<int>& parts_out,
                              const std::function<void(const std::vector<int>&)>& fn) {
  if (parts == 1) {
    parts_out.push_back(total);
    fn(parts_out);
    parts_out.pop_back();
    return;
  }
  for (int first = 0; first <= total; ++first) {
    parts_out.push_back(first);
    compositions_nonnegative(total - first, parts - 1, parts_out, fn);
    parts_out.pop_back();
  }
}

}  // namespace

OperatorTensor ito_coeff_closed(int n, int m, const std::vector<OperatorTensor>& us, const Matrix& big_m) {
  if (n < 1 || m < 1) fail(ErrorCode::invalid_argument, "ito coefficients need n, m >= 1");
  if (us.empty()) fail(ErrorCode::invalid_argument, "need at least one integrand tensor");
  const int dim = static_cast<int>(big_m.rows());
  const int cap = static_cast<int>(us.size());

  std::vector<Matrix> mpow(static_cast<size_t>(n) + 1);
  mpow[0] = Matrix::Identity(dim, dim);
  for (int j = 1; j <= n; ++j) mpow[static_cast<size_t>(j)] = mpow[static_cast<size_t>(j) - 1] * big_m;

  OperatorTensor acc(2, dim);
  for (int k = 1; k <= std::min(m, n); ++k) {
    // d^k x^n evaluated at M, word by word; the k! cancels against 1/k!.
    std::vector<int> comp;
    compositions_positive(m, k, comp, [&](const std::vector<int>& is) {
      for (int i : is)
        if (i > cap) return;
      std::vector<OperatorTensor> sandwich;
      sandwich.reserve(static_cast<size_t>(k));
      for (int i : is) sandwich.push_back(us[static_cast<size_t>(i) - 1]);
      std::vector<int> word;
      compositions_nonnegative(n - k, k + 1, word, [&](const std::vector<int>& exps) {
        std::vector<Matrix> z;
        z.reserve(exps.size());
        for (int e : exps) z.push_back(mpow[static_cast<size_t>(e)]);
        acc = acc + OperatorTensor::elementary(std::move(z)).sharp_m(sandwich).phi_contract();
      });
    });
  }
  return acc;
}

std::vector<OperatorTensor> ito_coeff_recursive(int n, const std::vector<OperatorTensor>& us,
                                                const Matrix& big_m) {
  if (n < 1) fail(ErrorCode::invalid_argument, "ito recursion needs n >= 1");
  if (us.empty()) fail(ErrorCode::invalid_argument, "need at least one integrand tensor");
  const int dim = static_cast<int>(big_m.rows());
  const int cap = static_cast<int>(us.size());

  auto u_at = [&](int i) {
    return i <= cap ? us[static_cast<size_t>(i) - 1] : OperatorTensor(2, dim);
  };

  std::vector<Matrix> mpow(static_cast<size_t>(n) + 1);
  mpow[0] = Matrix::Identity(dim, dim);
  for (int j = 1; j <= n; ++j) mpow[static_cast<size_t>(j)] = mpow[static_cast<size_t>(j) - 1] * big_m;

  // level[m-1] = U_{m, nu}; base nu = 1 is U_m itself.
  std::vector<OperatorTensor> level;
  for (int m = 1; m <= cap; ++m) level.push_back(u_at(m));

  for (int nu = 1; nu < n; ++nu) {
    const int mmax = (nu + 1) * cap;
    const OperatorTensor mn_left = OperatorTensor::elementary({mpow[static_cast<size_t>(nu)], Matrix::Identity(dim, dim)});
    const OperatorTensor m_right = OperatorTensor::elementary({Matrix::Identity(dim, dim), big_m});
    std::vector<OperatorTensor> next;
    next.reserve(static_cast<size_t>(mmax));
    for (int m = 1; m <= mmax; ++m) {
      OperatorTensor acc = mn_left.mul2(u_at(m));
      if (m - 1 < static_cast<int>(level.size())) acc = acc + m_right.mul2(level[static_cast<size_t>(m) - 1]);
      for (int i = 1; i < m; ++i) {
        const int j = m - i;
        if (j > cap || i - 1 >= static_cast<int>(level.size())) continue;
        acc = acc + OperatorTensor::otimes2(level[static_cast<size_t>(i) - 1], u_at(j));
      }
      next.push_back(std::move(acc));
    }
    level = std::move(next);
  }
  return level;
}

}  // namespace fsc
