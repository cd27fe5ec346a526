#include "crn/matrix.hpp"

#include <numeric>
#include <stdexcept>

namespace crn {

RatMat RatMat::identity(std::size_t n) {
  RatMat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

RatMat RatMat::transpose() const {
  RatMat t(c_, r_);
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t j = 0; j < c_; ++j) t.at(j, i) = at(i, j);
  return t;
}

RatMat RatMat::operator*(const RatMat& o) const {
  if (c_ != o.r_) throw std::invalid_argument("matrix product dimension mismatch");
  RatMat p(r_, o.c_);
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t k = 0; k < c_; ++k) {
      if (at(i, k) == 0) continue;
      for (std::size_t j = 0; j < o.c_; ++j) p.at(i, j) += at(i, k) * o.at(k, j);
    }
  return p;
}

RatMat RatMat::operator-(const RatMat& o) const {
  if (r_ != o.r_ || c_ != o.c_) throw std::invalid_argument("matrix difference dimension mismatch");
  RatMat d(r_, c_);
  for (std::size_t i = 0; i < a_.size(); ++i) d.a_[i] = a_[i] - o.a_[i];
  return d;
}

bool RatMat::is_zero() const {
  for (auto& v : a_)
    if (v != 0) return false;
  return true;
}

RatMat RatMat::rref(std::vector<std::size_t>* pivot_cols,
                    const std::vector<std::size_t>* col_order) const {
  RatMat m = *this;
  std::vector<std::size_t> order;
  if (col_order) {
    order = *col_order;
  } else {
    order.resize(c_);
    std::iota(order.begin(), order.end(), 0);
  }
  if (pivot_cols) pivot_cols->clear();
  std::size_t row = 0;
  for (std::size_t oc = 0; oc < order.size() && row < r_; ++oc) {
    std::size_t col = order[oc];
    std::size_t pr = row;
    while (pr < r_ && m.at(pr, col) == 0) ++pr;
    if (pr == r_) continue;
    if (pr != row)
      for (std::size_t j = 0; j < c_; ++j) std::swap(m.at(pr, j), m.at(row, j));
    Rat inv = Rat(1) / m.at(row, col);
    for (std::size_t j = 0; j < c_; ++j) m.at(row, j) *= inv;
    for (std::size_t i = 0; i < r_; ++i) {
      if (i == row || m.at(i, col) == 0) continue;
      Rat f = m.at(i, col);
      for (std::size_t j = 0; j < c_; ++j) m.at(i, j) -= f * m.at(row, j);
    }
    if (pivot_cols) pivot_cols->push_back(col);
    ++row;
  }
  return m;
}

std::size_t RatMat::rank() const {
  std::vector<std::size_t> piv;
  rref(&piv);
  return piv.size();
}

RatMat RatMat::nullspace(const std::vector<std::size_t>* col_order) const {
  std::vector<std::size_t> piv;
  RatMat r = rref(&piv, col_order);
  std::vector<bool> is_piv(c_, false);
  for (std::size_t i = 0; i < piv.size(); ++i) is_piv[piv[i]] = true;
  std::vector<std::size_t> order;
  if (col_order) order = *col_order;
  else {
    order.resize(c_);
    std::iota(order.begin(), order.end(), 0);
  }
  std::vector<std::size_t> free_cols;
  for (std::size_t c : order)
    if (!is_piv[c]) free_cols.push_back(c);
  RatMat basis(c_, free_cols.size());
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    std::size_t fc = free_cols[k];
    basis.at(fc, k) = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) basis.at(piv[i], k) = -r.at(i, fc);
  }
  return basis;
}

std::optional<RatMat> RatMat::inverse() const {
  if (r_ != c_) return std::nullopt;
  RatMat aug(r_, 2 * c_);
  for (std::size_t i = 0; i < r_; ++i) {
    for (std::size_t j = 0; j < c_; ++j) aug.at(i, j) = at(i, j);
    aug.at(i, c_ + i) = 1;
  }
  std::vector<std::size_t> order(c_);
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::size_t> piv;
  RatMat r = aug.rref(&piv, &order);
  if (piv.size() != c_) return std::nullopt;
  RatMat inv(r_, c_);
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t j = 0; j < c_; ++j) inv.at(i, j) = r.at(i, c_ + j);
  return inv;
}

RatMat RatMat::generalized_inverse() const {
  std::vector<std::size_t> piv;
  RatMat red = rref(&piv);
  std::size_t rk = piv.size();
  if (rk == 0) return RatMat(c_, r_);  // zero matrix: H = 0 works
  // M = C R with C = columns of M at pivot positions, R = nonzero rows of rref
  RatMat C(r_, rk), R(rk, c_);
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t k = 0; k < rk; ++k) C.at(i, k) = at(i, piv[k]);
  for (std::size_t k = 0; k < rk; ++k)
    for (std::size_t j = 0; j < c_; ++j) R.at(k, j) = red.at(k, j);
  RatMat Rt = R.transpose();
  RatMat Ct = C.transpose();
  auto rrt = (R * Rt).inverse();
  auto ctc = (Ct * C).inverse();
  if (!rrt || !ctc) throw std::logic_error("rank factorization produced singular Gram matrix");
  return Rt * (*rrt) * (*ctc) * Ct;
}

std::size_t rank_bareiss(const RatMat& m) {
  const std::size_t R = m.rows(), C = m.cols();
  if (R == 0 || C == 0) return 0;
  // scale each row to integers
  std::vector<std::vector<BigInt>> a(R, std::vector<BigInt>(C));
  for (std::size_t i = 0; i < R; ++i) {
    BigInt l = 1;
    for (std::size_t j = 0; j < C; ++j) l = lcm(l, denominator(m.at(i, j)));
    for (std::size_t j = 0; j < C; ++j)
      a[i][j] = numerator(m.at(i, j)) * (l / denominator(m.at(i, j)));
  }
  BigInt prev = 1;
  std::size_t row = 0;
  for (std::size_t col = 0; col < C && row < R; ++col) {
    std::size_t pr = row;
    while (pr < R && a[pr][col] == 0) ++pr;
    if (pr == R) continue;
    std::swap(a[pr], a[row]);
    for (std::size_t i = row + 1; i < R; ++i) {
      for (std::size_t j = col + 1; j < C; ++j) {
        BigInt num = a[i][j] * a[row][col] - a[i][col] * a[row][j];
        a[i][j] = num / prev;  // exact by Bareiss
      }
      a[i][col] = 0;
    }
    prev = a[row][col];
    ++row;
  }
  return row;
}

} // namespace crn
