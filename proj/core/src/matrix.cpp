#include "opw/matrix.hpp"

#include <cassert>
#include <stdexcept>

namespace opw {

namespace {
const Rational kZero = 0;
}

QMat QMat::identity(int n) {
  QMat m(n, n);
  for (int i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

const Rational& QMat::at(int r, int c) const {
  auto it = e_.find({r, c});
  return it == e_.end() ? kZero : it->second;
}

void QMat::set(int r, int c, const Rational& v) {
  assert(r >= 0 && r < rows_ && c >= 0 && c < cols_);
  if (v == 0)
    e_.erase({r, c});
  else
    e_[{r, c}] = v;
}

void QMat::add_to(int r, int c, const Rational& v) {
  if (v == 0) return;
  auto [it, fresh] = e_.try_emplace({r, c}, v);
  if (!fresh) {
    it->second += v;
    if (it->second == 0) e_.erase(it);
  }
}

QMat QMat::operator*(const QMat& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("QMat: dimension mismatch in product");
  QMat out(rows_, o.cols_);
  for (const auto& [rc, v] : e_) {
    auto [i, k] = rc;
    // row k of o
    auto it = o.e_.lower_bound({k, 0});
    for (; it != o.e_.end() && it->first.first == k; ++it)
      out.add_to(i, it->first.second, v * it->second);
  }
  return out;
}

QMat QMat::operator+(const QMat& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("QMat: dimension mismatch in sum");
  QMat out = *this;
  for (const auto& [rc, v] : o.e_) out.add_to(rc.first, rc.second, v);
  return out;
}

QMat QMat::operator-(const QMat& o) const { return *this + o * Rational(-1); }

QMat QMat::operator*(const Rational& s) const {
  QMat out(rows_, cols_);
  if (s == 0) return out;
  for (const auto& [rc, v] : e_) out.set(rc.first, rc.second, v * s);
  return out;
}

bool QMat::operator==(const QMat& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
}

QMat QMat::transpose() const {
  QMat out(cols_, rows_);
  for (const auto& [rc, v] : e_) out.set(rc.second, rc.first, v);
  return out;
}

QMat QMat::kron(const QMat& o) const {
  QMat out(rows_ * o.rows_, cols_ * o.cols_);
  for (const auto& [rc, v] : e_)
    for (const auto& [rc2, v2] : o.e_)
      out.set(rc.first * o.rows_ + rc2.first, rc.second * o.cols_ + rc2.second, v * v2);
  return out;
}

QMat QMat::direct_sum(const QMat& o) const {
  QMat out(rows_ + o.rows_, cols_ + o.cols_);
  for (const auto& [rc, v] : e_) out.set(rc.first, rc.second, v);
  for (const auto& [rc, v] : o.e_) out.set(rows_ + rc.first, cols_ + rc.second, v);
  return out;
}

std::vector<Rational> QMat::apply(const std::vector<Rational>& v) const {
  if (static_cast<int>(v.size()) != cols_) throw std::invalid_argument("QMat: vector length mismatch");
  std::vector<Rational> out(rows_, 0);
  for (const auto& [rc, val] : e_) out[rc.first] += val * v[rc.second];
  return out;
}

std::vector<std::vector<Rational>> QMat::dense() const {
  std::vector<std::vector<Rational>> m(rows_, std::vector<Rational>(cols_, 0));
  for (const auto& [rc, v] : e_) m[rc.first][rc.second] = v;
  return m;
}

Echelon echelon_form(const QMat& a) {
  Echelon ech;
  ech.m = a.dense();
  int rows = a.rows(), cols = a.cols();
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (ech.m[i][c] != 0) { piv = i; break; }
    if (piv < 0) continue;
    std::swap(ech.m[r], ech.m[piv]);
    Rational inv = ech.m[r][c];
    for (int j = c; j < cols; ++j) ech.m[r][j] /= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || ech.m[i][c] == 0) continue;
      Rational f = ech.m[i][c];
      for (int j = c; j < cols; ++j) ech.m[i][j] -= f * ech.m[r][j];
    }
    ech.pivot_cols.push_back(c);
    ++r;
  }
  return ech;
}

int rank(const QMat& a) { return echelon_form(a).rank(); }

std::vector<std::vector<Rational>> kernel_basis(const QMat& a) {
  Echelon ech = echelon_form(a);
  int cols = a.cols();
  std::vector<bool> is_pivot(cols, false);
  for (int c : ech.pivot_cols) is_pivot[c] = true;
  std::vector<std::vector<Rational>> out;
  for (int c = 0; c < cols; ++c) {
    if (is_pivot[c]) continue;
    std::vector<Rational> v(cols, 0);
    v[c] = 1;
    for (size_t r = 0; r < ech.pivot_cols.size(); ++r)
      v[ech.pivot_cols[r]] = -ech.m[r][c];
    out.push_back(std::move(v));
  }
  return out;
}

std::optional<std::vector<Rational>> solve(const QMat& a, const std::vector<Rational>& b) {
  if (static_cast<int>(b.size()) != a.rows()) throw std::invalid_argument("solve: rhs length mismatch");
  // Augment and eliminate.
  QMat aug(a.rows(), a.cols() + 1);
  for (const auto& [rc, v] : a.entries()) aug.set(rc.first, rc.second, v);
  for (int i = 0; i < a.rows(); ++i) aug.set(i, a.cols(), b[i]);
  Echelon ech = echelon_form(aug);
  std::vector<Rational> x(a.cols(), 0);
  for (size_t r = 0; r < ech.pivot_cols.size(); ++r) {
    int c = ech.pivot_cols[r];
    if (c == a.cols()) return std::nullopt;  // inconsistent
    x[c] = ech.m[r][a.cols()];
  }
  return x;
}

QMat columns_to_mat(const std::vector<std::vector<Rational>>& cols, int rows) {
  QMat out(rows, static_cast<int>(cols.size()));
  for (size_t j = 0; j < cols.size(); ++j)
    for (int i = 0; i < rows; ++i)
      if (cols[j][i] != 0) out.set(i, static_cast<int>(j), cols[j][i]);
  return out;
}

}  // namespace opw
