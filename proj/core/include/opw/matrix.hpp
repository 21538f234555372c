#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "opw/rational.hpp"

namespace opw {

// Sparse matrix over the rationals, triplet storage. Row/column counts are
// part of the value; a 0xN or Nx0 matrix is legal and frequent (empty graded
// pieces).
class QMat {
 public:
  QMat() = default;
  QMat(int rows, int cols) : rows_(rows), cols_(cols) {}

  static QMat identity(int n);
  static QMat zero(int rows, int cols) { return QMat(rows, cols); }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  const Rational& at(int r, int c) const;
  void set(int r, int c, const Rational& v);
  void add_to(int r, int c, const Rational& v);

  const std::map<std::pair<int, int>, Rational>& entries() const { return e_; }

  bool is_zero() const { return e_.empty(); }

  QMat operator*(const QMat& o) const;
  QMat operator+(const QMat& o) const;
  QMat operator-(const QMat& o) const;
  QMat operator*(const Rational& s) const;
  bool operator==(const QMat& o) const;

  QMat transpose() const;

  // Kronecker product with the row-major pairing (i,j) -> i*o.rows()+j.
  QMat kron(const QMat& o) const;

  // Block diagonal concatenation.
  QMat direct_sum(const QMat& o) const;

  std::vector<Rational> apply(const std::vector<Rational>& v) const;

  std::vector<std::vector<Rational>> dense() const;

 private:
  int rows_ = 0, cols_ = 0;
  std::map<std::pair<int, int>, Rational> e_;
};

int rank(const QMat& a);

// Basis of the right kernel, one column vector per basis element.
std::vector<std::vector<Rational>> kernel_basis(const QMat& a);

// Solves a x = b; nullopt when inconsistent.
std::optional<std::vector<Rational>> solve(const QMat& a,
                                           const std::vector<Rational>& b);

// Row echelon workhorse shared by rank/kernel/solve and the cohomology code.
// Columns of `a` are vectors; reduces in place and reports pivot columns.
struct Echelon {
  std::vector<std::vector<Rational>> m;  // row-major, reduced
  std::vector<int> pivot_cols;
  int rank() const { return static_cast<int>(pivot_cols.size()); }
};
Echelon echelon_form(const QMat& a);

QMat columns_to_mat(const std::vector<std::vector<Rational>>& cols, int rows);

}  // namespace opw
