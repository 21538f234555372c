#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "opw/matrix.hpp"

namespace opw {

// Cochain graded dg-module: finite basis per non-negative degree, with a
// differential raising degree by one. Basis labels are opaque strings and
// their order is part of the data.
struct DgModule {
  std::vector<std::vector<std::string>> basis;  // basis[d] = labels in degree d
  std::vector<QMat> d;  // d[k] : degree k -> degree k+1

  int top_degree() const { return static_cast<int>(basis.size()) - 1; }
  int dim(int k) const {
    return (k >= 0 && k <= top_degree()) ? static_cast<int>(basis[k].size()) : 0;
  }
  QMat diff(int k) const;
  int total_dim() const;

  // Pads/validates differentials so that d[k] has shape dim(k+1) x dim(k).
  void normalize_shapes();
  bool check_d_squared() const;
};

// The ground field as a complex: one basis element "1" in degree 0.
DgModule dg_unit();
DgModule dg_zero();

// Degree shift: shift_degrees(K, s)^n = K^{n-s} (s may be negative; degrees
// that would become negative must be empty or this throws).
DgModule shift_degrees(const DgModule& k, int s);

struct DgMap {
  DgModule src, dst;
  std::vector<QMat> comp;  // comp[k] : src degree k -> dst degree k

  QMat at(int k) const;
  void normalize_shapes();
};

DgMap identity_map(const DgModule& k);
DgMap zero_map(const DgModule& src, const DgModule& dst);
bool check_cochain_map(const DgMap& f);
DgMap compose(const DgMap& g, const DgMap& f);  // g after f

// Tensor product with the Koszul sign rule; the left factor's degree controls
// the sign: d(x (x) y) = dx (x) y + (-1)^{|x|} x (x) dy.
DgModule tensor(const DgModule& k, const DgModule& l);
DgMap tensor_map(const DgMap& f, const DgMap& g);

// Index of (degree-p basis i of K) (x) (degree-q basis j of L) inside
// tensor(K, L) in degree p+q.
int tensor_index(const DgModule& k, const DgModule& l, int p, int i, int q, int j);
std::string tensor_label(const std::string& a, const std::string& b);

// Koszul braiding K (x) L -> L (x) K, x (x) y -> (-1)^{|x||y|} y (x) x.
DgMap tensor_swap(const DgModule& k, const DgModule& l);
// Associator ((K (x) L) (x) M) -> (K (x) (L (x) M)); a permutation matrix
// (no Koszul signs), needed because the two flattenings order bases
// differently.
DgMap tensor_associator(const DgModule& k, const DgModule& l, const DgModule& m);

DgModule direct_sum(const DgModule& k, const DgModule& l);

struct CohomologyReport {
  std::map<int, int> dims;  // only non-zero entries
  std::map<int, std::vector<std::vector<Rational>>> representatives;

  int dim(int k) const {
    auto it = dims.find(k);
    return it == dims.end() ? 0 : it->second;
  }
};

CohomologyReport cohomology(const DgModule& k);

struct QuasiIsoResult {
  enum class Status { yes, no, not_cochain_map };
  Status status = Status::yes;
  int failing_degree = -1;
  std::vector<Rational> witness;  // kernel or cokernel witness on cohomology
  bool ok() const { return status == Status::yes; }
};

// True iff f induces an isomorphism on cohomology in all degrees <= bound.
// A cochain-map violation is reported as a distinct status, never as "no".
QuasiIsoResult is_quasi_iso(const DgMap& f, int degree_bound);

}  // namespace opw
