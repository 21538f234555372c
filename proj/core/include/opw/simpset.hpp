#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "opw/dgmodule.hpp"

namespace opw {

// A (possibly degenerate) simplex: a strictly descending degeneracy word
// applied to a nondegenerate core. dim() = core_dim + |degen|. Degenerate
// simplices are never materialized; everything is tracked through these
// references (Eilenberg-Zilber normal form is unique).
struct SimpRef {
  int core_dim = 0;
  int idx = 0;                // index into cells[core_dim]
  std::vector<int> degen;     // strictly descending

  int dim() const { return core_dim + static_cast<int>(degen.size()); }
  bool is_nondegenerate() const { return degen.empty(); }
  bool operator==(const SimpRef& o) const {
    return core_dim == o.core_dim && idx == o.idx && degen == o.degen;
  }
  bool operator<(const SimpRef& o) const {
    return std::tie(core_dim, idx, degen) < std::tie(o.core_dim, o.idx, o.degen);
  }
};

// Applies s_j to x, keeping the word in normal form.
SimpRef degenerate_ref(const SimpRef& x, int j);

// Finite simplicial set: named nondegenerate simplices per dimension, with
// faces of nondegenerate simplices stored explicitly.
struct FinSimpSet {
  std::vector<std::vector<std::string>> cells;  // cells[n][k] = name
  // faces[n][k][i] = d_i of nondegenerate simplex k in dimension n (n >= 1)
  std::vector<std::vector<std::vector<SimpRef>>> faces;

  int dim() const { return static_cast<int>(cells.size()) - 1; }
  int ncells(int n) const {
    return (n >= 0 && n <= dim()) ? static_cast<int>(cells[n].size()) : 0;
  }
  int total_cells() const;
  int index_of(int n, const std::string& name) const;  // -1 if absent
  const std::string& name_of(const SimpRef& x) const { return cells[x.core_dim][x.idx]; }
  std::string display(const SimpRef& x) const;  // "s2 s0 name"

  // d_i on an arbitrary simplex reference (pushes d_i through the word).
  SimpRef face(const SimpRef& x, int i) const;

  // All simplices of dimension n (degenerate ones included).
  std::vector<SimpRef> all_simplices(int n) const;

  bool check_simplicial_identities() const;  // d_i d_j = d_{j-1} d_i, i < j
  bool is_connected() const;                 // on the 1-skeleton
};

// Pointed variant: basepoint is nondegenerate of dimension 0.
struct PointedFinSimpSet {
  FinSimpSet space;
  int base = 0;  // index into space.cells[0]

  SimpRef base_ref(int n) const;  // the unique degenerate basepoint in dim n
};

FinSimpSet simp_point();
FinSimpSet simp_interval();        // standard 1-simplex
FinSimpSet simp_circle();          // one 0-cell, one 1-cell
FinSimpSet simp_standard(int n);   // standard n-simplex

// Categorical product of finitely many factors via the shuffle description:
// a tuple of n-simplices is nondegenerate iff no s_j divides every coordinate.
// Keeps the factor references of each nondegenerate cell for later inspection.
struct ProductSpace {
  FinSimpSet space;
  std::vector<FinSimpSet> factors;
  std::vector<std::vector<std::vector<SimpRef>>> tuples;  // [n][k] = coordinates
  std::vector<std::map<std::vector<SimpRef>, int>> index;

  // Normal form of an arbitrary coordinate tuple as a simplex of the product.
  SimpRef tuple_ref(const std::vector<SimpRef>& t) const;
};

ProductSpace multi_product(const std::vector<FinSimpSet>& xs);
FinSimpSet product(const FinSimpSet& x, const FinSimpSet& y);
// Recovers the factor references of a nondegenerate product cell.
std::pair<SimpRef, SimpRef> product_factors(const FinSimpSet& x, const FinSimpSet& y,
                                            int n, int k);

// Collapses the subcomplex spanned by the named nondegenerate simplices to a
// single 0-simplex "*". The subset must be face-closed. If image is non-null
// it receives, per nondegenerate cell of x, its class in the quotient.
PointedFinSimpSet quotient(const FinSimpSet& x,
                           const std::vector<std::vector<std::string>>& collapse,
                           std::vector<std::vector<SimpRef>>* image_out = nullptr);

// Dual of normalized chains: degree-n basis = nondegenerate n-simplices,
// delta = alternating sum of coface duals (degenerate faces contribute 0).
DgModule normalized_cochains(const FinSimpSet& x);

// Builds a FinSimpSet from an abstract presentation: elements[n] lists all
// n-simplices by name (degenerate ones included), face(n, e, i) and
// degeneracy(n, e, j) give d_i resp. s_j of element e of dimension n.
// Nondegenerate elements are detected via s_j d_j e = e.
FinSimpSet from_functions(
    const std::vector<std::vector<std::string>>& elements,
    const std::function<std::string(int, const std::string&, int)>& face,
    const std::function<std::string(int, const std::string&, int)>& degeneracy);

}  // namespace opw
