#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "opw/dgmodule.hpp"
#include "opw/simpset.hpp"
#include "opw/tree.hpp"

namespace opw {

// Permutations of {1..r} in one-line notation: perm[i-1] is the image of i.
using Perm = std::vector<int>;

Perm perm_identity(int r);
Perm perm_transposition(int r, int i);  // swaps i and i+1, 1 <= i <= r-1
Perm perm_compose(const Perm& a, const Perm& b);  // (a o b)(i) = a(b(i))
Perm perm_inverse(const Perm& a);
std::vector<Perm> all_perms(int r);
// Writes a as a composite of adjacent transpositions (left-to-right order).
std::vector<int> adjacent_factorization(const Perm& a);

// Symmetric sequence of dg-modules. Actions are stored on the adjacent
// transpositions (i i+1) only; arbitrary permutations compose on demand.
struct DgSymSeq {
  std::map<int, DgModule> components;              // arity r >= 1
  std::map<int, std::vector<DgMap>> gens;          // gens[r][i-1] = action of (i i+1)

  int max_arity() const { return components.empty() ? 0 : components.rbegin()->first; }
  const DgModule& at(int r) const;                 // zero module when absent
  DgMap action(int r, const Perm& sigma) const;
  // Fills in identity generators for every arity that has none.
  void default_trivial_actions();
};

struct ActionCheck {
  bool ok = true;
  int arity = -1;
  std::string reason;
};

// Verifies that the stored generators define a Sigma_r-action by cochain
// maps: involution, braid and commutation relations, cochain-map property.
ActionCheck check_action(const DgSymSeq& n);

// Simplicial automorphism: per dimension, a permutation of the nondegenerate
// cells (degenerate simplices follow formally).
using SimplicialAut = std::vector<std::vector<int>>;

SimplicialAut trivial_aut(const FinSimpSet& x);
SimpRef apply_aut(const SimplicialAut& f, const SimpRef& x);
bool check_aut(const FinSimpSet& x, const SimplicialAut& f);

// Symmetric sequence of finite pointed simplicial sets.
struct PointedSpaceSeq {
  std::map<int, FinSimpSet> components;            // arity r >= 1
  int base = 0;                                    // 0-cell index in components[1]
  std::map<int, std::vector<SimplicialAut>> gens;  // adjacent transpositions

  int max_arity() const { return components.empty() ? 0 : components.rbegin()->first; }
  const FinSimpSet& at(int r) const;
  SimplicialAut action(int r, const Perm& sigma) const;
  void default_trivial_actions();
};

// Quotient of the treewise product x_{v in V(T)} M(r_v) (canonical vertex
// order) by the subspace where some unary-vertex coordinate is (a degeneracy
// of) the basepoint. T must have at least one vertex.
PointedFinSimpSet smash_stratum(const Tree& t, const PointedSpaceSeq& m);
// Same quotient together with the underlying product data (for naming cells).
struct StratumData {
  ProductSpace prod;
  PointedFinSimpSet quotient;
  // image[n][k] = class in the quotient of nondegenerate product cell (n, k)
  std::vector<std::vector<SimpRef>> image;
};
StratumData smash_stratum_data(const Tree& t, const PointedSpaceSeq& m);

}  // namespace opw
