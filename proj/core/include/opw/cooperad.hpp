#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "opw/dgmodule.hpp"
#include "opw/symseq.hpp"
#include "opw/tree.hpp"

namespace opw {

// Flat tensor product of finitely many dg-modules in a fixed order, with a
// basis of labelled tuples per total degree (nested binary tensors order
// their bases differently, which is unusable for treewise sums).
struct GradedTensor {
  std::vector<DgModule> factors;
  DgModule mod;
  // tuples[d][k][v] = (degree, index) of the v-th factor of basis element k
  std::vector<std::vector<std::vector<std::pair<int, int>>>> tuples;
  std::vector<std::map<std::vector<std::pair<int, int>>, int>> pos;

  int position(int d, const std::vector<std::pair<int, int>>& t) const {
    return pos[d].at(t);
  }
};

GradedTensor graded_tensor(const std::vector<DgModule>& factors);

// Conilpotent cochain dg-cooperad, truncated in arity. Coproducts are stored
// for every (k, l, i) with k + l - 1 <= max arity.
struct ConilCooperad {
  DgSymSeq underlying;
  DgMap counit;  // C(1) -> Q
  DgMap coaug;   // Q -> C(1)
  std::map<std::tuple<int, int, int>, DgMap> cop;  // (k,l,i) -> C(k+l-1) -> C(k)(x)C(l)
  int conilpotence_bound = 1;

  int max_arity() const { return underlying.max_arity(); }
  const DgModule& at(int r) const { return underlying.at(r); }
  const DgMap& coproduct(int k, int l, int i) const;
};

// The coideal splitting C(1) = Q + Cbar(1), realized by a stored idempotent.
struct CoidealData {
  DgSymSeq seq;  // Cbar: kernel of the counit in arity 1, C elsewhere
  DgMap proj1;   // C(1) -> Cbar(1)
  DgMap incl1;   // Cbar(1) -> C(1)

  // Projection / inclusion in arity r (identity for r != 1).
  DgMap proj(const ConilCooperad& c, int r) const;
  DgMap incl(const ConilCooperad& c, int r) const;
};

CoidealData coaugmentation_coideal(const ConilCooperad& c);

// The trivial cooperad I^c: Q in arity 1, zero elsewhere.
ConilCooperad trivial_cooperad(int max_arity);

// Cofree conilpotent cooperad on generators N, truncated at weight m
// (trees with at most m vertices).
struct CofreeCooperad {
  ConilCooperad coop;
  DgSymSeq gens_seq;  // N
  int weight = 0;

  std::map<int, std::vector<Tree>> trees;           // summand trees per arity
  std::map<int, std::vector<GradedTensor>> summand; // parallel to trees
  // offset[r][t] = basis offset of summand t in degree d: offsets[r][d][t]
  std::map<int, std::vector<std::vector<int>>> offsets;

  int summand_count(int r) const;
  // Flat index in C(r) degree d of tuple element k of summand t.
  int flat_index(int r, int d, int t, int k) const;
  // Projection C(r) -> F_T(N) for summand index t (degreewise).
  DgMap summand_projection(int r, int t) const;
  DgMap summand_inclusion(int r, int t) const;
  // Projection to the cogenerators: C(r) -> N(r), the corolla summand
  // (arity 1: the single-vertex tree; the unit-tree line maps to zero).
  DgMap cogenerator_projection(int r) const;
};

// degree_bound >= 0 truncates every component to degrees <= degree_bound
// (a quotient complex; the coproducts restrict degreewise).
CofreeCooperad cofree(const DgSymSeq& n, int m, int max_arity, int degree_bound = -1);

// F_T(N) together with its flat tensor data, vertex order = canonical order.
GradedTensor treewise_tensor(const Tree& t, const DgSymSeq& n);

// Map src -> tgt induced by relabeling/regrafting data g: source factors are
// indexed by the tags of g in src slot order, target slot v receives the
// factor tagged g.origin[v], transported by the input permutation of v, with
// the Koszul reordering sign.
DgMap treewise_transport(const TaggedCanon& g, const GradedTensor& src,
                         const GradedTensor& tgt, const DgSymSeq& seq);

// Same, with the source being the binary tensor a.mod (x) b.mod; tags of g
// refer to a's slots followed by b's slots.
DgMap pair_transport(const TaggedCanon& g, const GradedTensor& a, const GradedTensor& b,
                     const GradedTensor& tgt, const DgSymSeq& seq);

// Inverse of a (signed) permutation-matrix map (degreewise transpose).
DgMap map_inverse_perm(const DgMap& f);

// Block permutation entering the equivariance axiom of (co)operads:
// sigma acting on the outer inputs, tau on the inner block at slot i, so that
// (sigma a) o_{sigma(i)} (tau b) = block_perm(sigma, tau, i) . (a o_i b).
Perm block_perm(const Perm& sigma, const Perm& tau, int i);

// rho-bar_T : C(r) -> F_T(Cbar), the reduced treewise composition coproduct
// (projections to the coideal applied at every vertex). T must have >= 1
// vertex; independence of the decomposition order is a checked property.
DgMap reduced_treewise_coproduct(const ConilCooperad& c, const CoidealData& cb,
                                 const Tree& t);

struct AxiomCheck {
  bool ok = true;
  std::string witness;  // empty when ok
};

AxiomCheck check_cooperad_axioms(const ConilCooperad& c);
// Evaluates rho-bar_T for all trees with <= probe_bound vertices and asserts
// vanishing beyond the stored conilpotence bound.
AxiomCheck check_conilpotence(const ConilCooperad& c, int probe_bound);

// A degree-0 morphism of cooperads, one DgMap per arity.
struct CooperadMorphism {
  std::map<int, DgMap> maps;
};
AxiomCheck check_cooperad_morphism(const ConilCooperad& c, const ConilCooperad& d,
                                   const CooperadMorphism& f);

// Adjunction unit rho : C -> cofree(Cbar, m): summand component at T is
// rho-bar_T, at the unit tree it is the counit.
struct AdjunctionUnit {
  CofreeCooperad target;
  CooperadMorphism rho;
};
AdjunctionUnit adjunction_unit(const ConilCooperad& c, int m);

// Applies phi : Cbar -> N vertexwise, cofree(Cbar, m) -> cofree(N, m).
CooperadMorphism cofree_functor_map(const CofreeCooperad& src, const CofreeCooperad& dst,
                                    const std::map<int, DgMap>& phi);

// Verifies on constructive instances that f |-> (cogenerator projection) o f
// and phi |-> cofree(phi) o rho are mutually inverse.
AxiomCheck hom_bijection_check(const ConilCooperad& c, const DgSymSeq& n, int m);

}  // namespace opw
