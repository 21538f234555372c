#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "opw/cooperad.hpp"
#include "opw/simpset.hpp"
#include "opw/symseq.hpp"
#include "opw/tree.hpp"

namespace opw {

// ---------------------------------------------------------------------------
// Augmented dg-operads
// ---------------------------------------------------------------------------

// Operad in cochain dg-modules, augmented over the unit operad: composition
// products o_i as maps P(k) (x) P(l) -> P(k+l-1), a unit line in arity 1 and
// the splitting augmentation P(1) -> Q.
struct DgOperad {
  DgSymSeq underlying;
  std::map<std::tuple<int, int, int>, DgMap> comp;  // (k, l, i)
  DgMap unit;  // dg_unit -> P(1)
  DgMap aug;   // P(1) -> dg_unit
  int truncation_weight = -1;  // composites beyond this weight are cut to 0; -1 = exact

  int max_arity() const { return underlying.max_arity(); }
  const DgModule& at(int r) const { return underlying.at(r); }
  const DgMap& composition(int k, int l, int i) const;
};

// Free operad on a symmetric sequence of generators, truncated at weight m
// (composites whose grafted tree exceeds m vertices are cut to zero, i.e. the
// quotient by the weight ideal). Shares the tree-summand layout with the
// cofree cooperad on the same generators.
struct FreeDgOperad {
  DgOperad op;
  DgSymSeq gens_seq;
  int weight = 0;
  std::map<int, std::vector<Tree>> trees;
  std::map<int, std::vector<GradedTensor>> summand;
  std::map<int, std::vector<std::vector<int>>> offsets;  // [r][deg][tree] -> first row

  int summand_count(int r) const;
  int flat_index(int r, int d, int t, int k) const;
  DgMap summand_projection(int r, int t) const;
  DgMap summand_inclusion(int r, int t) const;
  // N(r) -> P(r), the single-vertex summand line.
  DgMap generator_inclusion(int r) const;
};

// degree_bound >= 0 truncates to degrees <= degree_bound (elements above the
// bound form an operadic ideal, so this is a quotient operad).
FreeDgOperad free_dg_operad(const DgSymSeq& n, int m, int max_arity, int degree_bound = -1);

// Unit operad: Q in arity 1, zero elsewhere.
DgOperad trivial_dg_operad(int max_arity);

AxiomCheck check_dg_operad_axioms(const DgOperad& p);

// Augmentation ideal data: Pbar(1) = ker(aug), Pbar(r) = P(r) for r > 1, with
// degreewise inclusion/projection splitting P(1) = Q . unit (+) Pbar(1).
struct AugIdealData {
  DgSymSeq seq;
  DgMap incl1, proj1;
  DgMap incl(const DgOperad& p, int r) const;
  DgMap proj(const DgOperad& p, int r) const;
};
AugIdealData augmentation_ideal(const DgOperad& p);

// ---------------------------------------------------------------------------
// Operads in finite simplicial sets, truncated by vertex-count weight
// ---------------------------------------------------------------------------

// An element of a (free or reduced) tree-stratified operad in simplicial
// sets: a canonical tree and one simplex of M(arity_v) per canonical vertex,
// all of the same simplicial dimension. The unit tree with no labels is the
// operadic unit.
struct SpaceElem {
  Tree tree;
  std::vector<SimpRef> labels;
  int dim = 0;

  std::string key() const;
  bool operator==(const SpaceElem& o) const {
    return tree.enc == o.tree.enc && labels == o.labels && dim == o.dim;
  }
  bool operator<(const SpaceElem& o) const;
};

// Truncated operad in simplicial sets generated by a pointed symmetric
// sequence: the free operad (reduced = false) or the operadic James
// construction (reduced = true), where unary vertices labeled by the
// basepoint are deleted after every composition.
struct SpaceOperadTrunc {
  PointedSpaceSeq seq;
  int weight = 0;
  int max_arity = 1;
  bool reduced = false;
  // Test hook: overrides consulted before computing a composite, keyed by
  // a.key() + "|i|" + b.key().
  std::map<std::string, SpaceElem> comp_override;

  SimpRef basepoint(int n) const;  // degenerate basepoint of M(1) in dim n
  bool is_basepoint(const SimpRef& x) const;
  SpaceElem unit(int n) const;
  SpaceElem reduce(SpaceElem e) const;
  // nullopt = truncation signal (post-reduction weight beyond the bound).
  std::optional<SpaceElem> compose(const SpaceElem& a, int i, const SpaceElem& b) const;
  SpaceElem act(const SpaceElem& e, const Perm& sigma) const;
  SpaceElem face(const SpaceElem& e, int i) const;
  SpaceElem degeneracy(const SpaceElem& e, int j) const;
  // All elements of arity r in simplicial dimension n (degenerate included),
  // restricted to trees with at most max_vertices vertices (default weight).
  std::vector<SpaceElem> elements(int r, int n, int max_vertices = -1) const;
  // Largest dimension in which arity-r elements have nondegenerate tuples.
  int top_cell_dim(int r) const;
};

SpaceOperadTrunc free_space_operad(const PointedSpaceSeq& m, int weight, int max_arity);
SpaceOperadTrunc james(const PointedSpaceSeq& m, int weight, int max_arity);

// Exhaustive verification of unit laws, associativity, equivariance and
// compatibility with the simplicial operators, within the truncation and up
// to simplicial dimension top_dim.
AxiomCheck check_space_operad_axioms(const SpaceOperadTrunc& p, int top_dim);

// Independent count/enumeration oracle for the James strata: reduces every
// raw free word by deleting basepoint-labeled unary vertices, in two
// different orders (confluence evidence), and returns the set of normal
// forms.
std::vector<SpaceElem> reduced_word_oracle(const SpaceOperadTrunc& james_op, int r, int n,
                                           AxiomCheck* confluence = nullptr);

// The weight tower F^{<=0} c ... c F^{<=m} of one arity component, realized
// as finite simplicial sets, with the successive quotients.
struct JamesFiltration {
  std::vector<FinSimpSet> levels;               // index k = 0..weight
  std::vector<std::vector<std::vector<std::string>>> sub_cells;  // per k>=1: cells of level k-1
  std::vector<PointedFinSimpSet> quotients;     // index k-1 for F^{<=k}/F^{<=k-1}
};
JamesFiltration james_filtration(const SpaceOperadTrunc& p, int r);

// ---------------------------------------------------------------------------
// Reduced cotriple resolution at finitely many levels (discrete desk-scale)
// ---------------------------------------------------------------------------

// Finite discrete operad given by element names per arity, a unit in arity 1
// and a composition table (defined whenever k + l - 1 <= max arity).
struct DiscreteOperad {
  std::map<int, std::vector<std::string>> elems;
  std::string unit;
  std::function<std::string(int, const std::string&, int, int, const std::string&)> comp;
  int max_arity() const { return elems.empty() ? 0 : elems.rbegin()->first; }
};

// Element of an iterated James construction over a discrete operad: depth 0
// is a base element, depth d >= 1 a reduced word whose labels have depth
// d - 1. Level-n elements of the resolution have depth n + 1.
struct NElem {
  int depth = 0;
  int arity = 1;
  std::string base;          // depth 0
  Tree tree;                 // depth >= 1
  std::vector<NElem> labels;

  std::string key() const;
  bool operator==(const NElem& o) const { return key() == o.key(); }
  bool operator<(const NElem& o) const { return key() < o.key(); }
};

struct ReducedCotriple {
  DiscreteOperad p;
  int weight = 2;     // per-level word-length bound for enumeration
  int max_level = 2;  // n <= max_level

  NElem base_elem(const std::string& name, int arity) const;
  NElem unit_elem(int depth) const;
  NElem wrap(const NElem& x) const;               // adjunction unit iota
  NElem eval(const NElem& word) const;            // adjunction augmentation lambda
  NElem reduce_word(NElem w) const;
  NElem compose_at(const NElem& a, int i, const NElem& b) const;  // equal depths
  NElem act(const NElem& x, const Perm& sigma) const;
  // All level-n elements of arity r (depth n + 1 nested reduced words).
  std::vector<NElem> level_elements(int n, int r) const;
  NElem face(const NElem& x, int n, int i) const;        // 0 <= i <= n
  NElem degeneracy(const NElem& x, int n, int j) const;  // -1 <= j <= n
};

// Exhaustive verification of the simplicial identities (including the extra
// degeneracy s_{-1}) and of the augmentation coequalizer relation on all
// enumerated elements at levels <= rc.max_level.
AxiomCheck check_cotriple_identities(const ReducedCotriple& rc);

}  // namespace opw
