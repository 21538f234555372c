#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "opw/cooperad.hpp"

namespace opw {

// Commutative cochain dg-algebra: a dg-module with a graded-commutative,
// associative product and a unit, both given as explicit cochain maps.
// The zero module with zero product and zero unit is a legal (terminal)
// algebra, which is how empty cooperad arities are carried along.
struct CdgAlgebra {
  DgModule mod;
  DgMap mult;  // tensor(mod, mod) -> mod
  DgMap unit;  // dg_unit() -> mod
};

// The ground field as an algebra.
CdgAlgebra unit_algebra();
CdgAlgebra zero_algebra();

// Product of homogeneous elements x (degree p) and y (degree q); result in
// degree p + q, expressed in the basis of a.mod.
std::vector<Rational> algebra_product(const CdgAlgebra& a, int p,
                                      const std::vector<Rational>& x, int q,
                                      const std::vector<Rational>& y);

// Tensor product algebra with the Koszul rule (x (x) y)(x' (x) y') =
// (-1)^{|y||x'|} xx' (x) yy'.
CdgAlgebra tensor_algebra(const CdgAlgebra& a, const CdgAlgebra& b);

// Leibniz rule, graded commutativity, associativity, unit laws.
AxiomCheck check_cdga_axioms(const CdgAlgebra& a);

// Truncation window for morphism checks on degreewise / lengthwise / weight
// quotients of algebras. A source basis pair whose product falls outside the
// window is exempt from the multiplicativity identity (the product has been
// truncated to zero on one side but not in the tensor target, where only the
// individual factors are bounded). Rows of the target above the weight bound
// are likewise exempt from the unit-preservation identity. All bounds
// default to "off", which makes the check strict.
struct CheckWindow {
  int degree_bound = -1;  // skip source pairs with p + q > degree_bound
  int length_bound = -1;  // skip source pairs with combined word length > bound
  const std::vector<std::vector<int>>* src_length = nullptr;  // [d][i]

  int weight_bound = -1;  // ignore target rows of combined weight > bound
  // Weight tables of the two tensor factors of the target (right == nullptr
  // means the target is a plain module weighted by tgt_weight_left alone).
  const DgModule* tgt_left = nullptr;
  const DgModule* tgt_right = nullptr;
  const std::vector<std::vector<int>>* tgt_weight_left = nullptr;
  const std::vector<std::vector<int>>* tgt_weight_right = nullptr;

  bool pair_ok(int p, int i, int q, int j) const;
  bool row_ok(int d, int row) const;
};

// f : a.mod -> b.mod is a cochain map, preserves units (up to the window's
// weight filter) and products (on source pairs admitted by the window).
AxiomCheck check_algebra_morphism(const CdgAlgebra& a, const CdgAlgebra& b,
                                  const DgMap& f, const CheckWindow& w = {});

// A monomial in a free graded-commutative algebra: sorted list of
// ((degree, index), exponent) over the generator basis; odd generators have
// exponent one (they square to zero over the rationals).
using GcaMonomial = std::vector<std::pair<std::pair<int, int>, int>>;

// Free graded-commutative algebra on the dg-module v, truncated by word
// length and by internal degree. Both truncations are quotients by dg
// ideals, so the result is an honest commutative cochain dg-algebra; only
// maps out of it see the truncation boundary. Bounds of -1 mean "none";
// the construction throws std::invalid_argument when the untruncated
// algebra would be infinite within some degree.
struct FreeGca {
  CdgAlgebra alg;
  DgModule gens;
  DgMap gen_incl;  // gens -> alg.mod, words of length one
  int length_bound = -1;
  int degree_bound = -1;

  std::vector<std::vector<GcaMonomial>> monomials;  // [d][i], basis order
  std::vector<std::vector<int>> word_length;        // [d][i]
  std::map<GcaMonomial, std::pair<int, int>> index; // monomial -> (d, i)
};

FreeGca free_gca(const DgModule& v, int length_bound, int degree_bound);

// The unique algebra morphism alg(a) -> b extending gen_images : a.gens ->
// b.mod (a cochain map on generators yields a cochain map; products that were
// truncated in a are simply absent from the source).
DgMap extend_multiplicatively(const FreeGca& a, const CdgAlgebra& b,
                              const DgMap& gen_images);

// Hopf cochain dg-cooperad: a cooperad in commutative cochain dg-algebras.
// Every structure map (coproducts, counit, symmetric-group action) is an
// algebra morphism and the coaugmentation is the unit of the arity-one
// algebra. The optional bounds and tables describe the truncation applied
// when the object was built; check_hopf_axioms uses them as its window.
struct HopfCooperad {
  ConilCooperad coop;
  std::map<int, CdgAlgebra> alg;  // alg[r].mod == coop.at(r)

  int degree_bound = -1;
  int length_bound = -1;
  int weight_bound = -1;
  std::map<int, std::vector<std::vector<int>>> word_length;  // [r][d][i]
  std::map<int, std::vector<std::vector<int>>> weight;       // [r][d][i]
};

// Cooperad axioms, algebra axioms per arity, coaugmentation = unit, and the
// algebra-morphism property of the counit, the coproducts and the symmetric
// group action, within the object's truncation window.
AxiomCheck check_hopf_axioms(const HopfCooperad& a);

// The trivial cooperad as a Hopf object.
HopfCooperad trivial_hopf_cooperad(int max_arity);

// Left adjoint of the forgetful functor from Hopf cooperads to cooperads:
// arity r > 1 carries the free graded-commutative algebra on C(r); arity one
// carries the free algebra on the coaugmentation coideal of C(1), which
// realizes the relative tensor product identifying the coaugmentation line
// with the algebra unit. Coproducts, counit and actions are the unique
// multiplicative extensions of C's structure maps through the generators.
struct SymLift {
  HopfCooperad hopf;
  std::map<int, FreeGca> parts;
  // The unit of the adjunction C -> forget(Sym(C)) (a cooperad morphism) and
  // a degreewise retraction of it (projection to words of length <= 1).
  CooperadMorphism incl;
  std::map<int, DgMap> retraction;
};

SymLift sym_lift(const ConilCooperad& c, int length_bound, int degree_bound);

// Cofree Hopf cooperad on a sequence of algebras: the underlying cooperad is
// cofree on the underlying modules (trivial symmetric-group action on the
// generators) and each arity is the product, over treewise summands, of the
// tensor products of the vertex algebras. Products of elements in distinct
// summands vanish; the unit is the sum of the summand units.
struct CofreeHopf {
  HopfCooperad hopf;
  CofreeCooperad cf;
  std::map<int, CdgAlgebra> gens;
};

CofreeHopf cofree_hopf(const std::map<int, CdgAlgebra>& n, int m,
                       int max_arity);

// The checkable predicates of the model structures: a cofibration is an
// arity-wise injection in positive degrees, a fibration an arity-wise
// surjection in all degrees, a weak equivalence an arity-wise
// quasi-isomorphism.
struct ModelPredicates {
  bool cofibration = true;
  bool fibration = true;
  bool weak_equivalence = true;
  std::string witness;  // first failure, empty when all three hold
};

ModelPredicates fibration_cofibration_predicates(const std::map<int, DgMap>& f);

}  // namespace opw
