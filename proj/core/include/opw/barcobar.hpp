#pragma once

#include <map>
#include <string>
#include <vector>

#include "opw/cooperad.hpp"
#include "opw/operad.hpp"

namespace opw {

// ---------------------------------------------------------------------------
// Bar and cobar constructions (weight- and degree-truncated)
// ---------------------------------------------------------------------------

// Bar construction of an augmented dg-operad: the cofree cooperad on the
// degree-shifted augmentation ideal (each label loses one degree), with the
// total differential = internal part + edge contractions through the
// composition products of P. The contraction part lowers weight by one.
struct BarCooperad {
  CofreeCooperad cf;   // total differential installed in cf.coop.underlying
  AugIdealData ideal;  // augmentation ideal of the input operad
  int weight = 0;
  int degree_bound = -1;  // generators above this internal degree are dropped
};

// Requires the augmentation ideal to vanish in degree 0 (the ambient modules
// are non-negatively graded, so a degree-0 ideal element has no shift).
BarCooperad bar(const DgOperad& p, int weight_bound, int degree_bound = -1);

// Cobar construction of a conilpotent dg-cooperad: the free operad on the
// coaugmentation coideal shifted up one degree, with the total differential
// = internal part + vertex expansions through the reduced coproducts of C.
// The expansion part raises weight by one.
struct CobarOperad {
  FreeDgOperad fo;     // total differential installed in fo.op.underlying
  CoidealData coideal; // coaugmentation coideal of the input cooperad
  int weight = 0;
  int degree_bound = -1;  // shifted generators above this degree are dropped
};

CobarOperad cobar(const ConilCooperad& c, int weight_bound, int degree_bound = -1);

// Unit of the cobar-bar adjunction, C -> bar(cobar(C)), with a per-arity
// quasi-isomorphism verdict through the probed degree. The verdict is
// bound-stamped: stability is detected by rerunning at bounds + 1 and
// comparing cohomology in the probed range; instability is reported, never
// silently accepted.
struct CobarBarUnit {
  CobarOperad cobar_part;
  BarCooperad target;
  CooperadMorphism unit;
  std::map<int, QuasiIsoResult> verdicts;  // per arity
  bool stable = true;
  int degree_bound = 0;
  int cobar_weight = 0;
  int bar_weight = 0;
  std::string note;  // non-empty when instability or a failure was detected
};

CobarBarUnit cobar_bar_unit(const ConilCooperad& c, int cobar_weight, int bar_weight,
                            int degree_bound);

// ---------------------------------------------------------------------------
// Conormalization of cosimplicial objects
// ---------------------------------------------------------------------------

// Finitely many cosimplicial levels of dg-modules with coface maps
// d^i : X^n -> X^{n+1} (0 <= i <= n+1) and codegeneracies
// s^j : X^{n+1} -> X^n (0 <= j <= n).
struct CosimplicialDgModule {
  std::vector<DgModule> levels;
  std::vector<std::vector<DgMap>> cofaces;    // cofaces[n][i] : X^n -> X^{n+1}
  std::vector<std::vector<DgMap>> codegens;   // codegens[n][j] : X^{n+1} -> X^n

  int top_level() const { return static_cast<int>(levels.size()) - 1; }
};

AxiomCheck check_cosimplicial_identities(const CosimplicialDgModule& x);

// Conormalized total complex: in each cosimplicial level n the intersection
// of the codegeneracy kernels, summed with total degree = internal + n and
// total differential = internal +/- the alternating coface sum.
DgModule conormalize_module(const CosimplicialDgModule& x);

struct CosimplicialCooperad {
  std::vector<ConilCooperad> levels;
  std::vector<std::vector<CooperadMorphism>> cofaces;
  std::vector<std::vector<CooperadMorphism>> codegens;

  int top_level() const { return static_cast<int>(levels.size()) - 1; }
};

// Arity-wise conormalization with coproducts induced by restriction. The
// restriction must factor through the conormalized tensor product (automatic
// for constant cosimplicial objects, whose conormalization is the level-0
// cooperad); a non-factoring coproduct throws std::domain_error.
ConilCooperad conormalize(const CosimplicialCooperad& c);

}  // namespace opw
