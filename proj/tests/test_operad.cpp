#include <doctest.h>

#include <algorithm>
#include <set>

#include "opw/operad.hpp"

using namespace opw;

namespace {

DgSymSeq one_gen(int arity, int degree, const std::string& name = "g") {
  DgSymSeq n;
  DgModule m;
  m.basis.resize(degree + 1);
  m.basis[degree] = {name};
  m.normalize_shapes();
  n.components[arity] = m;
  n.default_trivial_actions();
  return n;
}

DgSymSeq sign_gen() {
  DgSymSeq n = one_gen(2, 1, "mu");
  DgMap sgn = identity_map(n.components[2]);
  sgn.comp[1].set(0, 0, -1);
  n.gens[2] = {sgn};
  return n;
}

DgSymSeq mixed_gens() {
  DgSymSeq n;
  DgModule m1;
  m1.basis = {{}, {"a"}, {"b"}};
  QMat d1(1, 1);
  d1.set(0, 0, 1);
  m1.d = {QMat(1, 0), d1};
  m1.normalize_shapes();
  n.components[1] = m1;
  DgModule m2;
  m2.basis = {{}, {"mu"}};
  m2.normalize_shapes();
  n.components[2] = m2;
  n.default_trivial_actions();
  return n;
}

// M(1) = circle, M(2) = point, basepoint = the circle's 0-cell.
PointedSpaceSeq circle_point_seq() {
  PointedSpaceSeq m;
  m.components[1] = simp_circle();
  m.components[2] = simp_point();
  m.base = 0;
  m.default_trivial_actions();
  return m;
}

// Two-element operad in arity 1: the unit and an idempotent e.
DiscreteOperad idempotent_operad() {
  DiscreteOperad p;
  p.elems[1] = {"1", "e"};
  p.unit = "1";
  p.comp = [](int, const std::string& a, int, int, const std::string& b) {
    if (a == "1") return b;
    if (b == "1") return a;
    return std::string("e");
  };
  return p;
}

// One element per arity r <= 2, composition lands in the unique element.
DiscreteOperad corolla_operad() {
  DiscreteOperad p;
  p.elems[1] = {"1"};
  p.elems[2] = {"m"};
  p.unit = "1";
  p.comp = [](int k, const std::string&, int, int l, const std::string&) {
    int r = k + l - 1;
    return r == 1 ? std::string("1") : std::string("m");
  };
  return p;
}

}  // namespace

TEST_CASE("trivial dg-operad satisfies the axioms") {
  DgOperad i = trivial_dg_operad(3);
  CHECK(i.at(1).dim(0) == 1);
  CHECK(i.at(2).total_dim() == 0);
  CHECK(check_dg_operad_axioms(i).ok);
}

TEST_CASE("free dg-operad on a signed binary generator") {
  FreeDgOperad f = free_dg_operad(sign_gen(), 3, 3);
  // Summands are the same trees as for the cofree cooperad: arity 2 has the
  // corolla only (weight-respecting), arity 3 the three two-vertex trees.
  CHECK(f.op.at(2).dim(1) == 1);
  CHECK(f.op.at(3).dim(2) == 3);
  auto ax = check_dg_operad_axioms(f.op);
  CHECK_MESSAGE(ax.ok, ax.witness);
}

TEST_CASE("free dg-operad on mixed generators with a differential") {
  FreeDgOperad f = free_dg_operad(mixed_gens(), 3, 3);
  auto ax = check_dg_operad_axioms(f.op);
  CHECK_MESSAGE(ax.ok, ax.witness);
  // Generator inclusion composed with composition hits the two-vertex summand.
  DgMap g1 = f.generator_inclusion(1);
  DgMap g2 = f.generator_inclusion(2);
  CHECK(check_cochain_map(g1));
  CHECK(check_cochain_map(g2));
}

TEST_CASE("augmentation ideal splits arity one") {
  FreeDgOperad f = free_dg_operad(mixed_gens(), 2, 2);
  AugIdealData ai = augmentation_ideal(f.op);
  // Pbar(1) loses exactly the unit line in degree 0.
  CHECK(ai.seq.at(1).dim(0) == f.op.at(1).dim(0) - 1);
  CHECK(ai.seq.at(1).total_dim() == f.op.at(1).total_dim() - 1);
  DgMap pi = compose(ai.proj1, ai.incl1);
  for (int d = 0; d <= ai.seq.at(1).top_degree(); ++d)
    CHECK(pi.at(d) == QMat::identity(ai.seq.at(1).dim(d)));
  CHECK(check_cochain_map(ai.incl1));
  CHECK(check_cochain_map(ai.proj1));
  // The kernel absorbs the idempotent: incl o proj + unit o aug = id.
  for (int d = 0; d <= f.op.at(1).top_degree(); ++d) {
    QMat lhs = ai.incl1.at(d) * ai.proj1.at(d) + f.op.unit.at(d) * f.op.aug.at(d);
    CHECK(lhs == QMat::identity(f.op.at(1).dim(d)));
  }
}

TEST_CASE("free space operad stratum counts") {
  // Weight 0: only the unit.
  PointedSpaceSeq two;
  two.components[1] = FinSimpSet{{{"p", "q"}}, {{}}};
  two.base = 0;
  SpaceOperadTrunc f0 = free_space_operad(two, 0, 1);
  CHECK(f0.elements(1, 0).size() == 1);
  CHECK(f0.elements(1, 0)[0] == f0.unit(0));
  // Two points in arity 1, weight 2: unit + 2 letters + 4 two-letter words.
  SpaceOperadTrunc f2 = free_space_operad(two, 2, 1);
  CHECK(f2.elements(1, 0).size() == 7);
  auto ax = check_space_operad_axioms(f2, 1);
  CHECK_MESSAGE(ax.ok, ax.witness);
}

TEST_CASE("james on a trivial sequence collapses to the unit operad") {
  // M(1) = {basepoint} only: every arity-1 element reduces to the unit.
  PointedSpaceSeq pt;
  pt.components[1] = simp_point();
  pt.base = 0;
  SpaceOperadTrunc j = james(pt, 2, 2);
  for (int n = 0; n <= 2; ++n) {
    auto e1 = j.elements(1, n);
    REQUIRE(e1.size() == 1);
    CHECK(e1[0] == j.unit(n));
    CHECK(j.elements(2, n).empty());
  }
  auto ax = check_space_operad_axioms(j, 2);
  CHECK_MESSAGE(ax.ok, ax.witness);
}

TEST_CASE("james on basepoint-only arity one is free on the rest") {
  PointedSpaceSeq m;
  m.components[1] = simp_point();
  m.components[2] = simp_point();
  m.base = 0;
  SpaceOperadTrunc j = james(m, 2, 3);
  SpaceOperadTrunc f = free_space_operad(m, 2, 3);
  // Reduced arity-2 and arity-3 elements = free words with no unary vertices.
  for (int n = 0; n <= 1; ++n)
    for (int r = 2; r <= 3; ++r) {
      auto je = j.elements(r, n);
      std::vector<SpaceElem> fe;
      for (const SpaceElem& e : f.elements(r, n)) {
        bool unary = false;
        for (int a : e.tree.vertex_arities())
          if (a == 1) unary = true;
        if (!unary) fe.push_back(e);
      }
      CHECK(je == fe);
    }
}

TEST_CASE("james strata for circle and point generators") {
  SpaceOperadTrunc j = james(circle_point_seq(), 2, 2);
  // Spec of the stratification: 4 trees with two leaves and <= 2 vertices.
  CHECK(enumerate_trees(2, 2).size() == 4);
  // In dimension 1 each of the four trees carries exactly one reduced word:
  // unary labels must be the nondegenerate 1-cell of the circle.
  auto e21 = j.elements(2, 1);
  std::set<std::string> treeset;
  for (const SpaceElem& e : e21) treeset.insert(e.tree.enc);
  CHECK(e21.size() == 4);
  CHECK(treeset.size() == 4);
  // In dimension 0 only the corolla survives: the circle has no nondegenerate
  // 0-simplex besides the basepoint.
  CHECK(j.elements(2, 0).size() == 1);
  auto ax = check_space_operad_axioms(j, 2);
  CHECK_MESSAGE(ax.ok, ax.witness);
}

TEST_CASE("corrupted composition table is caught with a witness") {
  SpaceOperadTrunc j = james(circle_point_seq(), 2, 2);
  SpaceElem e = j.elements(2, 0).at(0);
  j.comp_override[j.unit(0).key() + "|1|" + e.key()] = j.unit(0);
  auto ax = check_space_operad_axioms(j, 0);
  CHECK_FALSE(ax.ok);
  CHECK_FALSE(ax.witness.empty());
}

TEST_CASE("reduced words match the rewriting oracle") {
  SpaceOperadTrunc j = james(circle_point_seq(), 2, 2);
  for (int r = 1; r <= 2; ++r)
    for (int n = 0; n <= 2; ++n) {
      AxiomCheck confluence;
      std::vector<SpaceElem> oracle = reduced_word_oracle(j, r, n, &confluence);
      CHECK_MESSAGE(confluence.ok, confluence.witness);
      std::vector<SpaceElem> direct = j.elements(r, n);
      std::sort(direct.begin(), direct.end());
      CHECK(oracle == direct);
    }
}

TEST_CASE("james filtration of the circle in arity one") {
  SpaceOperadTrunc j = james(circle_point_seq(), 2, 1);
  JamesFiltration jf = james_filtration(j, 1);
  REQUIRE(jf.levels.size() == 3);
  REQUIRE(jf.quotients.size() == 2);
  // F^{<=0} = the unit point, F^{<=1} = the circle with the unit as basepoint.
  CHECK(jf.levels[0].total_cells() == 1);
  auto h1 = cohomology(normalized_cochains(jf.levels[1]));
  CHECK(h1.dim(0) == 1);
  CHECK(h1.dim(1) == 1);
  // The top quotient is the smash of two circles: a 2-sphere.
  auto hq = cohomology(normalized_cochains(jf.quotients[1].space));
  CHECK(hq.dim(0) == 1);
  CHECK(hq.dim(1) == 0);
  CHECK(hq.dim(2) == 1);
  // Weight-2 truncated James construction on the circle: one cell in each of
  // the degrees 0, 1, 2.
  auto h2 = cohomology(normalized_cochains(jf.levels[2]));
  CHECK(h2.dim(0) == 1);
  CHECK(h2.dim(1) == 1);
  CHECK(h2.dim(2) == 1);
  // Euler characteristics add along the cofiber sequence.
  auto chi = [](const CohomologyReport& h) {
    int c = 0;
    for (const auto& [d, k] : h.dims) c += (d % 2 == 0) ? k : -k;
    return c;
  };
  CHECK(chi(h2) == chi(h1) + chi(hq) - 1);
  // Cell counts stratify: every level-2 nondegenerate cell is either a
  // level-1 cell or a weight-2 stratum cell.
  for (int n = 0; n <= jf.levels[2].dim(); ++n) {
    int strat = 0;
    for (const SpaceElem& e : j.elements(1, n, 2))
      if (e.tree.nvertices == 2) ++strat;
    // strat counts all (degenerate included); compare nondegenerate totals
    // via the difference of the levels instead.
    CHECK(jf.levels[2].ncells(n) >= jf.levels[1].ncells(n));
  }
}

TEST_CASE("single-tree quotient agrees with the smash stratum") {
  SpaceOperadTrunc j = james(circle_point_seq(), 2, 2);
  JamesFiltration jf = james_filtration(j, 2);
  // Arity 2, k = 1: only the 2-corolla contributes, so the first quotient is
  // the corolla stratum (a point, plus the collapsed basepoint).
  PointedFinSimpSet st = smash_stratum(corolla(2), j.seq);
  const FinSimpSet& q = jf.quotients[0].space;
  REQUIRE(q.dim() == st.space.dim());
  for (int n = 0; n <= q.dim(); ++n) CHECK(q.ncells(n) == st.space.ncells(n));
  auto hq = cohomology(normalized_cochains(q));
  auto hs = cohomology(normalized_cochains(st.space));
  CHECK(hq.dims == hs.dims);
}

TEST_CASE("cotriple identities for the idempotent operad") {
  ReducedCotriple rc{idempotent_operad(), 2, 2};
  // Levels are nested reduced words: 3 at level 0, 7 at level 1.
  CHECK(rc.level_elements(0, 1).size() == 3);
  CHECK(rc.level_elements(1, 1).size() == 7);
  // d_0 s_{-1} = id, d_0 s_0 = id on level 0.
  for (const NElem& x : rc.level_elements(0, 1)) {
    CHECK(rc.face(rc.degeneracy(x, 0, -1), 1, 0) == x);
    CHECK(rc.face(rc.degeneracy(x, 0, 0), 1, 0) == x);
  }
  auto ax = check_cotriple_identities(rc);
  CHECK_MESSAGE(ax.ok, ax.witness);
}

TEST_CASE("cotriple identities with a binary generator") {
  ReducedCotriple rc{corolla_operad(), 2, 2};
  auto ax = check_cotriple_identities(rc);
  CHECK_MESSAGE(ax.ok, ax.witness);
  // eval collapses a word to its operadic composite.
  NElem m = rc.base_elem("m", 2);
  NElem w = rc.wrap(m);
  CHECK(rc.eval(w) == m);
  NElem ww = rc.compose_at(rc.wrap(m), 1, rc.wrap(m));
  CHECK(rc.eval(ww).base == "m");
  CHECK(rc.eval(ww).arity == 3);
}
