#include <doctest.h>

#include "opw/symseq.hpp"

using namespace opw;

namespace {

DgModule one_class(int degree) {
  DgModule m;
  m.basis.resize(degree + 1);
  m.basis[degree] = {"g"};
  m.normalize_shapes();
  return m;
}

PointedSpaceSeq circle_seq() {
  PointedSpaceSeq m;
  m.components[1] = simp_circle();
  m.components[2] = simp_point();
  m.base = 0;
  m.default_trivial_actions();
  return m;
}

}  // namespace

TEST_CASE("permutation algebra") {
  Perm a = {2, 3, 1};  // 1->2, 2->3, 3->1
  CHECK(perm_compose(a, perm_inverse(a)) == perm_identity(3));
  CHECK(all_perms(3).size() == 6);
  // Factorization into adjacent transpositions recomposes to the original.
  for (const Perm& p : all_perms(4)) {
    Perm acc = perm_identity(4);
    for (int i : adjacent_factorization(p)) acc = perm_compose(acc, perm_transposition(4, i));
    CHECK(acc == p);
  }
}

TEST_CASE("trivial actions pass the checker") {
  DgSymSeq n;
  n.components[1] = one_class(1);
  n.components[3] = one_class(0);
  n.default_trivial_actions();
  CHECK(check_action(n).ok);
  CHECK(n.at(2).total_dim() == 0);
}

TEST_CASE("sign action of the symmetric group on two letters") {
  DgSymSeq n;
  n.components[2] = one_class(1);
  DgMap sgn = identity_map(n.components[2]);
  sgn.comp[1].set(0, 0, -1);
  n.gens[2] = {sgn};
  CHECK(check_action(n).ok);
  CHECK(n.action(2, {2, 1}).at(1).at(0, 0) == Rational(-1));
  CHECK(n.action(2, {1, 2}).at(1).at(0, 0) == Rational(1));
}

TEST_CASE("corrupted generator is reported with its arity") {
  DgSymSeq n;
  n.components[2] = one_class(0);
  DgMap bad = identity_map(n.components[2]);
  bad.comp[0].set(0, 0, 2);  // not an involution
  n.gens[2] = {bad};
  auto c = check_action(n);
  CHECK_FALSE(c.ok);
  CHECK(c.arity == 2);
  CHECK_FALSE(c.reason.empty());
}

TEST_CASE("regular-representation action on three letters") {
  // Degree-0 component with basis indexed by 1..3; (i i+1) permutes basis.
  DgModule m;
  m.basis = {{"b1", "b2", "b3"}};
  m.normalize_shapes();
  DgSymSeq n;
  n.components[3] = m;
  auto swap_map = [&](int i, int j) {
    DgMap f = identity_map(m);
    f.comp[0] = QMat(3, 3);
    for (int k = 0; k < 3; ++k) {
      int img = k == i ? j : (k == j ? i : k);
      f.comp[0].set(img, k, 1);
    }
    return f;
  };
  n.gens[3] = {swap_map(0, 1), swap_map(1, 2)};
  CHECK(check_action(n).ok);
  // The 3-cycle (1 2 3): 1->2->3->1 sends basis b_k to b_{sigma(k)}.
  Perm cyc = {2, 3, 1};
  QMat a = n.action(3, cyc).at(0);
  for (int k = 0; k < 3; ++k) CHECK(a.at(cyc[k] - 1, k) == Rational(1));
}

TEST_CASE("simplicial automorphism checker") {
  FinSimpSet c = simp_circle();
  CHECK(check_aut(c, trivial_aut(c)));
  // Swapping the two 1-cells of a two-edge circle is an automorphism.
  FinSimpSet two;
  two.cells = {{"v", "w"}, {"e", "f"}};
  two.faces = {{},
               {{SimpRef{0, 0, {}}, SimpRef{0, 1, {}}},
                {SimpRef{0, 0, {}}, SimpRef{0, 1, {}}}}};
  CHECK(two.check_simplicial_identities());
  SimplicialAut swap_edges = {{0, 1}, {1, 0}};
  CHECK(check_aut(two, swap_edges));
  SimplicialAut broken = {{1, 0}, {0, 1}};  // swaps vertices but not edges
  CHECK_FALSE(check_aut(two, broken));
}

TEST_CASE("smash stratum over a corolla is the product plus a basepoint") {
  PointedSpaceSeq m = circle_seq();
  PointedFinSimpSet s = smash_stratum(corolla(2), m);
  CHECK(s.space.ncells(0) == 2);  // point of M(2), disjoint basepoint
  CHECK(s.space.check_simplicial_identities());
}

TEST_CASE("smash stratum over a single unary vertex is circle mod basepoint") {
  PointedSpaceSeq m = circle_seq();
  PointedFinSimpSet s = smash_stratum(corolla(1), m);
  auto h = cohomology(normalized_cochains(s.space));
  CHECK(h.dim(0) == 1);
  CHECK(h.dim(1) == 1);
}

TEST_CASE("smash stratum over the unary chain is the smash of two circles") {
  PointedSpaceSeq m = circle_seq();
  // Chain of two unary vertices on one leaf.
  TreeNode leaf;
  leaf.leaf = 1;
  TreeNode inner;
  inner.kids = {leaf};
  TreeNode outer;
  outer.kids = {inner};
  Tree chain = canonical_tree(outer);
  StratumData sd = smash_stratum_data(chain, m);
  auto h = cohomology(normalized_cochains(sd.quotient.space));
  CHECK(h.dim(0) == 1);
  CHECK(h.dim(1) == 0);
  CHECK(h.dim(2) == 1);
  // Cell bookkeeping: |quotient| = |product| - |collapsed| + 1, counting the
  // collapsed cells directly from the factor data.
  int collapsed = 0;
  for (int n = 0; n <= sd.prod.space.dim(); ++n)
    for (const auto& tup : sd.prod.tuples[n])
      if ((tup[0].core_dim == 0 && tup[0].idx == m.base) ||
          (tup[1].core_dim == 0 && tup[1].idx == m.base))
        ++collapsed;
  CHECK(collapsed > 0);
  CHECK(sd.quotient.space.total_cells() ==
        sd.prod.space.total_cells() - collapsed + 1);
}

TEST_CASE("space-level actions compose through the generator factorization") {
  PointedSpaceSeq m = circle_seq();
  SimplicialAut a = m.action(2, {2, 1});
  CHECK(a == trivial_aut(m.at(2)));
}
