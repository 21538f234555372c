#include <doctest.h>

#include <stdexcept>

#include "opw/barcobar.hpp"

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

// Arity-1 generators a (degree 1), b (degree 2) with d(a) = b, plus a binary
// generator mu in degree 1.
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

bool maps_equal(const DgMap& a, const DgMap& b) {
  int t = std::max(a.src.top_degree(), b.src.top_degree());
  for (int d = 0; d <= t; ++d)
    if (!(a.at(d) == b.at(d))) return false;
  return true;
}

// Two-level cosimplicial dg-module: Q -> Q^2 with d^0 = u, d^1 = v and
// s^0(u) = s^0(v) = x; the conormalization is Q --iso--> Q(u - v).
CosimplicialDgModule two_level_module() {
  CosimplicialDgModule x;
  DgModule x0;
  x0.basis = {{"x"}};
  x0.normalize_shapes();
  DgModule x1;
  x1.basis = {{"u", "v"}};
  x1.normalize_shapes();
  x.levels = {x0, x1};
  DgMap d0 = zero_map(x0, x1), d1 = zero_map(x0, x1);
  d0.comp[0].set(0, 0, 1);
  d1.comp[0].set(1, 0, 1);
  DgMap s0 = zero_map(x1, x0);
  s0.comp[0].set(0, 0, 1);
  s0.comp[0].set(0, 1, 1);
  x.cofaces = {{d0, d1}};
  x.codegens = {{s0}};
  return x;
}

}  // namespace

TEST_SUITE("barcobar") {

TEST_CASE("bar of the unit operad is the unit cooperad") {
  DgOperad i = trivial_dg_operad(3);
  BarCooperad b = bar(i, 3);
  CHECK(b.cf.coop.at(1).total_dim() == 1);
  CHECK(b.cf.coop.at(2).total_dim() == 0);
  CHECK(b.cf.coop.at(3).total_dim() == 0);
  CHECK(check_cooperad_axioms(b.cf.coop).ok);
}

TEST_CASE("bar rejects augmentation ideals with degree-0 elements") {
  FreeDgOperad p = free_dg_operad(one_gen(2, 0, "m"), 2, 2);
  CHECK_THROWS_AS(bar(p.op, 2), std::invalid_argument);
}

TEST_CASE("bar differential squares to zero on a two-generator operad") {
  FreeDgOperad p = free_dg_operad(mixed_gens(), 2, 2);
  BarCooperad b = bar(p.op, 3);
  for (int r = 1; r <= 2; ++r) CHECK(b.cf.coop.at(r).check_d_squared());
}

TEST_CASE("bar satisfies the full cooperad axioms on a binary-generator operad") {
  // Small enough for the complete axiom sweep (coassociativity, equivariance,
  // and coproducts being cochain maps for the total differential), yet with a
  // non-trivial contraction part in arity 3.
  FreeDgOperad p = free_dg_operad(one_gen(2, 1, "mu"), 2, 3);
  BarCooperad b = bar(p.op, 2);
  bool has_bar_part = false;
  const DgModule b3 = b.cf.coop.at(3);
  for (int d = 0; d < b3.top_degree(); ++d)
    if (!(b3.diff(d) == QMat(b3.dim(d + 1), b3.dim(d)))) has_bar_part = true;
  CHECK(has_bar_part);
  AxiomCheck ax = check_cooperad_axioms(b.cf.coop);
  INFO(ax.witness);
  CHECK(ax.ok);
  CHECK(check_conilpotence(b.cf.coop, 3).ok);
}

TEST_CASE("weight-one part of bar is the shifted ideal with internal differential") {
  FreeDgOperad p = free_dg_operad(mixed_gens(), 2, 2);
  BarCooperad b = bar(p.op, 3);
  DgSymSeq sbar = b.cf.gens_seq;
  for (int r = 1; r <= 2; ++r) {
    int corolla_idx = -1;
    for (int t = 0; t < b.cf.summand_count(r); ++t)
      if (b.cf.trees[r][t].nvertices == 1) corolla_idx = t;
    REQUIRE(corolla_idx >= 0);
    const GradedTensor& gt = b.cf.summand.at(r)[corolla_idx];
    CHECK(gt.mod.total_dim() == sbar.at(r).total_dim());
    // d restricted to the corolla summand and projected back is the internal
    // differential of the shifted ideal; the bar part only lowers weight.
    DgMap block = compose(b.cf.summand_projection(r, corolla_idx),
                          compose(identity_map(b.cf.coop.at(r)),
                                  b.cf.summand_inclusion(r, corolla_idx)));
    for (int d = 0; d < sbar.at(r).top_degree(); ++d) {
      QMat lhs = b.cf.summand_projection(r, corolla_idx).at(d + 1) *
                 b.cf.coop.at(r).diff(d) * b.cf.summand_inclusion(r, corolla_idx).at(d);
      CHECK(lhs == sbar.at(r).diff(d));
    }
    (void)block;
  }
}

TEST_CASE("cobar of the unit cooperad is the unit operad") {
  ConilCooperad i = trivial_cooperad(3);
  CobarOperad o = cobar(i, 3);
  CHECK(o.fo.op.at(1).total_dim() == 1);
  CHECK(o.fo.op.at(2).total_dim() == 0);
  CHECK(check_dg_operad_axioms(o.fo.op).ok);
}

TEST_CASE("cobar differential squares to zero and is a derivation") {
  CofreeCooperad c = cofree(one_gen(2, 1, "c"), 2, 3);
  CobarOperad o = cobar(c.coop, 3);
  for (int r = 1; r <= 3; ++r) CHECK(o.fo.op.at(r).check_d_squared());
  AxiomCheck ax = check_dg_operad_axioms(o.fo.op);
  INFO(ax.witness);
  CHECK(ax.ok);
  // Non-negative grading audit: every component is concentrated in
  // non-negative degrees with the expected shifted bottom degree.
  for (int r = 2; r <= 3; ++r) {
    const DgModule m = o.fo.op.at(r);
    for (int d = 0; d <= m.top_degree(); ++d)
      if (m.dim(d) > 0) CHECK(d >= 2);  // labels sit in degree >= 2 after the shift
  }
}

TEST_CASE("cobar rejects a conilpotence bound above the weight bound") {
  CofreeCooperad c = cofree(one_gen(2, 1, "c"), 3, 3);
  CHECK_THROWS_AS(cobar(c.coop, 2), std::invalid_argument);
}

TEST_CASE("cobar-bar unit is an isomorphism on the unit cooperad") {
  ConilCooperad i = trivial_cooperad(2);
  CobarBarUnit u = cobar_bar_unit(i, 2, 2, 2);
  CHECK(u.stable);
  for (const auto& [r, v] : u.verdicts) CHECK(v.ok());
}

TEST_CASE("cobar-bar unit: primitive binary cogenerator in degree 0") {
  // C(1) = Q, C(2) = Q in degree 0, coproducts only through the counit.
  CofreeCooperad c = cofree(one_gen(2, 0, "c"), 2, 2);
  CobarBarUnit u = cobar_bar_unit(c.coop, 4, 4, 3);
  INFO(u.note);
  CHECK(u.stable);
  for (const auto& [r, v] : u.verdicts) CHECK(v.ok());
  AxiomCheck mor = check_cooperad_morphism(c.coop, u.target.cf.coop, u.unit);
  INFO(mor.witness);
  CHECK(mor.ok);
  // Injectivity, split by the weight projection onto the generators.
  for (const auto& [r, f] : u.unit.maps) {
    const DgModule src = f.src;
    for (int d = 0; d <= src.top_degree(); ++d) {
      QMat m = f.at(d);
      CHECK(echelon_form(m).rank() == src.dim(d));
    }
  }
}

TEST_CASE("cobar-bar unit with a non-trivial arity-one coideal") {
  CofreeCooperad c = cofree(one_gen(1, 1, "a"), 2, 1);
  CobarBarUnit u = cobar_bar_unit(c.coop, 4, 4, 3);
  INFO(u.note);
  CHECK(u.stable);
  for (const auto& [r, v] : u.verdicts) CHECK(v.ok());
}

TEST_CASE("conormalization of a two-level module matches the hand computation") {
  CosimplicialDgModule x = two_level_module();
  CHECK(check_cosimplicial_identities(x).ok);
  DgModule n = conormalize_module(x);
  CHECK(n.dim(0) == 1);
  CHECK(n.dim(1) == 1);
  CHECK(n.check_d_squared());
  // d(x) = d^0 x - d^1 x = u - v spans the level-1 kernel: an isomorphism.
  CHECK(n.diff(0).at(0, 0) != 0);
  CohomologyReport h = cohomology(n);
  CHECK(h.dim(0) == 0);
  CHECK(h.dim(1) == 0);
  // Subquotient bound on the total dimension.
  CHECK(n.total_dim() <= x.levels[0].total_dim() + x.levels[1].total_dim());
}

TEST_CASE("conormalization rejects broken cosimplicial identities") {
  CosimplicialDgModule x = two_level_module();
  x.codegens[0][0].comp[0].set(0, 1, -1);  // s^0 d^1 is no longer the identity
  CHECK_FALSE(check_cosimplicial_identities(x).ok);
  CHECK_THROWS_AS(conormalize_module(x), std::invalid_argument);
}

TEST_CASE("conormalization of a constant cosimplicial cooperad is the cooperad") {
  CofreeCooperad c = cofree(one_gen(2, 0, "c"), 2, 2);
  CosimplicialCooperad cc;
  cc.levels = {c.coop, c.coop};
  CooperadMorphism id;
  for (int r = 1; r <= 2; ++r) id.maps[r] = identity_map(c.coop.at(r));
  cc.cofaces = {{id, id}};
  cc.codegens = {{id}};
  ConilCooperad n = conormalize(cc);
  for (int r = 1; r <= 2; ++r) {
    CHECK(n.at(r).total_dim() == c.coop.at(r).total_dim());
    for (int k = 1; k <= 2; ++k)
      for (int l = 1; k + l - 1 <= 2; ++l)
        for (int i = 1; i <= k; ++i)
          CHECK(maps_equal(n.coproduct(k, l, i), c.coop.coproduct(k, l, i)));
  }
  CHECK(check_cooperad_axioms(n).ok);
}

}
