#include <doctest.h>

#include "opw/simpset.hpp"

using namespace opw;

TEST_CASE("degeneracy word normal form") {
  SimpRef x{0, 0, {}};
  SimpRef a = degenerate_ref(degenerate_ref(x, 0), 0);  // s_0 s_0 = s_1 s_0
  CHECK(a.degen == std::vector<int>{1, 0});
  SimpRef b = degenerate_ref(degenerate_ref(x, 0), 1);  // s_1 s_0 already normal
  CHECK(b.degen == std::vector<int>{1, 0});
}

TEST_CASE("standard simplex basics") {
  FinSimpSet d2 = simp_standard(2);
  CHECK(d2.ncells(0) == 3);
  CHECK(d2.ncells(1) == 3);
  CHECK(d2.ncells(2) == 1);
  CHECK(d2.check_simplicial_identities());
  CHECK(d2.is_connected());
  // d_i of 012 drops vertex i
  SimpRef top{2, 0, {}};
  CHECK(d2.name_of(d2.face(top, 0)) == "12");
  CHECK(d2.name_of(d2.face(top, 1)) == "02");
  CHECK(d2.name_of(d2.face(top, 2)) == "01");
}

TEST_CASE("faces commute through degeneracy words") {
  FinSimpSet c = simp_circle();
  CHECK(c.check_simplicial_identities());
  // d_i d_j = d_{j-1} d_i on degenerate simplices too
  for (const SimpRef& x : c.all_simplices(3))
    for (int j = 1; j <= 3; ++j)
      for (int i = 0; i < j; ++i)
        CHECK(c.face(c.face(x, j), i) == c.face(c.face(x, i), j - 1));
}

TEST_CASE("all_simplices counts match the simplicial circle") {
  // Minimal circle: x_n = 1 nondegenerate 0-cell's degeneracy + n degenerate
  // images of e... total simplices in dim n: 1 (over v) + n (over e).
  FinSimpSet c = simp_circle();
  CHECK(c.all_simplices(0).size() == 1);
  CHECK(c.all_simplices(1).size() == 2);
  CHECK(c.all_simplices(2).size() == 3);
  CHECK(c.all_simplices(3).size() == 4);
}

TEST_CASE("product with a point is the identity") {
  FinSimpSet c = simp_circle();
  FinSimpSet p = product(simp_point(), c);
  CHECK(p.ncells(0) == c.ncells(0));
  CHECK(p.ncells(1) == c.ncells(1));
  CHECK(p.check_simplicial_identities());
}

TEST_CASE("product of two intervals has two nondegenerate 2-simplices") {
  FinSimpSet s = product(simp_interval(), simp_interval());
  CHECK(s.ncells(0) == 4);
  CHECK(s.ncells(1) == 5);
  CHECK(s.ncells(2) == 2);
  CHECK(s.dim() == 2);
  CHECK(s.check_simplicial_identities());
  auto h = cohomology(normalized_cochains(s));
  CHECK(h.dim(0) == 1);
  CHECK(h.dim(1) == 0);
  CHECK(h.dim(2) == 0);
}

TEST_CASE("torus cohomology matches the Kunneth convolution") {
  FinSimpSet t = product(simp_circle(), simp_circle());
  CHECK(t.check_simplicial_identities());
  DgModule m = normalized_cochains(t);
  CHECK(m.check_d_squared());
  auto h = cohomology(m);
  CHECK(h.dim(0) == 1);
  CHECK(h.dim(1) == 2);
  CHECK(h.dim(2) == 1);
  // Independent Kunneth oracle: tensor of the cochain complexes.
  auto hk = cohomology(tensor(normalized_cochains(simp_circle()),
                              normalized_cochains(simp_circle())));
  CHECK(h.dims == hk.dims);
}

TEST_CASE("normalized cochains of standard models") {
  auto hp = cohomology(normalized_cochains(simp_point()));
  CHECK(hp.dim(0) == 1);
  CHECK(hp.dims.size() == 1);
  auto hi = cohomology(normalized_cochains(simp_interval()));
  CHECK(hi.dim(0) == 1);
  CHECK(hi.dims.size() == 1);
  auto hc = cohomology(normalized_cochains(simp_circle()));
  CHECK(hc.dim(0) == 1);
  CHECK(hc.dim(1) == 1);
}

TEST_CASE("quotient collapses a face-closed subcomplex") {
  // Delta^1 / boundary = circle (up to cohomology).
  PointedFinSimpSet q = quotient(simp_interval(), {{"0", "1"}, {}});
  CHECK(q.space.ncells(0) == 1);
  CHECK(q.space.ncells(1) == 1);
  CHECK(q.space.check_simplicial_identities());
  auto h = cohomology(normalized_cochains(q.space));
  CHECK(h.dim(0) == 1);
  CHECK(h.dim(1) == 1);
  // Cell count bookkeeping: |X| - |collapsed| + 1.
  CHECK(q.space.total_cells() == simp_interval().total_cells() - 2 + 1);
}

TEST_CASE("quotient with empty subset adds a disjoint basepoint") {
  PointedFinSimpSet q = quotient(simp_circle(), {});
  CHECK(q.space.ncells(0) == 2);
  CHECK(q.space.ncells(1) == 1);
  CHECK_FALSE(q.space.is_connected());
}

TEST_CASE("quotient rejects non-face-closed subsets") {
  CHECK_THROWS_AS(quotient(simp_interval(), {{}, {"01"}}), std::invalid_argument);
  CHECK_THROWS_AS(quotient(simp_interval(), {{"nope"}}), std::invalid_argument);
}

TEST_CASE("smash of two circles via product and quotient") {
  FinSimpSet c = simp_circle();
  FinSimpSet t = product(c, c);
  // Collapse the wedge: all cells touching the basepoint in either factor.
  std::vector<std::vector<std::string>> wedge(t.dim() + 1);
  for (int n = 0; n <= t.dim(); ++n)
    for (int k = 0; k < t.ncells(n); ++k) {
      auto [a, b] = product_factors(c, c, n, k);
      if (a.core_dim == 0 || b.core_dim == 0) wedge[n].push_back(t.cells[n][k]);
    }
  PointedFinSimpSet s2 = quotient(t, wedge);
  CHECK(s2.space.check_simplicial_identities());
  auto h = cohomology(normalized_cochains(s2.space));
  CHECK(h.dim(0) == 1);
  CHECK(h.dim(1) == 0);
  CHECK(h.dim(2) == 1);
}

TEST_CASE("from_functions detects degeneracies") {
  // Rebuild the minimal circle from a total description of dims 0..2.
  std::vector<std::vector<std::string>> els = {
      {"v"}, {"s0v", "e"}, {"s0s0v", "s0e", "s1e"}};
  auto face = [](int n, const std::string& e, int i) -> std::string {
    if (n == 1) return "v";
    if (e == "s0s0v") return "s0v";
    if (e == "s0e") return i == 2 ? "s0v" : "e";  // d0 s0 = d1 s0 = id, d2 s0 = s0 d1
    return i == 0 ? "s0v" : "e";                  // s1e: d0 s1 = s0 d0, d1 s1 = d2 s1 = id
  };
  auto degen = [](int n, const std::string& e, int j) -> std::string {
    if (n == 0) return "s0v";
    if (e == "s0v") return "s0s0v";
    return j == 0 ? "s0e" : "s1e";
  };
  FinSimpSet x = from_functions(els, face, degen);
  CHECK(x.ncells(0) == 1);
  CHECK(x.ncells(1) == 1);
  CHECK(x.dim() == 1);
  CHECK(x.check_simplicial_identities());
  auto h = cohomology(normalized_cochains(x));
  CHECK(h.dim(0) == 1);
  CHECK(h.dim(1) == 1);
}
