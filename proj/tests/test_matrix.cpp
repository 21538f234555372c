#include <doctest.h>

#include "opw/matrix.hpp"

using namespace opw;

TEST_CASE("rational string round trip") {
  Rational q("-22/7");
  CHECK(to_string(q) == "-22/7");
  CHECK(rational_from_string(to_string(q)) == q);
  CHECK(Rational("4/6") == Rational("2/3"));  // canonical form
}

TEST_CASE("rank, kernel, solve") {
  QMat a(2, 3);
  a.set(0, 0, 1);
  a.set(0, 1, 2);
  a.set(0, 2, 3);
  a.set(1, 0, 2);
  a.set(1, 1, 4);
  a.set(1, 2, 6);
  CHECK(rank(a) == 1);
  auto ker = kernel_basis(a);
  CHECK(ker.size() == 2);
  for (const auto& v : ker) {
    auto img = a.apply(v);
    for (const auto& x : img) CHECK(x == 0);
  }
  auto sol = solve(a, {Rational(6), Rational(12)});
  REQUIRE(sol.has_value());
  auto img = a.apply(*sol);
  CHECK(img[0] == 6);
  CHECK(img[1] == 12);
  CHECK_FALSE(solve(a, {Rational(1), Rational(0)}).has_value());
}

TEST_CASE("kron and direct sum shapes") {
  QMat a = QMat::identity(2);
  QMat b(1, 3);
  b.set(0, 2, Rational("1/2"));
  QMat k = a.kron(b);
  CHECK(k.rows() == 2);
  CHECK(k.cols() == 6);
  CHECK(k.at(1, 5) == Rational("1/2"));
  QMat s = a.direct_sum(b);
  CHECK(s.rows() == 3);
  CHECK(s.cols() == 5);
}
