#include <doctest.h>

#include <algorithm>
#include <functional>
#include <set>
#include <vector>

#include "opw/tree.hpp"

using namespace opw;

namespace {

// Independent brute-force oracle: enumerate labeled parent arrays and filter
// by exhaustive isomorphism search (no use of the canonical encoding).
bool iso(const TreeNode& a, const TreeNode& b) {
  if (a.is_leaf() || b.is_leaf()) return a.leaf == b.leaf;
  if (a.kids.size() != b.kids.size()) return false;
  std::vector<int> perm(a.kids.size());
  for (size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
  do {
    bool ok = true;
    for (size_t i = 0; i < perm.size() && ok; ++i)
      if (!iso(a.kids[i], b.kids[perm[i]])) ok = false;
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

// All trees with r leaves and exactly n vertices, as raw nodes, via parent
// arrays: vertex v's parent is either another vertex or the root edge;
// each leaf's parent is a vertex.
std::vector<TreeNode> oracle_raw(int r, int n) {
  std::vector<TreeNode> out;
  if (n == 0) {
    if (r == 1) {
      TreeNode l;
      l.leaf = 1;
      out.push_back(l);
    }
    return out;
  }
  // parent[v] in {-1 (root), 0..n-1}; leaf_parent[j] in {0..n-1}
  std::vector<int> vp(n), lp(r);
  std::function<void(int)> assign_leaf = [&](int j) {
    if (j == r) {
      // Build and validate: exactly one root, acyclic, every vertex >=1 child.
      int roots = 0;
      for (int v = 0; v < n; ++v)
        if (vp[v] == -1) ++roots;
      if (roots != 1) return;
      std::vector<int> child_count(n, 0);
      for (int v = 0; v < n; ++v)
        if (vp[v] >= 0) ++child_count[vp[v]];
      for (int l = 0; l < r; ++l) ++child_count[lp[l]];
      for (int v = 0; v < n; ++v)
        if (child_count[v] == 0) return;
      // Acyclicity: walk up from each vertex.
      for (int v = 0; v < n; ++v) {
        int cur = v, steps = 0;
        while (cur != -1 && steps <= n) {
          cur = vp[cur];
          ++steps;
        }
        if (steps > n) return;
      }
      // Materialize.
      std::function<TreeNode(int)> build = [&](int v) {
        TreeNode node;
        for (int w = 0; w < n; ++w)
          if (vp[w] == v) node.kids.push_back(build(w));
        for (int l = 0; l < r; ++l)
          if (lp[l] == v) {
            TreeNode leaf;
            leaf.leaf = l + 1;
            node.kids.push_back(leaf);
          }
        return node;
      };
      for (int v = 0; v < n; ++v)
        if (vp[v] == -1) out.push_back(build(v));
      return;
    }
    for (int p = 0; p < n; ++p) {
      lp[j] = p;
      assign_leaf(j + 1);
    }
  };
  std::function<void(int)> assign_vertex = [&](int v) {
    if (v == n) {
      assign_leaf(0);
      return;
    }
    for (int p = -1; p < n; ++p) {
      if (p == v) continue;
      vp[v] = p;
      assign_vertex(v + 1);
    }
  };
  assign_vertex(0);
  return out;
}

int oracle_count(int r, int max_vertices) {
  std::vector<TreeNode> reps;
  for (int n = 0; n <= max_vertices; ++n) {
    for (auto& cand : oracle_raw(r, n)) {
      bool fresh = true;
      for (auto& rep : reps) {
        int lv1 = 0, vv1 = 0, lv2 = 0, vv2 = 0;
        std::function<void(const TreeNode&, int&, int&)> cnt = [&](const TreeNode& t, int& l, int& v) {
          if (t.is_leaf()) {
            ++l;
            return;
          }
          ++v;
          for (auto& k : t.kids) cnt(k, l, v);
        };
        cnt(cand, lv1, vv1);
        cnt(rep, lv2, vv2);
        if (vv1 == vv2 && iso(cand, rep)) {
          fresh = false;
          break;
        }
      }
      if (fresh) reps.push_back(cand);
    }
  }
  return static_cast<int>(reps.size());
}

Tree chain_of_unary(int n) {
  TreeNode cur;
  cur.leaf = 1;
  for (int i = 0; i < n; ++i) {
    TreeNode v;
    v.kids.push_back(cur);
    cur = v;
  }
  return canonical_tree(cur);
}

}  // namespace

TEST_CASE("canonical encodings") {
  CHECK(unit_tree().enc == "l1");
  CHECK(unit_tree().nvertices == 0);
  CHECK(unit_tree().nleaves == 1);
  CHECK(corolla(2).enc == "(l1l2)");

  // Leaf order in the input is immaterial: same tree, same encoding.
  TreeNode a, l1, l2;
  l1.leaf = 1;
  l2.leaf = 2;
  a.kids = {l2, l1};
  CHECK(canonical_tree(a).enc == corolla(2).enc);

  // Unary vertex above leaf 1 vs leaf 2 of a 2-corolla: different classes.
  TreeNode u1, u2, v1, v2;
  v1.kids = {l1};
  v2.kids = {l2};
  u1.kids = {v1, l2};
  u2.kids = {l1, v2};
  CHECK(canonical_tree(u1).enc != canonical_tree(u2).enc);
}

TEST_CASE("enumerate matches spec examples") {
  CHECK(enumerate_trees(1, 2).size() == 3);  // unit, one unary, 2-chain
  CHECK(enumerate_trees(2, 2).size() == 4);
  CHECK(enumerate_trees(1, 0).size() == 1);
}

TEST_CASE("enumerate matches brute-force parent-array oracle") {
  for (int r = 1; r <= 4; ++r)
    for (int m = 0; m <= 3; ++m) {
      CAPTURE(r);
      CAPTURE(m);
      CHECK(static_cast<int>(enumerate_trees(r, m).size()) == oracle_count(r, m));
    }
}

TEST_CASE("graft basics") {
  Tree c2 = corolla(2);
  CHECK(graft(unit_tree(), 1, c2).tree == c2);
  CHECK(graft(c2, 1, unit_tree()).tree == c2);
  CHECK(graft(c2, 2, unit_tree()).tree == c2);

  // Left comb with 3 leaves.
  Tree comb = graft(c2, 1, c2).tree;
  CHECK(comb.nleaves == 3);
  CHECK(comb.nvertices == 2);

  // Vertex counts add.
  Tree t2 = chain_of_unary(2);
  Tree t3 = graft(corolla(3), 2, unit_tree()).tree;
  CHECK(graft(t3, 1, t2).tree.nvertices == 3);
}

TEST_CASE("graft provenance tags") {
  Tree c2 = corolla(2);
  TaggedCanon g = graft(c2, 1, c2);
  REQUIRE(g.origin.size() == 2);
  // Outer vertex has tag 0 (s side), inner has tag 1 (offset by s.nvertices).
  std::set<int> tags(g.origin.begin(), g.origin.end());
  CHECK(tags == std::set<int>{0, 1});
}

TEST_CASE("decomposition examples") {
  auto d1 = decompositions(unit_tree(), 1, 1, 1);
  REQUIRE(d1.size() == 1);
  CHECK(d1[0].outer.is_unit());
  CHECK(d1[0].inner.is_unit());

  auto d2 = decompositions(corolla(2), 2, 1, 1);
  REQUIRE(d2.size() == 1);
  CHECK(d2[0].outer == corolla(2));
  CHECK(d2[0].inner.is_unit());

  auto d3 = decompositions(chain_of_unary(2), 1, 1, 1);
  CHECK(d3.size() == 3);
}

TEST_CASE("graft/decomposition round trip") {
  for (int rs = 1; rs <= 3; ++rs)
    for (int rt = 1; rt <= 2; ++rt)
      for (const Tree& s : enumerate_trees(rs, 2))
        for (const Tree& t : enumerate_trees(rt, 1))
          for (int i = 1; i <= rs; ++i) {
            Tree theta = graft(s, i, t).tree;
            auto ds = decompositions(theta, rs, rt, i);
            bool found = false;
            for (const auto& d : ds)
              if (d.outer == s && d.inner == t) found = true;
            CHECK(found);
          }
}

TEST_CASE("grafting associativity") {
  // graft(graft(s,i,t), i+j-1, u) == graft(s, i, graft(t,j,u)) for u inside t.
  for (const Tree& s : enumerate_trees(2, 1))
    for (const Tree& t : enumerate_trees(2, 1))
      for (const Tree& u : enumerate_trees(1, 1))
        for (int i = 1; i <= 2; ++i)
          for (int j = 1; j <= 2; ++j) {
            Tree lhs = graft(graft(s, i, t).tree, i + j - 1, u).tree;
            Tree rhs = graft(s, i, graft(t, j, u).tree).tree;
            CHECK(lhs == rhs);
          }
  // Disjoint slots: graft(graft(s,i,t), j + l - 1, u) for j > i.
  Tree s = corolla(2), t = corolla(2), u = corolla(2);
  Tree lhs = graft(graft(s, 1, t).tree, 3, u).tree;
  Tree rhs = graft(graft(s, 2, u).tree, 1, t).tree;
  CHECK(lhs == rhs);
}

TEST_CASE("malformed trees rejected") {
  TreeNode v;  // vertex with no children
  CHECK_THROWS_AS(canonical_tree(v), MalformedTree);
  TreeNode dup, l1a, l1b;
  l1a.leaf = 1;
  l1b.leaf = 1;
  dup.kids = {l1a, l1b};
  CHECK_THROWS_AS(canonical_tree(dup), MalformedTree);
}
