#pragma once

#include <string>
#include <vector>

namespace opw {

// Node of a leaf-labeled rooted tree. leaf > 0 marks a leaf carrying that
// label; otherwise the node is a vertex with kids.size() >= 1 ingoing edges
// (unary vertices allowed). Children order is a planar representative only;
// canonical trees keep children sorted by encoding.
struct TreeNode {
  int leaf = 0;
  std::vector<TreeNode> kids;
  int tag = -1;  // caller-chosen vertex tag, carried through canonicalization

  bool is_leaf() const { return leaf > 0; }
};

// Canonical leaf-labeled rooted tree. The unit tree has no vertex: its root
// node is the leaf itself. Vertices are indexed 0..nvertices-1 in preorder
// over the canonical structure.
struct Tree {
  TreeNode root;
  int nleaves = 0;
  int nvertices = 0;
  std::string enc;

  bool is_unit() const { return nvertices == 0; }
  // Arity (= number of children) of canonical vertex vi.
  int vertex_arity(int vi) const;
  std::vector<int> vertex_arities() const;
  bool operator==(const Tree& o) const { return enc == o.enc; }
  bool operator<(const Tree& o) const { return enc < o.enc; }
};

// Result of canonicalizing a tagged planar tree: the canonical tree, the tag
// found at each canonical vertex index, and for each canonical vertex the
// permutation taking its new child slot to the old child slot.
struct TaggedCanon {
  Tree tree;
  std::vector<int> origin;                   // canonical vertex -> tag
  std::vector<std::vector<int>> child_perm;  // [v][new_slot] = old_slot
};

Tree canonical_tree(const TreeNode& raw);
TaggedCanon canonical_tree_tagged(TreeNode raw);

Tree unit_tree();
Tree corolla(int r);

struct MalformedTree : std::exception {
  explicit MalformedTree(std::string w) : what_(std::move(w)) {}
  const char* what() const noexcept override { return what_.c_str(); }
  std::string what_;
};

// Grafts t into leaf slot i (1-based) of s. Leaves of t occupy slots
// i..i+l-1; leaves of s after slot i shift up by l-1. Vertex tags in the
// result: 0..s.nvertices-1 are s's canonical vertices, s.nvertices.. are t's.
TaggedCanon graft(const Tree& s, int i, const Tree& t);

// Relabels each leaf l by perm[l-1] (perm is a bijection of {1..r} in one-line
// notation). Vertex tags in the result are the old canonical vertex indices.
TaggedCanon permute_leaves(const Tree& t, const std::vector<int>& perm);

// All isomorphism classes of trees with r leaves and at most max_vertices
// vertices, sorted by (vertex count, encoding). Includes the unit tree when
// r = 1.
std::vector<Tree> enumerate_trees(int r, int max_vertices);

struct TreeDecomposition {
  Tree outer;  // k leaves
  Tree inner;  // l leaves
  int position = 1;
  TaggedCanon grafted;  // grafted.tree == the decomposed tree
};

// All decompositions theta ~ outer o_i inner with the stated leaf counts.
std::vector<TreeDecomposition> decompositions(const Tree& theta, int k, int l, int i);

}  // namespace opw
