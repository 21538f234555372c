#include "opw/tree.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace opw {

namespace {

std::string encode(const TreeNode& n) {
  if (n.is_leaf()) return "l" + std::to_string(n.leaf);
  std::string s = "(";
  for (const auto& k : n.kids) s += encode(k);
  return s + ")";
}

// Sorts children recursively by encoding; records child permutations.
// Returns the encoding of the sorted node.
std::string sort_node(TreeNode& n, std::vector<std::pair<int, std::vector<int>>>* perms) {
  if (n.is_leaf()) return "l" + std::to_string(n.leaf);
  std::vector<std::pair<std::string, int>> keyed;  // (enc, old slot)
  std::vector<std::string> kid_enc(n.kids.size());
  for (size_t j = 0; j < n.kids.size(); ++j) {
    kid_enc[j] = sort_node(n.kids[j], perms);
    keyed.push_back({kid_enc[j], static_cast<int>(j)});
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<TreeNode> sorted;
  std::vector<int> perm;
  std::string s = "(";
  for (auto& [e, old] : keyed) {
    sorted.push_back(std::move(n.kids[old]));
    perm.push_back(old);
    s += e;
  }
  s += ")";
  n.kids = std::move(sorted);
  if (perms) perms->push_back({n.tag, std::move(perm)});
  return s;
}

void count(const TreeNode& n, int& leaves, int& vertices) {
  if (n.is_leaf()) {
    ++leaves;
    return;
  }
  ++vertices;
  for (const auto& k : n.kids) count(k, leaves, vertices);
}

void preorder_vertices(const TreeNode& n, std::vector<const TreeNode*>& out) {
  if (n.is_leaf()) return;
  out.push_back(&n);
  for (const auto& k : n.kids) preorder_vertices(k, out);
}

void validate(const TreeNode& n, std::set<int>& leaves_seen) {
  if (n.is_leaf()) {
    if (!leaves_seen.insert(n.leaf).second) throw MalformedTree("duplicate leaf label");
    return;
  }
  if (n.kids.empty()) throw MalformedTree("vertex with arity 0");
  for (const auto& k : n.kids) validate(k, leaves_seen);
}

TreeNode copy_with_tags(const TreeNode& n, int& next_tag) {
  TreeNode out;
  out.leaf = n.leaf;
  if (!n.is_leaf()) out.tag = next_tag++;
  for (const auto& k : n.kids) out.kids.push_back(copy_with_tags(k, next_tag));
  return out;
}

bool replace_leaf(TreeNode& n, int label, const TreeNode& replacement) {
  if (n.is_leaf()) return false;
  for (auto& k : n.kids) {
    if (k.is_leaf() && k.leaf == label) {
      k = replacement;
      return true;
    }
    if (replace_leaf(k, label, replacement)) return true;
  }
  return false;
}

void relabel(TreeNode& n, const std::function<int(int)>& f) {
  if (n.is_leaf()) {
    n.leaf = f(n.leaf);
    return;
  }
  for (auto& k : n.kids) relabel(k, f);
}

// All set partitions of `items` into non-empty unordered parts.
void set_partitions(const std::vector<int>& items, size_t idx,
                    std::vector<std::vector<int>>& current,
                    std::vector<std::vector<std::vector<int>>>& out) {
  if (idx == items.size()) {
    out.push_back(current);
    return;
  }
  int x = items[idx];
  for (size_t pi = 0; pi < current.size(); ++pi) {
    current[pi].push_back(x);
    set_partitions(items, idx + 1, current, out);
    current[pi].pop_back();
  }
  current.push_back({x});
  set_partitions(items, idx + 1, current, out);
  current.pop_back();
}

// All subtrees (hung on an edge) with exactly the given leaf set and at most
// max_v vertices. A bare leaf counts as a subtree when the set is a singleton.
std::vector<TreeNode> gen_subtrees(const std::vector<int>& leaves, int max_v) {
  std::vector<TreeNode> out;
  if (leaves.size() == 1) {
    TreeNode l;
    l.leaf = leaves[0];
    out.push_back(l);
  }
  if (max_v < 1) return out;
  std::vector<std::vector<std::vector<int>>> partitions;
  std::vector<std::vector<int>> cur;
  set_partitions(leaves, 0, cur, partitions);
  for (const auto& parts : partitions) {
    // Options per part, then all combinations with total vertex budget.
    std::vector<std::vector<TreeNode>> options;
    for (const auto& p : parts) options.push_back(gen_subtrees(p, max_v - 1));
    std::vector<TreeNode> kids;
    std::function<void(size_t, int)> rec = [&](size_t j, int used) {
      if (used > max_v - 1) return;
      if (j == options.size()) {
        TreeNode v;
        v.kids = kids;
        out.push_back(v);
        return;
      }
      for (const auto& opt : options[j]) {
        int lv = 0, vv = 0;
        count(opt, lv, vv);
        kids.push_back(opt);
        rec(j + 1, used + vv);
        kids.pop_back();
      }
    };
    rec(0, 0);
  }
  return out;
}

}  // namespace

int Tree::vertex_arity(int vi) const {
  std::vector<const TreeNode*> vs;
  preorder_vertices(root, vs);
  return static_cast<int>(vs[vi]->kids.size());
}

std::vector<int> Tree::vertex_arities() const {
  std::vector<const TreeNode*> vs;
  preorder_vertices(root, vs);
  std::vector<int> out;
  out.reserve(vs.size());
  for (auto* v : vs) out.push_back(static_cast<int>(v->kids.size()));
  return out;
}

Tree canonical_tree(const TreeNode& raw) {
  TreeNode n = raw;
  std::set<int> seen;
  validate(n, seen);
  if (seen.empty()) throw MalformedTree("tree without leaves");
  int expect = 1;
  for (int l : seen)
    if (l != expect++) throw MalformedTree("leaf labels must be 1..r");
  Tree t;
  sort_node(n, nullptr);
  t.enc = encode(n);
  t.root = std::move(n);
  count(t.root, t.nleaves, t.nvertices);
  return t;
}

TaggedCanon canonical_tree_tagged(TreeNode raw) {
  std::set<int> seen;
  validate(raw, seen);
  TaggedCanon out;
  std::vector<std::pair<int, std::vector<int>>> perms;
  sort_node(raw, &perms);
  out.tree.enc = encode(raw);
  out.tree.root = std::move(raw);
  count(out.tree.root, out.tree.nleaves, out.tree.nvertices);
  std::map<int, std::vector<int>> perm_by_tag;
  for (auto& [tag, p] : perms) perm_by_tag[tag] = std::move(p);
  std::vector<const TreeNode*> vs;
  preorder_vertices(out.tree.root, vs);
  for (auto* v : vs) {
    out.origin.push_back(v->tag);
    out.child_perm.push_back(perm_by_tag.at(v->tag));
  }
  return out;
}

Tree unit_tree() {
  TreeNode l;
  l.leaf = 1;
  return canonical_tree(l);
}

Tree corolla(int r) {
  TreeNode v;
  for (int i = 1; i <= r; ++i) {
    TreeNode l;
    l.leaf = i;
    v.kids.push_back(l);
  }
  return canonical_tree(v);
}

TaggedCanon graft(const Tree& s, int i, const Tree& t) {
  if (i < 1 || i > s.nleaves) throw MalformedTree("graft position out of range");
  int l = t.nleaves;
  int next_tag = 0;
  TreeNode sr = copy_with_tags(s.root, next_tag);
  TreeNode tr = copy_with_tags(t.root, next_tag);
  // Relabel: t's leaves j -> i+j-1; s's leaves j>i -> j+l-1. The slot-i leaf
  // becomes a marker label outside 1..k+l-1 (must stay > 0 so it remains a
  // leaf node).
  const int marker = s.nleaves + l + 1;
  relabel(tr, [&](int j) { return i + j - 1; });
  relabel(sr, [&](int j) { return j < i ? j : (j == i ? marker : j + l - 1); });
  if (s.is_unit()) {
    return canonical_tree_tagged(std::move(tr));
  }
  bool done = false;
  std::function<void(TreeNode&)> subst = [&](TreeNode& n) {
    for (auto& k : n.kids) {
      if (k.is_leaf()) {
        if (k.leaf == marker) {
          k = tr;
          done = true;
          return;
        }
      } else {
        subst(k);
        if (done) return;
      }
    }
  };
  subst(sr);
  if (!done) throw MalformedTree("graft slot not found");
  return canonical_tree_tagged(std::move(sr));
}

TaggedCanon permute_leaves(const Tree& t, const std::vector<int>& perm) {
  int next_tag = 0;
  TreeNode raw = copy_with_tags(t.root, next_tag);
  relabel(raw, [&](int j) { return perm.at(j - 1); });
  return canonical_tree_tagged(std::move(raw));
}

std::vector<Tree> enumerate_trees(int r, int max_vertices) {
  std::vector<int> leaves;
  for (int i = 1; i <= r; ++i) leaves.push_back(i);
  auto raws = gen_subtrees(leaves, max_vertices);
  std::map<std::string, Tree> dedup;
  for (auto& raw : raws) {
    Tree t = canonical_tree(raw);
    if (r > 1 && t.is_unit()) continue;  // cannot happen; bare leaf only at r=1
    dedup.emplace(t.enc, std::move(t));
  }
  std::vector<Tree> out;
  for (auto& [e, t] : dedup) out.push_back(std::move(t));
  std::sort(out.begin(), out.end(), [](const Tree& a, const Tree& b) {
    return std::tie(a.nvertices, a.enc) < std::tie(b.nvertices, b.enc);
  });
  return out;
}

std::vector<TreeDecomposition> decompositions(const Tree& theta, int k, int l, int i) {
  std::vector<TreeDecomposition> out;
  if (theta.nleaves != k + l - 1 || i < 1 || i > k) return out;
  for (const Tree& s : enumerate_trees(k, theta.nvertices)) {
    for (const Tree& t : enumerate_trees(l, theta.nvertices - s.nvertices)) {
      if (s.nvertices + t.nvertices != theta.nvertices) continue;
      TaggedCanon g = graft(s, i, t);
      if (g.tree == theta) {
        out.push_back(TreeDecomposition{s, t, i, std::move(g)});
      }
    }
  }
  return out;
}

}  // namespace opw
