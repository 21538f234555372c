#include "opw/operad.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

namespace opw {

namespace {

// Input permutation of the vertex at canonical slot v of g.tree, mapping the
// target child order back to the source child order (one-line notation).
Perm input_perm(const TaggedCanon& g, int v) {
  Perm p;
  for (int old : g.child_perm[v]) p.push_back(old + 1);
  return perm_inverse(p);
}

bool map_equal(const DgMap& a, const DgMap& b, int top) {
  for (int d = 0; d <= top; ++d)
    if (!(a.at(d) == b.at(d))) return false;
  return true;
}

// Q (x) K -> K and K (x) Q -> Q reindexings are the identity matrix in every
// degree because the unit line sits in degree 0 with a single basis element.
DgMap strip_unit_left(const DgModule& k) {
  DgMap out = identity_map(k);
  out.src = tensor(dg_unit(), k);
  return out;
}

DgMap strip_unit_right(const DgModule& k) {
  DgMap out = identity_map(k);
  out.src = tensor(k, dg_unit());
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Augmented dg-operads
// ---------------------------------------------------------------------------

const DgMap& DgOperad::composition(int k, int l, int i) const {
  auto it = comp.find({k, l, i});
  if (it == comp.end()) throw std::invalid_argument("missing composition");
  return it->second;
}

int FreeDgOperad::summand_count(int r) const {
  auto it = trees.find(r);
  return it == trees.end() ? 0 : static_cast<int>(it->second.size());
}

int FreeDgOperad::flat_index(int r, int d, int t, int k) const {
  return offsets.at(r)[d][t] + k;
}

DgMap FreeDgOperad::summand_projection(int r, int t) const {
  const GradedTensor& gt = summand.at(r)[t];
  DgMap out{op.at(r), gt.mod, {}};
  out.normalize_shapes();
  for (int d = 0; d <= gt.mod.top_degree(); ++d)
    for (int k = 0; k < gt.mod.dim(d); ++k) out.comp[d].set(k, flat_index(r, d, t, k), 1);
  return out;
}

DgMap FreeDgOperad::summand_inclusion(int r, int t) const {
  const GradedTensor& gt = summand.at(r)[t];
  DgMap out{gt.mod, op.at(r), {}};
  out.normalize_shapes();
  for (int d = 0; d <= gt.mod.top_degree(); ++d)
    for (int k = 0; k < gt.mod.dim(d); ++k) out.comp[d].set(flat_index(r, d, t, k), k, 1);
  return out;
}

DgMap FreeDgOperad::generator_inclusion(int r) const {
  const auto& tl = trees.count(r) ? trees.at(r) : std::vector<Tree>{};
  for (size_t t = 0; t < tl.size(); ++t)
    if (tl[t].nvertices == 1) {
      DgMap m = summand_inclusion(r, static_cast<int>(t));
      m.src = gens_seq.at(r);  // single-factor tensor: same basis order
      return m;
    }
  return zero_map(gens_seq.at(r), op.at(r));
}

FreeDgOperad free_dg_operad(const DgSymSeq& n, int m, int max_arity, int degree_bound) {
  // The free operad and the cofree cooperad on the same generators share the
  // underlying treewise sum; only the direction of the structure maps differs.
  CofreeCooperad cf = cofree(n, m, max_arity, degree_bound);
  FreeDgOperad fo;
  fo.gens_seq = cf.gens_seq;
  fo.weight = m;
  fo.trees = cf.trees;
  fo.summand = cf.summand;
  fo.offsets = cf.offsets;
  fo.op.underlying = cf.coop.underlying;
  fo.op.unit = cf.coop.coaug;
  fo.op.aug = cf.coop.counit;
  fo.op.truncation_weight = m;
  for (int k = 1; k <= max_arity; ++k)
    for (int l = 1; k + l - 1 <= max_arity; ++l) {
      int r = k + l - 1;
      DgModule tkl = tensor(fo.op.at(k), fo.op.at(l));
      for (int i = 1; i <= k; ++i) {
        DgMap cmp = zero_map(tkl, fo.op.at(r));
        for (int s = 0; s < fo.summand_count(k); ++s)
          for (int t = 0; t < fo.summand_count(l); ++t) {
            TaggedCanon g = graft(fo.trees[k][s], i, fo.trees[l][t]);
            if (g.tree.nvertices > m) continue;  // weight ideal: cut to zero
            int u = -1;
            for (int w = 0; w < fo.summand_count(r); ++w)
              if (fo.trees[r][w] == g.tree) u = w;
            if (u < 0) throw std::logic_error("grafted tree missing from summands");
            DgMap piece = pair_transport(g, fo.summand[k][s], fo.summand[l][t],
                                         fo.summand[r][u], fo.gens_seq);
            DgMap term = compose(
                fo.summand_inclusion(r, u),
                compose(piece, tensor_map(fo.summand_projection(k, s),
                                          fo.summand_projection(l, t))));
            for (int d = 0; d <= tkl.top_degree(); ++d) {
              const QMat td = term.at(d);
              for (const auto& [rc, val] : td.entries())
                cmp.comp[d].add_to(rc.first, rc.second, val);
            }
          }
        fo.op.comp[{k, l, i}] = std::move(cmp);
      }
    }
  return fo;
}

DgOperad trivial_dg_operad(int max_arity) {
  DgSymSeq zero;
  zero.components[1] = dg_zero();
  FreeDgOperad f = free_dg_operad(zero, 1, max_arity);
  f.op.truncation_weight = -1;  // nothing is ever cut: the unit composes freely
  return f.op;
}

AxiomCheck check_dg_operad_axioms(const DgOperad& p) {
  int ma = p.max_arity();
  for (const auto& [r, comp] : p.underlying.components)
    if (!comp.check_d_squared())
      return {false, "d^2 != 0 in arity " + std::to_string(r)};
  {
    auto ac = check_action(p.underlying);
    if (!ac.ok) return {false, "action: " + ac.reason};
  }
  if (!(p.aug.at(0) * p.unit.at(0) == QMat::identity(1)))
    return {false, "augmentation o unit != id"};
  if (!check_cochain_map(p.unit)) return {false, "unit is not a cochain map"};
  if (!check_cochain_map(p.aug)) return {false, "augmentation is not a cochain map"};
  for (const auto& [key, f] : p.comp) {
    auto [k, l, i] = key;
    if (!check_cochain_map(f))
      return {false, "composition (" + std::to_string(k) + "," + std::to_string(l) +
                         "," + std::to_string(i) + ") is not a cochain map"};
  }
  // Unit laws.
  for (int r = 1; r <= ma; ++r) {
    const DgModule& pr = p.at(r);
    int top = pr.top_degree();
    DgMap left = compose(p.composition(1, r, 1),
                         compose(tensor_map(p.unit, identity_map(pr)),
                                 map_inverse_perm(strip_unit_left(pr))));
    if (!map_equal(left, identity_map(pr), top))
      return {false, "left unit law fails in arity " + std::to_string(r)};
    for (int i = 1; i <= r; ++i) {
      DgMap right = compose(p.composition(r, 1, i),
                            compose(tensor_map(identity_map(pr), p.unit),
                                    map_inverse_perm(strip_unit_right(pr))));
      if (!map_equal(right, identity_map(pr), top))
        return {false, "right unit law fails in arity " + std::to_string(r) + " slot " +
                           std::to_string(i)};
    }
  }
  // Associativity. Composition preserves the weight grading, so the weight
  // truncation is a quotient by an ideal and both sides agree exactly.
  for (int k = 1; k <= ma; ++k)
    for (int l = 1; l <= ma; ++l)
      for (int m = 1; k + l + m - 2 <= ma; ++m) {
        int n = k + l + m - 2;
        if (p.at(n).total_dim() == 0) continue;
        DgMap assoc = tensor_associator(p.at(k), p.at(l), p.at(m));
        for (int i = 1; i <= k; ++i) {
          // Nested: the m-ary factor plugs into the l-ary one at slot j.
          for (int j = 1; j <= l; ++j) {
            DgMap lhs =
                compose(p.composition(k + l - 1, m, i + j - 1),
                        tensor_map(p.composition(k, l, i), identity_map(p.at(m))));
            DgMap rhs =
                compose(compose(p.composition(k, l + m - 1, i),
                                tensor_map(identity_map(p.at(k)),
                                           p.composition(l, m, j))),
                        assoc);
            if (!map_equal(lhs, rhs, p.at(n).top_degree()))
              return {false, "nested associativity fails at k=" + std::to_string(k) +
                                 " l=" + std::to_string(l) + " m=" + std::to_string(m) +
                                 " i=" + std::to_string(i) + " j=" + std::to_string(j)};
          }
          // Disjoint: both factors plug into the k-ary one, i < j.
          for (int j = i + 1; j <= k; ++j) {
            DgMap lhs =
                compose(p.composition(k + l - 1, m, j + l - 1),
                        tensor_map(p.composition(k, l, i), identity_map(p.at(m))));
            DgMap rhs =
                compose(p.composition(k + m - 1, l, i),
                        tensor_map(p.composition(k, m, j), identity_map(p.at(l))));
            // Reorder (K(x)L)(x)M -> (K(x)M)(x)L before feeding the rhs.
            DgMap s1 = assoc;
            DgMap s2 = tensor_map(identity_map(p.at(k)), tensor_swap(p.at(l), p.at(m)));
            DgMap s3 = map_inverse_perm(tensor_associator(p.at(k), p.at(m), p.at(l)));
            DgMap reordered = compose(rhs, compose(s3, compose(s2, s1)));
            if (!map_equal(lhs, reordered, p.at(n).top_degree()))
              return {false, "disjoint associativity fails at k=" + std::to_string(k) +
                                 " l=" + std::to_string(l) + " m=" + std::to_string(m) +
                                 " i=" + std::to_string(i) + " j=" + std::to_string(j)};
          }
        }
      }
  // Equivariance: (sigma a) o_{sigma(i)} (tau b) = block_perm(sigma,tau,i) . (a o_i b).
  for (int k = 1; k <= ma; ++k)
    for (int l = 1; k + l - 1 <= ma; ++l) {
      int r = k + l - 1;
      if (p.at(r).total_dim() == 0) continue;
      for (const Perm& sigma : all_perms(k))
        for (const Perm& tau : all_perms(l))
          for (int i = 1; i <= k; ++i) {
            Perm gamma = block_perm(sigma, tau, i);
            DgMap lhs = compose(p.composition(k, l, sigma[i - 1]),
                                tensor_map(p.underlying.action(k, sigma),
                                           p.underlying.action(l, tau)));
            DgMap rhs = compose(p.underlying.action(r, gamma), p.composition(k, l, i));
            if (!map_equal(lhs, rhs, tensor(p.at(k), p.at(l)).top_degree()))
              return {false, "equivariance fails at k=" + std::to_string(k) +
                                 " l=" + std::to_string(l) + " i=" + std::to_string(i)};
          }
    }
  return {};
}

DgMap AugIdealData::incl(const DgOperad& p, int r) const {
  return r == 1 ? incl1 : identity_map(p.at(r));
}

DgMap AugIdealData::proj(const DgOperad& p, int r) const {
  return r == 1 ? proj1 : identity_map(p.at(r));
}

AugIdealData augmentation_ideal(const DgOperad& p) {
  const DgModule& p1 = p.at(1);
  {
    QMat t = p.aug.at(0) * p.unit.at(0);
    if (!(t == QMat::identity(1)))
      throw std::invalid_argument("augmentation not split by the unit");
  }
  AugIdealData ai;
  DgModule bar;
  std::vector<QMat> incl, proj;
  bar.basis.resize(std::max(p1.top_degree() + 1, 0));
  for (int d = 0; d <= p1.top_degree(); ++d) {
    auto ker = kernel_basis(p.aug.at(d));
    QMat in = columns_to_mat(ker, p1.dim(d));
    // pi = id - unit o aug has image inside the kernel; express it there.
    QMat pi = QMat::identity(p1.dim(d)) - p.unit.at(d) * p.aug.at(d);
    QMat pr(static_cast<int>(ker.size()), p1.dim(d));
    for (int j = 0; j < p1.dim(d); ++j) {
      std::vector<Rational> col(p1.dim(d));
      for (int i = 0; i < p1.dim(d); ++i) col[i] = pi.at(i, j);
      auto sol = solve(in, col);
      if (!sol) throw std::logic_error("idempotent image escaped the kernel");
      for (size_t i = 0; i < sol->size(); ++i) pr.set(static_cast<int>(i), j, (*sol)[i]);
    }
    for (size_t kv = 0; kv < ker.size(); ++kv) {
      // Prefer the original label when the kernel vector is a basis vector.
      int nz = -1, cnt = 0;
      for (int i = 0; i < p1.dim(d); ++i)
        if (!(ker[kv][i] == 0)) {
          ++cnt;
          nz = i;
        }
      if (cnt == 1 && ker[kv][nz] == 1)
        bar.basis[d].push_back(p1.basis[d][nz]);
      else
        bar.basis[d].push_back("k" + std::to_string(d) + "_" + std::to_string(kv));
    }
    incl.push_back(in);
    proj.push_back(pr);
  }
  while (!bar.basis.empty() && bar.basis.back().empty()) bar.basis.pop_back();
  bar.normalize_shapes();
  ai.incl1 = DgMap{bar, p1, incl};
  ai.proj1 = DgMap{p1, bar, proj};
  ai.incl1.normalize_shapes();
  ai.proj1.normalize_shapes();
  for (int d = 0; d < bar.top_degree(); ++d)
    bar.d[d] = ai.proj1.at(d + 1) * (p1.diff(d) * ai.incl1.at(d));
  ai.incl1.src = bar;
  ai.proj1.dst = bar;
  ai.seq.components[1] = bar;
  ai.seq.gens[1] = {};
  for (const auto& [r, comp] : p.underlying.components)
    if (r != 1) {
      ai.seq.components[r] = comp;
      auto git = p.underlying.gens.find(r);
      if (git != p.underlying.gens.end()) ai.seq.gens[r] = git->second;
    }
  ai.seq.default_trivial_actions();
  return ai;
}

// ---------------------------------------------------------------------------
// Operads in finite simplicial sets
// ---------------------------------------------------------------------------

namespace {

std::string simp_key(const SimpRef& x) {
  std::string s = std::to_string(x.core_dim) + "." + std::to_string(x.idx);
  for (int j : x.degen) s += "s" + std::to_string(j);
  return s;
}

// Copy of the canonical structure with tags 0..nvertices-1 in preorder, so
// surgery on the raw nodes can be matched back to canonical vertex indices.
TreeNode tag_preorder(const TreeNode& node, int& next) {
  TreeNode out;
  out.leaf = node.leaf;
  if (node.is_leaf()) return out;
  out.tag = next++;
  for (const TreeNode& kid : node.kids) out.kids.push_back(tag_preorder(kid, next));
  return out;
}

TreeNode tagged_root(const Tree& t) {
  int next = 0;
  return tag_preorder(t.root, next);
}

// Removes the unary vertex carrying the given tag, splicing in its child.
TreeNode remove_unary(const TreeNode& node, int tag) {
  if (node.is_leaf()) return node;
  if (node.tag == tag) return remove_unary(node.kids[0], tag);
  TreeNode out = node;
  for (TreeNode& kid : out.kids) kid = remove_unary(kid, tag);
  return out;
}

}  // namespace

std::string SpaceElem::key() const {
  std::string s = "T" + tree.enc + "@" + std::to_string(dim);
  for (const SimpRef& l : labels) s += "|" + simp_key(l);
  return s;
}

bool SpaceElem::operator<(const SpaceElem& o) const { return key() < o.key(); }

SimpRef SpaceOperadTrunc::basepoint(int n) const {
  SimpRef b{0, seq.base, {}};
  for (int j = n - 1; j >= 0; --j) b.degen.push_back(j);
  return b;
}

bool SpaceOperadTrunc::is_basepoint(const SimpRef& x) const {
  return x.core_dim == 0 && x.idx == seq.base;
}

SpaceElem SpaceOperadTrunc::unit(int n) const { return SpaceElem{unit_tree(), {}, n}; }

namespace {

// Relabel-transport of vertex labels along canonicalization data: target
// slot v receives the label tagged g.origin[v], pushed through the action of
// the input permutation of v.
std::vector<SimpRef> transport_labels(const TaggedCanon& g,
                                      const std::vector<SimpRef>& by_tag,
                                      const PointedSpaceSeq& seq) {
  std::vector<SimpRef> out(g.tree.nvertices);
  for (int v = 0; v < g.tree.nvertices; ++v) {
    int a = g.tree.vertex_arity(v);
    SimplicialAut act = seq.action(a, input_perm(g, v));
    out[v] = apply_aut(act, by_tag[g.origin[v]]);
  }
  return out;
}

SpaceElem reduce_impl(const SpaceOperadTrunc& p, SpaceElem e, bool last_first) {
  for (;;) {
    int victim = -1;
    for (int v = 0; v < e.tree.nvertices; ++v)
      if (e.tree.vertex_arity(v) == 1 && p.is_basepoint(e.labels[v])) {
        victim = v;
        if (!last_first) break;
      }
    if (victim < 0) return e;
    TreeNode raw = remove_unary(tagged_root(e.tree), victim);
    TaggedCanon g = canonical_tree_tagged(std::move(raw));
    // Tags surviving surgery still index the old labels directly.
    e.labels = transport_labels(g, e.labels, p.seq);
    e.tree = g.tree;
  }
}

}  // namespace

SpaceElem SpaceOperadTrunc::reduce(SpaceElem e) const {
  return reduced ? reduce_impl(*this, std::move(e), false) : e;
}

std::optional<SpaceElem> SpaceOperadTrunc::compose(const SpaceElem& a, int i,
                                                   const SpaceElem& b) const {
  if (a.dim != b.dim) throw std::invalid_argument("composition of unequal dimensions");
  auto ov = comp_override.find(a.key() + "|" + std::to_string(i) + "|" + b.key());
  if (ov != comp_override.end()) return ov->second;
  TaggedCanon g = graft(a.tree, i, b.tree);
  std::vector<SimpRef> by_tag = a.labels;
  by_tag.insert(by_tag.end(), b.labels.begin(), b.labels.end());
  SpaceElem res{g.tree, transport_labels(g, by_tag, seq), a.dim};
  res = reduce(std::move(res));
  if (res.tree.nvertices > weight) return std::nullopt;
  return res;
}

SpaceElem SpaceOperadTrunc::act(const SpaceElem& e, const Perm& sigma) const {
  if (e.tree.is_unit()) return e;
  TaggedCanon g = permute_leaves(e.tree, sigma);
  return SpaceElem{g.tree, transport_labels(g, e.labels, seq), e.dim};
}

SpaceElem SpaceOperadTrunc::face(const SpaceElem& e, int i) const {
  SpaceElem out = e;
  out.dim = e.dim - 1;
  std::vector<int> arities = e.tree.vertex_arities();
  for (int v = 0; v < e.tree.nvertices; ++v)
    out.labels[v] = seq.at(arities[v]).face(e.labels[v], i);
  return reduce(std::move(out));
}

SpaceElem SpaceOperadTrunc::degeneracy(const SpaceElem& e, int j) const {
  SpaceElem out = e;
  out.dim = e.dim + 1;
  for (SimpRef& l : out.labels) l = degenerate_ref(l, j);
  return out;
}

std::vector<SpaceElem> SpaceOperadTrunc::elements(int r, int n, int max_vertices) const {
  if (max_vertices < 0) max_vertices = weight;
  std::vector<SpaceElem> out;
  for (const Tree& t : enumerate_trees(r, max_vertices)) {
    if (t.is_unit()) {
      out.push_back(unit(n));
      continue;
    }
    std::vector<int> arities = t.vertex_arities();
    std::vector<std::vector<SimpRef>> choices;
    bool empty = false;
    for (int a : arities) {
      choices.push_back(seq.at(a).all_simplices(n));
      if (choices.back().empty()) empty = true;
    }
    if (empty) continue;
    std::vector<SimpRef> cur(t.nvertices);
    std::function<void(int)> rec = [&](int v) {
      if (v == t.nvertices) {
        out.push_back(SpaceElem{t, cur, n});
        return;
      }
      for (const SimpRef& x : choices[v]) {
        if (reduced && arities[v] == 1 && is_basepoint(x)) continue;
        cur[v] = x;
        rec(v + 1);
      }
    };
    rec(0);
  }
  return out;
}

int SpaceOperadTrunc::top_cell_dim(int r) const {
  int best = 0;
  for (const Tree& t : enumerate_trees(r, weight)) {
    if (t.is_unit()) continue;
    int total = 0;
    bool empty = false;
    for (int a : t.vertex_arities()) {
      const FinSimpSet& f = seq.at(a);
      if (f.total_cells() == 0) empty = true;
      total += f.dim();
    }
    if (!empty) best = std::max(best, total);
  }
  return best;
}

SpaceOperadTrunc free_space_operad(const PointedSpaceSeq& m, int weight, int max_arity) {
  SpaceOperadTrunc p;
  p.seq = m;
  p.seq.default_trivial_actions();
  p.weight = weight;
  p.max_arity = max_arity;
  p.reduced = false;
  return p;
}

SpaceOperadTrunc james(const PointedSpaceSeq& m, int weight, int max_arity) {
  SpaceOperadTrunc p = free_space_operad(m, weight, max_arity);
  p.reduced = true;
  return p;
}

namespace {

bool opt_equal(const std::optional<SpaceElem>& a, const std::optional<SpaceElem>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || *a == *b;
}

}  // namespace

AxiomCheck check_space_operad_axioms(const SpaceOperadTrunc& p, int top_dim) {
  for (int n = 0; n <= top_dim; ++n) {
    std::map<int, std::vector<SpaceElem>> elems;
    for (int r = 1; r <= p.max_arity; ++r) elems[r] = p.elements(r, n);
    // Unit laws.
    for (int r = 1; r <= p.max_arity; ++r)
      for (const SpaceElem& e : elems[r]) {
        auto le = p.compose(p.unit(n), 1, e);
        if (!le || !(*le == e))
          return {false, "left unit law fails on " + e.key()};
        for (int i = 1; i <= r; ++i) {
          auto re = p.compose(e, i, p.unit(n));
          if (!re || !(*re == e))
            return {false, "right unit law fails on " + e.key() + " slot " +
                               std::to_string(i)};
        }
      }
    // Associativity, nested and disjoint. Truncation must agree on both sides.
    for (int k = 1; k <= p.max_arity; ++k)
      for (int l = 1; l <= p.max_arity; ++l)
        for (int m = 1; k + l + m - 2 <= p.max_arity; ++m)
          for (const SpaceElem& a : elems[k])
            for (const SpaceElem& b : elems[l])
              for (const SpaceElem& c : elems[m])
                for (int i = 1; i <= k; ++i) {
                  auto ab = p.compose(a, i, b);
                  for (int j = 1; j <= l; ++j) {
                    std::optional<SpaceElem> lhs = ab ? p.compose(*ab, i + j - 1, c) : std::nullopt;
                    auto bc = p.compose(b, j, c);
                    std::optional<SpaceElem> rhs = bc ? p.compose(a, i, *bc) : std::nullopt;
                    if (!opt_equal(lhs, rhs))
                      return {false, "nested associativity fails on (" + a.key() +
                                         ", " + b.key() + ", " + c.key() + ") i=" +
                                         std::to_string(i) + " j=" + std::to_string(j)};
                  }
                  for (int j = i + 1; j <= k; ++j) {
                    std::optional<SpaceElem> lhs = ab ? p.compose(*ab, j + l - 1, c) : std::nullopt;
                    auto ac = p.compose(a, j, c);
                    std::optional<SpaceElem> rhs = ac ? p.compose(*ac, i, b) : std::nullopt;
                    if (!opt_equal(lhs, rhs))
                      return {false, "disjoint associativity fails on (" + a.key() +
                                         ", " + b.key() + ", " + c.key() + ") i=" +
                                         std::to_string(i) + " j=" + std::to_string(j)};
                  }
                }
    // Equivariance.
    for (int k = 1; k <= p.max_arity; ++k)
      for (int l = 1; k + l - 1 <= p.max_arity; ++l)
        for (const SpaceElem& a : elems[k])
          for (const SpaceElem& b : elems[l])
            for (const Perm& sigma : all_perms(k))
              for (const Perm& tau : all_perms(l))
                for (int i = 1; i <= k; ++i) {
                  auto lhs = p.compose(p.act(a, sigma), sigma[i - 1], p.act(b, tau));
                  auto ab = p.compose(a, i, b);
                  Perm gamma = block_perm(sigma, tau, i);
                  std::optional<SpaceElem> rhs =
                      ab ? std::optional<SpaceElem>(p.act(*ab, gamma)) : std::nullopt;
                  if (!opt_equal(lhs, rhs))
                    return {false, "equivariance fails on (" + a.key() + ", " +
                                       b.key() + ") i=" + std::to_string(i)};
                }
    // Compatibility of composition with the simplicial operators.
    for (int k = 1; k <= p.max_arity; ++k)
      for (int l = 1; k + l - 1 <= p.max_arity; ++l)
        for (const SpaceElem& a : elems[k])
          for (const SpaceElem& b : elems[l])
            for (int i = 1; i <= k; ++i) {
              auto ab = p.compose(a, i, b);
              // A truncated composite has no faces or degeneracies to compare;
              // faces of the factors may still reduce below the weight bound.
              if (!ab) continue;
              for (int fi = 0; fi <= n && n >= 1; ++fi) {
                std::optional<SpaceElem> lhs(p.face(*ab, fi));
                auto rhs = p.compose(p.face(a, fi), i, p.face(b, fi));
                if (!opt_equal(lhs, rhs))
                  return {false, "face incompatible with composition on (" + a.key() +
                                     ", " + b.key() + ") d_" + std::to_string(fi)};
              }
              for (int j = 0; j <= n; ++j) {
                std::optional<SpaceElem> lhs(p.degeneracy(*ab, j));
                auto rhs = p.compose(p.degeneracy(a, j), i, p.degeneracy(b, j));
                if (!opt_equal(lhs, rhs))
                  return {false, "degeneracy incompatible with composition on (" +
                                     a.key() + ", " + b.key() + ") s_" +
                                     std::to_string(j)};
              }
            }
    // Action commutes with faces and degeneracies.
    for (int r = 2; r <= p.max_arity; ++r)
      for (const SpaceElem& e : elems[r])
        for (const Perm& sigma : all_perms(r)) {
          for (int fi = 0; fi <= n && n >= 1; ++fi)
            if (!(p.face(p.act(e, sigma), fi) == p.act(p.face(e, fi), sigma)))
              return {false, "face incompatible with the action on " + e.key()};
          for (int j = 0; j <= n; ++j)
            if (!(p.degeneracy(p.act(e, sigma), j) == p.act(p.degeneracy(e, j), sigma)))
              return {false, "degeneracy incompatible with the action on " + e.key()};
        }
  }
  return {};
}

std::vector<SpaceElem> reduced_word_oracle(const SpaceOperadTrunc& james_op, int r, int n,
                                           AxiomCheck* confluence) {
  SpaceOperadTrunc raw = james_op;
  raw.reduced = false;
  raw.comp_override.clear();
  std::set<SpaceElem> normal;
  for (const SpaceElem& w : raw.elements(r, n)) {
    SpaceElem nf1 = reduce_impl(james_op, w, false);
    SpaceElem nf2 = reduce_impl(james_op, w, true);
    if (!(nf1 == nf2)) {
      if (confluence) *confluence = {false, "reduction orders disagree on " + w.key()};
      continue;
    }
    normal.insert(nf1);
  }
  return {normal.begin(), normal.end()};
}

JamesFiltration james_filtration(const SpaceOperadTrunc& p, int r) {
  JamesFiltration jf;
  int top = p.top_cell_dim(r);
  for (int k = 0; k <= p.weight; ++k) {
    std::vector<std::vector<std::string>> names(top + 1);
    std::vector<std::map<std::string, SpaceElem>> lookup(top + 1);
    for (int n = 0; n <= top; ++n)
      for (const SpaceElem& e : p.elements(r, n, k)) {
        names[n].push_back(e.key());
        lookup[n][e.key()] = e;
      }
    FinSimpSet level = from_functions(
        names,
        [&](int n, const std::string& e, int i) {
          return p.face(lookup[n].at(e), i).key();
        },
        [&](int n, const std::string& e, int j) {
          return p.degeneracy(lookup[n].at(e), j).key();
        });
    if (k >= 1) {
      jf.sub_cells.push_back(jf.levels.back().cells);
      jf.quotients.push_back(quotient(level, jf.sub_cells.back()));
    }
    jf.levels.push_back(std::move(level));
  }
  return jf;
}

// ---------------------------------------------------------------------------
// Reduced cotriple resolution over a discrete operad
// ---------------------------------------------------------------------------

std::string NElem::key() const {
  if (depth == 0) return "b:" + base + "/" + std::to_string(arity);
  std::string s = "w" + std::to_string(depth) + "T" + tree.enc + "[";
  for (size_t v = 0; v < labels.size(); ++v) {
    if (v) s += ",";
    s += labels[v].key();
  }
  return s + "]";
}

NElem ReducedCotriple::base_elem(const std::string& name, int arity) const {
  NElem e;
  e.depth = 0;
  e.arity = arity;
  e.base = name;
  return e;
}

NElem ReducedCotriple::unit_elem(int depth) const {
  if (depth == 0) return base_elem(p.unit, 1);
  NElem e;
  e.depth = depth;
  e.arity = 1;
  e.tree = unit_tree();
  return e;
}

NElem ReducedCotriple::reduce_word(NElem w) const {
  NElem unit_label = unit_elem(w.depth - 1);
  for (;;) {
    int victim = -1;
    for (int v = 0; v < w.tree.nvertices; ++v)
      if (w.tree.vertex_arity(v) == 1 && w.labels[v] == unit_label) {
        victim = v;
        break;
      }
    if (victim < 0) return w;
    TreeNode raw = remove_unary(tagged_root(w.tree), victim);
    TaggedCanon g = canonical_tree_tagged(std::move(raw));
    std::vector<NElem> labels(g.tree.nvertices);
    for (int v = 0; v < g.tree.nvertices; ++v)
      labels[v] = act(w.labels[g.origin[v]], input_perm(g, v));
    w.tree = g.tree;
    w.labels = std::move(labels);
  }
}

NElem ReducedCotriple::wrap(const NElem& x) const {
  NElem w;
  w.depth = x.depth + 1;
  w.arity = x.arity;
  w.tree = corolla(x.arity);
  w.labels = {x};
  return reduce_word(std::move(w));
}

NElem ReducedCotriple::compose_at(const NElem& a, int i, const NElem& b) const {
  if (a.depth != b.depth) throw std::invalid_argument("composition of unequal depths");
  if (a.depth == 0) {
    NElem out = base_elem(p.comp(a.arity, a.base, i, b.arity, b.base),
                          a.arity + b.arity - 1);
    return out;
  }
  TaggedCanon g = graft(a.tree, i, b.tree);
  std::vector<NElem> by_tag = a.labels;
  by_tag.insert(by_tag.end(), b.labels.begin(), b.labels.end());
  NElem out;
  out.depth = a.depth;
  out.arity = a.arity + b.arity - 1;
  out.tree = g.tree;
  out.labels.resize(g.tree.nvertices);
  for (int v = 0; v < g.tree.nvertices; ++v)
    out.labels[v] = act(by_tag[g.origin[v]], input_perm(g, v));
  return reduce_word(std::move(out));
}

NElem ReducedCotriple::act(const NElem& x, const Perm& sigma) const {
  if (x.arity <= 1) return x;
  // Depth 0 lives in a discrete operad with trivial symmetric-group action.
  if (x.depth == 0) return x;
  if (x.tree.is_unit()) return x;
  TaggedCanon g = permute_leaves(x.tree, sigma);
  NElem out = x;
  out.tree = g.tree;
  for (int v = 0; v < g.tree.nvertices; ++v)
    out.labels[v] = act(x.labels[g.origin[v]], input_perm(g, v));
  return out;
}

NElem ReducedCotriple::eval(const NElem& word) const {
  if (word.depth < 1) throw std::invalid_argument("eval needs a word");
  if (word.tree.is_unit()) return unit_elem(word.depth - 1);
  TreeNode root = tagged_root(word.tree);
  // Evaluate the treewise composite one level down, composing children
  // right-to-left so earlier slots keep their positions, then restore the
  // leaf labeling by the symmetric-group action.
  std::function<std::pair<NElem, std::vector<int>>(const TreeNode&)> ev =
      [&](const TreeNode& node) -> std::pair<NElem, std::vector<int>> {
    NElem acc = word.labels[node.tag];
    std::vector<std::vector<int>> parts(node.kids.size());
    for (int c = static_cast<int>(node.kids.size()) - 1; c >= 0; --c) {
      const TreeNode& kid = node.kids[c];
      if (kid.is_leaf()) {
        parts[c] = {kid.leaf};
      } else {
        auto [val, lv] = ev(kid);
        acc = compose_at(acc, c + 1, val);
        parts[c] = std::move(lv);
      }
    }
    std::vector<int> leaves;
    for (const auto& pt : parts) leaves.insert(leaves.end(), pt.begin(), pt.end());
    return {std::move(acc), std::move(leaves)};
  };
  auto [val, leaves] = ev(root);
  return act(val, leaves);
}

std::vector<NElem> ReducedCotriple::level_elements(int n, int r) const {
  std::function<std::vector<NElem>(int, int)> depth_elems = [&](int d,
                                                                int arity) {
    std::vector<NElem> out;
    if (d == 0) {
      auto it = p.elems.find(arity);
      if (it != p.elems.end())
        for (const std::string& name : it->second) out.push_back(base_elem(name, arity));
      return out;
    }
    NElem unit_label = unit_elem(d - 1);
    for (const Tree& t : enumerate_trees(arity, weight)) {
      if (t.is_unit()) {
        out.push_back(unit_elem(d));
        continue;
      }
      std::vector<int> arities = t.vertex_arities();
      std::vector<std::vector<NElem>> choices;
      bool empty = false;
      for (int a : arities) {
        choices.push_back(depth_elems(d - 1, a));
        if (choices.back().empty()) empty = true;
      }
      if (empty) continue;
      std::vector<NElem> cur(t.nvertices);
      std::function<void(int)> rec = [&](int v) {
        if (v == t.nvertices) {
          NElem w;
          w.depth = d;
          w.arity = arity;
          w.tree = t;
          w.labels = cur;
          out.push_back(std::move(w));
          return;
        }
        for (const NElem& x : choices[v]) {
          if (arities[v] == 1 && x == unit_label) continue;
          cur[v] = x;
          rec(v + 1);
        }
      };
      rec(0);
    }
    return out;
  };
  return depth_elems(n + 1, r);
}

NElem ReducedCotriple::face(const NElem& x, int n, int i) const {
  if (i == 0) return eval(x);
  NElem out = x;
  out.depth = x.depth - 1;
  for (NElem& l : out.labels) l = face(l, n - 1, i - 1);
  return reduce_word(std::move(out));
}

NElem ReducedCotriple::degeneracy(const NElem& x, int n, int j) const {
  if (j == -1) return wrap(x);
  NElem out = x;
  out.depth = x.depth + 1;
  for (NElem& l : out.labels) l = degeneracy(l, n - 1, j - 1);
  return out;
}

AxiomCheck check_cotriple_identities(const ReducedCotriple& rc) {
  std::vector<int> arities;
  for (const auto& [r, names] : rc.p.elems) arities.push_back(r);
  for (int n = 0; n <= rc.max_level; ++n)
    for (int r : arities)
      for (const NElem& x : rc.level_elements(n, r)) {
        // d_i d_j = d_{j-1} d_i for i < j.
        for (int j = 1; j <= n; ++j)
          for (int i = 0; i < j; ++i)
            if (!(rc.face(rc.face(x, n, j), n - 1, i) ==
                  rc.face(rc.face(x, n, i), n - 1, j - 1)))
              return {false, "d_" + std::to_string(i) + " d_" + std::to_string(j) +
                                 " fails on " + x.key()};
        // s_i s_j = s_{j+1} s_i for i <= j, including the extra degeneracy.
        for (int j = -1; j <= n; ++j)
          for (int i = -1; i <= j; ++i)
            if (!(rc.degeneracy(rc.degeneracy(x, n, j), n + 1, i) ==
                  rc.degeneracy(rc.degeneracy(x, n, i), n + 1, j + 1)))
              return {false, "s_" + std::to_string(i) + " s_" + std::to_string(j) +
                                 " fails on " + x.key()};
        // Mixed relations d_i s_j.
        for (int j = -1; j <= n; ++j)
          for (int i = 0; i <= n + 1; ++i) {
            NElem lhs = rc.face(rc.degeneracy(x, n, j), n + 1, i);
            NElem rhs = (i < j)    ? rc.degeneracy(rc.face(x, n, i), n - 1, j - 1)
                        : (i > j + 1) ? rc.degeneracy(rc.face(x, n, i - 1), n - 1, j)
                                      : x;
            if (!(lhs == rhs))
              return {false, "d_" + std::to_string(i) + " s_" + std::to_string(j) +
                                 " fails on " + x.key()};
          }
        // Augmentation coequalizer on level 1.
        if (n == 1 &&
            !(rc.eval(rc.face(x, 1, 0)) == rc.eval(rc.face(x, 1, 1))))
          return {false, "augmentation coequalizer fails on " + x.key()};
      }
  return {};
}

}  // namespace opw
