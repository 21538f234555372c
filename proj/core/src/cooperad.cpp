#include "opw/cooperad.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace opw {

namespace {

std::string joined_label(const std::vector<DgModule>& factors,
                         const std::vector<std::pair<int, int>>& tup) {
  if (tup.empty()) return "1";
  std::string s;
  for (size_t v = 0; v < tup.size(); ++v) {
    if (v) s += "(x)";
    s += factors[v].basis[tup[v].first][tup[v].second];
  }
  return s;
}

}  // namespace

GradedTensor graded_tensor(const std::vector<DgModule>& factors) {
  GradedTensor g;
  g.factors = factors;
  int top = 0;
  for (const auto& f : factors) {
    if (f.top_degree() < 0) {  // zero factor kills the tensor
      g.mod.normalize_shapes();
      return g;
    }
    top += f.top_degree();
  }
  g.mod.basis.resize(top + 1);
  g.tuples.resize(top + 1);
  g.pos.resize(top + 1);
  std::vector<std::pair<int, int>> cur;
  std::function<void(size_t, int)> rec = [&](size_t v, int deg) {
    if (v == factors.size()) {
      g.pos[deg][cur] = static_cast<int>(g.tuples[deg].size());
      g.tuples[deg].push_back(cur);
      g.mod.basis[deg].push_back(joined_label(factors, cur));
      return;
    }
    for (int d = 0; d <= factors[v].top_degree() && deg + d <= top; ++d)
      for (int i = 0; i < factors[v].dim(d); ++i) {
        cur.push_back({d, i});
        rec(v + 1, deg + d);
        cur.pop_back();
      }
  };
  rec(0, 0);
  g.mod.normalize_shapes();
  // Tensor differential with the Koszul sign of the factors to the left.
  for (int n = 0; n < top; ++n) {
    QMat& dn = g.mod.d[n];
    for (size_t k = 0; k < g.tuples[n].size(); ++k) {
      const auto& tup = g.tuples[n][k];
      int left = 0;
      for (size_t v = 0; v < tup.size(); ++v) {
        Rational sgn = (left % 2 == 0) ? 1 : -1;
        for (const QMat fd = factors[v].diff(tup[v].first);
             const auto& [rc, val] : fd.entries()) {
          if (rc.second != tup[v].second) continue;
          auto t2 = tup;
          t2[v] = {tup[v].first + 1, rc.first};
          dn.add_to(g.pos[n + 1].at(t2), static_cast<int>(k), sgn * val);
        }
        left += tup[v].first;
      }
    }
  }
  return g;
}

GradedTensor treewise_tensor(const Tree& t, const DgSymSeq& n) {
  std::vector<DgModule> factors;
  for (int a : t.vertex_arities()) factors.push_back(n.at(a));
  return graded_tensor(factors);
}

const DgMap& ConilCooperad::coproduct(int k, int l, int i) const {
  auto it = cop.find({k, l, i});
  if (it == cop.end()) throw std::invalid_argument("missing coproduct");
  return it->second;
}

namespace {

// Input permutation of the vertex at canonical slot v of g.tree, mapping the
// target child order back to the source child order (one-line notation).
Perm input_perm(const TaggedCanon& g, int v) {
  Perm p;
  for (int old : g.child_perm[v]) p.push_back(old + 1);
  return perm_inverse(p);
}

// Koszul sign of rearranging the source factors (degrees by tag) into the
// target order, where target slot v holds the factor tagged g.origin[v].
Rational reorder_sign(const TaggedCanon& g, const std::vector<int>& deg_by_tag) {
  int count = 0;
  int nv = g.tree.nvertices;
  for (int v = 0; v < nv; ++v)
    for (int w = v + 1; w < nv; ++w)
      if (g.origin[v] > g.origin[w])
        count += deg_by_tag[g.origin[v]] * deg_by_tag[g.origin[w]];
  return count % 2 == 0 ? 1 : -1;
}

// Expands the per-slot action columns multilinearly; emits completed target
// tuples with their coefficients.
void expand_actions(
    const std::vector<std::pair<int, int>>& src_by_slot,  // (deg, idx) per target slot
    const std::vector<const DgMap*>& act,                 // per target slot
    const Rational& coeff,
    const std::function<void(const std::vector<std::pair<int, int>>&, const Rational&)>&
        sink) {
  std::vector<std::pair<int, int>> out(src_by_slot.size());
  std::function<void(size_t, Rational)> rec = [&](size_t v, Rational c) {
    if (v == src_by_slot.size()) {
      sink(out, c);
      return;
    }
    auto [d, idx] = src_by_slot[v];
    const QMat avd = act[v]->at(d);
    for (const auto& [rc, val] : avd.entries()) {
      if (rc.second != idx) continue;
      out[v] = {d, rc.first};
      rec(v + 1, c * val);
    }
  };
  rec(0, coeff);
}

// Precomputed per-vertex action maps for a transport along g.
std::vector<DgMap> vertex_actions(const TaggedCanon& g, const DgSymSeq& seq) {
  std::vector<DgMap> acts;
  for (int v = 0; v < g.tree.nvertices; ++v)
    acts.push_back(seq.action(g.tree.vertex_arity(v), input_perm(g, v)));
  return acts;
}

}  // namespace

// Map src -> tgt induced by relabeling/regrafting data g: source factors are
// indexed by tags 0..nv-1 in src's slot order, target slot v takes the factor
// tagged g.origin[v], transported by the input permutation of v.
DgMap treewise_transport(const TaggedCanon& g, const GradedTensor& src,
                              const GradedTensor& tgt, const DgSymSeq& seq) {
  DgMap out{src.mod, tgt.mod, {}};
  out.normalize_shapes();
  std::vector<DgMap> acts = vertex_actions(g, seq);
  std::vector<const DgMap*> act_ptrs;
  for (const auto& a : acts) act_ptrs.push_back(&a);
  int nv = g.tree.nvertices;
  for (int d = 0; d <= src.mod.top_degree(); ++d) {
    if (d >= static_cast<int>(tgt.pos.size())) break;
    for (size_t k = 0; k < src.tuples[d].size(); ++k) {
      const auto& tup = src.tuples[d][k];
      std::vector<int> deg_by_tag(nv);
      for (int u = 0; u < nv; ++u) deg_by_tag[u] = tup[u].first;
      Rational sgn = reorder_sign(g, deg_by_tag);
      std::vector<std::pair<int, int>> by_slot(nv);
      for (int v = 0; v < nv; ++v) by_slot[v] = tup[g.origin[v]];
      expand_actions(by_slot, act_ptrs, sgn,
                     [&](const std::vector<std::pair<int, int>>& t2, const Rational& c) {
                       out.comp[d].add_to(tgt.position(d, t2), static_cast<int>(k), c);
                     });
    }
  }
  return out;
}

// Same, with the source being the binary tensor a.mod (x) b.mod; tags 0.. of
// g refer to a's slots followed by b's slots.
DgMap pair_transport(const TaggedCanon& g, const GradedTensor& a,
                            const GradedTensor& b, const GradedTensor& tgt,
                            const DgSymSeq& seq) {
  DgModule src = tensor(a.mod, b.mod);
  DgMap out{src, tgt.mod, {}};
  out.normalize_shapes();
  std::vector<DgMap> acts = vertex_actions(g, seq);
  std::vector<const DgMap*> act_ptrs;
  for (const auto& aa : acts) act_ptrs.push_back(&aa);
  int nv = g.tree.nvertices;
  int na = static_cast<int>(a.factors.size());
  for (int n = 0; n <= src.top_degree(); ++n)
    for (int p = 0; p <= n; ++p) {
      int q = n - p;
      if (n >= static_cast<int>(tgt.pos.size())) break;
      if (p > a.mod.top_degree() || q > b.mod.top_degree()) continue;
      for (size_t i = 0; i < a.tuples[p].size(); ++i)
        for (size_t j = 0; j < b.tuples[q].size(); ++j) {
          int col = tensor_index(a.mod, b.mod, p, static_cast<int>(i), q,
                                 static_cast<int>(j));
          std::vector<std::pair<int, int>> tup = a.tuples[p][i];
          tup.insert(tup.end(), b.tuples[q][j].begin(), b.tuples[q][j].end());
          std::vector<int> deg_by_tag(nv);
          for (int u = 0; u < nv; ++u) deg_by_tag[u] = tup[u].first;
          Rational sgn = reorder_sign(g, deg_by_tag);
          std::vector<std::pair<int, int>> by_slot(nv);
          for (int v = 0; v < nv; ++v) by_slot[v] = tup[g.origin[v]];
          expand_actions(
              by_slot, act_ptrs, sgn,
              [&](const std::vector<std::pair<int, int>>& t2, const Rational& c) {
                out.comp[n].add_to(tgt.position(n, t2), col, c);
              });
        }
    }
  return out;
}

int CofreeCooperad::summand_count(int r) const {
  auto it = trees.find(r);
  return it == trees.end() ? 0 : static_cast<int>(it->second.size());
}

int CofreeCooperad::flat_index(int r, int d, int t, int k) const {
  return offsets.at(r)[d][t] + k;
}

DgMap CofreeCooperad::summand_projection(int r, int t) const {
  const GradedTensor& gt = summand.at(r)[t];
  DgMap out{coop.at(r), gt.mod, {}};
  out.normalize_shapes();
  for (int d = 0; d <= gt.mod.top_degree(); ++d)
    for (int k = 0; k < gt.mod.dim(d); ++k) out.comp[d].set(k, flat_index(r, d, t, k), 1);
  return out;
}

DgMap CofreeCooperad::summand_inclusion(int r, int t) const {
  const GradedTensor& gt = summand.at(r)[t];
  DgMap out{gt.mod, coop.at(r), {}};
  out.normalize_shapes();
  for (int d = 0; d <= gt.mod.top_degree(); ++d)
    for (int k = 0; k < gt.mod.dim(d); ++k) out.comp[d].set(flat_index(r, d, t, k), k, 1);
  return out;
}

DgMap CofreeCooperad::cogenerator_projection(int r) const {
  const auto& tl = trees.count(r) ? trees.at(r) : std::vector<Tree>{};
  for (size_t t = 0; t < tl.size(); ++t)
    if (tl[t].nvertices == 1) {
      DgMap m = summand_projection(r, static_cast<int>(t));
      m.dst = gens_seq.at(r);  // single-factor tensor: same basis order
      return m;
    }
  return zero_map(coop.at(r), gens_seq.at(r));
}

namespace {

// Drops all degrees above top from a graded tensor (quotient complex).
void truncate_graded_tensor(GradedTensor& g, int top) {
  if (top < 0 || g.mod.top_degree() <= top) return;
  g.mod.basis.resize(top + 1);
  g.mod.d.resize(top);
  g.mod.normalize_shapes();
  g.tuples.resize(top + 1);
  g.pos.resize(top + 1);
}

}  // namespace

CofreeCooperad cofree(const DgSymSeq& n_in, int m, int max_arity, int degree_bound) {
  DgSymSeq n = n_in;
  n.default_trivial_actions();
  CofreeCooperad cf;
  cf.gens_seq = n;
  cf.weight = m;
  for (int r = 1; r <= max_arity; ++r) {
    cf.trees[r] = enumerate_trees(r, m);
    std::vector<GradedTensor> gts;
    for (const Tree& t : cf.trees[r]) {
      gts.push_back(treewise_tensor(t, n));
      truncate_graded_tensor(gts.back(), degree_bound);
    }
    int top = 0;
    for (const auto& gt : gts) top = std::max(top, gt.mod.top_degree());
    DgModule comp;
    comp.basis.resize(top + 1);
    std::vector<std::vector<int>> offs(top + 1, std::vector<int>(gts.size(), 0));
    for (int d = 0; d <= top; ++d)
      for (size_t t = 0; t < gts.size(); ++t) {
        offs[d][t] = static_cast<int>(comp.basis[d].size());
        for (int k = 0; k < gts[t].mod.dim(d); ++k)
          comp.basis[d].push_back("T" + cf.trees[r][t].enc + ":" +
                                  gts[t].mod.basis[d][k]);
      }
    comp.normalize_shapes();
    for (int d = 0; d < top; ++d)
      for (size_t t = 0; t < gts.size(); ++t)
        for (const QMat gd = gts[t].mod.diff(d); const auto& [rc, val] : gd.entries())
          comp.d[d].add_to(offs[d + 1][t] + rc.first, offs[d][t] + rc.second, val);
    cf.coop.underlying.components[r] = std::move(comp);
    cf.summand[r] = std::move(gts);
    cf.offsets[r] = std::move(offs);
  }
  // Symmetric-group generators via leaf relabeling.
  for (int r = 1; r <= max_arity; ++r) {
    const DgModule& comp = cf.coop.at(r);
    std::vector<DgMap> gens;
    for (int s = 1; s < r; ++s) {
      Perm tau = perm_transposition(r, s);
      DgMap a = zero_map(comp, comp);
      for (int t = 0; t < cf.summand_count(r); ++t) {
        const Tree& tr = cf.trees[r][t];
        if (tr.is_unit()) continue;  // r = 1 only; no transpositions there
        TaggedCanon pc = permute_leaves(tr, tau);
        int t2 = -1;
        for (int u = 0; u < cf.summand_count(r); ++u)
          if (cf.trees[r][u] == pc.tree) t2 = u;
        DgMap piece = treewise_transport(pc, cf.summand[r][t], cf.summand[r][t2], n);
        for (int d = 0; d <= comp.top_degree(); ++d) {
          const QMat pd = piece.at(d);
          for (const auto& [rc, val] : pd.entries())
            a.comp[d].add_to(cf.flat_index(r, d, t2, rc.first),
                             cf.flat_index(r, d, t, rc.second), val);
        }
      }
      gens.push_back(std::move(a));
    }
    cf.coop.underlying.gens[r] = std::move(gens);
  }
  // Counit / coaugmentation on the unit-tree line.
  {
    const DgModule& c1 = cf.coop.at(1);
    cf.coop.counit = zero_map(c1, dg_unit());
    cf.coop.coaug = zero_map(dg_unit(), c1);
    if (cf.summand_count(1) > 0 && cf.trees[1][0].is_unit()) {
      int pos = cf.flat_index(1, 0, 0, 0);
      cf.coop.counit.comp[0].set(0, pos, 1);
      cf.coop.coaug.comp[0].set(pos, 0, 1);
    }
  }
  // Composition coproducts, summandwise over tree decompositions.
  for (int k = 1; k <= max_arity; ++k)
    for (int l = 1; k + l - 1 <= max_arity; ++l) {
      int r = k + l - 1;
      const DgModule& ck = cf.coop.at(k);
      const DgModule& cl = cf.coop.at(l);
      DgModule tkl = tensor(ck, cl);
      for (int i = 1; i <= k; ++i) {
        DgMap cop = zero_map(cf.coop.at(r), tkl);
        for (int t = 0; t < cf.summand_count(r); ++t) {
          const Tree& theta = cf.trees[r][t];
          for (const TreeDecomposition& dc : decompositions(theta, k, l, i)) {
            int ts = -1, tt = -1;
            for (int u = 0; u < cf.summand_count(k); ++u)
              if (cf.trees[k][u] == dc.outer) ts = u;
            for (int u = 0; u < cf.summand_count(l); ++u)
              if (cf.trees[l][u] == dc.inner) tt = u;
            const GradedTensor& gs = cf.summand[k][ts];
            const GradedTensor& gt = cf.summand[l][tt];
            const GradedTensor& gtheta = cf.summand[r][t];
            // Transport goes source tuple -> (s, t)-pair; build it per tuple.
            std::vector<DgMap> acts = vertex_actions(dc.grafted, n);
            std::vector<const DgMap*> act_ptrs;
            for (const auto& a : acts) act_ptrs.push_back(&a);
            int nv = theta.nvertices;
            int nvs = dc.outer.nvertices;
            for (int d = 0; d <= gtheta.mod.top_degree(); ++d)
              for (size_t kk = 0; kk < gtheta.tuples[d].size(); ++kk) {
                const auto& tup = gtheta.tuples[d][kk];
                // Sign of reordering theta order -> (s then t) order.
                int count = 0;
                for (int v = 0; v < nv; ++v)
                  for (int w = v + 1; w < nv; ++w)
                    if (dc.grafted.origin[v] > dc.grafted.origin[w])
                      count += tup[v].first * tup[w].first;
                Rational sgn = count % 2 == 0 ? 1 : -1;
                // Actions are indexed by theta's canonical slots; transported
                // labels land at tag slots, so expand in theta order and then
                // scatter into the (s, t) tuple.
                std::vector<std::pair<int, int>> by_slot(nv);
                std::vector<const DgMap*> acts_slot(nv);
                for (int v = 0; v < nv; ++v) {
                  by_slot[v] = tup[v];
                  acts_slot[v] = act_ptrs[v];
                }
                int col = cf.flat_index(r, d, t, static_cast<int>(kk));
                expand_actions(
                    by_slot, acts_slot, sgn,
                    [&](const std::vector<std::pair<int, int>>& t2, const Rational& c) {
                      std::vector<std::pair<int, int>> stup(nvs), ttup(nv - nvs);
                      int p = 0, q = 0;
                      for (int v = 0; v < nv; ++v) {
                        int tag = dc.grafted.origin[v];
                        if (tag < nvs) {
                          stup[tag] = t2[v];
                          p += t2[v].first;
                        } else {
                          ttup[tag - nvs] = t2[v];
                          q += t2[v].first;
                        }
                      }
                      int fi = cf.flat_index(k, p, ts, gs.position(p, stup));
                      int fj = cf.flat_index(l, q, tt, gt.position(q, ttup));
                      cop.comp[d].add_to(tensor_index(ck, cl, p, fi, q, fj), col, c);
                    });
              }
          }
        }
        cf.coop.cop[{k, l, i}] = std::move(cop);
      }
    }
  cf.coop.conilpotence_bound = m;
  return cf;
}

ConilCooperad trivial_cooperad(int max_arity) {
  DgSymSeq zero;
  zero.components[1] = dg_zero();
  CofreeCooperad cf = cofree(zero, 1, max_arity);
  return cf.coop;
}

CoidealData coaugmentation_coideal(const ConilCooperad& c) {
  const DgModule& c1 = c.at(1);
  // Split counit required.
  {
    QMat t = c.counit.at(0) * c.coaug.at(0);
    if (!(t == QMat::identity(1)))
      throw std::invalid_argument("counit not split by the coaugmentation");
  }
  CoidealData cb;
  DgModule bar;
  cb.incl1 = DgMap{dg_zero(), c1, {}};
  cb.proj1 = DgMap{c1, dg_zero(), {}};
  std::vector<QMat> incl, proj;
  bar.basis.resize(std::max(c1.top_degree() + 1, 0));
  for (int d = 0; d <= c1.top_degree(); ++d) {
    auto ker = kernel_basis(c.counit.at(d));
    QMat in = columns_to_mat(ker, c1.dim(d));
    // pi = id - coaug o counit has image inside the kernel; express it there.
    QMat pi = QMat::identity(c1.dim(d)) - c.coaug.at(d) * c.counit.at(d);
    QMat pr(static_cast<int>(ker.size()), c1.dim(d));
    for (int j = 0; j < c1.dim(d); ++j) {
      std::vector<Rational> col(c1.dim(d));
      for (int i = 0; i < c1.dim(d); ++i) col[i] = pi.at(i, j);
      auto sol = solve(in, col);
      if (!sol) throw std::logic_error("idempotent image escaped the kernel");
      for (size_t i = 0; i < sol->size(); ++i) pr.set(static_cast<int>(i), j, (*sol)[i]);
    }
    for (size_t kv = 0; kv < ker.size(); ++kv) {
      // Prefer the original label when the kernel vector is a basis vector.
      int nz = -1, cnt = 0;
      for (int i = 0; i < c1.dim(d); ++i)
        if (!(ker[kv][i] == 0)) {
          ++cnt;
          nz = i;
        }
      if (cnt == 1 && ker[kv][nz] == 1)
        bar.basis[d].push_back(c1.basis[d][nz]);
      else
        bar.basis[d].push_back("k" + std::to_string(d) + "_" + std::to_string(kv));
    }
    incl.push_back(in);
    proj.push_back(pr);
  }
  while (!bar.basis.empty() && bar.basis.back().empty()) bar.basis.pop_back();
  bar.normalize_shapes();
  cb.incl1 = DgMap{bar, c1, incl};
  cb.proj1 = DgMap{c1, bar, proj};
  cb.incl1.normalize_shapes();
  cb.proj1.normalize_shapes();
  // Restricted differential.
  for (int d = 0; d < bar.top_degree(); ++d)
    bar.d[d] = cb.proj1.at(d + 1) * (c1.diff(d) * cb.incl1.at(d));
  cb.incl1.src = bar;
  cb.proj1.dst = bar;
  cb.seq.components[1] = bar;
  cb.seq.gens[1] = {};
  for (const auto& [r, comp] : c.underlying.components)
    if (r != 1) {
      cb.seq.components[r] = comp;
      auto git = c.underlying.gens.find(r);
      if (git != c.underlying.gens.end()) cb.seq.gens[r] = git->second;
    }
  cb.seq.default_trivial_actions();
  return cb;
}

DgMap CoidealData::proj(const ConilCooperad& c, int r) const {
  return r == 1 ? proj1 : identity_map(c.at(r));
}

DgMap CoidealData::incl(const ConilCooperad& c, int r) const {
  return r == 1 ? incl1 : identity_map(c.at(r));
}

DgMap reduced_treewise_coproduct(const ConilCooperad& c, const CoidealData& cb,
                                 const Tree& t) {
  if (t.is_unit()) throw std::invalid_argument("rho-bar needs a tree with vertices");
  int r = t.nleaves;
  GradedTensor target = treewise_tensor(t, cb.seq);
  if (t.nvertices == 1) {
    DgMap p = cb.proj(c, r);
    DgMap out{c.at(r), target.mod, p.comp};
    out.normalize_shapes();
    return out;
  }
  // Look for a composition split with both halves carrying vertices.
  for (int l = 1; l <= r; ++l) {
    int k = r - l + 1;
    for (int i = 1; i <= k; ++i)
      for (const TreeDecomposition& dc : decompositions(t, k, l, i)) {
        if (dc.outer.nvertices < 1 || dc.inner.nvertices < 1) continue;
        DgMap a = reduced_treewise_coproduct(c, cb, dc.outer);
        DgMap b = reduced_treewise_coproduct(c, cb, dc.inner);
        GradedTensor gs = treewise_tensor(dc.outer, cb.seq);
        GradedTensor gt = treewise_tensor(dc.inner, cb.seq);
        DgMap pt = pair_transport(dc.grafted, gs, gt, target, cb.seq);
        return compose(pt, compose(tensor_map(a, b), c.coproduct(k, l, i)));
      }
  }
  // No contiguous split: relabel leaves so that some vertex subtree becomes
  // the segment 1..l, use equivariance, and transport back.
  // Find a non-root vertex subtree's leaf set.
  std::vector<int> seg;
  {
    std::function<const TreeNode*(const TreeNode&)> find_branch =
        [&](const TreeNode& node) -> const TreeNode* {
      for (const auto& kid : node.kids)
        if (!kid.is_leaf()) return &kid;
      return nullptr;
    };
    const TreeNode* branch = find_branch(t.root);
    // Descend once more if possible to keep the complement non-empty.
    std::function<void(const TreeNode&, std::vector<int>&)> leaves_of =
        [&](const TreeNode& node, std::vector<int>& out) {
          if (node.is_leaf()) {
            out.push_back(node.leaf);
            return;
          }
          for (const auto& kid : node.kids) leaves_of(kid, out);
        };
    if (!branch) throw std::logic_error("no branch in a multi-vertex tree");
    leaves_of(*branch, seg);
    std::sort(seg.begin(), seg.end());
  }
  Perm sigma(r);
  {
    int next_in = 1, next_out = static_cast<int>(seg.size()) + 1;
    for (int lbl = 1; lbl <= r; ++lbl) {
      bool in = std::binary_search(seg.begin(), seg.end(), lbl);
      sigma[lbl - 1] = in ? next_in++ : next_out++;
    }
  }
  TaggedCanon fwd = permute_leaves(t, sigma);
  DgMap m = reduced_treewise_coproduct(c, cb, fwd.tree);
  TaggedCanon back = permute_leaves(fwd.tree, perm_inverse(sigma));
  GradedTensor src = treewise_tensor(fwd.tree, cb.seq);
  DgMap tr = treewise_transport(back, src, target, cb.seq);
  return compose(tr, compose(m, c.underlying.action(r, sigma)));
}

namespace {

bool map_equal(const DgMap& a, const DgMap& b, int top) {
  for (int d = 0; d <= top; ++d)
    if (!(a.at(d) == b.at(d))) return false;
  return true;
}

}  // namespace

DgMap map_inverse_perm(const DgMap& f) {
  // Inverse of a (signed) permutation-matrix map: the transpose works for
  // orthogonal matrices, which covers associators and braidings.
  DgMap out{f.dst, f.src, {}};
  out.normalize_shapes();
  for (size_t d = 0; d < f.comp.size(); ++d) out.comp[d] = f.comp[d].transpose();
  return out;
}

// Block permutation gamma with (sigma, tau) acting outside/inside slot i.
Perm block_perm(const Perm& sigma, const Perm& tau, int i) {
  int k = static_cast<int>(sigma.size());
  int l = static_cast<int>(tau.size());
  Perm g(k + l - 1);
  auto adj = [&](int s) { return s < sigma[i - 1] ? s : s + l - 1; };
  for (int a = 1; a <= k; ++a) {
    if (a == i) continue;
    int src = a < i ? a : a + l - 1;
    g[src - 1] = adj(sigma[a - 1]);
  }
  for (int cpos = 1; cpos <= l; ++cpos) g[i + cpos - 2] = sigma[i - 1] + tau[cpos - 1] - 1;
  return g;
}

AxiomCheck check_cooperad_axioms(const ConilCooperad& c) {
  int ma = c.max_arity();
  // Differentials and actions.
  for (const auto& [r, comp] : c.underlying.components)
    if (!comp.check_d_squared())
      return {false, "d^2 != 0 in arity " + std::to_string(r)};
  {
    auto ac = check_action(c.underlying);
    if (!ac.ok) return {false, "action: " + ac.reason};
  }
  // Counit splitting and cochain-map structure maps.
  if (!(c.counit.at(0) * c.coaug.at(0) == QMat::identity(1)))
    return {false, "counit o coaugmentation != id"};
  if (!check_cochain_map(c.counit)) return {false, "counit is not a cochain map"};
  if (!check_cochain_map(c.coaug)) return {false, "coaugmentation is not a cochain map"};
  for (const auto& [key, f] : c.cop) {
    auto [k, l, i] = key;
    if (!check_cochain_map(f))
      return {false, "coproduct (" + std::to_string(k) + "," + std::to_string(l) + "," +
                         std::to_string(i) + ") is not a cochain map"};
  }
  // Counit relations.
  for (int r = 1; r <= ma; ++r) {
    const DgModule& cr = c.at(r);
    int top = cr.top_degree();
    DgMap left = compose(tensor_map(c.counit, identity_map(cr)), c.coproduct(1, r, 1));
    if (!map_equal(left, identity_map(cr), top))
      return {false, "left counit relation fails in arity " + std::to_string(r)};
    for (int i = 1; i <= r; ++i) {
      DgMap right = compose(tensor_map(identity_map(cr), c.counit), c.coproduct(r, 1, i));
      if (!map_equal(right, identity_map(cr), top))
        return {false, "right counit relation fails in arity " + std::to_string(r) +
                           " slot " + std::to_string(i)};
    }
  }
  // Coassociativity.
  for (int k = 1; k <= ma; ++k)
    for (int l = 1; l <= ma; ++l)
      for (int m = 1; k + l + m - 2 <= ma; ++m) {
        int n = k + l + m - 2;
        if (c.at(n).total_dim() == 0) continue;
        DgMap assoc = tensor_associator(c.at(k), c.at(l), c.at(m));
        for (int i = 1; i <= k; ++i) {
          // Nested: the m-ary factor composes into the l-ary one.
          for (int j = 1; j <= l; ++j) {
            DgMap lhs = compose(tensor_map(c.coproduct(k, l, i), identity_map(c.at(m))),
                                c.coproduct(k + l - 1, m, i + j - 1));
            DgMap rhs = compose(tensor_map(identity_map(c.at(k)), c.coproduct(l, m, j)),
                                c.coproduct(k, l + m - 1, i));
            if (!map_equal(compose(assoc, lhs), rhs, c.at(n).top_degree()))
              return {false, "nested coassociativity fails at k=" + std::to_string(k) +
                                 " l=" + std::to_string(l) + " m=" + std::to_string(m) +
                                 " i=" + std::to_string(i) + " j=" + std::to_string(j)};
          }
          // Disjoint: both factors compose into the k-ary one, i < j.
          for (int j = i + 1; j <= k; ++j) {
            DgMap lhs = compose(tensor_map(c.coproduct(k, l, i), identity_map(c.at(m))),
                                c.coproduct(k + l - 1, m, j + l - 1));
            DgMap rhs = compose(tensor_map(c.coproduct(k, m, j), identity_map(c.at(l))),
                                c.coproduct(k + m - 1, l, i));
            // swap the last two factors: (K(x)M)(x)L -> (K(x)L)(x)M
            DgMap s1 = tensor_associator(c.at(k), c.at(m), c.at(l));
            DgMap s2 = tensor_map(identity_map(c.at(k)), tensor_swap(c.at(m), c.at(l)));
            DgMap s3 = map_inverse_perm(tensor_associator(c.at(k), c.at(l), c.at(m)));
            DgMap swapped = compose(s3, compose(s2, compose(s1, rhs)));
            if (!map_equal(lhs, swapped, c.at(n).top_degree()))
              return {false, "disjoint coassociativity fails at k=" + std::to_string(k) +
                                 " l=" + std::to_string(l) + " m=" + std::to_string(m) +
                                 " i=" + std::to_string(i) + " j=" + std::to_string(j)};
          }
        }
      }
  // Equivariance: cop(k,l,sigma(i)) o A(gamma) = (A(sigma) (x) A(tau)) o cop(k,l,i).
  for (int k = 1; k <= ma; ++k)
    for (int l = 1; k + l - 1 <= ma; ++l) {
      int r = k + l - 1;
      if (c.at(r).total_dim() == 0) continue;
      for (const Perm& sigma : all_perms(k))
        for (const Perm& tau : all_perms(l))
          for (int i = 1; i <= k; ++i) {
            Perm gamma = block_perm(sigma, tau, i);
            DgMap lhs = compose(c.coproduct(k, l, sigma[i - 1]),
                                c.underlying.action(r, gamma));
            DgMap rhs = compose(tensor_map(c.underlying.action(k, sigma),
                                           c.underlying.action(l, tau)),
                                c.coproduct(k, l, i));
            if (!map_equal(lhs, rhs, c.at(r).top_degree()))
              return {false, "equivariance fails at k=" + std::to_string(k) +
                                 " l=" + std::to_string(l) + " i=" + std::to_string(i)};
          }
    }
  return {};
}

AxiomCheck check_conilpotence(const ConilCooperad& c, int probe_bound) {
  CoidealData cb = coaugmentation_coideal(c);
  for (int r = 1; r <= c.max_arity(); ++r)
    for (const Tree& t : enumerate_trees(r, probe_bound)) {
      if (t.nvertices <= c.conilpotence_bound) continue;
      if (t.is_unit()) continue;
      DgMap rho = reduced_treewise_coproduct(c, cb, t);
      for (const QMat& q : rho.comp)
        if (!q.is_zero())
          return {false, "rho-bar does not vanish on tree " + t.enc + " (" +
                             std::to_string(t.nvertices) + " vertices)"};
    }
  return {};
}

AxiomCheck check_cooperad_morphism(const ConilCooperad& c, const ConilCooperad& d,
                                   const CooperadMorphism& f) {
  int ma = std::min(c.max_arity(), d.max_arity());
  for (int r = 1; r <= ma; ++r) {
    auto it = f.maps.find(r);
    if (it == f.maps.end()) return {false, "missing component in arity " + std::to_string(r)};
    if (!check_cochain_map(it->second))
      return {false, "component " + std::to_string(r) + " is not a cochain map"};
  }
  // Counit compatibility.
  if (!map_equal(compose(d.counit, f.maps.at(1)), c.counit, c.at(1).top_degree()))
    return {false, "counit square fails"};
  // Coproduct squares.
  for (int k = 1; k <= ma; ++k)
    for (int l = 1; k + l - 1 <= ma; ++l)
      for (int i = 1; i <= k; ++i) {
        int r = k + l - 1;
        DgMap lhs = compose(d.coproduct(k, l, i), f.maps.at(r));
        DgMap rhs = compose(tensor_map(f.maps.at(k), f.maps.at(l)), c.coproduct(k, l, i));
        if (!map_equal(lhs, rhs, c.at(r).top_degree()))
          return {false, "coproduct square fails at (" + std::to_string(k) + "," +
                             std::to_string(l) + "," + std::to_string(i) + ")"};
      }
  // Equivariance of the morphism.
  for (int r = 2; r <= ma; ++r)
    for (int s = 1; s < r; ++s) {
      Perm tau = perm_transposition(r, s);
      DgMap lhs = compose(d.underlying.action(r, tau), f.maps.at(r));
      DgMap rhs = compose(f.maps.at(r), c.underlying.action(r, tau));
      if (!map_equal(lhs, rhs, c.at(r).top_degree()))
        return {false, "morphism equivariance fails in arity " + std::to_string(r)};
    }
  return {};
}

AdjunctionUnit adjunction_unit(const ConilCooperad& c, int m) {
  if (m < c.conilpotence_bound)
    throw std::invalid_argument("weight bound below the conilpotence bound");
  CoidealData cb = coaugmentation_coideal(c);
  AdjunctionUnit au{cofree(cb.seq, m, c.max_arity()), {}};
  CofreeCooperad& cf = au.target;
  for (int r = 1; r <= c.max_arity(); ++r) {
    DgMap comp = zero_map(c.at(r), cf.coop.at(r));
    for (int t = 0; t < cf.summand_count(r); ++t) {
      const Tree& tr = cf.trees[r][t];
      if (tr.is_unit()) {
        // Unit-tree component is the counit.
        for (size_t d = 0; d < c.counit.comp.size() && d < comp.comp.size(); ++d)
          for (const QMat cu = c.counit.at(static_cast<int>(d));
               const auto& [rc, val] : cu.entries())
            comp.comp[d].add_to(cf.flat_index(r, static_cast<int>(d), t, rc.first),
                                rc.second, val);
        continue;
      }
      DgMap rho = reduced_treewise_coproduct(c, cb, tr);
      for (int d = 0; d <= c.at(r).top_degree(); ++d) {
        const QMat rd = rho.at(d);
        for (const auto& [rc, val] : rd.entries())
          comp.comp[d].add_to(cf.flat_index(r, d, t, rc.first), rc.second, val);
      }
    }
    au.rho.maps[r] = std::move(comp);
  }
  return au;
}

CooperadMorphism cofree_functor_map(const CofreeCooperad& src, const CofreeCooperad& dst,
                                    const std::map<int, DgMap>& phi) {
  CooperadMorphism out;
  for (const auto& [r, comp] : src.coop.underlying.components) {
    DgMap f = zero_map(comp, dst.coop.at(r));
    for (int t = 0; t < src.summand_count(r); ++t) {
      const GradedTensor& gs = src.summand.at(r)[t];
      const GradedTensor& gd = dst.summand.at(r)[t];
      const Tree& tr = src.trees.at(r)[t];
      std::vector<const DgMap*> acts;
      std::vector<DgMap> own;
      own.reserve(tr.nvertices);
      for (int a : tr.vertex_arities()) own.push_back(phi.at(a));
      for (const auto& a : own) acts.push_back(&a);
      for (int d = 0; d <= gs.mod.top_degree(); ++d)
        for (size_t k = 0; k < gs.tuples[d].size(); ++k) {
          if (tr.is_unit()) {  // empty tensor maps identically
            f.comp[d].add_to(dst.flat_index(r, d, t, 0),
                             src.flat_index(r, d, t, static_cast<int>(k)), 1);
            continue;
          }
          expand_actions(gs.tuples[d][k], acts, 1,
                         [&](const std::vector<std::pair<int, int>>& t2, const Rational& cc) {
                           f.comp[d].add_to(dst.flat_index(r, d, t, gd.position(d, t2)),
                                            src.flat_index(r, d, t, static_cast<int>(k)),
                                            cc);
                         });
        }
    }
    out.maps[r] = std::move(f);
  }
  return out;
}

AxiomCheck hom_bijection_check(const ConilCooperad& c, const DgSymSeq& n, int m) {
  int ma = c.max_arity();
  CoidealData cb = coaugmentation_coideal(c);
  AdjunctionUnit au = adjunction_unit(c, std::max(m, c.conilpotence_bound));
  CofreeCooperad cf_n = cofree(n, m, ma);
  // Candidate test maps phi : Cbar -> N.
  std::vector<std::map<int, DgMap>> phis;
  {
    std::map<int, DgMap> zero;
    for (int r = 1; r <= ma; ++r) zero[r] = zero_map(cb.seq.at(r), cf_n.gens_seq.at(r));
    phis.push_back(zero);
    bool same_shape = true;
    for (int r = 1; r <= ma && same_shape; ++r)
      same_shape = cb.seq.at(r).basis == cf_n.gens_seq.at(r).basis;
    if (same_shape) {
      std::map<int, DgMap> ident, twice;
      for (int r = 1; r <= ma; ++r) {
        ident[r] = identity_map(cb.seq.at(r));
        twice[r] = identity_map(cb.seq.at(r));
        for (auto& q : twice[r].comp) q = q * Rational(2);
      }
      phis.push_back(ident);
      phis.push_back(twice);
    }
  }
  for (const auto& phi : phis) {
    // f = cofree(phi) o rho, then extract and compare with phi.
    CooperadMorphism ff = cofree_functor_map(au.target, cf_n, phi);
    for (int r = 1; r <= ma; ++r) {
      DgMap f = compose(ff.maps.at(r), au.rho.maps.at(r));
      DgMap extracted =
          compose(cf_n.cogenerator_projection(r), compose(f, cb.incl(c, r)));
      if (!map_equal(extracted, phi.at(r), cb.seq.at(r).top_degree()))
        return {false, "extraction does not invert reconstruction in arity " +
                           std::to_string(r)};
    }
  }
  return {};
}

}  // namespace opw
