#include "opw/hopf.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace opw {

namespace {

using Cols = std::map<int, std::vector<std::pair<int, Rational>>>;

Cols by_col(const QMat& m) {
  Cols c;
  for (const auto& [rc, v] : m.entries()) c[rc.second].push_back({rc.first, v});
  return c;
}

void axpy(std::vector<Rational>& out, const Cols& m, int col, const Rational& s) {
  auto it = m.find(col);
  if (it == m.end()) return;
  for (const auto& [r, v] : it->second) out[r] += s * v;
}

std::vector<Rational> mat_col(const QMat& m, int c) {
  std::vector<Rational> out(m.rows(), Rational(0));
  for (const auto& [rc, v] : m.entries())
    if (rc.second == c) out[rc.first] = v;
  return out;
}

bool is_zero_vec(const std::vector<Rational>& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

// Inverse of the tensor_index layout: degree-n basis element idx of
// tensor(a, b) decodes to (p, i, q, j) with p ascending, then row-major.
std::tuple<int, int, int, int> tensor_decode(const DgModule& a, const DgModule& b,
                                             int n, int idx) {
  for (int p = 0; p <= n; ++p) {
    int q = n - p;
    int block = a.dim(p) * b.dim(q);
    if (idx < block) return {p, idx / b.dim(q), q, idx % b.dim(q)};
    idx -= block;
  }
  throw std::logic_error("tensor_decode: index out of range");
}

DgMap map_add(const DgMap& f, const DgMap& g) {
  DgMap out = f;
  int top = std::max(f.src.top_degree(), f.dst.top_degree());
  out.normalize_shapes();
  for (int d = 0; d <= top; ++d) out.comp[d] = out.comp[d] + g.at(d);
  return out;
}

bool maps_agree(const DgMap& f, const DgMap& g) {
  int top = std::max({f.src.top_degree(), f.dst.top_degree(),
                      g.src.top_degree(), g.dst.top_degree()});
  for (int d = 0; d <= top; ++d)
    if (!(f.at(d) == g.at(d))) return false;
  return true;
}

// Per-algebra, per-degree column cache of the product matrices.
struct MultCache {
  const CdgAlgebra* a;
  std::map<int, Cols> cols;
  std::map<int, QMat> mats;

  explicit MultCache(const CdgAlgebra& alg) : a(&alg) {}
  const Cols& at(int n) {
    auto it = cols.find(n);
    if (it != cols.end()) return it->second;
    mats[n] = a->mult.at(n);
    return cols.emplace(n, by_col(mats[n])).first->second;
  }
};

// Product of two basis elements, as a sparse list of (index, coefficient).
std::vector<std::pair<int, Rational>> basis_product(MultCache& mc, int p, int i,
                                                    int q, int j) {
  const CdgAlgebra& a = *mc.a;
  const Cols& m = mc.at(p + q);
  auto it = m.find(tensor_index(a.mod, a.mod, p, i, q, j));
  if (it == m.end()) return {};
  return it->second;
}

std::string pair_label(const DgModule& m, int p, int i, int q, int j) {
  std::ostringstream os;
  os << "(" << m.basis[p][i] << ", " << m.basis[q][j] << ")";
  return os.str();
}

}  // namespace

bool CheckWindow::pair_ok(int p, int i, int q, int j) const {
  if (degree_bound >= 0 && p + q > degree_bound) return false;
  if (length_bound >= 0 && src_length != nullptr) {
    int lx = (p < (int)src_length->size() && i < (int)(*src_length)[p].size())
                 ? (*src_length)[p][i]
                 : 0;
    int ly = (q < (int)src_length->size() && j < (int)(*src_length)[q].size())
                 ? (*src_length)[q][j]
                 : 0;
    if (lx + ly > length_bound) return false;
  }
  return true;
}

bool CheckWindow::row_ok(int d, int row) const {
  if (weight_bound < 0 || tgt_weight_left == nullptr) return true;
  if (tgt_right == nullptr) {
    int w = (d < (int)tgt_weight_left->size() &&
             row < (int)(*tgt_weight_left)[d].size())
                ? (*tgt_weight_left)[d][row]
                : 0;
    return w <= weight_bound;
  }
  auto [p, i, q, j] = tensor_decode(*tgt_left, *tgt_right, d, row);
  int wa = (p < (int)tgt_weight_left->size() &&
            i < (int)(*tgt_weight_left)[p].size())
               ? (*tgt_weight_left)[p][i]
               : 0;
  int wb = (q < (int)tgt_weight_right->size() &&
            j < (int)(*tgt_weight_right)[q].size())
               ? (*tgt_weight_right)[q][j]
               : 0;
  return wa + wb <= weight_bound;
}

CdgAlgebra unit_algebra() {
  CdgAlgebra a;
  a.mod = dg_unit();
  DgModule sq = tensor(a.mod, a.mod);
  a.mult = zero_map(sq, a.mod);
  a.mult.comp[0].set(0, 0, 1);
  a.unit = identity_map(dg_unit());
  a.unit.dst = a.mod;
  return a;
}

CdgAlgebra zero_algebra() {
  CdgAlgebra a;
  a.mod = dg_zero();
  a.mult = zero_map(tensor(a.mod, a.mod), a.mod);
  a.unit = zero_map(dg_unit(), a.mod);
  return a;
}

std::vector<Rational> algebra_product(const CdgAlgebra& a, int p,
                                      const std::vector<Rational>& x, int q,
                                      const std::vector<Rational>& y) {
  std::vector<Rational> out(a.mod.dim(p + q), Rational(0));
  if (out.empty()) return out;
  const QMat m = a.mult.at(p + q);
  const Cols cols = by_col(m);
  for (int i = 0; i < (int)x.size(); ++i) {
    if (x[i] == 0) continue;
    for (int j = 0; j < (int)y.size(); ++j) {
      if (y[j] == 0) continue;
      axpy(out, cols, tensor_index(a.mod, a.mod, p, i, q, j), x[i] * y[j]);
    }
  }
  return out;
}

CdgAlgebra tensor_algebra(const CdgAlgebra& a, const CdgAlgebra& b) {
  CdgAlgebra t;
  t.mod = tensor(a.mod, b.mod);
  t.unit = zero_map(dg_unit(), t.mod);
  {
    const QMat ua = a.unit.at(0);
    const QMat ub = b.unit.at(0);
    for (const auto& [rca, va] : ua.entries())
      for (const auto& [rcb, vb] : ub.entries())
        t.unit.comp[0].add_to(
            tensor_index(a.mod, b.mod, 0, rca.first, 0, rcb.first), 0, va * vb);
  }
  t.mult = zero_map(tensor(t.mod, t.mod), t.mod);
  MultCache ma(a), mb(b);
  int top = t.mod.top_degree();
  for (int p = 0; p <= top; ++p)
    for (int i = 0; i < t.mod.dim(p); ++i) {
      auto [pa, ia, pb, ib] = tensor_decode(a.mod, b.mod, p, i);
      for (int q = 0; q + p <= top; ++q)
        for (int j = 0; j < t.mod.dim(q); ++j) {
          auto [qa, ja, qb, jb] = tensor_decode(a.mod, b.mod, q, j);
          Rational sgn = ((pb * qa) % 2 == 0) ? 1 : -1;
          auto va = basis_product(ma, pa, ia, qa, ja);
          if (va.empty()) continue;
          auto vb = basis_product(mb, pb, ib, qb, jb);
          if (vb.empty()) continue;
          int col = tensor_index(t.mod, t.mod, p, i, q, j);
          for (const auto& [ka, ca] : va)
            for (const auto& [kb, cb] : vb)
              t.mult.comp[p + q].add_to(
                  tensor_index(a.mod, b.mod, pa + qa, ka, pb + qb, kb), col,
                  sgn * ca * cb);
        }
    }
  t.mult.normalize_shapes();
  return t;
}

AxiomCheck check_cdga_axioms(const CdgAlgebra& a) {
  if (!a.mod.check_d_squared()) return {false, "differential does not square to zero"};
  if (!check_cochain_map(a.mult)) return {false, "product violates the Leibniz rule"};
  if (!check_cochain_map(a.unit)) return {false, "unit is not a cochain map"};
  if (!maps_agree(compose(a.mult, tensor_swap(a.mod, a.mod)), a.mult))
    return {false, "product is not graded-commutative"};
  DgMap id = identity_map(a.mod);
  DgMap lhs = compose(compose(a.mult, tensor_map(id, a.mult)),
                      tensor_associator(a.mod, a.mod, a.mod));
  DgMap rhs = compose(a.mult, tensor_map(a.mult, id));
  if (!maps_agree(lhs, rhs)) return {false, "product is not associative"};
  // Left unit law x -> 1 * x (no Koszul sign: the unit sits in degree 0).
  const QMat u = a.unit.at(0);
  MultCache mc(a);
  for (int p = 0; p <= a.mod.top_degree(); ++p)
    for (int j = 0; j < a.mod.dim(p); ++j) {
      std::vector<Rational> out(a.mod.dim(p), Rational(0));
      for (const auto& [rc, v] : u.entries())
        for (const auto& [k, c] : basis_product(mc, 0, rc.first, p, j))
          out[k] += v * c;
      out[j] -= 1;
      if (!is_zero_vec(out))
        return {false, "unit law fails on " + a.mod.basis[p][j]};
    }
  return {};
}

AxiomCheck check_algebra_morphism(const CdgAlgebra& a, const CdgAlgebra& b,
                                  const DgMap& f, const CheckWindow& w) {
  if (!check_cochain_map(f)) return {false, "not a cochain map"};
  {
    const QMat diff = compose(f, a.unit).at(0) - b.unit.at(0);
    for (const auto& [rc, v] : diff.entries())
      if (v != 0 && w.row_ok(0, rc.first)) return {false, "unit is not preserved"};
  }
  MultCache mb(b);
  int top = a.mod.top_degree();
  for (int p = 0; p <= top; ++p) {
    const QMat fp = f.at(p);
    for (int q = p; q <= top; ++q) {
      const QMat fq = f.at(q);
      const QMat fpq = f.at(p + q);
      const Cols fpq_cols = by_col(fpq);
      const QMat am = a.mult.at(p + q);
      const Cols am_cols = by_col(am);
      for (int i = 0; i < a.mod.dim(p); ++i)
        for (int j = 0; j < a.mod.dim(q); ++j) {
          if (!w.pair_ok(p, i, q, j)) continue;
          std::vector<Rational> lhs(b.mod.dim(p + q), Rational(0));
          auto it = am_cols.find(tensor_index(a.mod, a.mod, p, i, q, j));
          if (it != am_cols.end())
            for (const auto& [k, c] : it->second) axpy(lhs, fpq_cols, k, c);
          std::vector<Rational> rhs(b.mod.dim(p + q), Rational(0));
          std::vector<Rational> fx = mat_col(fp, i), fy = mat_col(fq, j);
          for (int i2 = 0; i2 < (int)fx.size(); ++i2) {
            if (fx[i2] == 0) continue;
            for (int j2 = 0; j2 < (int)fy.size(); ++j2) {
              if (fy[j2] == 0) continue;
              for (const auto& [k, c] : basis_product(mb, p, i2, q, j2))
                rhs[k] += fx[i2] * fy[j2] * c;
            }
          }
          for (int k = 0; k < (int)lhs.size(); ++k)
            if (lhs[k] != rhs[k])
              return {false, "multiplicativity fails on " +
                                 pair_label(a.mod, p, i, q, j)};
        }
    }
  }
  return {};
}

namespace {

// One (degree, index) generator per occurrence, in the monomial's order.
std::vector<std::pair<int, int>> monomial_word(const GcaMonomial& m) {
  std::vector<std::pair<int, int>> w;
  for (const auto& [g, e] : m)
    for (int k = 0; k < e; ++k) w.push_back(g);
  return w;
}

// Koszul sign of sorting a word of generators: one minus sign per inversion
// between two odd-degree entries (even entries commute with everything).
int sort_sign(const std::vector<std::pair<int, int>>& w) {
  int inv = 0;
  for (size_t u = 0; u < w.size(); ++u)
    for (size_t v = u + 1; v < w.size(); ++v)
      if (w[u] > w[v] && w[u].first % 2 != 0 && w[v].first % 2 != 0) ++inv;
  return inv % 2 == 0 ? 1 : -1;
}

// Sorted monomial from a word; zero (nullopt) when an odd generator repeats.
std::optional<GcaMonomial> normalize_word(std::vector<std::pair<int, int>> w) {
  std::sort(w.begin(), w.end());
  GcaMonomial m;
  for (const auto& g : w) {
    if (!m.empty() && m.back().first == g) {
      if (g.first % 2 != 0) return std::nullopt;
      ++m.back().second;
    } else {
      m.push_back({g, 1});
    }
  }
  return m;
}

std::string monomial_label(const DgModule& v, const GcaMonomial& m) {
  if (m.empty()) return "1";
  std::string s;
  for (size_t k = 0; k < m.size(); ++k) {
    if (k) s += "*";
    s += v.basis[m[k].first.first][m[k].first.second];
    if (m[k].second > 1) s += "^" + std::to_string(m[k].second);
  }
  return s;
}

}  // namespace

FreeGca free_gca(const DgModule& v, int length_bound, int degree_bound) {
  std::vector<std::pair<int, int>> gens;
  for (int d = 0; d <= v.top_degree(); ++d)
    for (int i = 0; i < v.dim(d); ++i) {
      if (d == 0 && length_bound < 0)
        throw std::invalid_argument(
            "free_gca: degree-zero generator needs a word-length bound");
      if (d > 0 && d % 2 == 0 && length_bound < 0 && degree_bound < 0)
        throw std::invalid_argument(
            "free_gca: even positive-degree generator needs a bound");
      gens.push_back({d, i});
    }

  FreeGca f;
  f.gens = v;
  f.length_bound = length_bound;
  f.degree_bound = degree_bound;

  std::map<int, std::vector<GcaMonomial>> by_deg;
  GcaMonomial cur;
  std::function<void(size_t, int, int)> rec = [&](size_t t, int len, int deg) {
    if (t == gens.size()) {
      by_deg[deg].push_back(cur);
      return;
    }
    auto [gd, gi] = gens[t];
    int maxe = (gd % 2 != 0) ? 1 : std::numeric_limits<int>::max();
    if (length_bound >= 0) maxe = std::min(maxe, length_bound - len);
    if (degree_bound >= 0 && gd > 0) maxe = std::min(maxe, (degree_bound - deg) / gd);
    maxe = std::max(maxe, 0);
    for (int e = 0; e <= maxe; ++e) {
      if (e > 0) {
        if (e == 1) cur.push_back({{gd, gi}, 1});
        else ++cur.back().second;
      }
      rec(t + 1, len + e, deg + e * gd);
    }
    if (maxe > 0) cur.pop_back();
  };
  rec(0, 0, 0);

  int top = by_deg.empty() ? 0 : by_deg.rbegin()->first;
  f.alg.mod.basis.resize(top + 1);
  f.monomials.resize(top + 1);
  f.word_length.resize(top + 1);
  for (auto& [d, ms] : by_deg) {
    std::sort(ms.begin(), ms.end());
    for (const auto& m : ms) {
      int i = (int)f.monomials[d].size();
      f.index[m] = {d, i};
      f.monomials[d].push_back(m);
      f.alg.mod.basis[d].push_back(monomial_label(v, m));
      int len = 0;
      for (const auto& [g, e] : m) len += e;
      f.word_length[d].push_back(len);
    }
  }
  f.alg.mod.normalize_shapes();
  const DgModule& mod = f.alg.mod;

  // Differential by the Leibniz rule, one occurrence at a time.
  std::map<int, Cols> vdiff;
  for (int d = 0; d < v.top_degree() + 1; ++d) vdiff[d] = by_col(v.diff(d));
  for (int d = 0; d < top; ++d)
    for (int i = 0; i < (int)f.monomials[d].size(); ++i) {
      auto w = monomial_word(f.monomials[d][i]);
      int prefix = 0;
      for (size_t j = 0; j < w.size(); ++j) {
        auto it = vdiff[w[j].first].find(w[j].second);
        if (it != vdiff[w[j].first].end())
          for (const auto& [r, c] : it->second) {
            auto w2 = w;
            w2[j] = {w[j].first + 1, r};
            auto m2 = normalize_word(w2);
            if (!m2) continue;
            auto pos = f.index.find(*m2);
            if (pos == f.index.end()) continue;  // degree-truncated
            Rational sgn = (prefix % 2 == 0) ? 1 : -1;
            f.alg.mod.d[d].add_to(pos->second.second, i, sgn * sort_sign(w2) * c);
          }
        prefix += w[j].first;
      }
    }

  // Product of basis monomials.
  f.alg.mult = zero_map(tensor(mod, mod), mod);
  for (int p = 0; p <= top; ++p)
    for (int i = 0; i < (int)f.monomials[p].size(); ++i)
      for (int q = 0; p + q <= top; ++q)
        for (int j = 0; j < (int)f.monomials[q].size(); ++j) {
          auto wx = monomial_word(f.monomials[p][i]);
          auto wy = monomial_word(f.monomials[q][j]);
          std::vector<std::pair<int, int>> w = wx;
          w.insert(w.end(), wy.begin(), wy.end());
          auto m2 = normalize_word(w);
          if (!m2) continue;
          auto pos = f.index.find(*m2);
          if (pos == f.index.end()) continue;  // truncated
          f.alg.mult.comp[p + q].add_to(pos->second.second,
                                        tensor_index(mod, mod, p, i, q, j),
                                        sort_sign(w));
        }

  f.alg.unit = zero_map(dg_unit(), mod);
  f.alg.unit.comp[0].set(f.index.at({}).second, 0, 1);

  f.gen_incl = zero_map(v, mod);
  for (const auto& [gd, gi] : gens) {
    auto it = f.index.find(GcaMonomial{{{gd, gi}, 1}});
    if (it != f.index.end()) f.gen_incl.comp[gd].set(it->second.second, gi, 1);
  }
  return f;
}

DgMap extend_multiplicatively(const FreeGca& a, const CdgAlgebra& b,
                              const DgMap& gen_images) {
  DgMap out = zero_map(a.alg.mod, b.mod);
  std::map<int, QMat> img;
  for (int d = 0; d <= a.gens.top_degree(); ++d) img[d] = gen_images.at(d);
  for (int d = 0; d <= a.alg.mod.top_degree(); ++d)
    for (int i = 0; i < (int)a.monomials[d].size(); ++i) {
      std::vector<Rational> cur = mat_col(b.unit.at(0), 0);
      int deg = 0;
      for (const auto& g : monomial_word(a.monomials[d][i])) {
        cur = algebra_product(b, deg, cur, g.first, mat_col(img[g.first], g.second));
        deg += g.first;
        if (is_zero_vec(cur)) break;
      }
      for (int k = 0; k < (int)cur.size(); ++k)
        if (cur[k] != 0) out.comp[d].set(k, i, cur[k]);
    }
  return out;
}

HopfCooperad trivial_hopf_cooperad(int max_arity) {
  HopfCooperad h;
  h.coop = trivial_cooperad(max_arity);
  h.alg[1] = unit_algebra();
  for (int r = 2; r <= max_arity; ++r) h.alg[r] = zero_algebra();
  return h;
}

AxiomCheck check_hopf_axioms(const HopfCooperad& h) {
  AxiomCheck c = check_cooperad_axioms(h.coop);
  if (!c.ok) return c;
  if (!maps_agree(h.coop.coaug, h.alg.at(1).unit))
    return {false, "coaugmentation differs from the arity-one algebra unit"};
  for (const auto& [r, a] : h.alg) {
    AxiomCheck ac = check_cdga_axioms(a);
    if (!ac.ok) return {false, "arity " + std::to_string(r) + ": " + ac.witness};
  }
  auto window = [&](int r, const CdgAlgebra* tl, const CdgAlgebra* tr,
                    const std::vector<std::vector<int>>* wl,
                    const std::vector<std::vector<int>>* wr) {
    CheckWindow w;
    w.degree_bound = h.degree_bound;
    w.length_bound = h.length_bound;
    auto it = h.word_length.find(r);
    if (it != h.word_length.end()) w.src_length = &it->second;
    if (h.weight_bound >= 0 && tl != nullptr) {
      w.weight_bound = h.weight_bound;
      w.tgt_left = &tl->mod;
      w.tgt_weight_left = wl;
      if (tr != nullptr) {
        w.tgt_right = &tr->mod;
        w.tgt_weight_right = wr;
      }
    }
    return w;
  };
  auto weights = [&](int r) -> const std::vector<std::vector<int>>* {
    auto it = h.weight.find(r);
    return it == h.weight.end() ? nullptr : &it->second;
  };
  {
    AxiomCheck m = check_algebra_morphism(h.alg.at(1), unit_algebra(),
                                          h.coop.counit,
                                          window(1, nullptr, nullptr, nullptr, nullptr));
    if (!m.ok) return {false, "counit: " + m.witness};
  }
  for (const auto& [r, gens] : h.coop.underlying.gens)
    for (size_t i = 0; i < gens.size(); ++i) {
      AxiomCheck m = check_algebra_morphism(
          h.alg.at(r), h.alg.at(r), gens[i],
          window(r, h.alg.count(r) ? &h.alg.at(r) : nullptr, nullptr, weights(r),
                 nullptr));
      if (!m.ok)
        return {false, "arity " + std::to_string(r) + " action generator " +
                           std::to_string(i + 1) + ": " + m.witness};
    }
  std::map<std::pair<int, int>, CdgAlgebra> tensors;
  for (const auto& [key, cop] : h.coop.cop) {
    auto [k, l, i] = key;
    int r = k + l - 1;
    auto tk = tensors.find({k, l});
    if (tk == tensors.end())
      tk = tensors.emplace(std::make_pair(k, l),
                           tensor_algebra(h.alg.at(k), h.alg.at(l))).first;
    AxiomCheck m = check_algebra_morphism(
        h.alg.at(r), tk->second, cop,
        window(r, &h.alg.at(k), &h.alg.at(l), weights(k), weights(l)));
    if (!m.ok) {
      std::ostringstream os;
      os << "coproduct (" << k << "," << l << "," << i << "): " << m.witness;
      return {false, os.str()};
    }
  }
  return {};
}

SymLift sym_lift(const ConilCooperad& c, int length_bound, int degree_bound) {
  CoidealData cb = coaugmentation_coideal(c);
  SymLift out;
  int arity = c.max_arity();
  for (int r = 1; r <= arity; ++r) {
    const DgModule& g = (r == 1) ? cb.seq.at(1) : c.at(r);
    out.parts.emplace(r, free_gca(g, length_bound, degree_bound));
  }
  HopfCooperad& h = out.hopf;
  h.degree_bound = degree_bound;
  h.length_bound = length_bound;
  int max_len = 1;
  for (int r = 1; r <= arity; ++r) {
    const FreeGca& p = out.parts.at(r);
    h.coop.underlying.components[r] = p.alg.mod;
    h.alg[r] = p.alg;
    h.word_length[r] = p.word_length;
    for (const auto& row : p.word_length)
      for (int len : row) max_len = std::max(max_len, len);
  }

  // Generator-level inclusions C(r) -> Sym(C)(r); in arity one the
  // coaugmentation line goes to the algebra unit.
  for (int r = 1; r <= arity; ++r) {
    const FreeGca& p = out.parts.at(r);
    if (r > 1) {
      out.incl.maps[r] = p.gen_incl;
    } else {
      out.incl.maps[1] = map_add(compose(p.gen_incl, cb.proj1),
                                 compose(p.alg.unit, c.counit));
    }
  }

  // Symmetric-group actions: multiplicative extension of the generator action.
  for (int r = 2; r <= arity; ++r) {
    const FreeGca& p = out.parts.at(r);
    std::vector<DgMap> gens;
    for (int s = 1; s < r; ++s)
      gens.push_back(extend_multiplicatively(
          p, p.alg,
          compose(p.gen_incl, c.underlying.action(r, perm_transposition(r, s)))));
    h.coop.underlying.gens[r] = std::move(gens);
  }
  h.coop.underlying.default_trivial_actions();

  h.coop.counit = extend_multiplicatively(out.parts.at(1), unit_algebra(),
                                          zero_map(out.parts.at(1).gens, dg_unit()));
  h.coop.coaug = out.parts.at(1).alg.unit;

  std::map<std::pair<int, int>, CdgAlgebra> tensors;
  for (const auto& [key, cop] : c.cop) {
    auto [k, l, i] = key;
    int r = k + l - 1;
    auto tk = tensors.find({k, l});
    if (tk == tensors.end())
      tk = tensors.emplace(std::make_pair(k, l),
                           tensor_algebra(h.alg.at(k), h.alg.at(l))).first;
    DgMap incl_r = (r == 1) ? cb.incl1 : identity_map(c.at(r));
    DgMap gen_images = compose(
        tensor_map(out.incl.maps.at(k), out.incl.maps.at(l)),
        compose(cop, incl_r));
    h.coop.cop[key] = extend_multiplicatively(out.parts.at(r), tk->second, gen_images);
  }
  h.coop.conilpotence_bound = std::max(1, c.conilpotence_bound * max_len);

  // Retraction onto words of length <= 1.
  for (int r = 1; r <= arity; ++r) {
    const FreeGca& p = out.parts.at(r);
    DgMap pi = zero_map(p.alg.mod, c.at(r));
    for (int d = 0; d <= p.alg.mod.top_degree(); ++d)
      for (int i = 0; i < (int)p.monomials[d].size(); ++i) {
        const GcaMonomial& m = p.monomials[d][i];
        if (m.empty()) {
          if (r == 1) {
            const QMat col = c.coaug.at(0);
            for (const auto& [rc, v] : col.entries()) pi.comp[0].add_to(rc.first, i, v);
          }
        } else if (m.size() == 1 && m[0].second == 1) {
          if (r == 1) {
            const QMat inc = cb.incl1.at(d);
            for (const auto& [rc, v] : inc.entries())
              if (rc.second == m[0].first.second) pi.comp[d].add_to(rc.first, i, v);
          } else {
            pi.comp[d].set(m[0].first.second, i, 1);
          }
        }
      }
    out.retraction.emplace(r, std::move(pi));
  }
  return out;
}

CofreeHopf cofree_hopf(const std::map<int, CdgAlgebra>& n, int m, int max_arity) {
  DgSymSeq seq;
  for (const auto& [r, a] : n) seq.components[r] = a.mod;
  seq.default_trivial_actions();

  CofreeHopf out;
  out.gens = n;
  out.cf = cofree(seq, m, max_arity);
  HopfCooperad& h = out.hopf;
  h.coop = out.cf.coop;
  h.weight_bound = m;

  std::map<int, MultCache> caches;
  for (const auto& [r, a] : n) caches.emplace(r, MultCache(a));

  for (int r = 1; r <= max_arity; ++r) {
    const DgModule& mod = h.coop.at(r);
    CdgAlgebra a;
    a.mod = mod;
    a.unit = zero_map(dg_unit(), mod);
    a.mult = zero_map(tensor(mod, mod), mod);
    h.weight[r].assign(mod.top_degree() + 1, {});
    for (int d = 0; d <= mod.top_degree(); ++d)
      h.weight[r][d].assign(mod.dim(d), 0);

    for (int t = 0; t < out.cf.summand_count(r); ++t) {
      const Tree& tr = out.cf.trees[r][t];
      const GradedTensor& gt = out.cf.summand[r][t];
      std::vector<int> ar = tr.vertex_arities();
      int nv = (int)ar.size();

      for (int d = 0; d <= gt.mod.top_degree(); ++d)
        for (int k = 0; k < gt.mod.dim(d); ++k)
          h.weight[r][d][out.cf.flat_index(r, d, t, k)] = tr.nvertices;

      // Summand unit: the tensor of the vertex units.
      {
        std::vector<std::vector<std::pair<int, Rational>>> uv(nv);
        bool zero = false;
        for (int v = 0; v < nv; ++v) {
          const QMat u = n.at(ar[v]).unit.at(0);
          for (const auto& [rc, val] : u.entries()) uv[v].push_back({rc.first, val});
          if (uv[v].empty()) zero = true;
        }
        if (!zero) {
          std::vector<std::pair<int, int>> tup(nv);
          std::function<void(int, Rational)> rec = [&](int v, Rational coeff) {
            if (v == nv) {
              a.unit.comp[0].add_to(
                  out.cf.flat_index(r, 0, t, gt.pos[0].at(tup)), 0, coeff);
              return;
            }
            for (const auto& [k, val] : uv[v]) {
              tup[v] = {0, k};
              rec(v + 1, coeff * val);
            }
          };
          rec(0, Rational(1));
        }
      }

      // Products within the summand: vertexwise, with the interleaving sign.
      for (int p = 0; p <= gt.mod.top_degree(); ++p)
        for (int i = 0; i < (int)gt.tuples[p].size(); ++i) {
          const auto& tx = gt.tuples[p][i];
          for (int q = 0; p + q <= gt.mod.top_degree(); ++q)
            for (int j = 0; j < (int)gt.tuples[q].size(); ++j) {
              const auto& ty = gt.tuples[q][j];
              int exp = 0;
              for (int u = 0; u < nv; ++u)
                for (int v = u + 1; v < nv; ++v) exp += ty[u].first * tx[v].first;
              Rational sgn = (exp % 2 == 0) ? 1 : -1;
              std::vector<std::vector<std::pair<int, Rational>>> pv(nv);
              bool zero = false;
              for (int v = 0; v < nv && !zero; ++v) {
                pv[v] = basis_product(caches.at(ar[v]), tx[v].first, tx[v].second,
                                      ty[v].first, ty[v].second);
                if (pv[v].empty()) zero = true;
              }
              if (zero && nv > 0) continue;
              int col = tensor_index(mod, mod, p, out.cf.flat_index(r, p, t, i),
                                     q, out.cf.flat_index(r, q, t, j));
              std::vector<std::pair<int, int>> tup(nv);
              std::function<void(int, Rational)> rec = [&](int v, Rational coeff) {
                if (v == nv) {
                  a.mult.comp[p + q].add_to(
                      out.cf.flat_index(r, p + q, t, gt.pos[p + q].at(tup)), col,
                      coeff);
                  return;
                }
                for (const auto& [k, val] : pv[v]) {
                  tup[v] = {tx[v].first + ty[v].first, k};
                  rec(v + 1, coeff * val);
                }
              };
              rec(0, sgn);
            }
        }
    }
    h.alg[r] = std::move(a);
  }
  // The coaugmentation of a Hopf cooperad is the unit of the arity-one
  // algebra (the sum of the summand units), not just the unit-tree line.
  h.coop.coaug = h.alg.at(1).unit;
  return out;
}

ModelPredicates fibration_cofibration_predicates(const std::map<int, DgMap>& f) {
  ModelPredicates out;
  auto note = [&](const std::string& s) {
    if (out.witness.empty()) out.witness = s;
  };
  for (const auto& [r, fr] : f) {
    int top = std::max(fr.src.top_degree(), fr.dst.top_degree());
    for (int d = 0; d <= top; ++d) {
      const QMat m = fr.at(d);
      int rk = rank(m);
      if (d >= 1 && rk < fr.src.dim(d)) {
        out.cofibration = false;
        note("arity " + std::to_string(r) + ": not injective in degree " +
             std::to_string(d));
      }
      if (rk < fr.dst.dim(d)) {
        out.fibration = false;
        note("arity " + std::to_string(r) + ": not surjective in degree " +
             std::to_string(d));
      }
    }
    QuasiIsoResult q = is_quasi_iso(fr, top);
    if (!q.ok()) {
      out.weak_equivalence = false;
      note("arity " + std::to_string(r) + ": not a quasi-isomorphism (degree " +
           std::to_string(q.failing_degree) + ")");
    }
  }
  return out;
}

}  // namespace opw
