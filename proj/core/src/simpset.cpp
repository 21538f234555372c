#include "opw/simpset.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace opw {

namespace {

// Strictly descending m-subsets of {0..top}.
void descending_words(int top, int m, std::vector<int>& cur,
                      std::vector<std::vector<int>>& out) {
  if (m == 0) {
    out.push_back(cur);
    return;
  }
  int hi = cur.empty() ? top : cur.back() - 1;
  for (int j = hi; j >= m - 1; --j) {
    cur.push_back(j);
    descending_words(top, m - 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

SimpRef degenerate_ref(const SimpRef& x, int j) {
  // s_j s_e = s_{e+1} s_j for j <= e: push s_j rightwards into the word.
  SimpRef r = x;
  size_t pos = 0;
  while (pos < r.degen.size() && j <= r.degen[pos]) {
    r.degen[pos] += 1;
    ++pos;
  }
  r.degen.insert(r.degen.begin() + static_cast<long>(pos), j);
  return r;
}

int FinSimpSet::total_cells() const {
  int t = 0;
  for (const auto& c : cells) t += static_cast<int>(c.size());
  return t;
}

int FinSimpSet::index_of(int n, const std::string& name) const {
  if (n < 0 || n > dim()) return -1;
  auto it = std::find(cells[n].begin(), cells[n].end(), name);
  return it == cells[n].end() ? -1 : static_cast<int>(it - cells[n].begin());
}

std::string FinSimpSet::display(const SimpRef& x) const {
  std::string s;
  for (int j : x.degen) s += "s" + std::to_string(j) + " ";
  return s + cells[x.core_dim][x.idx];
}

SimpRef FinSimpSet::face(const SimpRef& x, int i) const {
  if (x.dim() < 1 || i < 0 || i > x.dim()) throw std::invalid_argument("face out of range");
  if (x.degen.empty()) return faces[x.core_dim][x.idx][i];
  int j = x.degen.front();
  SimpRef rest = x;
  rest.degen.erase(rest.degen.begin());
  if (i == j || i == j + 1) return rest;        // d_i s_j = id
  if (i < j) return degenerate_ref(face(rest, i), j - 1);  // d_i s_j = s_{j-1} d_i
  return degenerate_ref(face(rest, i - 1), j);             // d_i s_j = s_j d_{i-1}
}

std::vector<SimpRef> FinSimpSet::all_simplices(int n) const {
  std::vector<SimpRef> out;
  for (int q = 0; q <= std::min(n, dim()); ++q) {
    std::vector<std::vector<int>> words;
    std::vector<int> cur;
    descending_words(n - 1, n - q, cur, words);
    for (int k = 0; k < ncells(q); ++k)
      for (const auto& w : words) out.push_back(SimpRef{q, k, w});
  }
  return out;
}

bool FinSimpSet::check_simplicial_identities() const {
  for (int n = 1; n <= dim(); ++n) {
    if (static_cast<int>(faces.size()) <= n) return false;
    if (faces[n].size() != cells[n].size()) return false;
    for (size_t k = 0; k < cells[n].size(); ++k) {
      if (static_cast<int>(faces[n][k].size()) != n + 1) return false;
      for (int i = 0; i <= n; ++i)
        if (faces[n][k][i].dim() != n - 1) return false;
      if (n < 2) continue;
      SimpRef x{n, static_cast<int>(k), {}};
      for (int j = 1; j <= n; ++j)
        for (int i = 0; i < j; ++i)
          if (!(face(face(x, j), i) == face(face(x, i), j - 1))) return false;
    }
  }
  return true;
}

bool FinSimpSet::is_connected() const {
  int n0 = ncells(0);
  if (n0 == 0) return false;
  std::vector<int> parent(n0);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (int k = 0; k < ncells(1); ++k) {
    int a = find(faces[1][k][0].idx);
    int b = find(faces[1][k][1].idx);
    parent[a] = b;
  }
  for (int k = 1; k < n0; ++k)
    if (find(k) != find(0)) return false;
  return true;
}

SimpRef PointedFinSimpSet::base_ref(int n) const {
  SimpRef r{0, base, {}};
  for (int j = n - 1; j >= 0; --j) r.degen.push_back(j);
  return r;
}

FinSimpSet simp_point() {
  FinSimpSet x;
  x.cells = {{"*"}};
  x.faces = {{}};
  return x;
}

FinSimpSet simp_circle() {
  FinSimpSet x;
  x.cells = {{"v"}, {"e"}};
  x.faces = {{}, {{SimpRef{0, 0, {}}, SimpRef{0, 0, {}}}}};
  return x;
}

FinSimpSet simp_standard(int n) {
  FinSimpSet x;
  x.cells.resize(n + 1);
  x.faces.resize(n + 1);
  // Nondegenerate k-simplices = (k+1)-subsets of {0..n}, named by their
  // vertices in increasing order; d_i drops the i-th vertex.
  std::vector<std::vector<std::vector<int>>> subs(n + 1);
  std::function<void(int, std::vector<int>&)> gen = [&](int from, std::vector<int>& cur) {
    if (!cur.empty()) subs[cur.size() - 1].push_back(cur);
    for (int v = from; v <= n; ++v) {
      cur.push_back(v);
      gen(v + 1, cur);
      cur.pop_back();
    }
  };
  std::vector<int> cur;
  gen(0, cur);
  auto name = [](const std::vector<int>& vs) {
    std::string s;
    for (int v : vs) s += std::to_string(v);
    return s;
  };
  for (int k = 0; k <= n; ++k)
    for (const auto& vs : subs[k]) x.cells[k].push_back(name(vs));
  for (int k = 1; k <= n; ++k)
    for (const auto& vs : subs[k]) {
      std::vector<SimpRef> fs;
      for (int i = 0; i <= k; ++i) {
        std::vector<int> sub = vs;
        sub.erase(sub.begin() + i);
        fs.push_back(SimpRef{k - 1, x.index_of(k - 1, name(sub)), {}});
      }
      x.faces[k].push_back(std::move(fs));
    }
  return x;
}

FinSimpSet simp_interval() { return simp_standard(1); }

namespace {

// Pulls one s_j out of the front of a descending word containing j: letters
// greater than j decrement, the occurrence of j is removed.
std::vector<int> pull_word(const std::vector<int>& w, int j) {
  std::vector<int> out;
  for (int e : w) {
    if (e == j) continue;
    out.push_back(e > j ? e - 1 : e);
  }
  return out;
}

// Letters common to every word of the tuple, descending.
std::vector<int> common_letters(const std::vector<SimpRef>& t) {
  std::vector<int> common = t.front().degen;
  for (size_t f = 1; f < t.size(); ++f) {
    std::vector<int> keep;
    for (int e : common)
      if (std::find(t[f].degen.begin(), t[f].degen.end(), e) != t[f].degen.end())
        keep.push_back(e);
    common = std::move(keep);
  }
  return common;
}

}  // namespace

SimpRef ProductSpace::tuple_ref(const std::vector<SimpRef>& t) const {
  std::vector<int> common = common_letters(t);
  if (common.empty()) {
    int n = t.front().dim();
    return SimpRef{n, index[n].at(t), {}};
  }
  int j = common.front();  // largest; words are descending
  std::vector<SimpRef> t2;
  for (const SimpRef& a : t) t2.push_back(SimpRef{a.core_dim, a.idx, pull_word(a.degen, j)});
  return degenerate_ref(tuple_ref(t2), j);
}

ProductSpace multi_product(const std::vector<FinSimpSet>& xs) {
  ProductSpace pd;
  pd.factors = xs;
  if (xs.empty()) {
    pd.space = simp_point();
    pd.tuples = {{{}}};
    pd.index.resize(1);
    pd.index[0][{}] = 0;
    return pd;
  }
  int topn = 0;
  for (const auto& x : xs) topn += x.dim();
  pd.space.cells.resize(topn + 1);
  pd.space.faces.resize(topn + 1);
  pd.tuples.resize(topn + 1);
  pd.index.resize(topn + 1);
  for (int n = 0; n <= topn; ++n) {
    std::vector<std::vector<SimpRef>> per_factor;
    for (const auto& x : xs) per_factor.push_back(x.all_simplices(n));
    std::vector<SimpRef> cur;
    std::function<void(size_t)> rec = [&](size_t f) {
      if (f == xs.size()) {
        if (!cur.empty() && !common_letters(cur).empty()) return;
        pd.index[n][cur] = static_cast<int>(pd.tuples[n].size());
        pd.tuples[n].push_back(cur);
        std::string name = "(";
        for (size_t g = 0; g < xs.size(); ++g)
          name += (g ? "|" : "") + xs[g].display(cur[g]);
        pd.space.cells[n].push_back(name + ")");
        return;
      }
      for (const SimpRef& a : per_factor[f]) {
        cur.push_back(a);
        rec(f + 1);
        cur.pop_back();
      }
    };
    rec(0);
  }
  for (int n = 1; n <= topn; ++n)
    for (const auto& t : pd.tuples[n]) {
      std::vector<SimpRef> fs;
      for (int i = 0; i <= n; ++i) {
        std::vector<SimpRef> ft;
        for (size_t g = 0; g < xs.size(); ++g) ft.push_back(xs[g].face(t[g], i));
        fs.push_back(pd.tuple_ref(ft));
      }
      pd.space.faces[n].push_back(std::move(fs));
    }
  while (pd.space.cells.size() > 1 && pd.space.cells.back().empty()) {
    pd.space.cells.pop_back();
    pd.space.faces.pop_back();
    pd.tuples.pop_back();
    pd.index.pop_back();
  }
  return pd;
}

FinSimpSet product(const FinSimpSet& x, const FinSimpSet& y) {
  return multi_product({x, y}).space;
}

std::pair<SimpRef, SimpRef> product_factors(const FinSimpSet& x, const FinSimpSet& y,
                                            int n, int k) {
  const auto t = multi_product({x, y}).tuples.at(n).at(k);
  return {t[0], t[1]};
}

PointedFinSimpSet quotient(const FinSimpSet& x,
                           const std::vector<std::vector<std::string>>& collapse,
                           std::vector<std::vector<SimpRef>>* image_out) {
  std::vector<std::set<int>> drop(x.dim() + 1);
  for (size_t n = 0; n < collapse.size(); ++n)
    for (const auto& name : collapse[n]) {
      int k = x.index_of(static_cast<int>(n), name);
      if (k < 0) throw std::invalid_argument("quotient: unknown simplex " + name);
      drop[n].insert(k);
    }
  for (int n = 1; n <= x.dim(); ++n)
    for (int k : drop[n])
      for (int i = 0; i <= n; ++i) {
        const SimpRef& f = x.faces[n][k][i];
        if (!drop[f.core_dim].count(f.idx))
          throw std::invalid_argument("quotient: subset not face-closed");
      }
  PointedFinSimpSet q;
  q.space.cells.resize(x.dim() + 1);
  q.space.faces.resize(x.dim() + 1);
  q.base = 0;
  q.space.cells[0].push_back("*");
  // old nondegenerate cell -> its class in the quotient
  std::vector<std::vector<SimpRef>> image(x.dim() + 1);
  for (int n = 0; n <= x.dim(); ++n)
    for (int k = 0; k < x.ncells(n); ++k) {
      if (drop[n].count(k)) {
        image[n].push_back(q.base_ref(n));
      } else {
        image[n].push_back(SimpRef{n, static_cast<int>(q.space.cells[n].size()), {}});
        q.space.cells[n].push_back(x.cells[n][k]);
      }
    }
  for (int n = 1; n <= x.dim(); ++n)
    for (int k = 0; k < x.ncells(n); ++k) {
      if (drop[n].count(k)) continue;
      std::vector<SimpRef> fs;
      for (int i = 0; i <= n; ++i) {
        const SimpRef& f = x.faces[n][k][i];
        SimpRef r = image[f.core_dim][f.idx];
        for (auto it = f.degen.rbegin(); it != f.degen.rend(); ++it)
          r = degenerate_ref(r, *it);
        fs.push_back(r);
      }
      q.space.faces[n].push_back(std::move(fs));
    }
  while (q.space.cells.size() > 1 && q.space.cells.back().empty()) {
    q.space.cells.pop_back();
    q.space.faces.pop_back();
  }
  if (image_out) *image_out = std::move(image);
  return q;
}

DgModule normalized_cochains(const FinSimpSet& x) {
  DgModule m;
  m.basis = x.cells;
  while (!m.basis.empty() && m.basis.back().empty()) m.basis.pop_back();
  m.normalize_shapes();
  for (int n = 0; n < m.top_degree(); ++n) {
    QMat d(m.dim(n + 1), m.dim(n));
    for (int k = 0; k < x.ncells(n + 1); ++k)
      for (int i = 0; i <= n + 1; ++i) {
        const SimpRef& f = x.faces[n + 1][k][i];
        if (!f.is_nondegenerate()) continue;
        d.add_to(k, f.idx, (i % 2 == 0) ? Rational(1) : Rational(-1));
      }
    m.d[n] = std::move(d);
  }
  return m;
}

FinSimpSet from_functions(
    const std::vector<std::vector<std::string>>& elements,
    const std::function<std::string(int, const std::string&, int)>& face,
    const std::function<std::string(int, const std::string&, int)>& degeneracy) {
  int topn = static_cast<int>(elements.size()) - 1;
  FinSimpSet x;
  x.cells.resize(topn + 1);
  x.faces.resize(topn + 1);
  // witness[n][name] = some j with s_j d_j e = e, or -1 if nondegenerate
  std::vector<std::map<std::string, int>> witness(topn + 1);
  std::vector<std::map<std::string, int>> nd_index(topn + 1);
  for (int n = 0; n <= topn; ++n)
    for (const auto& e : elements[n]) {
      int w = -1;
      for (int j = 0; j < n && w < 0; ++j)
        if (degeneracy(n - 1, face(n, e, j), j) == e) w = j;
      witness[n][e] = w;
      if (w < 0) {
        nd_index[n][e] = static_cast<int>(x.cells[n].size());
        x.cells[n].push_back(e);
      }
    }
  std::function<SimpRef(int, const std::string&)> ref_of = [&](int n, const std::string& e) {
    int w = witness[n].at(e);
    if (w < 0) return SimpRef{n, nd_index[n].at(e), {}};
    return degenerate_ref(ref_of(n - 1, face(n, e, w)), w);
  };
  for (int n = 1; n <= topn; ++n)
    for (const auto& e : x.cells[n]) {
      std::vector<SimpRef> fs;
      for (int i = 0; i <= n; ++i) fs.push_back(ref_of(n - 1, face(n, e, i)));
      x.faces[n].push_back(std::move(fs));
    }
  while (x.cells.size() > 1 && x.cells.back().empty()) {
    x.cells.pop_back();
    x.faces.pop_back();
  }
  return x;
}

}  // namespace opw
