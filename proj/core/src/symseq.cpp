#include "opw/symseq.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace opw {

Perm perm_identity(int r) {
  Perm p(r);
  std::iota(p.begin(), p.end(), 1);
  return p;
}

Perm perm_transposition(int r, int i) {
  Perm p = perm_identity(r);
  std::swap(p[i - 1], p[i]);
  return p;
}

Perm perm_compose(const Perm& a, const Perm& b) {
  Perm p(b.size());
  for (size_t i = 0; i < b.size(); ++i) p[i] = a[b[i] - 1];
  return p;
}

Perm perm_inverse(const Perm& a) {
  Perm p(a.size());
  for (size_t i = 0; i < a.size(); ++i) p[a[i] - 1] = static_cast<int>(i) + 1;
  return p;
}

std::vector<Perm> all_perms(int r) {
  Perm p = perm_identity(r);
  std::vector<Perm> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::vector<int> adjacent_factorization(const Perm& a) {
  // Bubble-sort a to the identity; swapping positions i, i+1 multiplies on
  // the right by (i i+1), so a = t_{last} o ... o t_{first}.
  Perm w = a;
  std::vector<int> swaps;
  bool moved = true;
  while (moved) {
    moved = false;
    for (size_t i = 0; i + 1 < w.size(); ++i)
      if (w[i] > w[i + 1]) {
        std::swap(w[i], w[i + 1]);
        swaps.push_back(static_cast<int>(i) + 1);
        moved = true;
      }
  }
  std::reverse(swaps.begin(), swaps.end());
  return swaps;
}

const DgModule& DgSymSeq::at(int r) const {
  static const DgModule zero = dg_zero();
  auto it = components.find(r);
  return it == components.end() ? zero : it->second;
}

DgMap DgSymSeq::action(int r, const Perm& sigma) const {
  if (static_cast<int>(sigma.size()) != r) throw std::invalid_argument("arity mismatch");
  DgMap acc = identity_map(at(r));
  if (at(r).total_dim() == 0) return acc;  // only the zero action exists
  auto git = gens.find(r);
  for (int i : adjacent_factorization(sigma)) {
    if (git == gens.end() || static_cast<int>(git->second.size()) < i)
      throw std::invalid_argument("missing generator action");
    acc = compose(acc, git->second[i - 1]);
  }
  // acc = A(t_{i1}) o ... o A(t_{ik}) for sigma = t_{i1} o ... o t_{ik}
  return acc;
}

void DgSymSeq::default_trivial_actions() {
  for (const auto& [r, comp] : components) {
    if (gens.count(r)) continue;
    std::vector<DgMap> g;
    for (int i = 1; i < r; ++i) g.push_back(identity_map(comp));
    gens[r] = std::move(g);
  }
}

ActionCheck check_action(const DgSymSeq& n) {
  for (const auto& [r, comp] : n.components) {
    auto git = n.gens.find(r);
    int have = git == n.gens.end() ? 0 : static_cast<int>(git->second.size());
    if (have != r - 1)
      return {false, r, "expected " + std::to_string(r - 1) + " generators"};
    std::vector<QMat> id;
    for (int k = 0; k <= comp.top_degree(); ++k) id.push_back(QMat::identity(comp.dim(k)));
    auto eq_id = [&](const DgMap& f) {
      for (int k = 0; k <= comp.top_degree(); ++k)
        if (!(f.at(k) == id[k])) return false;
      return true;
    };
    auto eq = [&](const DgMap& f, const DgMap& g) {
      for (int k = 0; k <= comp.top_degree(); ++k)
        if (!(f.at(k) == g.at(k))) return false;
      return true;
    };
    const auto& t = git == n.gens.end() ? std::vector<DgMap>{} : git->second;
    for (int i = 0; i < r - 1; ++i) {
      if (!check_cochain_map(t[i]))
        return {false, r, "generator " + std::to_string(i + 1) + " is not a cochain map"};
      if (!eq_id(compose(t[i], t[i])))
        return {false, r, "involution fails at generator " + std::to_string(i + 1)};
      if (i + 1 < r - 1 &&
          !eq(compose(t[i], compose(t[i + 1], t[i])),
              compose(t[i + 1], compose(t[i], t[i + 1]))))
        return {false, r, "braid relation fails at " + std::to_string(i + 1)};
      for (int j = i + 2; j < r - 1; ++j)
        if (!eq(compose(t[i], t[j]), compose(t[j], t[i])))
          return {false, r,
                  "commutation fails at " + std::to_string(i + 1) + "," +
                      std::to_string(j + 1)};
    }
  }
  return {};
}

SimplicialAut trivial_aut(const FinSimpSet& x) {
  SimplicialAut f(x.dim() + 1);
  for (int n = 0; n <= x.dim(); ++n) {
    f[n].resize(x.ncells(n));
    std::iota(f[n].begin(), f[n].end(), 0);
  }
  return f;
}

SimpRef apply_aut(const SimplicialAut& f, const SimpRef& x) {
  SimpRef r = x;
  r.idx = f[x.core_dim][x.idx];
  return r;
}

bool check_aut(const FinSimpSet& x, const SimplicialAut& f) {
  if (static_cast<int>(f.size()) != x.dim() + 1) return false;
  for (int n = 0; n <= x.dim(); ++n) {
    if (static_cast<int>(f[n].size()) != x.ncells(n)) return false;
    std::vector<int> seen(x.ncells(n), 0);
    for (int v : f[n]) {
      if (v < 0 || v >= x.ncells(n) || seen[v]++) return false;
    }
  }
  for (int n = 1; n <= x.dim(); ++n)
    for (int k = 0; k < x.ncells(n); ++k)
      for (int i = 0; i <= n; ++i) {
        SimpRef lhs = apply_aut(f, x.faces[n][k][i]);
        SimpRef rhs = x.faces[n][f[n][k]][i];
        if (!(lhs == rhs)) return false;
      }
  return true;
}

const FinSimpSet& PointedSpaceSeq::at(int r) const {
  static const FinSimpSet empty{};
  auto it = components.find(r);
  return it == components.end() ? empty : it->second;
}

SimplicialAut PointedSpaceSeq::action(int r, const Perm& sigma) const {
  SimplicialAut acc = trivial_aut(at(r));
  auto git = gens.find(r);
  for (int i : adjacent_factorization(sigma)) {
    if (git == gens.end() || static_cast<int>(git->second.size()) < i)
      throw std::invalid_argument("missing generator action");
    const SimplicialAut& g = git->second[i - 1];
    for (size_t n = 0; n < acc.size(); ++n)
      for (size_t k = 0; k < acc[n].size(); ++k) acc[n][k] = g[n][acc[n][k]];
  }
  return acc;
}

void PointedSpaceSeq::default_trivial_actions() {
  for (const auto& [r, comp] : components) {
    if (gens.count(r)) continue;
    std::vector<SimplicialAut> g;
    for (int i = 1; i < r; ++i) g.push_back(trivial_aut(comp));
    gens[r] = std::move(g);
  }
}

StratumData smash_stratum_data(const Tree& t, const PointedSpaceSeq& m) {
  if (t.is_unit()) throw std::invalid_argument("stratum needs at least one vertex");
  std::vector<int> arities = t.vertex_arities();
  std::vector<FinSimpSet> factors;
  for (int a : arities) {
    if (!m.components.count(a))
      throw std::invalid_argument("no component in arity " + std::to_string(a));
    factors.push_back(m.at(a));
  }
  StratumData sd;
  sd.prod = multi_product(factors);
  std::vector<std::vector<std::string>> collapse(sd.prod.space.dim() + 1);
  for (int n = 0; n <= sd.prod.space.dim(); ++n)
    for (size_t k = 0; k < sd.prod.tuples[n].size(); ++k) {
      bool hit = false;
      for (size_t v = 0; v < arities.size() && !hit; ++v)
        if (arities[v] == 1) {
          const SimpRef& a = sd.prod.tuples[n][k][v];
          hit = a.core_dim == 0 && a.idx == m.base;
        }
      if (hit) collapse[n].push_back(sd.prod.space.cells[n][k]);
    }
  sd.quotient = quotient(sd.prod.space, collapse, &sd.image);
  return sd;
}

PointedFinSimpSet smash_stratum(const Tree& t, const PointedSpaceSeq& m) {
  return smash_stratum_data(t, m).quotient;
}

}  // namespace opw
