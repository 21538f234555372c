#include "opw/dgmodule.hpp"

#include <stdexcept>

namespace opw {

namespace {
const QMat kEmpty(0, 0);
}

// By value for the same reason as DgMap::at: expressions often combine two
// out-of-range diff() results, so a shared scratch object would be clobbered.
QMat DgModule::diff(int k) const {
  if (k < 0 || k >= static_cast<int>(d.size())) return QMat(dim(k + 1), dim(k));
  return d[k];
}

int DgModule::total_dim() const {
  int n = 0;
  for (const auto& b : basis) n += static_cast<int>(b.size());
  return n;
}

void DgModule::normalize_shapes() {
  d.resize(basis.size());
  for (size_t k = 0; k < basis.size(); ++k) {
    if (d[k].rows() == 0 && d[k].cols() == 0) d[k] = QMat(dim(k + 1), dim(k));
    if (d[k].rows() != dim(static_cast<int>(k) + 1) || d[k].cols() != dim(static_cast<int>(k)))
      throw std::invalid_argument("DgModule: differential shape mismatch in degree " + std::to_string(k));
  }
}

bool DgModule::check_d_squared() const {
  for (int k = 0; k + 1 <= top_degree(); ++k) {
    if (!(diff(k + 1) * diff(k)).is_zero()) return false;
  }
  return true;
}

DgModule dg_unit() {
  DgModule m;
  m.basis = {{"1"}};
  m.normalize_shapes();
  return m;
}

DgModule dg_zero() { return DgModule{}; }

DgModule shift_degrees(const DgModule& k, int s) {
  DgModule out;
  int top = k.top_degree();
  if (top < 0) return out;
  for (int n = 0; n <= top + s; ++n) {
    int from = n - s;
    if (from < 0) {
      out.basis.emplace_back();
    } else {
      if (from > top && n <= top + s) { out.basis.emplace_back(); continue; }
      out.basis.push_back(k.basis[from]);
    }
  }
  for (int n = 0; n < s; ++n)
    if (n < static_cast<int>(out.basis.size()) && !out.basis[n].empty())
      ;  // unreachable: filled empty above
  // Negative target degrees must be empty.
  if (s < 0) {
    for (int from = 0; from < -s && from <= top; ++from)
      if (!k.basis[from].empty())
        throw std::invalid_argument("shift_degrees: shift would create negative degrees");
  }
  out.d.resize(out.basis.size());
  for (size_t n = 0; n < out.basis.size(); ++n) {
    int from = static_cast<int>(n) - s;
    if (from >= 0 && from < static_cast<int>(k.d.size()))
      out.d[n] = k.d[from];
  }
  out.normalize_shapes();
  return out;
}

// Returns by value: callers routinely combine at() results from two maps in
// one expression, so a shared out-of-range scratch object would be clobbered.
QMat DgMap::at(int k) const {
  if (k < 0 || k >= static_cast<int>(comp.size())) return QMat(dst.dim(k), src.dim(k));
  return comp[k];
}

void DgMap::normalize_shapes() {
  int top = std::max(src.top_degree(), dst.top_degree());
  comp.resize(top + 1 < 0 ? 0 : top + 1);
  for (int k = 0; k <= top; ++k) {
    if (comp[k].rows() == 0 && comp[k].cols() == 0) comp[k] = QMat(dst.dim(k), src.dim(k));
    if (comp[k].rows() != dst.dim(k) || comp[k].cols() != src.dim(k))
      throw std::invalid_argument("DgMap: component shape mismatch in degree " + std::to_string(k));
  }
}

DgMap identity_map(const DgModule& k) {
  DgMap f{k, k, {}};
  f.comp.resize(k.basis.size());
  for (int n = 0; n <= k.top_degree(); ++n) f.comp[n] = QMat::identity(k.dim(n));
  return f;
}

DgMap zero_map(const DgModule& src, const DgModule& dst) {
  DgMap f{src, dst, {}};
  f.normalize_shapes();
  return f;
}

bool check_cochain_map(const DgMap& f) {
  int top = std::max(f.src.top_degree(), f.dst.top_degree());
  for (int k = 0; k <= top; ++k) {
    QMat lhs = f.dst.diff(k) * f.at(k);
    QMat rhs = f.at(k + 1) * f.src.diff(k);
    if (!(lhs == rhs)) return false;
  }
  return true;
}

DgMap compose(const DgMap& g, const DgMap& f) {
  DgMap out{f.src, g.dst, {}};
  int top = std::max(f.src.top_degree(), g.dst.top_degree());
  out.comp.resize(top + 1 < 0 ? 0 : top + 1);
  for (int k = 0; k <= top; ++k) out.comp[k] = g.at(k) * f.at(k);
  return out;
}

int tensor_index(const DgModule& k, const DgModule& l, int p, int i, int q, int j) {
  // Degree n block ordered by p ascending, then (i, j) row-major.
  int n = p + q;
  int idx = 0;
  for (int pp = 0; pp < p; ++pp) idx += k.dim(pp) * l.dim(n - pp);
  return idx + i * l.dim(q) + j;
}

std::string tensor_label(const std::string& a, const std::string& b) {
  return a + "(x)" + b;
}

DgModule tensor(const DgModule& k, const DgModule& l) {
  DgModule out;
  int topk = k.top_degree(), topl = l.top_degree();
  if (topk < 0 || topl < 0) return out;
  int top = topk + topl;
  out.basis.resize(top + 1);
  for (int n = 0; n <= top; ++n)
    for (int p = 0; p <= n; ++p)
      for (int i = 0; i < k.dim(p); ++i)
        for (int j = 0; j < l.dim(n - p); ++j)
          out.basis[n].push_back(tensor_label(k.basis[p][i], l.basis[n - p][j]));
  out.d.resize(top + 1);
  for (int n = 0; n <= top; ++n) {
    QMat dn(n + 1 <= top ? static_cast<int>(out.basis[n + 1].size()) : 0,
            static_cast<int>(out.basis[n].size()));
    if (n + 1 > top) { out.d[n] = dn; continue; }
    for (int p = 0; p <= n; ++p) {
      int q = n - p;
      for (int i = 0; i < k.dim(p); ++i)
        for (int j = 0; j < l.dim(q); ++j) {
          int col = tensor_index(k, l, p, i, q, j);
          // d (x) 1
          for (const QMat kd = k.diff(p); const auto& [rc, v] : kd.entries()) {
            if (rc.second != i) continue;
            dn.add_to(tensor_index(k, l, p + 1, rc.first, q, j), col, v);
          }
          // (-1)^p 1 (x) d
          Rational sgn = (p % 2 == 0) ? 1 : -1;
          for (const QMat ld = l.diff(q); const auto& [rc, v] : ld.entries()) {
            if (rc.second != j) continue;
            dn.add_to(tensor_index(k, l, p, i, q + 1, rc.first), col, sgn * v);
          }
        }
    }
    out.d[n] = dn;
  }
  out.normalize_shapes();
  return out;
}

DgMap tensor_map(const DgMap& f, const DgMap& g) {
  // Both maps preserve degree, so no Koszul sign enters here.
  DgModule src = tensor(f.src, g.src);
  DgModule dst = tensor(f.dst, g.dst);
  DgMap out{src, dst, {}};
  out.comp.resize(src.basis.size());
  for (int n = 0; n <= src.top_degree(); ++n) {
    QMat m(dst.dim(n), src.dim(n));
    for (int p = 0; p <= n; ++p) {
      int q = n - p;
      const QMat fp = f.at(p);
      const QMat gq = g.at(q);
      for (const auto& [rc1, v1] : fp.entries())
        for (const auto& [rc2, v2] : gq.entries()) {
          int col = tensor_index(f.src, g.src, p, rc1.second, q, rc2.second);
          int row = tensor_index(f.dst, g.dst, p, rc1.first, q, rc2.first);
          m.add_to(row, col, v1 * v2);
        }
    }
    out.comp[n] = m;
  }
  return out;
}

DgMap tensor_swap(const DgModule& k, const DgModule& l) {
  DgModule src = tensor(k, l);
  DgModule dst = tensor(l, k);
  DgMap out{src, dst, {}};
  out.normalize_shapes();
  for (int n = 0; n <= src.top_degree(); ++n)
    for (int p = 0; p <= n; ++p) {
      int q = n - p;
      Rational sgn = (p % 2 && q % 2) ? -1 : 1;
      for (int i = 0; i < k.dim(p); ++i)
        for (int j = 0; j < l.dim(q); ++j)
          out.comp[n].set(tensor_index(l, k, q, j, p, i),
                          tensor_index(k, l, p, i, q, j), sgn);
    }
  return out;
}

DgMap tensor_associator(const DgModule& k, const DgModule& l, const DgModule& m) {
  DgModule kl = tensor(k, l);
  DgModule lm = tensor(l, m);
  DgMap out{tensor(kl, m), tensor(k, lm), {}};
  out.normalize_shapes();
  for (int n = 0; n <= out.src.top_degree(); ++n)
    for (int p = 0; p <= n; ++p)
      for (int q = 0; q <= n - p; ++q) {
        int r = n - p - q;
        for (int i = 0; i < k.dim(p); ++i)
          for (int j = 0; j < l.dim(q); ++j)
            for (int h = 0; h < m.dim(r); ++h) {
              int col = tensor_index(kl, m, p + q, tensor_index(k, l, p, i, q, j), r, h);
              int row = tensor_index(k, lm, p, i, q + r, tensor_index(l, m, q, j, r, h));
              out.comp[n].set(row, col, 1);
            }
      }
  return out;
}

DgModule direct_sum(const DgModule& k, const DgModule& l) {
  DgModule out;
  int top = std::max(k.top_degree(), l.top_degree());
  if (top < 0) return out;
  out.basis.resize(top + 1);
  out.d.resize(top + 1);
  for (int n = 0; n <= top; ++n) {
    out.basis[n] = k.basis.size() > static_cast<size_t>(n) ? k.basis[n] : std::vector<std::string>{};
    for (int j = 0; j < l.dim(n); ++j) out.basis[n].push_back(l.basis[n][j]);
  }
  for (int n = 0; n <= top; ++n) {
    QMat a = k.diff(n), b = l.diff(n);
    QMat m(k.dim(n + 1) + l.dim(n + 1), k.dim(n) + l.dim(n));
    for (const auto& [rc, v] : a.entries()) m.set(rc.first, rc.second, v);
    for (const auto& [rc, v] : b.entries()) m.set(k.dim(n + 1) + rc.first, k.dim(n) + rc.second, v);
    out.d[n] = m;
  }
  out.normalize_shapes();
  return out;
}

CohomologyReport cohomology(const DgModule& k) {
  CohomologyReport rep;
  for (int n = 0; n <= k.top_degree(); ++n) {
    auto cocycles = kernel_basis(k.diff(n));
    QMat bmat = k.diff(n - 1);  // coboundaries arriving in degree n
    int rk_b = rank(bmat);
    int h = static_cast<int>(cocycles.size()) - rk_b;
    if (h <= 0) continue;
    rep.dims[n] = h;
    // Representatives: cocycles independent modulo the coboundary image.
    // Grow [B | chosen] by adding cocycles that raise the rank.
    std::vector<std::vector<Rational>> chosen;
    int dim_n = k.dim(n);
    QMat acc = bmat.transpose().transpose();  // copy
    std::vector<std::vector<Rational>> cols;
    for (const auto& [rc, v] : bmat.entries()) (void)rc, (void)v;
    // rebuild accumulating matrix densely via columns list
    std::vector<std::vector<Rational>> accum_cols;
    for (int c = 0; c < bmat.cols(); ++c) {
      std::vector<Rational> col(dim_n, 0);
      for (int r = 0; r < dim_n; ++r) col[r] = bmat.at(r, c);
      accum_cols.push_back(std::move(col));
    }
    int cur_rank = rk_b;
    for (const auto& z : cocycles) {
      if (static_cast<int>(chosen.size()) == h) break;
      accum_cols.push_back(z);
      int nr = rank(columns_to_mat(accum_cols, dim_n));
      if (nr > cur_rank) {
        cur_rank = nr;
        chosen.push_back(z);
      } else {
        accum_cols.pop_back();
      }
    }
    rep.representatives[n] = std::move(chosen);
  }
  return rep;
}

QuasiIsoResult is_quasi_iso(const DgMap& f, int degree_bound) {
  QuasiIsoResult res;
  if (!check_cochain_map(f)) {
    res.status = QuasiIsoResult::Status::not_cochain_map;
    return res;
  }
  CohomologyReport hs = cohomology(f.src);
  CohomologyReport ht = cohomology(f.dst);
  for (int n = 0; n <= degree_bound; ++n) {
    int ds = hs.dim(n), dt = ht.dim(n);
    // Build the induced matrix on cohomology: express f(source reps) in the
    // basis (target coboundaries | target reps); read off the rep block.
    const auto src_reps = hs.representatives.count(n) ? hs.representatives.at(n)
                                                      : std::vector<std::vector<Rational>>{};
    const auto dst_reps = ht.representatives.count(n) ? ht.representatives.at(n)
                                                      : std::vector<std::vector<Rational>>{};
    QMat bmat = f.dst.diff(n - 1);
    int dim_t = f.dst.dim(n);
    std::vector<std::vector<Rational>> cols;
    for (int c = 0; c < bmat.cols(); ++c) {
      std::vector<Rational> col(dim_t, 0);
      for (int r = 0; r < dim_t; ++r) col[r] = bmat.at(r, c);
      cols.push_back(std::move(col));
    }
    int nb = static_cast<int>(cols.size());
    for (const auto& z : dst_reps) cols.push_back(z);
    QMat basis_mat = columns_to_mat(cols, dim_t);
    QMat induced(dt, ds);
    for (int j = 0; j < ds; ++j) {
      std::vector<Rational> img = f.at(n).apply(src_reps[j]);
      auto sol = solve(basis_mat, img);
      if (!sol) {
        // f of a cocycle is a cocycle; must be expressible. Defensive only.
        res.status = QuasiIsoResult::Status::no;
        res.failing_degree = n;
        res.witness = img;
        return res;
      }
      for (int i = 0; i < dt; ++i) induced.set(i, j, (*sol)[nb + i]);
    }
    if (ds != dt) {
      res.status = QuasiIsoResult::Status::no;
      res.failing_degree = n;
      if (ds > dt) {
        auto ker = kernel_basis(induced);
        res.witness = ker.empty() ? std::vector<Rational>{} : ker.front();
      } else {
        auto coker = kernel_basis(induced.transpose());
        res.witness = coker.empty() ? std::vector<Rational>{} : coker.front();
      }
      return res;
    }
    if (rank(induced) != ds) {
      res.status = QuasiIsoResult::Status::no;
      res.failing_degree = n;
      auto ker = kernel_basis(induced);
      res.witness = ker.empty() ? std::vector<Rational>{} : ker.front();
      return res;
    }
  }
  return res;
}

}  // namespace opw
