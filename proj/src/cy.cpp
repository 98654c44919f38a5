#include "forge/cy.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace forge {

namespace {

int pc(int m) { return std::popcount(static_cast<unsigned>(m)); }

// Sign of merging two ascending index sets (count of out-of-order pairs).
int merge_sign(int m1, int m2) {
  int inv = 0;
  for (int j = 0; m2 >> j; ++j)
    if (m2 >> j & 1) inv += pc(m1 >> (j + 1));
  return inv % 2 ? -1 : 1;
}

// Sign of inserting a single letter j into the ascending word with mask m.
int insert_sign(int m, int j) { return pc(m & ((1 << j) - 1)) % 2 ? -1 : 1; }

std::string exterior_name(int n, int smask, int tmask) {
  std::string s;
  for (int j = 0; j < n; ++j)
    if (smask >> j & 1) s += (s.empty() ? "" : "^") + ("t" + std::to_string(j + 1));
  for (int j = 0; j < n; ++j)
    if (tmask >> j & 1) s += (s.empty() ? "" : "^") + ("b" + std::to_string(j + 1));
  return s.empty() ? "1" : s;
}

// Exponent vectors with |α| <= maxdeg in n variables, total degree then lex.
struct PolyInfo {
  std::vector<std::vector<int>> exps;
  std::map<std::vector<int>, int> index;
};

void gen_exps(int n, int pos, int left, std::vector<int>& cur,
              std::vector<std::vector<int>>& out) {
  if (pos == n) {
    out.push_back(cur);
    return;
  }
  for (int k = left; k >= 0; --k) {
    cur[pos] = k;
    gen_exps(n, pos + 1, left - k, cur, out);
  }
  cur[pos] = 0;
}

const PolyInfo& poly_info(int n, int maxdeg) {
  static std::map<std::pair<int, int>, PolyInfo> cache;
  auto key = std::make_pair(n, maxdeg);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  PolyInfo pi;
  for (int d = 0; d <= maxdeg; ++d) {
    std::vector<std::vector<int>> layer;
    std::vector<int> cur(n, 0);
    gen_exps(n, 0, d, cur, layer);
    std::erase_if(layer, [&](const std::vector<int>& e) {
      int s = 0;
      for (int x : e) s += x;
      return s != d;
    });
    std::sort(layer.begin(), layer.end());
    for (auto& e : layer) pi.exps.push_back(e);
  }
  for (int i = 0; i < (int)pi.exps.size(); ++i) pi.index[pi.exps[i]] = i;
  return cache[key] = std::move(pi);
}

void poly_decode(const CYModel& m, int flat, int& e, int& s, int& t) {
  int N = 1 << m.n;
  t = flat & (N - 1);
  s = (flat >> m.n) & (N - 1);
  e = flat >> (2 * m.n);
}

int poly_encode(const CYModel& m, int e, int s, int t) {
  return ((e << m.n) | s) << m.n | t;
}

// One flat-pair product for the procedural polynomial model.
SparseVec poly_flat_mul(const CYModel& m, int a, int b) {
  int e1, s1, t1, e2, s2, t2;
  poly_decode(m, a, e1, s1, t1);
  poly_decode(m, b, e2, s2, t2);
  if ((s1 & s2) || (t1 & t2)) return {};
  const PolyInfo& pi = poly_info(m.n, m.poly_maxdeg);
  std::vector<int> sum = pi.exps[e1];
  int tot = 0;
  for (int j = 0; j < m.n; ++j) tot += (sum[j] += pi.exps[e2][j]);
  if (tot > m.poly_maxdeg) return {};
  int sg = merge_sign(s1, s2) * merge_sign(t1, t2) *
           ((pc(t1) * pc(s2)) % 2 ? -1 : 1);
  SparseVec out;
  out[poly_encode(m, pi.index.at(sum), s1 | s2, t1 | t2)] = Scalar(sg);
  return out;
}

SparseVec flat_sv(int i) { return SparseVec{{i, Scalar(1)}}; }

Matrix flats_embed(int dim, const std::vector<int>& flats) {
  Matrix e(dim, (int)flats.size());
  for (int j = 0; j < (int)flats.size(); ++j) e.at(flats[j], j) = Scalar(1);
  return e;
}

// Columns of an operator applied to the listed flats, as a dense dim×k matrix.
Matrix op_on_flats(const CYModel& m, const OpCols& f, const std::vector<int>& flats) {
  Matrix out(m.dim(), (int)flats.size());
  for (int j = 0; j < (int)flats.size(); ++j)
    for (auto& [i, c] : f[flats[j]]) out.at(i, j) = c;
  return out;
}

bool support_at(const CYModel& m, const SparseVec& v, int pp, int qq) {
  for (auto& [i, c] : v)
    if (m.p[i] != pp || m.q[i] != qq) return false;
  return true;
}

std::string idx_prefix(int k) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d~", k);
  return buf;
}

}  // namespace

// ---- column-sparse operators -----------------------------------------------

SparseVec op_apply(const OpCols& f, const SparseVec& x) {
  SparseVec out;
  for (auto& [i, c] : x) {
    if (i < 0 || i >= (int)f.size()) throw std::out_of_range("op_apply: flat index");
    sv_axpy(out, c, f[i]);
  }
  return out;
}

OpCols op_compose(const OpCols& f, const OpCols& g) {
  OpCols out(g.size());
  for (int j = 0; j < (int)g.size(); ++j) out[j] = op_apply(f, g[j]);
  return out;
}

OpCols op_zero(int dim) { return OpCols(static_cast<std::size_t>(dim)); }

Matrix op_dense(int rows, const OpCols& f) {
  Matrix m(rows, (int)f.size());
  for (int j = 0; j < (int)f.size(); ++j)
    for (auto& [i, c] : f[j]) m.at(i, j) = c;
  return m;
}

OpCols op_from_dense(const Matrix& m) {
  OpCols out(m.cols);
  for (int j = 0; j < m.cols; ++j) out[j] = col_to_sv(m, j);
  return out;
}

bool op_is_zero(const OpCols& f) {
  for (auto& c : f)
    if (!c.empty()) return false;
  return true;
}

// ---- basic model access ----------------------------------------------------

int cy_find(const CYModel& m, const std::string& name) {
  for (int i = 0; i < m.dim(); ++i)
    if (m.names[i] == name) return i;
  throw std::invalid_argument("cy_find: no flat named " + name);
}

std::vector<int> cy_flats(const CYModel& m, int pp, int qq) {
  std::vector<int> out;
  for (int i = 0; i < m.dim(); ++i)
    if (m.p[i] == pp && m.q[i] == qq) out.push_back(i);
  return out;
}

bool cy_bidegree(const CYModel& m, const SparseVec& x, int& pp, int& qq) {
  if (x.empty()) return false;
  auto it = x.begin();
  pp = m.p[it->first];
  qq = m.q[it->first];
  return support_at(m, x, pp, qq);
}

SparseVec cy_mul(const CYModel& m, const SparseVec& x, const SparseVec& y) {
  SparseVec out;
  for (auto& [a, ca] : x)
    for (auto& [b, cb] : y) {
      SparseVec prod = m.kind == CYKind::poly ? poly_flat_mul(m, a, b)
                                              : m.wedge[a][b];
      sv_axpy(out, ca * cb, prod);
    }
  return out;
}

SparseVec cy_d(const CYModel& m, const SparseVec& x) {
  SparseVec out = op_apply(m.dpar, x);
  sv_axpy(out, Scalar(1), op_apply(m.dbar, x));
  return out;
}

Scalar cy_trace(const CYModel& m, const SparseVec& x) {
  Scalar out(0);
  for (auto& [i, c] : x) {
    auto it = m.trace.find(i);
    if (it != m.trace.end()) out = out + it->second * c;
  }
  return out;
}

Scalar cy_pair(const CYModel& m, const SparseVec& x, const SparseVec& y) {
  return cy_trace(m, cy_mul(m, x, y));
}

// ---- polyvector transport --------------------------------------------------

SparseVec cy_mask_contract(const CYModel& m, int mask, const SparseVec& x) {
  SparseVec out = x;
  for (int j = 0; j < m.n; ++j)
    if (mask >> j & 1) out = op_apply(m.frame[j], out);
  return out;
}

SparseVec cy_pv_apply(const CYModel& m, const PVVec& v, const SparseVec& x) {
  SparseVec out;
  std::map<int, SparseVec> contracted;  // per distinct mask
  for (auto& [term, c] : v) {
    auto [mask, f] = term;
    auto it = contracted.find(mask);
    if (it == contracted.end())
      it = contracted.emplace(mask, cy_mask_contract(m, mask, x)).first;
    sv_axpy(out, Scalar(1), cy_mul(m, SparseVec{{f, c}}, it->second));
  }
  return out;
}

SparseVec cy_pv_realize(const CYModel& m, const PVVec& v) {
  return cy_pv_apply(m, v, m.phi);
}

PVVec cy_pv_invert(const CYModel& m, const SparseVec& a) {
  if (a.empty()) return {};
  int pp, qq;
  if (!cy_bidegree(m, a, pp, qq))
    throw std::invalid_argument("cy_pv_invert: input not bidegree-homogeneous");
  if (pp > m.n || pp < 0)
    throw std::invalid_argument("cy_pv_invert: bidegree out of range");
  std::vector<int> rows = cy_flats(m, pp, qq);
  std::map<int, int> rowix;
  for (int i = 0; i < (int)rows.size(); ++i) rowix[rows[i]] = i;
  std::vector<PVTerm> basis;
  for (int mask = 0; mask < (1 << m.n); ++mask) {
    if (pc(mask) != m.n - pp) continue;
    for (int f = 0; f < m.dim(); ++f)
      if (m.p[f] == 0 && m.q[f] == qq) basis.emplace_back(mask, f);
  }
  Matrix P((int)rows.size(), (int)basis.size());
  for (int j = 0; j < (int)basis.size(); ++j) {
    SparseVec col = cy_mul(m, flat_sv(basis[j].second),
                           cy_mask_contract(m, basis[j].first, m.phi));
    for (auto& [i, c] : col) {
      auto it = rowix.find(i);
      if (it == rowix.end())
        throw std::runtime_error("cy_pv_invert: transport column not homogeneous");
      P.at(it->second, j) = c;
    }
  }
  Matrix b((int)rows.size(), 1);
  for (auto& [i, c] : a) b.at(rowix.at(i), 0) = c;
  auto x = solve(P, b);
  if (!x)
    throw std::runtime_error("cy_pv_invert: element has no polyvector preimage");
  PVVec out;
  for (int j = 0; j < (int)basis.size(); ++j)
    if (!x->at(j, 0).is_zero()) out[basis[j]] = x->at(j, 0);
  return out;
}

PVVec cy_pv_mul(const CYModel& m, const PVVec& a, const PVVec& b) {
  PVVec out;
  for (auto& [t1, c1] : a)
    for (auto& [t2, c2] : b) {
      auto [m1, f1] = t1;
      auto [m2, f2] = t2;
      if (m1 & m2) continue;
      int sg = merge_sign(m1, m2) * ((pc(m1) * m.q[f2]) % 2 ? -1 : 1);
      SparseVec w = cy_mul(m, flat_sv(f1), flat_sv(f2));
      for (auto& [g, cw] : w) {
        PVTerm key{m1 | m2, g};
        auto it = out.find(key);
        Scalar add = c1 * c2 * cw * Scalar(sg);
        if (it == out.end()) {
          if (!add.is_zero()) out[key] = add;
        } else {
          it->second = it->second + add;
          if (it->second.is_zero()) out.erase(it);
        }
      }
    }
  return out;
}

int cy_pv_qdeg(const CYModel& m, const PVVec& v) {
  int qq = 0;
  bool first = true;
  for (auto& [t, c] : v) {
    if (first) {
      qq = m.q[t.second];
      first = false;
    } else if (m.q[t.second] != qq) {
      throw std::invalid_argument("polyvector has mixed coefficient degree");
    }
  }
  return qq;
}

PVVec cy_tangent_pv(const CYModel& m, const CYTangent& t) {
  if ((int)t.coeff.size() != m.n)
    throw std::invalid_argument("cy_tangent_pv: coefficient count != n");
  PVVec out;
  for (int j = 0; j < m.n; ++j)
    for (auto& [f, c] : t.coeff[j]) {
      PVTerm key{1 << j, f};
      auto it = out.find(key);
      if (it == out.end())
        out[key] = c;
      else {
        it->second = it->second + c;
        if (it->second.is_zero()) out.erase(it);
      }
    }
  return out;
}

// ---- products --------------------------------------------------------------

namespace {

// Split into bidegree-homogeneous parts.
std::map<std::pair<int, int>, SparseVec> parts_of(const CYModel& m, const SparseVec& x) {
  std::map<std::pair<int, int>, SparseVec> out;
  for (auto& [i, c] : x) out[{m.p[i], m.q[i]}][i] = c;
  return out;
}

}  // namespace

SparseVec cy_star(const CYModel& m, const SparseVec& a, const SparseVec& b) {
  SparseVec out;
  auto pa = parts_of(m, a), pb = parts_of(m, b);
  for (auto& [da, xa] : pa)
    for (auto& [db, xb] : pb) {
      if (da.first + db.first < m.n) continue;  // frame slots would collide
      if (da.first + db.first > 2 * m.n || da.second + db.second > m.n) continue;
      PVVec va = cy_pv_invert(m, xa), vb = cy_pv_invert(m, xb);
      sv_axpy(out, Scalar(1), cy_pv_realize(m, cy_pv_mul(m, va, vb)));
    }
  return out;
}

SparseVec cy_star_word(const CYModel& m, const std::vector<SparseVec>& as) {
  if (as.empty()) throw std::invalid_argument("cy_star_word: empty word");
  SparseVec acc = as[0];
  for (int i = 1; i < (int)as.size(); ++i) acc = cy_star(m, acc, as[i]);
  return acc;
}

SparseVec cy_sharp(const CYModel& m, const SparseVec& a, const SparseVec& b) {
  SparseVec ds = op_apply(m.dpar, cy_star(m, a, b));
  SparseVec out = sv_scaled(
      op_apply(m.dpar, op_apply(m.lam, op_apply(m.green, ds))), Scalar::i());
  if (!op_apply(m.dpar, out).empty())
    throw std::runtime_error("cy_sharp: output is not closed under the (1,0)-differential");
  if (op_apply(m.dbar, a).empty() && op_apply(m.dbar, b).empty()) {
    if (op_apply(m.dbar, out) != ds)
      throw std::runtime_error(
          "cy_sharp: smoothing identity dbar(a#b) = dpar(a*b) failed");
  }
  return out;
}

SparseVec cy_lie_apply(const CYModel& m, const PVVec& v, const SparseVec& x) {
  int qv = cy_pv_qdeg(m, v);
  SparseVec out = cy_d(m, cy_pv_apply(m, v, x));
  sv_axpy(out, sign_pow(qv), cy_pv_apply(m, v, cy_d(m, x)));
  return out;
}

bool cy_tt_check(const CYModel& m, const PVVec& v, const PVVec& w,
                 SparseVec* boundary_side, SparseVec* bracket_side) {
  int qv = cy_pv_qdeg(m, v), qw = cy_pv_qdeg(m, w);
  SparseVec a = cy_pv_realize(m, v), b = cy_pv_realize(m, w);
  if (!op_apply(m.dpar, a).empty() || !op_apply(m.dpar, b).empty())
    throw std::invalid_argument("cy_tt_check: realized inputs must be closed "
                                "under the (1,0)-differential");
  SparseVec boundary = op_apply(m.dpar, cy_star(m, a, b));
  // [L_v, i_w](Φ), graded commutator with |L_v| = qv, |i_w| = qw - 1.
  SparseVec bracket = cy_lie_apply(m, v, cy_pv_apply(m, w, m.phi));
  sv_axpy(bracket, Scalar(0) - sign_pow((long)qv * (qw - 1)),
          cy_pv_apply(m, w, cy_lie_apply(m, v, m.phi)));
  if (boundary_side) *boundary_side = boundary;
  if (bracket_side) *bracket_side = bracket;
  // Derived identity in these conventions: ∂(a*b) + [L_v, i_w]Φ = 0.
  SparseVec sum = boundary;
  sv_axpy(sum, Scalar(1), bracket);
  return sum.empty();
}

// ---- harmonic structure ----------------------------------------------------

std::vector<int> cy_harmonic_at(const CYModel& m, int pp, int qq) {
  std::vector<int> out;
  for (int k = 0; k < (int)m.harmonic.size(); ++k) {
    int hp, hq;
    if (cy_bidegree(m, m.harmonic[k], hp, hq) && hp == pp && hq == qq)
      out.push_back(k);
  }
  return out;
}

std::vector<Scalar> cy_harmonic_coords(const CYModel& m, const SparseVec& x,
                                       int pp, int qq) {
  std::vector<int> rows = cy_flats(m, pp, qq);
  std::map<int, int> rowix;
  for (int i = 0; i < (int)rows.size(); ++i) rowix[rows[i]] = i;
  std::vector<int> hs = cy_harmonic_at(m, pp, qq);
  std::vector<int> src = cy_flats(m, pp, qq - 1);
  Matrix B((int)rows.size(), (int)hs.size() + (int)src.size());
  for (int j = 0; j < (int)hs.size(); ++j)
    for (auto& [i, c] : m.harmonic[hs[j]]) B.at(rowix.at(i), j) = c;
  for (int j = 0; j < (int)src.size(); ++j)
    for (auto& [i, c] : m.dbar[src[j]]) {
      auto it = rowix.find(i);
      if (it == rowix.end())
        throw std::runtime_error("cy_harmonic_coords: dbar not bidegree (0,1)");
      B.at(it->second, (int)hs.size() + j) = c;
    }
  Matrix b((int)rows.size(), 1);
  for (auto& [i, c] : x) {
    auto it = rowix.find(i);
    if (it != rowix.end()) b.at(it->second, 0) = c;
  }
  auto sol = solve(B, b);
  if (!sol)
    throw std::invalid_argument(
        "cy_harmonic_coords: element is not harmonic modulo the dbar-image");
  std::vector<Scalar> out;
  for (int j = 0; j < (int)hs.size(); ++j) out.push_back(sol->at(j, 0));
  return out;
}

SparseVec cy_harmonic_project(const CYModel& m, const SparseVec& x) {
  SparseVec out;
  for (auto& [deg, part] : parts_of(m, x)) {
    auto [pp, qq] = deg;
    std::vector<Scalar> coords = cy_harmonic_coords(m, part, pp, qq);
    std::vector<int> hs = cy_harmonic_at(m, pp, qq);
    for (int j = 0; j < (int)hs.size(); ++j)
      sv_axpy(out, coords[j], m.harmonic[hs[j]]);
  }
  return out;
}

// ---- validation ------------------------------------------------------------

bool CYCheck::ok() const {
  for (auto& [name, v] : items) {
    if (name == "smoothing-contract" || name == "adjoint-contract") continue;
    if (!v) return false;
  }
  return true;
}

std::string CYCheck::first_fail() const {
  for (auto& [name, v] : items)
    if (!v) return name;
  return "";
}

CYCheck cy_validate(const CYModel& m) {
  CYCheck rep;
  auto add = [&](const std::string& name, auto&& fn) {
    bool v = false;
    try {
      v = fn();
    } catch (...) {
      v = false;
    }
    rep.items.emplace_back(name, v);
    return v;
  };
  int d = m.dim();
  if (m.kind != CYKind::table) {
    add("table-structure", [] { return false; });
    rep.sharp_ok = false;
    return rep;
  }

  add("unit", [&] {
    if (m.unit < 0 || m.unit >= d || m.p[m.unit] || m.q[m.unit]) return false;
    for (int a = 0; a < d; ++a)
      if (m.wedge[m.unit][a] != flat_sv(a) || m.wedge[a][m.unit] != flat_sv(a))
        return false;
    return true;
  });

  add("wedge-bidegree", [&] {
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        if (!support_at(m, m.wedge[a][b], m.p[a] + m.p[b], m.q[a] + m.q[b]) &&
            !m.wedge[a][b].empty())
          return false;
    return true;
  });

  add("wedge-commutative", [&] {
    for (int a = 0; a < d; ++a)
      for (int b = 0; b <= a; ++b) {
        long s = (long)(m.p[a] + m.q[a]) * (m.p[b] + m.q[b]);
        if (m.wedge[b][a] != sv_scaled(m.wedge[a][b], sign_pow(s))) return false;
      }
    return true;
  });

  add("wedge-associative", [&] {
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        const SparseVec& ab = m.wedge[a][b];
        for (int c = 0; c < d; ++c) {
          if (ab.empty() && m.wedge[b][c].empty()) continue;
          if (cy_mul(m, ab, flat_sv(c)) != cy_mul(m, flat_sv(a), m.wedge[b][c]))
            return false;
        }
      }
    return true;
  });

  add("differential-bidegree", [&] {
    if ((int)m.dpar.size() != d || (int)m.dbar.size() != d) return false;
    for (int a = 0; a < d; ++a) {
      if (!support_at(m, m.dpar[a], m.p[a] + 1, m.q[a])) return false;
      if (!support_at(m, m.dbar[a], m.p[a], m.q[a] + 1)) return false;
    }
    return true;
  });

  add("differential-squares", [&] {
    for (int a = 0; a < d; ++a) {
      if (!op_apply(m.dpar, m.dpar[a]).empty()) return false;
      if (!op_apply(m.dbar, m.dbar[a]).empty()) return false;
      SparseVec mix = op_apply(m.dpar, m.dbar[a]);
      sv_axpy(mix, Scalar(1), op_apply(m.dbar, m.dpar[a]));
      if (!mix.empty()) return false;
    }
    return true;
  });

  add("differential-derivation", [&] {
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        long s = m.p[a] + m.q[a];
        for (const OpCols* dd : {&m.dpar, &m.dbar}) {
          SparseVec lhs = op_apply(*dd, m.wedge[a][b]);
          SparseVec rhs = cy_mul(m, (*dd)[a], flat_sv(b));
          sv_axpy(rhs, sign_pow(s), cy_mul(m, flat_sv(a), (*dd)[b]));
          if (lhs != rhs) return false;
        }
      }
    return true;
  });

  add("volume-type", [&] {
    return !m.phi.empty() && support_at(m, m.phi, m.n, 0) &&
           op_apply(m.dpar, m.phi).empty() && op_apply(m.dbar, m.phi).empty();
  });

  add("frame-bidegree", [&] {
    if ((int)m.frame.size() != m.n) return false;
    for (auto& C : m.frame) {
      if ((int)C.size() != d) return false;
      for (int a = 0; a < d; ++a)
        if (!C[a].empty() && !support_at(m, C[a], m.p[a] - 1, m.q[a]))
          return false;
    }
    return true;
  });

  add("frame-normalized", [&] {
    return cy_mask_contract(m, (1 << m.n) - 1, m.phi) == flat_sv(m.unit);
  });

  add("frame-anticommute", [&] {
    for (int j = 0; j < m.n; ++j)
      for (int k = j; k < m.n; ++k)
        for (int a = 0; a < d; ++a) {
          SparseVec s = op_apply(m.frame[j], m.frame[k][a]);
          sv_axpy(s, Scalar(1), op_apply(m.frame[k], m.frame[j][a]));
          if (!s.empty()) return false;
        }
    return true;
  });

  add("frame-dbar", [&] {
    for (int j = 0; j < m.n; ++j)
      for (int a = 0; a < d; ++a) {
        SparseVec s = op_apply(m.frame[j], m.dbar[a]);
        sv_axpy(s, Scalar(1), op_apply(m.dbar, m.frame[j][a]));
        if (!s.empty()) return false;
      }
    return true;
  });

  add("smoothing-bidegree", [&] {
    if ((int)m.lam.size() != d || (int)m.green.size() != d) return false;
    if (m.has_dbar_adj && (int)m.dbar_adj.size() != d) return false;
    for (int a = 0; a < d; ++a) {
      if (!m.lam[a].empty() && !support_at(m, m.lam[a], m.p[a] - 1, m.q[a] - 1))
        return false;
      if (!m.green[a].empty() && !support_at(m, m.green[a], m.p[a], m.q[a]))
        return false;
      if (m.has_dbar_adj && !m.dbar_adj[a].empty() &&
          !support_at(m, m.dbar_adj[a], m.p[a], m.q[a] - 1))
        return false;
    }
    return true;
  });

  add("transport-harmonic", [&] {
    for (auto& h : m.harmonic) {
      PVVec v = cy_pv_invert(m, h);
      if (cy_pv_realize(m, v) != h) return false;
    }
    return true;
  });

  add("harmonic-bidegree", [&] {
    int pp, qq;
    for (auto& h : m.harmonic)
      if (!cy_bidegree(m, h, pp, qq)) return false;
    return true;
  });

  add("harmonic-closed", [&] {
    for (auto& h : m.harmonic)
      if (!op_apply(m.dbar, h).empty()) return false;
    return true;
  });

  add("harmonic-complement", [&] {
    for (int pp = 0; pp <= m.n; ++pp)
      for (int qq = 0; qq <= m.n; ++qq) {
        std::vector<int> flats = cy_flats(m, pp, qq);
        if (flats.empty()) continue;
        Matrix emb = flats_embed(d, flats);
        Matrix K = emb * kernel_basis(op_on_flats(m, m.dbar, flats));
        Subspace ker = make_subspace(d, K);
        std::vector<int> hs = cy_harmonic_at(m, pp, qq);
        Matrix H(d, (int)hs.size());
        for (int j = 0; j < (int)hs.size(); ++j)
          for (auto& [i, c] : m.harmonic[hs[j]]) H.at(i, j) = c;
        Subspace hsub = make_subspace(d, H);
        Subspace img = make_subspace(
            d, op_on_flats(m, m.dbar, cy_flats(m, pp, qq - 1)));
        if (intersect(hsub, img).dim() != 0) return false;
        if (!subspace_eq(sum(hsub, img), ker)) return false;
      }
    return true;
  });

  add("harmonic-adjoint", [&] {
    if (!m.has_dbar_adj) return true;
    for (int pp = 0; pp <= m.n; ++pp)
      for (int qq = 0; qq <= m.n; ++qq) {
        std::vector<int> flats = cy_flats(m, pp, qq);
        if (flats.empty()) continue;
        Matrix emb = flats_embed(d, flats);
        Matrix stacked = op_on_flats(m, m.dbar, flats)
                             .vcat(op_on_flats(m, m.dbar_adj, flats));
        Matrix K = emb * kernel_basis(stacked);
        std::vector<int> hs = cy_harmonic_at(m, pp, qq);
        Matrix H(d, (int)hs.size());
        for (int j = 0; j < (int)hs.size(); ++j)
          for (auto& [i, c] : m.harmonic[hs[j]]) H.at(i, j) = c;
        if (!subspace_eq(make_subspace(d, K), make_subspace(d, H))) return false;
      }
    return true;
  });

  add("trace-support", [&] {
    for (auto& [i, c] : m.trace)
      if (m.p[i] != m.n || m.q[i] != m.n) return false;
    return true;
  });

  add("trace-closed", [&] {
    for (int a = 0; a < d; ++a)
      if (!cy_trace(m, m.dpar[a]).is_zero() ||
          !cy_trace(m, m.dbar[a]).is_zero())
        return false;
    return true;
  });

  add("trace-nondegenerate", [&] {
    std::vector<int> hs;
    for (int k = 0; k < (int)m.harmonic.size(); ++k) {
      int hp, hq;
      if (cy_bidegree(m, m.harmonic[k], hp, hq) && hp + hq == m.n)
        hs.push_back(k);
    }
    if (hs.empty()) return true;
    Matrix P((int)hs.size(), (int)hs.size());
    for (int i = 0; i < (int)hs.size(); ++i)
      for (int j = 0; j < (int)hs.size(); ++j)
        P.at(i, j) = cy_pair(m, m.harmonic[hs[i]], m.harmonic[hs[j]]);
    return rank(P) == (int)hs.size();
  });

  add("hodge-classes", [&] {
    for (int k = 0; k <= 2 * m.n; ++k) {
      std::vector<int> flats, prev;
      for (int i = 0; i < d; ++i) {
        if (m.p[i] + m.q[i] == k) flats.push_back(i);
        if (m.p[i] + m.q[i] == k - 1) prev.push_back(i);
      }
      if (flats.empty()) continue;
      Matrix D(d, (int)flats.size());
      for (int j = 0; j < (int)flats.size(); ++j)
        for (auto& [i, c] : cy_d(m, flat_sv(flats[j]))) D.at(i, j) = c;
      Matrix K = flats_embed(d, flats) * kernel_basis(D);
      std::vector<int> hs;
      for (int h = 0; h < (int)m.harmonic.size(); ++h) {
        int hp, hq;
        if (cy_bidegree(m, m.harmonic[h], hp, hq) && hp + hq == k) hs.push_back(h);
      }
      Matrix H(d, (int)hs.size());
      for (int j = 0; j < (int)hs.size(); ++j)
        for (auto& [i, c] : m.harmonic[hs[j]]) H.at(i, j) = c;
      Matrix img(d, (int)prev.size());
      for (int j = 0; j < (int)prev.size(); ++j)
        for (auto& [i, c] : cy_d(m, flat_sv(prev[j]))) img.at(i, j) = c;
      if (!contains(make_subspace(d, H.hcat(img)), K)) return false;
    }
    return true;
  });

  bool tangent_ok = add("tangent-type", [&] {
    std::vector<SparseVec> cols;
    for (auto& t : m.tangent) {
      if (t.q < 0 || (int)t.coeff.size() != m.n) return false;
      for (auto& cf : t.coeff)
        for (auto& [i, c] : cf)
          if (m.p[i] != 0 || m.q[i] != t.q) return false;
      SparseVec form = cy_pv_realize(m, cy_tangent_pv(m, t));
      if (!op_apply(m.dpar, form).empty()) return false;
      cols.push_back(form);
    }
    return m.tangent.empty() ||
           sparse_rank(cols, d) == (int)m.tangent.size();
  });

  CYTangentComplex tc;
  bool closure_ok = add("tangent-closure", [&] {
    if (m.tangent.empty()) return true;
    if (!tangent_ok) return false;
    int nt = (int)m.tangent.size();
    Matrix forms(d, nt);
    std::vector<PVVec> pvs;
    for (int r = 0; r < nt; ++r) {
      pvs.push_back(cy_tangent_pv(m, m.tangent[r]));
      for (auto& [i, c] : cy_pv_realize(m, pvs[r])) forms.at(i, r) = c;
    }
    for (int r = 0; r < nt; ++r) {
      Matrix rhs(d, 1);
      for (auto& [i, c] : op_apply(m.dbar, col_to_sv(forms.col(r), 0)))
        rhs.at(i, 0) = c;
      if (!solve(forms, rhs)) return false;
    }
    for (int r = 0; r < nt; ++r)
      for (int s = 0; s < nt; ++s) {
        SparseVec rhs = cy_lie_apply(m, pvs[r], cy_pv_apply(m, pvs[s], m.phi));
        sv_axpy(rhs, Scalar(0) - sign_pow((long)m.tangent[r].q *
                                          (m.tangent[s].q - 1)),
                cy_pv_apply(m, pvs[s], cy_lie_apply(m, pvs[r], m.phi)));
        if (!solve(forms, sv_to_col(rhs, d))) return false;
      }
    return true;
  });

  bool algebra_ok = add("tangent-algebra", [&] {
    if (m.tangent.empty()) return true;
    if (!closure_ok) return false;
    tc = cy_tangent_complex(m);
    return true;
  });

  add("tangent-contract-compat", [&] {
    if (m.tangent.empty()) return true;
    if (!algebra_ok) return false;
    int nt = (int)m.tangent.size();
    std::vector<PVVec> pvs;
    for (auto& t : m.tangent) pvs.push_back(cy_tangent_pv(m, t));
    for (int r = 0; r < nt; ++r)
      for (int s = 0; s < nt; ++s) {
        // coefficients of [t_r, t_s] in the DGLA table
        const SparseVec& br = tc.g.bracket[tc.t2g[r]][tc.t2g[s]];
        long sgn = (long)m.tangent[r].q * (m.tangent[s].q - 1);
        for (int a = 0; a < d; ++a) {
          SparseVec lhs = cy_lie_apply(m, pvs[r], tc.contraction[s][a]);
          sv_axpy(lhs, Scalar(0) - sign_pow(sgn),
                  cy_pv_apply(m, pvs[s], cy_lie_apply(m, pvs[r], flat_sv(a))));
          SparseVec rhs;
          for (auto& [gi, c] : br)
            sv_axpy(rhs, c, tc.contraction[tc.g2t[gi]][a]);
          if (lhs != rhs) return false;
        }
      }
    return true;
  });

  bool smoothing = add("smoothing-contract", [&] {
    for (int pp = 0; pp <= m.n; ++pp)
      for (int qq = 0; qq <= m.n; ++qq) {
        std::vector<int> flats = cy_flats(m, pp, qq);
        if (flats.empty()) continue;
        Matrix emb = flats_embed(d, flats);
        Subspace kerp = make_subspace(
            d, emb * kernel_basis(op_on_flats(m, m.dpar, flats)));
        Subspace kerb = make_subspace(
            d, emb * kernel_basis(op_on_flats(m, m.dbar, flats)));
        Matrix im = op_on_flats(m, m.dpar, cy_flats(m, pp - 1, qq))
                        .hcat(op_on_flats(m, m.dbar, cy_flats(m, pp, qq - 1)));
        Subspace V = intersect(intersect(kerp, kerb), make_subspace(d, im));
        for (int j = 0; j < V.dim(); ++j) {
          SparseVec c = col_to_sv(V.basis, j);
          SparseVec got = sv_scaled(
              op_apply(m.dbar,
                       op_apply(m.dpar, op_apply(m.lam, op_apply(m.green, c)))),
              Scalar::i());
          if (got != c) return false;
        }
      }
    return true;
  });

  bool adjoint = add("adjoint-contract", [&] {
    if (!m.has_dbar_adj) return true;
    for (int pp = 0; pp <= m.n; ++pp)
      for (int qq = 0; qq <= m.n; ++qq) {
        Matrix im = op_on_flats(m, m.dpar, cy_flats(m, pp - 1, qq))
                        .hcat(op_on_flats(m, m.dbar, cy_flats(m, pp, qq - 1)));
        Subspace W = make_subspace(d, im);
        for (int j = 0; j < W.dim(); ++j) {
          SparseVec c = col_to_sv(W.basis, j);
          SparseVec g = op_apply(m.green, c);
          SparseVec got = op_apply(m.dbar, op_apply(m.dbar_adj, g));
          sv_axpy(got, Scalar(1), op_apply(m.dbar_adj, op_apply(m.dbar, g)));
          if (got != c) return false;
        }
      }
    return true;
  });

  rep.sharp_ok = smoothing && adjoint;
  return rep;
}

// ---- tangent complex -------------------------------------------------------

CYTangentComplex cy_tangent_complex(const CYModel& m) {
  int nt = (int)m.tangent.size();
  if (!nt) throw std::invalid_argument("cy_tangent_complex: no tangent sections");
  int d = m.dim();
  CYTangentComplex tc;

  std::vector<PVVec> pvs;
  for (auto& t : m.tangent) pvs.push_back(cy_tangent_pv(m, t));
  tc.forms = Matrix(d, nt);
  tc.contraction.resize(nt);
  for (int r = 0; r < nt; ++r) {
    for (auto& [i, c] : cy_pv_realize(m, pvs[r])) tc.forms.at(i, r) = c;
    tc.contraction[r] = OpCols(d);
    for (int a = 0; a < d; ++a)
      tc.contraction[r][a] = cy_pv_apply(m, pvs[r], flat_sv(a));
  }

  std::vector<std::pair<int, std::string>> basis;
  for (int r = 0; r < nt; ++r)
    basis.emplace_back(m.tangent[r].q, idx_prefix(r) + m.tangent[r].name);
  GradedSpace g0 = GradedSpace::make(basis);
  tc.t2g.resize(nt);
  tc.g2t.resize(nt);
  for (int r = 0; r < nt; ++r) {
    tc.t2g[r] = g0.find(idx_prefix(r) + m.tangent[r].name);
    tc.g2t[tc.t2g[r]] = r;
  }

  Matrix delta(nt, nt);
  for (int r = 0; r < nt; ++r) {
    SparseVec db = op_apply(m.dbar, col_to_sv(tc.forms.col(r), 0));
    auto sol = solve(tc.forms, sv_to_col(db, d));
    if (!sol)
      throw std::runtime_error(
          "cy_tangent_complex: sections not closed under dbar");
    for (int u = 0; u < nt; ++u) delta.at(tc.t2g[u], tc.t2g[r]) = sol->at(u, 0);
  }

  std::vector<std::vector<SparseVec>> table(nt, std::vector<SparseVec>(nt));
  std::vector<SparseVec> liephi(nt);
  for (int r = 0; r < nt; ++r) liephi[r] = cy_lie_apply(m, pvs[r], m.phi);
  for (int r = 0; r < nt; ++r)
    for (int s = 0; s < nt; ++s) {
      SparseVec rhs = cy_lie_apply(m, pvs[r], cy_pv_apply(m, pvs[s], m.phi));
      sv_axpy(rhs,
              Scalar(0) - sign_pow((long)m.tangent[r].q * (m.tangent[s].q - 1)),
              cy_pv_apply(m, pvs[s], liephi[r]));
      auto sol = solve(tc.forms, sv_to_col(rhs, d));
      if (!sol)
        throw std::runtime_error(
            "cy_tangent_complex: sections not closed under the bracket");
      SparseVec ent;
      for (int u = 0; u < nt; ++u)
        if (!sol->at(u, 0).is_zero()) ent[tc.t2g[u]] = sol->at(u, 0);
      table[tc.t2g[r]][tc.t2g[s]] = ent;
    }
  tc.g = make_dgla(g0, table, delta);

  std::vector<std::pair<int, std::string>> ebasis;
  for (int j = 0; j < d; ++j)
    ebasis.emplace_back(m.p[j] + m.q[j], idx_prefix(j) + m.names[j]);
  GradedSpace E = GradedSpace::make(ebasis);
  tc.a2e.resize(d);
  tc.e2a.resize(d);
  for (int j = 0; j < d; ++j) {
    tc.a2e[j] = E.find(idx_prefix(j) + m.names[j]);
    tc.e2a[tc.a2e[j]] = j;
  }
  Matrix dE(d, d);
  for (int j = 0; j < d; ++j)
    for (auto& [i, c] : cy_d(m, flat_sv(j))) dE.at(tc.a2e[i], tc.a2e[j]) = c;
  std::vector<Matrix> act(nt);
  for (int gi = 0; gi < nt; ++gi) {
    int r = tc.g2t[gi];
    Matrix L(d, d);
    for (int j = 0; j < d; ++j)
      for (auto& [i, c] : cy_lie_apply(m, pvs[r], flat_sv(j)))
        L.at(tc.a2e[i], tc.a2e[j]) = c;
    act[gi] = L;
  }
  tc.mod = make_gmodule(tc.g, E, dE, act);
  tc.mod_trivial = trivial_gmodule(tc.g, E, dE);
  return tc;
}

// ---- builders --------------------------------------------------------------

CYModel cy_torus(int n) {
  CYModel m;
  m.n = n;
  int N = 1 << n, d = N * N;
  auto idx = [&](int s, int t) { return (s << n) | t; };
  m.names.resize(d);
  m.p.resize(d);
  m.q.resize(d);
  for (int s = 0; s < N; ++s)
    for (int t = 0; t < N; ++t) {
      m.names[idx(s, t)] = exterior_name(n, s, t);
      m.p[idx(s, t)] = pc(s);
      m.q[idx(s, t)] = pc(t);
    }
  m.unit = 0;
  m.wedge.assign(d, std::vector<SparseVec>(d));
  for (int s1 = 0; s1 < N; ++s1)
    for (int t1 = 0; t1 < N; ++t1)
      for (int s2 = 0; s2 < N; ++s2)
        for (int t2 = 0; t2 < N; ++t2) {
          if ((s1 & s2) || (t1 & t2)) continue;
          int sg = merge_sign(s1, s2) * merge_sign(t1, t2) *
                   ((pc(t1) * pc(s2)) % 2 ? -1 : 1);
          m.wedge[idx(s1, t1)][idx(s2, t2)][idx(s1 | s2, t1 | t2)] = Scalar(sg);
        }
  m.dpar = op_zero(d);
  m.dbar = op_zero(d);
  m.lam = op_zero(d);
  m.green = op_zero(d);
  m.has_dbar_adj = true;
  m.dbar_adj = op_zero(d);
  m.phi[idx(N - 1, 0)] = Scalar(1);
  m.frame.assign(n, op_zero(d));
  for (int j = 0; j < n; ++j)
    for (int s = 0; s < N; ++s) {
      if (!(s >> j & 1)) continue;
      for (int t = 0; t < N; ++t)
        m.frame[j][idx(s, t)][idx(s & ~(1 << j), t)] = Scalar(insert_sign(s, j));
    }
  for (int i = 0; i < d; ++i) m.harmonic.push_back(flat_sv(i));
  m.trace[idx(N - 1, N - 1)] = Scalar(1);
  for (int j = 0; j < n; ++j) {
    CYTangent t;
    t.name = "e" + std::to_string(j + 1);
    t.q = 0;
    t.coeff.assign(n, {});
    t.coeff[j] = flat_sv(m.unit);
    m.tangent.push_back(t);
  }
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      CYTangent t;
      t.name = "b" + std::to_string(k + 1) + "*e" + std::to_string(j + 1);
      t.q = 1;
      t.coeff.assign(n, {});
      t.coeff[j] = flat_sv(idx(0, 1 << k));
      m.tangent.push_back(t);
    }
  return m;
}

void cy_attach_block(CYModel& m, int pp, int qq) {
  if (m.kind != CYKind::table)
    throw std::invalid_argument("cy_attach_block: table models only");
  if (pp < 0 || qq < 0 || pp + 1 > m.n || qq + 1 > m.n)
    throw std::invalid_argument("cy_attach_block: bidegree out of range");
  int base = m.dim();
  int dir = (pp + qq) % m.n;
  std::string tag = "blk" + std::to_string(base) + "_";
  int x = base, dx = base + 1, bx = base + 2, dbx = base + 3;
  m.names.insert(m.names.end(),
                 {tag + "x", tag + "dx", tag + "bx", tag + "dbx"});
  m.p.insert(m.p.end(), {pp, pp + 1, pp, pp + 1});
  m.q.insert(m.q.end(), {qq, qq, qq + 1, qq + 1});
  int d = m.dim();
  for (auto& row : m.wedge) row.resize(d);
  m.wedge.resize(d, std::vector<SparseVec>(d));
  for (int k = x; k <= dbx; ++k) {
    m.wedge[m.unit][k] = flat_sv(k);
    m.wedge[k][m.unit] = flat_sv(k);
  }
  m.dpar.resize(d);
  m.dbar.resize(d);
  m.lam.resize(d);
  m.green.resize(d);
  if (m.has_dbar_adj) m.dbar_adj.resize(d);
  for (auto& C : m.frame) C.resize(d);
  m.dpar[x] = flat_sv(dx);
  m.dpar[bx] = flat_sv(dbx);
  m.dbar[x] = flat_sv(bx);
  m.dbar[dx][dbx] = Scalar(-1);
  m.lam[dbx][x] = Scalar::i();
  for (int k = x; k <= dbx; ++k) m.green[k] = flat_sv(k);
  if (m.has_dbar_adj) {
    m.dbar_adj[bx] = flat_sv(x);
    m.dbar_adj[dbx][dx] = Scalar(-1);
  }
  m.frame[dir][dx] = flat_sv(x);
  m.frame[dir][dbx] = flat_sv(bx);
}

CYModel cy_mode_model(int n, int modes) {
  if (modes < 0 || modes > n)
    throw std::invalid_argument("cy_mode_model: need 0 <= modes <= n");
  CYModel m;
  m.n = n;
  int N = 1 << n, d = (modes + 1) * N * N;
  auto idx = [&](int sec, int s, int t) { return ((sec * N + s) << n) | t; };
  m.names.resize(d);
  m.p.resize(d);
  m.q.resize(d);
  for (int sec = 0; sec <= modes; ++sec)
    for (int s = 0; s < N; ++s)
      for (int t = 0; t < N; ++t) {
        std::string base = exterior_name(n, s, t);
        m.names[idx(sec, s, t)] =
            sec == 0 ? base
                     : ("u" + std::to_string(sec) +
                        (base == "1" ? "" : "*" + base));
        m.p[idx(sec, s, t)] = pc(s);
        m.q[idx(sec, s, t)] = pc(t);
      }
  m.unit = 0;
  m.wedge.assign(d, std::vector<SparseVec>(d));
  for (int c1 = 0; c1 <= modes; ++c1)
    for (int c2 = 0; c2 <= modes; ++c2) {
      if (c1 && c2) continue;  // nilpotent sectors: u_i u_j = 0
      for (int s1 = 0; s1 < N; ++s1)
        for (int t1 = 0; t1 < N; ++t1)
          for (int s2 = 0; s2 < N; ++s2)
            for (int t2 = 0; t2 < N; ++t2) {
              if ((s1 & s2) || (t1 & t2)) continue;
              int sg = merge_sign(s1, s2) * merge_sign(t1, t2) *
                       ((pc(t1) * pc(s2)) % 2 ? -1 : 1);
              m.wedge[idx(c1, s1, t1)][idx(c2, s2, t2)]
                     [idx(c1 + c2, s1 | s2, t1 | t2)] = Scalar(sg);
            }
    }
  m.dpar = op_zero(d);
  m.dbar = op_zero(d);
  for (int sec = 1; sec <= modes; ++sec) {
    int dir = sec - 1;
    for (int s = 0; s < N; ++s)
      for (int t = 0; t < N; ++t) {
        if (!(s >> dir & 1))
          m.dpar[idx(sec, s, t)][idx(sec, s | (1 << dir), t)] =
              Scalar(insert_sign(s, dir));
        if (!(t >> dir & 1))
          m.dbar[idx(sec, s, t)][idx(sec, s, t | (1 << dir))] =
              Scalar(insert_sign(t, dir) * (pc(s) % 2 ? -1 : 1));
      }
  }
  m.green = op_zero(d);
  for (int sec = 1; sec <= modes; ++sec)
    for (int s = 0; s < N; ++s)
      for (int t = 0; t < N; ++t)
        m.green[idx(sec, s, t)] = flat_sv(idx(sec, s, t));
  // No adjoint: the declared harmonic basis below is a deliberately
  // non-metric complement (twisted members), so no ∂̄* is compatible with it.
  m.has_dbar_adj = false;
  m.phi[idx(0, N - 1, 0)] = Scalar(1);
  m.frame.assign(n, op_zero(d));
  for (int j = 0; j < n; ++j)
    for (int sec = 0; sec <= modes; ++sec)
      for (int s = 0; s < N; ++s) {
        if (!(s >> j & 1)) continue;
        for (int t = 0; t < N; ++t)
          m.frame[j][idx(sec, s, t)][idx(sec, s & ~(1 << j), t)] =
              Scalar(insert_sign(s, j));
      }
  m.trace[idx(0, N - 1, N - 1)] = Scalar(1);
  // Declared harmonic: the constant sector, with two (n-1,1) members twisted
  // by dbar-exact mode terms when two modes are present (keeps the complement
  // property, makes some transported products interact with the modes).
  for (int s = 0; s < N; ++s)
    for (int t = 0; t < N; ++t) {
      SparseVec h = flat_sv(idx(0, s, t));
      if (n == 3 && modes >= 2) {
        if (s == 0b110 && t == 0b010)  // t2^t3^b2  +  u2*t2^t3^b2
          h[idx(2, s, t)] = Scalar(1);
        if (s == 0b011 && t == 0b001)  // t1^t2^b1  +  u1*t1^t2^b1
          h[idx(1, s, t)] = Scalar(1);
      }
      m.harmonic.push_back(h);
    }
  for (int j = 0; j < n; ++j) {
    CYTangent t;
    t.name = "e" + std::to_string(j + 1);
    t.q = 0;
    t.coeff.assign(n, {});
    t.coeff[j] = flat_sv(m.unit);
    m.tangent.push_back(t);
  }
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      CYTangent t;
      t.name = "b" + std::to_string(k + 1) + "*e" + std::to_string(j + 1);
      t.q = 1;
      t.coeff.assign(n, {});
      t.coeff[j] = flat_sv(idx(0, 0, 1 << k));
      m.tangent.push_back(t);
    }
  // Solve the (-1,-1) operator on each mode sector so the smoothing contract
  // holds: on the both-closed exact part V of a sector, Λ is a preimage of
  // -√-1·c under dbar∘dpar, extended by zero on a canonical complement.
  m.lam = op_zero(d);
  for (int pp = 1; pp <= n; ++pp)
    for (int qq = 1; qq <= n; ++qq) {
      std::vector<int> flats = cy_flats(m, pp, qq);
      if (flats.empty()) continue;
      Matrix emb = flats_embed(d, flats);
      Subspace kerp =
          make_subspace(d, emb * kernel_basis(op_on_flats(m, m.dpar, flats)));
      Subspace kerb =
          make_subspace(d, emb * kernel_basis(op_on_flats(m, m.dbar, flats)));
      Matrix im = op_on_flats(m, m.dpar, cy_flats(m, pp - 1, qq))
                      .hcat(op_on_flats(m, m.dbar, cy_flats(m, pp, qq - 1)));
      Subspace V = intersect(intersect(kerp, kerb), make_subspace(d, im));
      if (V.dim() == 0) continue;
      std::vector<int> src = cy_flats(m, pp - 1, qq - 1);
      Matrix D2(d, (int)src.size());
      for (int j = 0; j < (int)src.size(); ++j)
        for (auto& [i, c] : op_apply(m.dbar, m.dpar[src[j]])) D2.at(i, j) = c;
      auto pre = solve(D2, V.basis.scaled(Scalar(0) - Scalar::i()));
      if (!pre)
        throw std::runtime_error("cy_mode_model: smoothing solve failed");
      // columns of Λ on this bidegree: V-coordinates of each flat
      Subspace C = complement_in(make_subspace(d, emb), V);
      Matrix VB = V.basis.hcat(C.basis);
      for (int f = 0; f < (int)flats.size(); ++f) {
        auto co = solve(VB, flats_embed(d, {flats[f]}));
        if (!co)
          throw std::runtime_error("cy_mode_model: complement solve failed");
        SparseVec col;
        for (int v = 0; v < V.dim(); ++v)
          for (int j = 0; j < (int)src.size(); ++j)
            sv_add(col, src[j], co->at(v, 0) * pre->at(j, v));
        m.lam[flats[f]] = col;
      }
    }
  return m;
}

CYModel cy_poly_torus(int n, int maxdeg) {
  const PolyInfo& pi = poly_info(n, maxdeg);
  CYModel m;
  m.kind = CYKind::poly;
  m.poly_maxdeg = maxdeg;
  m.n = n;
  int N = 1 << n, ne = (int)pi.exps.size();
  int d = ne * N * N;
  m.names.resize(d);
  m.p.resize(d);
  m.q.resize(d);
  for (int e = 0; e < ne; ++e)
    for (int s = 0; s < N; ++s)
      for (int t = 0; t < N; ++t) {
        int i = poly_encode(m, e, s, t);
        std::string mono;
        for (int j = 0; j < n; ++j)
          mono += (j ? "," : "(") + std::to_string(pi.exps[e][j]);
        mono += ")";
        std::string base = exterior_name(n, s, t);
        m.names[i] = "z" + mono + (base == "1" ? "" : "*" + base);
        m.p[i] = pc(s);
        m.q[i] = pc(t);
      }
  m.unit = 0;
  m.dpar = op_zero(d);
  for (int e = 0; e < ne; ++e)
    for (int s = 0; s < N; ++s)
      for (int t = 0; t < N; ++t)
        for (int j = 0; j < n; ++j) {
          if (!pi.exps[e][j] || (s >> j & 1)) continue;
          std::vector<int> down = pi.exps[e];
          down[j] -= 1;
          sv_add(m.dpar[poly_encode(m, e, s, t)],
                 poly_encode(m, pi.index.at(down), s | (1 << j), t),
                 Scalar(pi.exps[e][j] * insert_sign(s, j)));
        }
  m.dbar = op_zero(d);
  m.lam = op_zero(d);
  m.green = op_zero(d);
  m.has_dbar_adj = false;
  m.phi[poly_encode(m, 0, N - 1, 0)] = Scalar(1);
  m.frame.assign(n, op_zero(d));
  for (int j = 0; j < n; ++j)
    for (int e = 0; e < ne; ++e)
      for (int s = 0; s < N; ++s) {
        if (!(s >> j & 1)) continue;
        for (int t = 0; t < N; ++t)
          m.frame[j][poly_encode(m, e, s, t)]
                    [poly_encode(m, e, s & ~(1 << j), t)] =
              Scalar(insert_sign(s, j));
      }
  return m;
}

int cy_poly_flat(const CYModel& m, int n, const std::vector<int>& expo,
                 int smask, int tmask) {
  const PolyInfo& pi = poly_info(n, m.poly_maxdeg);
  return poly_encode(m, pi.index.at(expo), smask, tmask);
}

}  // namespace forge
