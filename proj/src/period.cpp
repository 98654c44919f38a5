#include "forge/period.hpp"

#include "forge/chain.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace forge {

namespace {

// Extraction sign for removing the factor at 0-indexed position j from a
// wedge word with factor degrees degs: (-1)^{j + d_j + d_j (d_{j+1}+...)}.
// This is the identical rule used by the action term of the twisted Jacobi
// differential; every extraction-type operator in this file routes through
// here so the convention has exactly one source.
Scalar extraction_sign(const std::vector<int>& degs, int j) {
  long ex = j + degs[j];
  for (std::size_t k = j + 1; k < degs.size(); ++k)
    ex += static_cast<long>(degs[k]) * degs[j];
  return (ex % 2 == 0) ? Scalar(1) : Scalar(-1);
}

Scalar sign_of(long ex) { return (ex % 2 == 0) ? Scalar(1) : Scalar(-1); }

// flats of the graded space at each degree, as a cochain complex
CochainComplex space_complex(const GradedSpace& sp, const Matrix& d) {
  CochainComplex cx;
  if (sp.dim() == 0) {
    cx.lo = 0;
    cx.dims = {0};
    return cx;
  }
  int lo = sp.degree(0), hi = sp.degree(sp.dim() - 1);
  cx.lo = lo;
  for (int t = lo; t <= hi; ++t)
    cx.dims.push_back(static_cast<int>(sp.of_degree(t).size()));
  for (int t = lo; t < hi; ++t) {
    std::vector<int> dom = sp.of_degree(t);
    std::vector<int> cod = sp.of_degree(t + 1);
    Matrix dm(static_cast<int>(cod.size()), static_cast<int>(dom.size()));
    for (std::size_t c = 0; c < dom.size(); ++c)
      for (std::size_t r = 0; r < cod.size(); ++r)
        dm.at(static_cast<int>(r), static_cast<int>(c)) = d.at(cod[r], dom[c]);
    cx.d.push_back(std::move(dm));
  }
  return cx;
}

}  // namespace

// ---------------------------------------------------------------------------
// interior multiplication

GMOperator gm_operator(const CYModel& mod, const CYTangentComplex& tc, int m,
                       int hi) {
  GMOperator M;
  M.mod = &mod;
  M.tc = &tc;
  M.m = m;
  M.tw = modular_jacobi_complex(tc.g, tc.mod, m, hi);
  M.triv = modular_jacobi_complex(tc.g, tc.mod_trivial, m, hi);
  M.lo = M.tw.lo;
  M.hi = M.tw.hi;
  if (M.triv.lo != M.lo || M.triv.hi != M.hi)
    throw std::logic_error("gm_operator: twisted/trivial windows differ");

  for (int deg = M.lo; deg <= M.hi + 1; ++deg) {
    const auto& S = M.tw.at(deg);
    if (M.triv.at(deg) != S)
      throw std::logic_error("gm_operator: twisted/trivial slots differ");
    const int dim = static_cast<int>(S.size());

    // single-extraction operator: remove one factor, contract it into the
    // coefficient slot, with the extraction sign
    OpCols m1(dim);
    for (int c = 0; c < dim; ++c) {
      const JacSlot& s = S[c];
      const int i = s.arity;
      if (i == 0) continue;
      std::vector<int> degs(i);
      for (int k = 0; k < i; ++k) degs[k] = tc.g.g.degrees[s.mono[k]];
      long D = 0;
      for (int k = 0; k < i; ++k) D += degs[k];
      for (int j = 0; j < i; ++j) {
        std::vector<int> rest;
        for (int r = 0; r < i; ++r)
          if (r != j) rest.push_back(s.mono[r]);
        // chain-map-pinned contraction sign: (-1)^{j + d_j (d_{j+1}+...) + D + i}
        // with D the total word degree; differs from the action extraction
        // sign by (-1)^{d_j + D + i} because the interior operator is the
        // odd partner of the Lie action under the Cartan identity
        long tj = 0;
        for (int k = j + 1; k < i; ++k) tj += degs[k];
        Scalar sgn = sign_of(j + degs[j] * tj + D + i);
        int tr = tc.g2t[s.mono[j]];
        if (tr < 0) throw std::logic_error("gm_operator: non-tangent factor");
        const SparseVec& col = tc.contraction[tr][tc.e2a[s.e]];
        for (const auto& [af, cv] : col) {
          int t = M.tw.find_slot(deg, i - 1, rest, tc.a2e[af]);
          if (t < 0)
            throw std::logic_error("gm_operator: contraction left the window");
          sv_add(m1[c], t, sgn * cv);
        }
      }
    }

    // exponential: arity strictly drops, so the series ends by arity m
    OpCols acc(dim), pw(dim);
    for (int c = 0; c < dim; ++c) acc[c][c] = pw[c][c] = Scalar(1);
    for (int k = 1; k <= m; ++k) {
      pw = op_compose(m1, pw);
      bool zero = true;
      for (int c = 0; c < dim; ++c) {
        Scalar inv = Scalar::frac(1, k);
        SparseVec scaled = sv_scaled(pw[c], inv);
        pw[c] = std::move(scaled);
        if (!pw[c].empty()) zero = false;
        for (const auto& [r, v] : pw[c]) sv_add(acc[c], r, v);
      }
      if (zero) break;
    }
    M.op.push_back(std::move(acc));
  }
  return M;
}

bool gm_chain_check(const GMOperator& M) {
  for (int deg = M.lo; deg <= M.hi; ++deg) {
    const auto& dtw = M.tw.d[deg - M.tw.lo];
    for (int c = 0; c < static_cast<int>(dtw.size()); ++c) {
      SparseVec lhs = op_apply(M.op[deg + 1 - M.lo], dtw[c]);
      SparseVec rhs = M.triv.apply_d(deg, M.op[deg - M.lo][c]);
      if (lhs != rhs) return false;
    }
  }
  return true;
}

bool gm_hodge_shift(const GMOperator& M) {
  const CYModel& mod = *M.mod;
  for (int deg = M.lo; deg <= M.hi + 1; ++deg) {
    const auto& S = M.tw.at(deg);
    const OpCols& op = M.op[deg - M.lo];
    for (int c = 0; c < static_cast<int>(S.size()); ++c) {
      int psrc = mod.p[M.tc->e2a[S[c].e]];
      for (const auto& [r, v] : op[c])
        if (!v.is_zero() && mod.p[M.tc->e2a[S[r].e]] < psrc - M.m) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// period contraction

SparseVec period_word_form(const CYModel& mod, const CYTangentComplex& tc,
                           const std::vector<int>& mono) {
  SparseVec out = mod.phi;
  // all factors have tangent degree one, whose contraction operators commute,
  // so the application order is immaterial
  for (int flat : mono) {
    if (tc.g.g.degrees[flat] != 1)
      throw std::invalid_argument("period_word_form: factor of degree != 1");
    int tr = tc.g2t[flat];
    if (tr < 0) throw std::logic_error("period_word_form: non-tangent factor");
    out = op_apply(tc.contraction[tr], out);
    if (out.empty()) break;
  }
  return out;
}

SparseVec period_contract(const CYModel& mod, const CYTangentComplex& tc,
                          const JacComplex& J, const SparseVec& v) {
  SparseVec out;
  const auto& S = J.at(0);
  for (const auto& [c, x] : v) {
    if (c < 0 || c >= static_cast<int>(S.size()))
      throw std::invalid_argument("period_contract: coordinate out of range");
    sv_axpy(out, x, period_word_form(mod, tc, S[c].mono));
  }
  return out;
}

std::map<std::pair<int, int>, std::vector<Scalar>> harmonic_split(
    const CYModel& m, const SparseVec& x) {
  std::map<std::pair<int, int>, SparseVec> comp;
  for (const auto& [f, c] : x) comp[{m.p[f], m.q[f]}][f] = c;
  std::map<std::pair<int, int>, std::vector<Scalar>> out;
  for (const auto& [bid, v] : comp) {
    std::vector<Scalar> coords = cy_harmonic_coords(m, v, bid.first, bid.second);
    bool nonzero = false;
    for (const Scalar& s : coords) nonzero = nonzero || !s.is_zero();
    if (nonzero) out[bid] = std::move(coords);
  }
  return out;
}

// ---------------------------------------------------------------------------
// smoothing hypercocycle

namespace {

// Distinct merge trees over the index set `elems` (ascending): every full
// binary tree with these leaves up to swapping siblings, evaluated through
// the smoothing product. Canonical enumeration: the block containing the
// minimum goes left.
void merge_trees(const CYModel& m, const std::vector<SparseVec>& letters,
                 const std::vector<int>& elems, std::vector<SparseVec>& out) {
  if (elems.size() == 1) {
    out.push_back(letters[elems[0]]);
    return;
  }
  int nrest = static_cast<int>(elems.size()) - 1;
  for (int mask = 0; mask < (1 << nrest); ++mask) {
    std::vector<int> left = {elems[0]}, right;
    for (int k = 0; k < nrest; ++k)
      (mask & (1 << k) ? left : right).push_back(elems[k + 1]);
    if (right.empty()) continue;
    std::vector<SparseVec> lv, rv;
    merge_trees(m, letters, left, lv);
    merge_trees(m, letters, right, rv);
    for (const SparseVec& a : lv)
      for (const SparseVec& b : rv) out.push_back(cy_sharp(m, a, b));
  }
}

// set partitions of {0..n-1} into exactly `blocks` nonempty blocks
void partitions_into(int n, int blocks,
                     std::vector<std::vector<std::vector<int>>>& out) {
  std::vector<std::vector<int>> cur;
  auto rec = [&](auto&& self, int next) -> void {
    if (next == n) {
      if (static_cast<int>(cur.size()) == blocks) out.push_back(cur);
      return;
    }
    // every unplaced element can still open a new block at most
    if (static_cast<int>(cur.size()) > blocks) return;
    if (blocks - static_cast<int>(cur.size()) > n - next) return;
    for (auto& b : cur) {
      b.push_back(next);
      self(self, next + 1);
      b.pop_back();
    }
    cur.push_back({next});
    self(self, next + 1);
    cur.pop_back();
  };
  rec(rec, 0);
}

// canonical expansion of a word sum over sorted flat monomials (all letters
// have even total bidegree, so plain sorting carries no sign)
using WordExpansion = std::map<std::vector<int>, Scalar>;

void expand_word(const FormWord& w, WordExpansion& out) {
  std::vector<std::pair<std::vector<int>, Scalar>> acc = {{{}, w.coeff}};
  for (const SparseVec& let : w.letters) {
    std::vector<std::pair<std::vector<int>, Scalar>> next;
    for (const auto& [mono, c] : acc)
      for (const auto& [f, lv] : let) {
        auto m2 = mono;
        m2.push_back(f);
        next.push_back({std::move(m2), c * lv});
      }
    acc = std::move(next);
  }
  for (auto& [mono, c] : acc) {
    std::sort(mono.begin(), mono.end());
    Scalar& dst = out[mono];
    dst = dst + c;
  }
}

WordExpansion expand_sum(const WordSum& ws) {
  WordExpansion out;
  for (const FormWord& w : ws) expand_word(w, out);
  for (auto it = out.begin(); it != out.end();)
    it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

// formwise d̄ of a word sum
WordSum word_dbar(const CYModel& m, const WordSum& ws) {
  WordSum out;
  for (const FormWord& w : ws)
    for (std::size_t t = 0; t < w.letters.size(); ++t) {
      SparseVec db = op_apply(m.dbar, w.letters[t]);
      if (db.empty()) continue;
      FormWord nw = w;
      nw.letters[t] = std::move(db);
      out.push_back(std::move(nw));
    }
  return out;
}

// pairwise boundary bracket of a word sum: each unordered letter pair is
// replaced by d(x * y)
WordSum word_bracket(const CYModel& m, const WordSum& ws) {
  WordSum out;
  for (const FormWord& w : ws) {
    int j = static_cast<int>(w.letters.size());
    for (int p = 0; p < j; ++p)
      for (int q = p + 1; q < j; ++q) {
        SparseVec br = op_apply(m.dpar, cy_star(m, w.letters[p], w.letters[q]));
        if (br.empty()) continue;
        FormWord nw;
        nw.coeff = w.coeff;
        nw.letters.push_back(std::move(br));
        for (int r = 0; r < j; ++r)
          if (r != p && r != q) nw.letters.push_back(w.letters[r]);
        out.push_back(std::move(nw));
      }
  }
  return out;
}

}  // namespace

Hypercocycle splitting_lift(const CYModel& m, const std::vector<SparseVec>& a) {
  const int k = static_cast<int>(a.size());
  if (k < 1) throw std::invalid_argument("splitting_lift: empty input");
  for (const SparseVec& x : a) {
    int pp = 0, qq = 0;
    if (!cy_bidegree(m, x, pp, qq) || pp != m.n - 1 || qq != 1)
      throw std::invalid_argument(
          "splitting_lift: input is not homogeneous of bidegree (n-1,1)");
    if (!op_apply(m.dbar, x).empty() || !op_apply(m.dpar, x).empty())
      throw std::invalid_argument("splitting_lift: input is not closed");
  }

  Hypercocycle b;
  b.m = k;
  for (int l = 0; l <= k - 1; ++l) {
    WordSum rung;
    std::vector<std::vector<std::vector<int>>> parts;
    partitions_into(k, k - l, parts);
    for (const auto& part : parts) {
      // one word per choice of a merge tree in every block
      std::vector<std::vector<SparseVec>> choices;
      for (const auto& block : part) {
        std::vector<SparseVec> vals;
        merge_trees(m, a, block, vals);
        choices.push_back(std::move(vals));
      }
      std::vector<int> pick(choices.size(), 0);
      for (;;) {
        FormWord w;
        w.coeff = Scalar(1);
        for (std::size_t i = 0; i < choices.size(); ++i)
          w.letters.push_back(choices[i][pick[i]]);
        rung.push_back(std::move(w));
        std::size_t i = 0;
        while (i < pick.size()) {
          if (++pick[i] < static_cast<int>(choices[i].size())) break;
          pick[i++] = 0;
        }
        if (i == pick.size()) break;
      }
    }
    b.rung.push_back(std::move(rung));
  }

  // ladder check: d̄(rung[l+1]) = pairwise bracket of rung[l]
  for (int l = 0; l + 1 <= k - 1; ++l) {
    WordExpansion lhs = expand_sum(word_dbar(m, b.rung[l + 1]));
    WordExpansion rhs = expand_sum(word_bracket(m, b.rung[l]));
    if (lhs != rhs) {
      std::ostringstream os;
      os << "splitting_lift: smoothing ladder broke between levels " << l
         << " and " << l + 1 << " (" << lhs.size() << " vs " << rhs.size()
         << " expanded monomials)";
      throw std::runtime_error(os.str());
    }
  }
  return b;
}

SparseVec hypercocycle_form(const CYModel& m, const Hypercocycle& b) {
  SparseVec out;
  for (int l = 0; l < static_cast<int>(b.rung.size()); ++l)
    for (const FormWord& w : b.rung[l])
      sv_axpy(out, sign_of(l) * w.coeff, cy_star_word(m, w.letters));
  return out;
}

SparseVec period_coefficient_form(const CYModel& m,
                                  const std::vector<SparseVec>& a) {
  const int k = static_cast<int>(a.size());
  if (k < 1)
    throw std::invalid_argument("period_coefficient_form: empty input");
  long kfact = 1;
  for (int i = 2; i <= k; ++i) kfact *= i;

  SparseVec out;
  // ordered j-tuples of distinct indices; the chain is left-nested through #
  std::vector<int> tuple;
  std::vector<bool> used(k, false);
  auto rec = [&](auto&& self, const SparseVec& chain) -> void {
    int j = static_cast<int>(tuple.size());
    if (j >= 1) {
      long rfact = 1;
      for (int i = 2; i <= k - j; ++i) rfact *= i;
      Scalar wgt = sign_of(j - 1) * Scalar::frac(rfact, kfact);
      std::vector<SparseVec> word = {chain};
      for (int i = 0; i < k; ++i)
        if (!used[i]) word.push_back(a[i]);
      sv_axpy(out, wgt, cy_star_word(m, word));
    }
    if (j == k) return;
    for (int i = 0; i < k; ++i) {
      if (used[i]) continue;
      used[i] = true;
      tuple.push_back(i);
      self(self, j == 0 ? a[i] : cy_sharp(m, chain, a[i]));
      tuple.pop_back();
      used[i] = false;
    }
  };
  rec(rec, SparseVec{});
  return out;
}

std::map<std::pair<int, int>, std::vector<Scalar>> period_coefficient(
    const CYModel& m, const std::vector<SparseVec>& a) {
  return harmonic_split(m, period_coefficient_form(m, a));
}

bool period_consistency_check(const CYModel& m,
                              const std::vector<SparseVec>& a) {
  Hypercocycle b = splitting_lift(m, a);
  auto tower = harmonic_split(m, hypercocycle_form(m, b));
  auto closed = harmonic_split(m, period_coefficient_form(m, a));
  return tower == closed;
}

// ---------------------------------------------------------------------------
// contraction towers

ContractionTower contraction_chain_map(const DGLA& g, const GModule& F,
                                       const GModule& T,
                                       const std::vector<Matrix>& table,
                                       int m) {
  if (m < 1)
    throw std::invalid_argument("contraction_chain_map: order must be >= 1");
  ContractionTower t;
  t.g = &g;
  t.m = m;
  t.from = modular_jacobi_complex(g, F, m, 2);
  t.to = modular_jacobi_complex(g, T, std::max(m - 1, 1), 3);
  t.lo = t.from.lo;
  t.hi = t.from.hi;

  for (int deg = t.lo; deg <= t.hi + 1; ++deg) {
    const auto& S = t.from.at(deg);
    Matrix mm(t.to.dim(deg + 1), static_cast<int>(S.size()));
    for (int c = 0; c < static_cast<int>(S.size()); ++c) {
      const JacSlot& s = S[c];
      const int i = s.arity;
      if (i == 0 || (m == 1 && i > 1)) continue;
      std::vector<int> degs(i);
      for (int kk = 0; kk < i; ++kk) degs[kk] = g.g.degrees[s.mono[kk]];
      for (int j = 0; j < i; ++j) {
        std::vector<int> rest;
        for (int r = 0; r < i; ++r)
          if (r != j) rest.push_back(s.mono[r]);
        Scalar sgn = extraction_sign(degs, j);
        const Matrix& tab = table[s.mono[j]];
        for (int f = 0; f < T.dim(); ++f) {
          const Scalar& cv = tab.at(f, s.e);
          if (cv.is_zero()) continue;
          int tgt = t.to.find_slot(deg + 1, i - 1, rest, f);
          if (tgt < 0)
            throw std::logic_error(
                "contraction_chain_map: target slot out of window");
          mm.at(tgt, c) = mm.at(tgt, c) + sgn * cv;
        }
      }
    }
    t.map.push_back(std::move(mm));
  }
  return t;
}

Matrix contraction_defect(const ContractionTower& t, int deg) {
  // degree +1 map: the chain condition is anticommutation
  Matrix a = t.to.diff_dense(deg + 1) * t.map[deg - t.lo];
  Matrix b = t.map[deg + 1 - t.lo] * t.from.diff_dense(deg);
  return a + b;
}

bool contraction_strict(const ContractionTower& t) {
  for (int deg = t.lo; deg <= t.hi; ++deg)
    if (!contraction_defect(t, deg).is_zero()) return false;
  return true;
}

bool contraction_defect_exact(const ContractionTower& t) {
  for (int deg = t.lo; deg <= t.hi; ++deg) {
    Matrix d = contraction_defect(t, deg);
    if (d.is_zero()) continue;
    if (!solve(t.to.diff_dense(deg + 1), d).has_value()) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// obstruction pairing

VanishingReport obstruction_pairing_check(const ModelBundle& b, int m) {
  VanishingReport rep;
  rep.m = m;
  DGLA g = bundle_dgla(b);

  // span of the obstruction classes of all orders <= m inside H^2
  MCExpansion exp = mc_expand(g, m);
  Matrix stacked;
  for (const Matrix& om : exp.omega)
    stacked = (stacked.rows == 0) ? om : stacked.hcat(om);
  Matrix ob = (stacked.rows == 0) ? Matrix(0, 0) : image_basis(stacked);
  rep.ob_dim = ob.cols;

  // cochain representatives of the image basis inside degree-two flats
  SlotSplit h2 = dgla_h_split(g, 2);
  std::vector<int> deg2 = g.g.of_degree(2);
  std::vector<SparseVec> reps;
  for (int c = 0; c < ob.cols; ++c) {
    Matrix slot = h2.C.basis * ob.take_cols({c});
    SparseVec rep2;
    for (int r = 0; r < slot.rows; ++r)
      if (!slot.at(r, 0).is_zero()) rep2[deg2[r]] = slot.at(r, 0);
    reps.push_back(std::move(rep2));
  }

  rep.composite_zero = true;
  for (const RawContraction& rc : b.contractions) {
    const RawModule* fm = b.find_module(rc.from);
    const RawModule* tm = b.find_module(rc.to);
    if (!fm || !tm) throw std::logic_error("obstruction_pairing_check: refs");
    CochainComplex fc = space_complex(fm->E, fm->dE);
    CochainComplex tc = space_complex(tm->E, tm->dE);
    for (std::size_t ci = 0; ci < reps.size(); ++ci) {
      // the contraction operator of the representative
      Matrix iz(tm->E.dim(), fm->E.dim());
      for (const auto& [flat, cv] : reps[ci]) iz = iz + rc.table[flat].scaled(cv);
      if (!iz.is_zero()) rep.cochain_nonzero = true;
      // induced maps H^t(from) -> H^{t+2}(to)
      for (int t = fc.lo; t <= fc.hi(); ++t) {
        SlotSplit sf = slot_split(fc, t);
        if (sf.h_dim() == 0) continue;
        if (!tc.in_range(t + 2)) continue;
        SlotSplit st = slot_split(tc, t + 2);
        if (st.h_dim() == 0) continue;
        // cocycle representatives in module flats, pushed through iz
        std::vector<int> fdeg = fm->E.of_degree(t);
        std::vector<int> tdeg = tm->E.of_degree(t + 2);
        Matrix zf(fm->E.dim(), sf.h_dim());
        for (int cc = 0; cc < sf.h_dim(); ++cc)
          for (int r = 0; r < sf.C.basis.rows; ++r)
            zf.at(fdeg[r], cc) = sf.C.basis.at(r, cc);
        Matrix img = iz * zf;
        Matrix islot(static_cast<int>(tdeg.size()), img.cols);
        for (int cc = 0; cc < img.cols; ++cc) {
          for (int r = 0; r < img.rows; ++r) {
            if (img.at(r, cc).is_zero()) continue;
            auto it = std::find(tdeg.begin(), tdeg.end(), r);
            if (it == tdeg.end())
              throw std::logic_error(
                  "obstruction_pairing_check: contraction image off degree");
            islot.at(static_cast<int>(it - tdeg.begin()), cc) = img.at(r, cc);
          }
        }
        Matrix cls = cohomology_class(tc, st, islot);
        std::ostringstream os;
        os << rc.from << " -> " << rc.to << ", class " << ci << ", H^" << t
           << " -> H^" << t + 2 << ": "
           << (cls.is_zero() ? "vanishes" : "NONZERO");
        rep.lines.push_back(os.str());
        if (!cls.is_zero()) rep.composite_zero = false;
      }
    }
  }
  return rep;
}

}  // namespace forge
