#include "forge/jacobi.hpp"

#include "forge/testrng.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace forge {

namespace {

int min_degree_or(const GradedSpace& V, int fallback) {
  int m = fallback;
  bool first = true;
  for (int d : V.degrees) {
    if (first || d < m) m = d;
    first = false;
  }
  return m;
}

int max_degree_or(const GradedSpace& V, int fallback) {
  int m = fallback;
  bool first = true;
  for (int d : V.degrees) {
    if (first || d > m) m = d;
    first = false;
  }
  return m;
}

bool odd(int n) { return n % 2 != 0; }

// kernel basis plus the list of free columns, from sparse columns
struct SparseKernel {
  Matrix basis;                // ncols x nfree, identical to kernel_basis
  std::vector<int> free_cols;  // ascending
};

SparseKernel sparse_kernel_with_frees(const std::vector<SparseVec>& cols, int nrows) {
  int ncols = static_cast<int>(cols.size());
  std::vector<SRow> rows(nrows);
  for (int c = 0; c < ncols; ++c)
    for (const auto& [r, v] : cols[c]) rows[r].push_back({c, v});
  SparseEchelon e = sparse_rref(std::move(rows), ncols);
  SparseKernel out;
  {
    std::size_t p = 0;
    for (int c = 0; c < ncols; ++c) {
      if (p < e.pivots.size() && e.pivots[p] == c)
        ++p;
      else
        out.free_cols.push_back(c);
    }
  }
  out.basis = Matrix(ncols, static_cast<int>(out.free_cols.size()));
  for (std::size_t j = 0; j < out.free_cols.size(); ++j) {
    int f = out.free_cols[j];
    out.basis.at(f, static_cast<int>(j)) = Scalar(1);
    for (std::size_t r = 0; r < e.pivots.size(); ++r) {
      auto it = std::lower_bound(
          e.rows[r].begin(), e.rows[r].end(), f,
          [](const std::pair<int, Scalar>& ent, int col) { return ent.first < col; });
      if (it != e.rows[r].end() && it->first == f && !it->second.is_zero())
        out.basis.at(e.pivots[r], static_cast<int>(j)) = -it->second;
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// complexes

int JacComplex::dim(int deg) const {
  if (deg < lo || deg > hi + 1) return 0;
  return static_cast<int>(slots[deg - lo].size());
}

const std::vector<JacSlot>& JacComplex::at(int deg) const {
  static const std::vector<JacSlot> empty;
  if (deg < lo || deg > hi + 1) return empty;
  return slots[deg - lo];
}

int JacComplex::trunc_dim(int deg, int k) const {
  if (deg < lo || deg > hi + 1) return 0;
  const auto& S = slots[deg - lo];
  auto it = std::upper_bound(S.begin(), S.end(), k,
                             [](int kk, const JacSlot& s) { return kk < s.arity; });
  return static_cast<int>(it - S.begin());
}

int JacComplex::find_slot(int deg, int arity, const std::vector<int>& mono, int e) const {
  if (deg < lo || deg > hi + 1) return -1;
  const auto& S = slots[deg - lo];
  auto before = [&](const JacSlot& s) {
    if (s.arity != arity) return s.arity < arity;
    if (s.mono != mono) return s.mono < mono;
    return s.e < e;
  };
  auto it = std::partition_point(S.begin(), S.end(), before);
  if (it == S.end()) return -1;
  if (it->arity != arity || it->mono != mono || it->e != e) return -1;
  return static_cast<int>(it - S.begin());
}

Matrix JacComplex::diff_dense(int deg) const {
  Matrix out(dim(deg + 1), dim(deg));
  if (deg < lo || deg > hi) return out;
  const auto& cols = d[deg - lo];
  for (int c = 0; c < static_cast<int>(cols.size()); ++c)
    for (const auto& [r, v] : cols[c]) out.at(r, c) = v;
  return out;
}

SparseVec JacComplex::apply_d(int deg, const SparseVec& v) const {
  SparseVec out;
  if (deg < lo || deg > hi) return out;
  const auto& cols = d[deg - lo];
  for (const auto& [c, x] : v) sv_axpy(out, x, cols[c]);
  return out;
}

namespace {

JacComplex build_jacobi(const DGLA& g, const GModule* mod, int m, int hi) {
  if (m < 1) throw std::invalid_argument("jacobi: truncation order must be at least 1");
  if (hi < 1) throw std::invalid_argument("jacobi: window top must be at least 1");
  JacComplex J;
  J.g = &g;
  J.mod = mod;
  J.m = m;
  J.hi = hi;
  int mindg = min_degree_or(g.g, 1);
  int minde = 0, maxde = 0;
  if (mod) {
    minde = min_degree_or(mod->E, 0);
    maxde = max_degree_or(mod->E, 0);
  }
  J.lo = std::min(-1, m * std::min(0, mindg - 1) + (mod ? std::min(0, minde) : 0));
  J.slots.resize(hi + 1 - J.lo + 1);
  for (int deg = J.lo; deg <= hi + 1; ++deg) {
    auto& S = J.slots[deg - J.lo];
    int a0 = mod ? 0 : 1;
    for (int i = a0; i <= m; ++i) {
      if (i == 0) {
        for (int e = 0; e < mod->dim(); ++e)
          if (mod->E.degrees[e] == deg) S.push_back({0, {}, e});
        continue;
      }
      int tmin = deg + i - (mod ? maxde : 0);
      int tmax = deg + i - (mod ? minde : 0);
      PowerSpace P = power_space_window(g.g, PowerKind::exterior, i, tmin, tmax);
      for (int mi = 0; mi < P.dim(); ++mi) {
        if (!mod) {
          S.push_back({i, P.monos[mi], -1});
        } else {
          int need = deg + i - P.mono_degree[mi];
          for (int e = 0; e < mod->dim(); ++e)
            if (mod->E.degrees[e] == need) S.push_back({i, P.monos[mi], e});
        }
      }
    }
  }

  // differential
  J.d.resize(hi - J.lo + 1);
  for (int deg = J.lo; deg <= hi; ++deg) {
    auto& cols = J.d[deg - J.lo];
    const auto& S = J.slots[deg - J.lo];
    cols.resize(S.size());
    for (int c = 0; c < static_cast<int>(S.size()); ++c) {
      const JacSlot& s = S[c];
      const int i = s.arity;
      const auto& w = s.mono;
      SparseVec out;
      auto target = [&](int arity, const std::vector<int>& mono, int e, const Scalar& coeff) {
        int t = J.find_slot(deg + 1, arity, mono, e);
        if (t < 0) throw std::logic_error("jacobi: differential left the slot window");
        sv_add(out, t, coeff);
      };
      std::vector<int> degs(i);
      for (int k = 0; k < i; ++k) degs[k] = g.g.degrees[w[k]];

      // (1) internal differential applied factorwise with passing signs and a
      //     leading sign from the arity (the module slot counts as a factor)
      {
        Scalar pass = sign_pow(s.e >= 0 ? i : i - 1);
        for (int k = 0; k < i; ++k) {
          for (int r = 0; r < g.dim(); ++r) {
            const Scalar& dv = g.delta.at(r, w[k]);
            if (dv.is_zero()) continue;
            std::vector<int> word = w;
            word[k] = r;
            Word cw = canonicalize(g.g, PowerKind::exterior, std::move(word), dv * pass);
            if (!cw.coeff.is_zero()) target(i, cw.idx, s.e, cw.coeff);
          }
          if (odd(degs[k])) pass = -pass;
        }
      }

      // (2) module differential: Koszul passing over the wedge factors
      //     combined with the arity leading sign
      if (s.e >= 0) {
        int sdeg = 0;
        for (int k = 0; k < i; ++k) sdeg += degs[k];
        Scalar sgn = sign_pow(sdeg + i + 1);
        for (int r = 0; r < mod->dim(); ++r) {
          const Scalar& dv = mod->dE.at(r, s.e);
          if (!dv.is_zero()) target(i, w, r, sgn * dv);
        }
      }

      // (3) bracket contraction over unordered factor pairs, pair to the front
      for (int p = 0; p < i; ++p)
        for (int q = p + 1; q < i; ++q) {
          const SparseVec& br = g.bracket[w[p]][w[q]];
          if (br.empty()) continue;
          std::vector<int> perm = {p, q};
          std::vector<int> rest;
          for (int r = 0; r < i; ++r)
            if (r != p && r != q) {
              perm.push_back(r);
              rest.push_back(w[r]);
            }
          Scalar psign = power_sign(PowerKind::exterior, perm, degs);
          for (const auto& [cidx, bc] : br) {
            std::vector<int> word;
            word.reserve(i - 1);
            word.push_back(cidx);
            word.insert(word.end(), rest.begin(), rest.end());
            Word cw = canonicalize(g.g, PowerKind::exterior, std::move(word), psign * bc);
            if (!cw.coeff.is_zero()) target(i - 1, cw.idx, s.e, cw.coeff);
          }
        }

      // (4) action of factor j on the module slot, with the sign of
      //     contracting the factor with the slot through the rest of the word
      //     (arity one, degree one: d(v x e) = -v(e) + ...)
      if (s.e >= 0)
        for (int j = 0; j < i; ++j) {
          std::vector<int> rest;
          for (int r = 0; r < i; ++r)
            if (r != j) rest.push_back(w[r]);
          long ex = j + degs[j];
          for (int k = j + 1; k < i; ++k) ex += static_cast<long>(degs[k]) * degs[j];
          Scalar psign = sign_pow(ex);
          const Matrix& am = mod->act[w[j]];
          for (int f = 0; f < mod->dim(); ++f) {
            const Scalar& av = am.at(f, s.e);
            if (!av.is_zero()) target(i - 1, rest, f, psign * av);
          }
        }

      cols[c] = std::move(out);
    }
  }
  return J;
}

}  // namespace

JacComplex jacobi_complex(const DGLA& g, int m, int hi) { return build_jacobi(g, nullptr, m, hi); }

JacComplex modular_jacobi_complex(const DGLA& g, const GModule& E, int m, int hi) {
  return build_jacobi(g, &E, m, hi);
}

bool jac_d2_zero(const JacComplex& J) {
  for (int deg = J.lo; deg < J.hi; ++deg)
    for (int c = 0; c < J.dim(deg); ++c)
      if (!J.apply_d(deg + 1, J.d[deg - J.lo][c]).empty()) return false;
  return true;
}

// ---------------------------------------------------------------------------
// cohomology of a truncation

TruncCohomology jac_cohomology(const JacComplex& J, int k, int deg) {
  if (deg < J.lo || deg > J.hi)
    throw std::invalid_argument("jac_cohomology: degree outside the map window");
  TruncCohomology out;
  out.deg = deg;
  out.k = k;
  int n1 = J.trunc_dim(deg, k);
  int n2 = J.trunc_dim(deg + 1, k);
  int n0 = J.trunc_dim(deg - 1, k);

  std::vector<SparseVec> dout(J.d[deg - J.lo].begin(), J.d[deg - J.lo].begin() + n1);
  for (const auto& cvec : dout)
    for (const auto& [r, v] : cvec) {
      (void)v;
      if (r >= n2) throw std::logic_error("jac_cohomology: truncation is not a subcomplex");
    }
  SparseKernel Z = sparse_kernel_with_frees(dout, n2);

  Matrix Bimg(n1, n0);
  bool haveB = false;
  if (deg - 1 >= J.lo && n0 > 0) {
    const auto& din = J.d[deg - 1 - J.lo];
    for (int c = 0; c < n0; ++c)
      for (const auto& [r, v] : din[c]) {
        if (r >= n1) throw std::logic_error("jac_cohomology: truncation is not a subcomplex");
        Bimg.at(r, c) = v;
        haveB = true;
      }
  }

  if (!haveB) {
    out.dim = static_cast<int>(Z.free_cols.size());
    out.zbasis = Z.basis;
    out.pi = Matrix(out.dim, n1);
    for (int j = 0; j < out.dim; ++j) out.pi.at(j, Z.free_cols[j]) = Scalar(1);
    return out;
  }

  Subspace Zs = make_subspace(n1, Z.basis);
  Subspace Bs = make_subspace(n1, Bimg);
  if (!subspace_leq(Bs, Zs))
    throw std::logic_error("jac_cohomology: image does not lie in the kernel");
  Subspace Cs = complement_in(Zs, Bs);
  QuotientSplit qz = quotient_split(n1, Zs);
  Matrix full = Bs.basis.hcat(Cs.basis);
  Matrix A(n1, static_cast<int>(qz.complement_rows.size()));
  for (std::size_t j = 0; j < qz.complement_rows.size(); ++j)
    A.at(qz.complement_rows[j], static_cast<int>(j)) = Scalar(1);
  full = full.hcat(A);
  Matrix inv = inverse(full);
  std::vector<int> crows;
  for (int j = 0; j < Cs.dim(); ++j) crows.push_back(Bs.dim() + j);
  out.dim = Cs.dim();
  out.zbasis = Cs.basis;
  out.pi = inv.take_rows(crows);
  return out;
}

// ---------------------------------------------------------------------------
// deformation ring

namespace {

// embed a truncated degree-0 column matrix into the full degree-0 slot space
Matrix embed_prefix(const Matrix& small, int full_rows) {
  Matrix out(full_rows, small.cols);
  for (int r = 0; r < small.rows; ++r)
    for (int c = 0; c < small.cols; ++c) out.at(r, c) = small.at(r, c);
  return out;
}

}  // namespace

DeformationRing deformation_ring(const DGLA& g, int m, bool with_table) {
  if (dgla_h_dim(g, 0) != 0)
    throw std::invalid_argument("deformation_ring: needs vanishing degree-zero cohomology");
  DeformationRing DR;
  DR.g = &g;
  DR.m = m;
  DR.J = jacobi_complex(g, m, 1);
  const JacComplex& J = DR.J;
  for (int deg = J.lo; deg < 0; ++deg)
    if (jac_cohomology(J, m, deg).dim != 0)
      throw std::invalid_argument("deformation_ring: nonzero negative-degree cohomology");

  int dim0 = J.dim(0);
  DR.h0.resize(m + 1);
  DR.h0[0] = TruncCohomology{0, 0, 0, Matrix(J.trunc_dim(0, 0), 0), Matrix(0, J.trunc_dim(0, 0))};
  for (int k = 1; k <= m; ++k) DR.h0[k] = jac_cohomology(J, k, 0);
  int vdim = DR.h0[m].dim;

  DR.V.resize(m + 1);
  DR.V[0] = zero_subspace(vdim);
  for (int k = 1; k <= m; ++k)
    DR.V[k] = make_subspace(vdim, DR.h0[m].pi * embed_prefix(DR.h0[k].zbasis, dim0));
  if (DR.V[m].dim() != vdim)
    throw std::logic_error("deformation_ring: top filtration level is not everything");

  if (!with_table) return DR;

  // comultiplication via unshuffles of the degree-zero wedge monomials
  std::vector<PowerSpace> P(m + 1);
  std::vector<int> offset(m + 2, 0);
  for (int i = 1; i <= m; ++i) {
    P[i] = power_space_window(g.g, PowerKind::exterior, i, i, i);
    offset[i] = J.trunc_dim(0, i - 1);
    if (offset[i] + P[i].dim() != J.trunc_dim(0, i))
      throw std::logic_error("deformation_ring: slot blocks out of step");
  }
  offset[m + 1] = dim0;

  // unsh[i][p]: splits of arity i into (p, i-p), degree-zero halves only
  std::vector<std::vector<std::vector<std::vector<std::tuple<int, int, Scalar>>>>> unsh(m + 1);
  for (int i = 2; i <= m; ++i) {
    unsh[i].resize(i);
    for (int p = 1; p < i; ++p) unsh[i][p] = unshuffle(P[i], P[p], P[i - p], true);
  }

  const TruncCohomology& H = DR.h0[m];
  // nonzero pi entries per degree-zero slot column
  std::vector<std::vector<std::pair<int, Scalar>>> picol(dim0);
  for (int a = 0; a < vdim; ++a)
    for (int s = 0; s < dim0; ++s)
      if (!H.pi.at(a, s).is_zero()) picol[s].push_back({a, H.pi.at(a, s)});

  Matrix comult(vdim * vdim, vdim);
  for (int c = 0; c < vdim; ++c) {
    std::map<std::pair<int, int>, Scalar> acc;
    for (int s = 0; s < dim0; ++s) {
      const Scalar& z = H.zbasis.at(s, c);
      if (z.is_zero()) continue;
      // locate the arity block
      int i = J.at(0)[s].arity;
      if (i < 2) continue;
      int mi = s - offset[i];
      for (int p = 1; p < i; ++p)
        for (const auto& [i1, i2, sc] : unsh[i][p][mi]) {
          auto key = std::make_pair(offset[p] + i1, offset[i - p] + i2);
          Scalar& slot = acc[key];
          slot += z * sc;
          if (slot.is_zero()) acc.erase(key);
        }
    }
    for (const auto& [key, val] : acc)
      for (const auto& [a, pa] : picol[key.first])
        for (const auto& [b, pb] : picol[key.second]) comult.at(a * vdim + b, c) += pa * pb * val;
  }

  DR.os.n = m;
  DR.os.vdim = vdim;
  DR.os.V = DR.V;
  DR.os.comult = std::move(comult);
  validate_os(DR.os);

  std::vector<std::string> names;
  for (int c = 0; c < vdim; ++c) names.push_back("x" + std::to_string(c + 1));
  DR.R = dual_artin(DR.os, names);
  return DR;
}

// ---------------------------------------------------------------------------
// Maurer-Cartan elements

MCElement make_mc(const DGLA& g, const ArtinAlgebra& R, Matrix u) {
  if (u.rows != g.dim() || u.cols != R.dim())
    throw std::invalid_argument("make_mc: shape mismatch");
  for (int r = 0; r < u.rows; ++r) {
    if (!u.at(r, 0).is_zero()) throw std::invalid_argument("make_mc: unit column must vanish");
    if (g.g.degrees[r] == 1) continue;
    for (int c = 0; c < u.cols; ++c)
      if (!u.at(r, c).is_zero())
        throw std::invalid_argument("make_mc: element must be concentrated in degree one");
  }
  return MCElement{&g, &R, std::move(u)};
}

Matrix bracket_over(const DGLA& g, const ArtinAlgebra& R, const Matrix& u, const Matrix& v) {
  if (u.rows != g.dim() || v.rows != g.dim() || u.cols != R.dim() || v.cols != R.dim())
    throw std::invalid_argument("bracket_over: shape mismatch");
  std::vector<SparseVec> uc(R.dim()), vc(R.dim());
  for (int a = 0; a < R.dim(); ++a) {
    uc[a] = col_to_sv(u, a);
    vc[a] = col_to_sv(v, a);
  }
  Matrix out(g.dim(), R.dim());
  for (int a = 0; a < R.dim(); ++a) {
    if (uc[a].empty()) continue;
    for (int b = 0; b < R.dim(); ++b) {
      if (vc[b].empty()) continue;
      const SparseVec& tab = R.table[a][b];
      if (tab.empty()) continue;
      SparseVec br = g.br(uc[a], vc[b]);
      if (br.empty()) continue;
      for (const auto& [cc, tv] : tab)
        for (const auto& [r, bv] : br) out.at(r, cc) += tv * bv;
    }
  }
  return out;
}

bool mc_check(const MCElement& u) {
  const DGLA& g = *u.g;
  Matrix fail = g.delta * u.u + bracket_over(g, *u.R, u.u, u.u).scaled(Scalar(1) / Scalar(2));
  return fail.is_zero();
}

MCElement tautological_mc(const DeformationRing& DR) {
  const DGLA& g = *DR.g;
  int vdim = DR.vdim();
  if (DR.R.dim() != vdim + 1)
    throw std::invalid_argument("tautological_mc: ring table was not built");
  const JacComplex& J = DR.J;
  int n1 = J.trunc_dim(0, 1);
  Matrix u(g.dim(), vdim + 1);
  for (int s = 0; s < n1; ++s) {
    const JacSlot& slot = J.at(0)[s];
    if (slot.arity != 1) throw std::logic_error("tautological_mc: slot order broken");
    for (int c = 0; c < vdim; ++c) {
      const Scalar& z = DR.h0[DR.m].zbasis.at(s, c);
      if (!z.is_zero()) u.at(slot.mono[0], 1 + c) = z;
    }
  }
  return make_mc(g, DR.R, std::move(u));
}

Matrix epsilon_element(const DeformationRing& DR, const MCElement& u) {
  const DGLA& g = *DR.g;
  const JacComplex& J = DR.J;
  if (J.mod != nullptr) throw std::invalid_argument("epsilon_element: plain complexes only");
  if (u.g != DR.g) throw std::invalid_argument("epsilon_element: algebra mismatch");
  const ArtinAlgebra& R = *u.R;
  int m = DR.m;
  int dim0 = J.dim(0);

  std::vector<PowerSpace> P(m + 1);
  std::vector<int> offset(m + 1, 0);
  for (int i = 1; i <= m; ++i) {
    P[i] = power_space_window(g.g, PowerKind::exterior, i, i, i);
    offset[i] = J.trunc_dim(0, i - 1);
  }
  // degree-one flat index -> arity-one monomial index
  std::vector<int> p1pos(g.dim(), -1);
  for (int mi = 0; mi < P[1].dim(); ++mi) p1pos[P[1].monos[mi][0]] = mi;

  std::vector<SparseVec> ucols(R.dim());
  for (int a = 0; a < R.dim(); ++a) {
    SparseVec flat = col_to_sv(u.u, a);
    for (const auto& [r, v] : flat) {
      if (p1pos[r] < 0) throw std::logic_error("epsilon_element: element outside degree one");
      ucols[a][p1pos[r]] = v;
    }
  }

  Matrix out(dim0, R.dim());
  std::vector<SparseVec> X = ucols;  // wedge power 1
  for (int i = 1; i <= m; ++i) {
    Scalar inv_fact = Scalar(1) / Scalar(factorial(i));
    for (int a = 0; a < R.dim(); ++a)
      for (const auto& [mi, v] : X[a]) out.at(offset[i] + mi, a) += inv_fact * v;
    if (i == m) break;
    std::vector<SparseVec> Y(R.dim());
    for (int a = 0; a < R.dim(); ++a) {
      if (X[a].empty()) continue;
      for (int b = 0; b < R.dim(); ++b) {
        if (ucols[b].empty()) continue;
        const SparseVec& tab = R.table[a][b];
        if (tab.empty()) continue;
        SparseVec prod = power_multiply(P[i], X[a], P[1], ucols[b], P[i + 1]);
        if (prod.empty()) continue;
        for (const auto& [cc, tv] : tab) sv_axpy(Y[cc], tv, prod);
      }
    }
    X = std::move(Y);
  }
  return out;
}

Matrix epsilon_class(const DeformationRing& DR, const MCElement& u) {
  return DR.h0[DR.m].pi * epsilon_element(DR, u);
}

// ---------------------------------------------------------------------------
// brute-force Maurer-Cartan classification

MCExpansion mc_expand(const DGLA& g, int m) {
  SlotSplit s1 = dgla_h_split(g, 1);
  SlotSplit s2 = dgla_h_split(g, 2);
  int h1 = s1.h_dim();
  CochainComplex gcx = dgla_complex(g);
  std::vector<int> deg1 = g.g.of_degree(1);
  std::vector<int> deg2 = g.g.of_degree(2);

  MCExpansion E;
  E.ambient = artin_power_series(h1, m);
  const ArtinAlgebra& A = E.ambient;

  // monomial degree of each ambient basis element, from the ideal filtration
  std::vector<int> bdeg(A.dim(), 0);
  for (int k = A.exponent; k >= 1; --k)
    for (int p : A.ideal_pow[k].pivots)
      if (bdeg[p] == 0 && p != 0) bdeg[p] = k;
  E.grade.assign(m + 1, {});
  for (int b = 0; b < A.dim(); ++b)
    if (bdeg[b] <= m) E.grade[bdeg[b]].push_back(b);

  // first-order element: harmonic representatives against the grade-one slots
  Matrix u(g.dim(), A.dim());
  if (static_cast<int>(E.grade[1].size()) != h1)
    throw std::logic_error("mc_expand: variable count mismatch");
  for (int c = 0; c < h1; ++c)
    for (int r = 0; r < static_cast<int>(deg1.size()); ++r)
      u.at(deg1[r], E.grade[1][c]) = s1.C.basis.at(r, c);

  // per-grade ideal pieces, in grade coordinates
  std::vector<Subspace> I(m + 1, zero_subspace(0));
  for (int k = 0; k <= m; ++k) I[k] = zero_subspace(static_cast<int>(E.grade[k].size()));

  for (int k = 2; k <= m; ++k) {
    int nk = static_cast<int>(E.grade[k].size());
    Matrix w = g.delta * u + bracket_over(g, A, u, u).scaled(Scalar(1) / Scalar(2));
    for (int r = 0; r < w.rows; ++r)
      if (g.g.degrees[r] != 2)
        for (int c = 0; c < w.cols; ++c)
          if (!w.at(r, c).is_zero())
            throw std::logic_error("mc_expand: failure outside degree two");
    Matrix wk = w.take_cols(E.grade[k]).take_rows(deg2);
    Matrix cls = s2.pi * wk;
    E.omega.push_back(cls);

    // grow the ideal: shifts of the previous piece, then the new classes
    std::vector<SparseVec> gens;
    {
      int nprev = static_cast<int>(E.grade[k - 1].size());
      for (int c = 0; c < I[k - 1].dim(); ++c) {
        // embed into ambient coordinates
        SparseVec el;
        for (int r = 0; r < nprev; ++r)
          if (!I[k - 1].basis.at(r, c).is_zero())
            el[E.grade[k - 1][r]] = I[k - 1].basis.at(r, c);
        for (int j = 0; j < h1; ++j) {
          SparseVec gen;
          gen[E.grade[1][j]] = Scalar(1);
          SparseVec prod = A.mul(gen, el);
          SparseVec ingrade;
          for (const auto& [b, v] : prod) {
            auto it = std::lower_bound(E.grade[k].begin(), E.grade[k].end(), b);
            if (it == E.grade[k].end() || *it != b)
              throw std::logic_error("mc_expand: shifted generator escaped its grade");
            ingrade[static_cast<int>(it - E.grade[k].begin())] = v;
          }
          if (!ingrade.empty()) gens.push_back(std::move(ingrade));
        }
      }
      for (int r = 0; r < cls.rows; ++r) {
        SparseVec gen;
        for (int t = 0; t < nk; ++t)
          if (!cls.at(r, t).is_zero()) gen[t] = cls.at(r, t);
        if (!gen.empty()) gens.push_back(std::move(gen));
      }
    }
    I[k] = make_subspace(nk, cols_from_sv(gens, nk));

    // correct u at grade k: subtract a canonical preimage of the non-harmonic part
    Matrix resid = wk - s2.C.basis * cls;
    auto pre = canonical_preimage(gcx, 1, resid);
    if (!pre) throw std::logic_error("mc_expand: residual failure is not exact");
    for (int r = 0; r < static_cast<int>(deg1.size()); ++r)
      for (int t = 0; t < nk; ++t) u.at(deg1[r], E.grade[k][t]) -= pre->at(r, t);
  }

  // assemble the saturated ideal in ambient coordinates and quotient
  std::vector<SparseVec> allgens;
  for (int k = 2; k <= m; ++k)
    for (int c = 0; c < I[k].dim(); ++c) {
      SparseVec el;
      for (int r = 0; r < static_cast<int>(E.grade[k].size()); ++r)
        if (!I[k].basis.at(r, c).is_zero()) el[E.grade[k][r]] = I[k].basis.at(r, c);
      allgens.push_back(std::move(el));
    }
  E.ideal = make_subspace(A.dim(), cols_from_sv(allgens, A.dim()));
  auto [Q, proj] = quotient_algebra(A, E.ideal);
  E.quotient = std::move(Q);
  E.proj = std::move(proj);
  E.u = u * E.proj.transpose();

  MCElement sol = make_mc(g, E.quotient, E.u);
  if (!mc_check(sol)) throw std::logic_error("mc_expand: quotient solution fails the equation");

  E.graded_dims.assign(m + 1, 0);
  for (int k = 0; k <= m; ++k) {
    int a = k < static_cast<int>(E.quotient.ideal_pow.size()) ? E.quotient.ideal_pow[k].dim() : 0;
    int b = k + 1 < static_cast<int>(E.quotient.ideal_pow.size())
                ? E.quotient.ideal_pow[k + 1].dim()
                : 0;
    E.graded_dims[k] = a - b;
  }
  return E;
}

// ---------------------------------------------------------------------------
// obstruction kernels

ObstructionKernels obstruction_kernel(const DGLA& g, int m) {
  if (m < 1) throw std::invalid_argument("obstruction_kernel: order must be at least 1");
  SlotSplit s1 = dgla_h_split(g, 1);
  int h1 = s1.h_dim();
  std::vector<int> deg1 = g.g.of_degree(1);

  std::vector<std::pair<int, std::string>> hbasis;
  for (int c = 0; c < h1; ++c) hbasis.push_back({1, "h" + std::to_string(c + 1)});

  ObstructionKernels OK;
  OK.hspace = std::make_unique<GradedSpace>(GradedSpace::make(std::move(hbasis)));
  const GradedSpace& H = *OK.hspace;
  OK.sym = power_space(H, PowerKind::exterior, m);

  JacComplex J = jacobi_complex(g, m, 1);
  std::vector<PowerSpace> P(m + 1);
  std::vector<int> offset(m + 1, 0);
  for (int i = 1; i <= m; ++i) {
    P[i] = power_space_window(g.g, PowerKind::exterior, i, i, i);
    offset[i] = J.trunc_dim(0, i - 1);
  }
  std::vector<int> p1pos(g.dim(), -1);
  for (int mi = 0; mi < P[1].dim(); ++mi) p1pos[P[1].monos[mi][0]] = mi;

  // harmonic representatives as arity-one sparse vectors
  std::vector<SparseVec> rep(h1);
  for (int c = 0; c < h1; ++c)
    for (int r = 0; r < static_cast<int>(deg1.size()); ++r)
      if (!s1.C.basis.at(r, c).is_zero()) rep[c][p1pos[deg1[r]]] = s1.C.basis.at(r, c);

  OK.tower.clear();
  std::vector<PowerSpace> syms(m + 1);
  for (int j = 1; j <= m; ++j) syms[j] = power_space(H, PowerKind::exterior, j);
  OK.tower.push_back(full_subspace(syms[1].dim()));

  for (int j = 2; j <= m; ++j) {
    TruncCohomology c1 = jac_cohomology(J, j - 1, 1);
    int ntr = J.trunc_dim(1, j - 1);
    Matrix O(c1.dim, syms[j].dim());
    for (int mu = 0; mu < syms[j].dim(); ++mu) {
      const auto& mono = syms[j].monos[mu];
      SparseVec lift = rep[mono[0]];
      for (int t = 1; t < j; ++t)
        lift = power_multiply(P[t], lift, P[1], rep[mono[t]], P[t + 1]);
      SparseVec el;
      for (const auto& [mi, v] : lift) el[offset[j] + mi] = v;
      SparseVec img = J.apply_d(0, el);
      Matrix col(ntr, 1);
      for (const auto& [r, v] : img) {
        if (r >= ntr)
          throw std::logic_error("obstruction_kernel: lifted image exceeds the truncation");
        col.at(r, 0) = v;
      }
      Matrix cl = c1.pi * col;
      for (int r = 0; r < c1.dim; ++r) O.at(r, mu) = cl.at(r, 0);
    }
    OK.tower.push_back(make_subspace(syms[j].dim(), kernel_basis(O)));
  }
  OK.direct_k = OK.tower[m - 1];

  // inductive form: previous kernel times a line, intersected with the
  // vanishing of the expansion obstruction at order m
  if (m == 1) {
    OK.inductive_k = full_subspace(syms[1].dim());
    return OK;
  }
  MCExpansion Ex = mc_expand(g, m);
  const ArtinAlgebra& A = Ex.ambient;
  // ambient index of each symmetric monomial, via generator products
  std::vector<int> gens = Ex.grade[1];
  auto amb_index = [&](const std::vector<int>& mono) {
    SparseVec cur;
    cur[gens[mono[0]]] = Scalar(1);
    for (std::size_t t = 1; t < mono.size(); ++t) {
      SparseVec nxt;
      nxt[gens[mono[t]]] = Scalar(1);
      cur = A.mul(cur, nxt);
    }
    if (cur.size() != 1 || !cur.begin()->second.is_one())
      throw std::logic_error("obstruction_kernel: monomial product is not monic");
    return cur.begin()->first;
  };
  const Matrix& om = Ex.omega[m - 2];
  int h2 = om.rows;
  Matrix W(h2, syms[m].dim());
  for (int mu = 0; mu < syms[m].dim(); ++mu) {
    int b = amb_index(syms[m].monos[mu]);
    auto it = std::lower_bound(Ex.grade[m].begin(), Ex.grade[m].end(), b);
    if (it == Ex.grade[m].end() || *it != b)
      throw std::logic_error("obstruction_kernel: monomial outside its grade");
    int t = static_cast<int>(it - Ex.grade[m].begin());
    for (int r = 0; r < h2; ++r) W.at(r, mu) = om.at(r, t);
  }

  // embedding sym^m -> sym^(m-1) (x) H by deleting one position at a time
  const PowerSpace& Sm = syms[m];
  const PowerSpace& Sp = syms[m - 1];
  Matrix emb(Sp.dim() * h1, Sm.dim());
  for (int mu = 0; mu < Sm.dim(); ++mu)
    for (int t = 0; t < m; ++t) {
      std::vector<int> rest;
      for (int r = 0; r < m; ++r)
        if (r != t) rest.push_back(Sm.monos[mu][r]);
      int pidx = Sp.find(rest);
      if (pidx < 0) throw std::logic_error("obstruction_kernel: deleted monomial missing");
      emb.at(pidx * h1 + Sm.monos[mu][t], mu) += Scalar(1);
    }
  QuotientSplit qk = quotient_split(Sp.dim(), OK.tower[m - 2]);
  Matrix cond(qk.projection.rows * h1, Sm.dim());
  for (int qr = 0; qr < qk.projection.rows; ++qr)
    for (int sidx = 0; sidx < Sp.dim(); ++sidx) {
      const Scalar& qv = qk.projection.at(qr, sidx);
      if (qv.is_zero()) continue;
      for (int c = 0; c < h1; ++c)
        for (int mu = 0; mu < Sm.dim(); ++mu) {
          const Scalar& ev = emb.at(sidx * h1 + c, mu);
          if (!ev.is_zero()) cond.at(qr * h1 + c, mu) += qv * ev;
        }
    }
  Matrix stacked = cond.vcat(W);
  OK.inductive_k = make_subspace(Sm.dim(), kernel_basis(stacked));
  return OK;
}

// ---------------------------------------------------------------------------
// pair complexes

DGLA pair_cone(const DGLA& g, const GModule& h, const Matrix& dmat) {
  if (dmat.rows != h.dim() || dmat.cols != g.dim())
    throw std::invalid_argument("pair_cone: derivation matrix shape mismatch");
  // degree check: d maps g^k to h^k
  for (int c = 0; c < g.dim(); ++c)
    for (int r = 0; r < h.dim(); ++r)
      if (!dmat.at(r, c).is_zero() && h.E.degrees[r] != g.g.degrees[c])
        throw std::invalid_argument("pair_cone: derivation must preserve degree");

  std::vector<std::pair<int, std::string>> basis;
  for (int i = 0; i < g.dim(); ++i) basis.push_back({g.g.degrees[i], "g." + g.g.names[i]});
  for (int j = 0; j < h.dim(); ++j) basis.push_back({h.E.degrees[j] + 1, "h." + h.E.names[j]});
  GradedSpace cg = GradedSpace::make(std::move(basis));
  int n = cg.dim();

  std::vector<int> gi(g.dim()), hj(h.dim());
  for (int i = 0; i < g.dim(); ++i) {
    gi[i] = cg.find("g." + g.g.names[i]);
    if (gi[i] < 0) throw std::logic_error("pair_cone: lost a basis name");
  }
  for (int j = 0; j < h.dim(); ++j) {
    hj[j] = cg.find("h." + h.E.names[j]);
    if (hj[j] < 0) throw std::logic_error("pair_cone: lost a basis name");
  }

  std::vector<std::vector<SparseVec>> bracket(n, std::vector<SparseVec>(n));
  for (int a = 0; a < g.dim(); ++a)
    for (int b = 0; b < g.dim(); ++b)
      for (const auto& [c, v] : g.bracket[a][b]) bracket[gi[a]][gi[b]][gi[c]] = v;
  for (int a = 0; a < g.dim(); ++a) {
    int da = g.g.degrees[a];
    for (int e = 0; e < h.dim(); ++e) {
      SparseVec x_eta;
      for (int f = 0; f < h.dim(); ++f) {
        const Scalar& v = h.act[a].at(f, e);
        if (!v.is_zero()) x_eta[hj[f]] = sign_pow(da) * v;
      }
      if (x_eta.empty()) continue;
      bracket[gi[a]][hj[e]] = x_eta;
      // graded antisymmetry fixes the reversed bracket
      int dh = h.E.degrees[e] + 1;
      bracket[hj[e]][gi[a]] = sv_scaled(x_eta, -sign_pow(da * dh));
    }
  }

  Matrix delta(n, n);
  for (int a = 0; a < g.dim(); ++a) {
    for (int r = 0; r < g.dim(); ++r)
      if (!g.delta.at(r, a).is_zero()) delta.at(gi[r], gi[a]) = g.delta.at(r, a);
    for (int f = 0; f < h.dim(); ++f)
      if (!dmat.at(f, a).is_zero()) delta.at(hj[f], gi[a]) = dmat.at(f, a);
  }
  for (int e = 0; e < h.dim(); ++e)
    for (int f = 0; f < h.dim(); ++f)
      if (!h.dE.at(f, e).is_zero()) delta.at(hj[f], hj[e]) = -h.dE.at(f, e);

  return make_dgla(std::move(cg), std::move(bracket), std::move(delta));
}

PairRing dgla_pair_ring(const DGLA& g, const GModule& h, const Matrix& dmat, int m) {
  PairRing P;
  P.cone = std::make_unique<DGLA>(pair_cone(g, h, dmat));
  P.gidx.resize(g.dim());
  P.hidx.resize(h.dim());
  for (int i = 0; i < g.dim(); ++i) P.gidx[i] = P.cone->g.find("g." + g.g.names[i]);
  for (int j = 0; j < h.dim(); ++j) P.hidx[j] = P.cone->g.find("h." + h.E.names[j]);
  P.ring = deformation_ring(*P.cone, m);
  return P;
}

namespace {

// weakly increasing index sequences over 0..n-1 of the given length, lex order
std::vector<std::vector<int>> multisets(int n, int length) {
  std::vector<std::vector<int>> out;
  if (length == 0) {
    out.push_back({});
    return out;
  }
  if (n == 0) return out;
  std::vector<int> cur;
  struct Rec {
    int n, length;
    std::vector<std::vector<int>>& out;
    void go(std::vector<int>& cur, int start) {
      if (static_cast<int>(cur.size()) == length) {
        out.push_back(cur);
        return;
      }
      for (int v = start; v < n; ++v) {
        cur.push_back(v);
        go(cur, v);
        cur.pop_back();
      }
    }
  } rec{n, length, out};
  rec.go(cur, 0);
  return out;
}

std::vector<int> sorted_insert(const std::vector<int>& mono, int v) {
  std::vector<int> out = mono;
  out.insert(std::upper_bound(out.begin(), out.end(), v), v);
  return out;
}

}  // namespace

std::vector<int> pair_coker_dims(const DGLA& g, const GModule& h, const Matrix& dmat, int m) {
  for (int d : g.g.degrees)
    if (d != 0) throw std::invalid_argument("pair_coker_dims: algebra must sit in degree zero");
  for (int d : h.E.degrees)
    if (d != 0) throw std::invalid_argument("pair_coker_dims: module must sit in degree zero");
  int nh = h.dim();

  // symmetric levels 0..m with offsets into the stacked target space
  std::vector<std::vector<std::vector<int>>> S(m + 1);
  for (int j = 0; j <= m; ++j) S[j] = multisets(nh, j);
  std::vector<int> offset(m + 2, 0);
  for (int j = 1; j <= m + 1; ++j)
    offset[j] = offset[j - 1] + (j - 1 >= 1 ? static_cast<int>(S[j - 1].size()) : 0);
  auto level_index = [&](int j, const std::vector<int>& mono) {
    auto it = std::lower_bound(S[j].begin(), S[j].end(), mono);
    if (it == S[j].end() || *it != mono)
      throw std::logic_error("pair_coker_dims: monomial escaped enumeration");
    return offset[j] + static_cast<int>(it - S[j].begin());
  };

  std::vector<int> out;
  for (int k = 1; k <= m; ++k) {
    int tdim = offset[k + 1];
    std::vector<SparseVec> cols;
    for (int j = 0; j < k; ++j)
      for (int x = 0; x < g.dim(); ++x)
        for (const auto& Q : S[j]) {
          SparseVec col;
          for (int f = 0; f < nh; ++f) {
            const Scalar& dv = dmat.at(f, x);
            if (!dv.is_zero()) sv_add(col, level_index(j + 1, sorted_insert(Q, f)), dv);
          }
          if (j >= 1)
            for (int t = 0; t < j; ++t) {
              std::vector<int> rest;
              for (int r = 0; r < j; ++r)
                if (r != t) rest.push_back(Q[r]);
              for (int f = 0; f < nh; ++f) {
                const Scalar& av = h.act[x].at(f, Q[t]);
                if (!av.is_zero()) sv_add(col, level_index(j, sorted_insert(rest, f)), av);
              }
            }
          if (!col.empty()) cols.push_back(std::move(col));
        }
    int rk = sparse_rank(cols, tdim);
    out.push_back(tdim - rk);
  }
  return out;
}

bool trivialization_check(const DGLA& g, const GModule& h, const Matrix& dmat,
                          const MCElement& u, const Matrix& a) {
  const ArtinAlgebra& R = *u.R;
  if (a.rows != h.dim() || a.cols != R.dim())
    throw std::invalid_argument("trivialization_check: cochain shape mismatch");
  for (int r = 0; r < a.rows; ++r) {
    if (!a.at(r, 0).is_zero())
      throw std::invalid_argument("trivialization_check: unit column must vanish");
    if (h.E.degrees[r] == 0) continue;
    for (int c = 0; c < a.cols; ++c)
      if (!a.at(r, c).is_zero())
        throw std::invalid_argument("trivialization_check: cochain must sit in degree zero");
  }
  // residual = d_h(a) + u.(a) - dmat(u)
  Matrix resid = h.dE * a - dmat * u.u;
  for (int al = 0; al < R.dim(); ++al) {
    SparseVec ucol = col_to_sv(u.u, al);
    if (ucol.empty()) continue;
    for (int be = 0; be < R.dim(); ++be) {
      const SparseVec& tab = R.table[al][be];
      if (tab.empty()) continue;
      Matrix acol = a.col(be);
      Matrix applied(h.dim(), 1);
      bool any = false;
      for (const auto& [r, uv] : ucol) {
        Matrix part = h.act[r] * acol;
        if (!part.is_zero()) {
          applied = applied + part.scaled(uv);
          any = true;
        }
      }
      if (!any) continue;
      for (const auto& [cc, tv] : tab)
        for (int r = 0; r < h.dim(); ++r) resid.at(r, cc) += tv * applied.at(r, 0);
    }
  }
  return resid.is_zero();
}

Matrix classifying_element(const PairRing& P, const MCElement& u, const Matrix& a) {
  const ArtinAlgebra& R = *u.R;
  const DGLA& cone = *P.cone;
  if (a.rows != static_cast<int>(P.hidx.size()) || a.cols != R.dim())
    throw std::invalid_argument("classifying_element: cochain shape mismatch");
  Matrix uhat(cone.dim(), R.dim());
  for (int r = 0; r < u.u.rows; ++r)
    for (int c = 0; c < u.u.cols; ++c)
      if (!u.u.at(r, c).is_zero()) uhat.at(P.gidx[r], c) = u.u.at(r, c);
  for (int r = 0; r < a.rows; ++r)
    for (int c = 0; c < a.cols; ++c)
      if (!a.at(r, c).is_zero()) uhat.at(P.hidx[r], c) = a.at(r, c);
  MCElement combined = make_mc(cone, R, std::move(uhat));
  return epsilon_element(P.ring, combined);
}

// ---------------------------------------------------------------------------
// universal module

UniversalModule universal_module(const DeformationRing& DR, const GModule& E) {
  const DGLA& g = *DR.g;
  int m = DR.m;
  if (DR.R.dim() != DR.vdim() + 1)
    throw std::invalid_argument("universal_module: ring table was not built");
  UniversalModule U;
  U.JE = modular_jacobi_complex(g, E, m, 1);
  const JacComplex& JE = U.JE;
  for (int deg = JE.lo; deg < 0; ++deg)
    if (jac_cohomology(JE, m, deg).dim != 0)
      throw std::invalid_argument("universal_module: nonzero negative-degree cohomology");
  U.h0.resize(m + 1);
  for (int k = 0; k <= m; ++k) U.h0[k] = jac_cohomology(JE, k, 0);

  int dim0 = JE.dim(0);
  int bdim = U.h0[m].dim;
  const TruncCohomology& HE = U.h0[m];

  U.mos.os = &DR.os;
  U.mos.n = m;
  U.mos.bdim = bdim;
  U.mos.has_coact = true;
  U.mos.B.resize(m + 1);
  for (int k = 0; k <= m; ++k)
    U.mos.B[k] = make_subspace(bdim, HE.pi * embed_prefix(U.h0[k].zbasis, dim0));

  // coaction: for every canonical cocycle, split each wedge word into a left
  // ring part (internal degree = arity, i.e. ring degree zero) and a right
  // remainder that keeps the module factor; project both halves
  const JacComplex& J = DR.J;
  const TruncCohomology& HR = DR.h0[m];
  int rdim0 = J.dim(0);
  int vdim = DR.vdim();

  std::vector<PowerSpace> PR(m + 1);
  std::vector<int> roffset(m + 1, 0);
  for (int i = 1; i <= m; ++i) {
    PR[i] = power_space_window(g.g, PowerKind::exterior, i, i, i);
    roffset[i] = J.trunc_dim(0, i - 1);
  }

  std::vector<std::vector<std::pair<int, Scalar>>> pir(rdim0), pie(dim0);
  for (int a = 0; a < vdim; ++a)
    for (int s = 0; s < rdim0; ++s)
      if (!HR.pi.at(a, s).is_zero()) pir[s].push_back({a, HR.pi.at(a, s)});
  for (int b = 0; b < bdim; ++b)
    for (int s = 0; s < dim0; ++s)
      if (!HE.pi.at(b, s).is_zero()) pie[s].push_back({b, HE.pi.at(b, s)});

  // unshuffle data per (arity, word degree): tight windows on both halves
  struct SplitCache {
    PowerSpace whole;
    std::vector<PowerSpace> right;  // per left arity p = 1..i-1
    std::vector<std::vector<std::vector<std::tuple<int, int, Scalar>>>> unsh;
  };
  std::map<std::pair<int, int>, SplitCache> cache;

  Matrix coact(vdim * bdim, bdim);
  for (int c = 0; c < bdim; ++c) {
    std::map<std::pair<int, int>, Scalar> acc;
    auto add = [&](int row, int s2, const Scalar& val) {
      auto key = std::make_pair(row, s2);
      Scalar& sl = acc[key];
      sl += val;
      if (sl.is_zero()) acc.erase(key);
    };
    for (int s = 0; s < dim0; ++s) {
      const Scalar& z = HE.zbasis.at(s, c);
      if (z.is_zero()) continue;
      const JacSlot& slot = JE.at(0)[s];
      int i = slot.arity;
      if (i < 1) continue;
      int wdeg = 0;
      for (int t : slot.mono) wdeg += g.g.degrees[t];

      // whole word to the ring side (right remainder = bare module factor)
      if (wdeg == i) {
        int r1 = PR[i].find(slot.mono);
        int s2 = JE.find_slot(0, 0, {}, slot.e);
        if (r1 < 0 || s2 < 0)
          throw std::logic_error("universal_module: full split slot is missing");
        add(roffset[i] + r1, s2, z);
      }

      if (i < 2) continue;
      auto key = std::make_pair(i, wdeg);
      auto it = cache.find(key);
      if (it == cache.end()) {
        SplitCache sc;
        sc.whole = power_space_window(g.g, PowerKind::exterior, i, wdeg, wdeg);
        sc.right.resize(i);
        sc.unsh.resize(i);
        for (int p = 1; p < i; ++p) {
          sc.right[p] = power_space_window(g.g, PowerKind::exterior, i - p, wdeg - p, wdeg - p);
          sc.unsh[p] = unshuffle(sc.whole, PR[p], sc.right[p], true);
        }
        it = cache.emplace(key, std::move(sc)).first;
      }
      const SplitCache& sc = it->second;
      int mi = sc.whole.find(slot.mono);
      if (mi < 0) throw std::logic_error("universal_module: word missing from its window");
      for (int p = 1; p < i; ++p)
        for (const auto& [i1, i2, coeff] : sc.unsh[p][mi]) {
          int s2 = JE.find_slot(0, i - p, sc.right[p].monos[i2], slot.e);
          if (s2 < 0) throw std::logic_error("universal_module: split slot is missing");
          add(roffset[p] + i1, s2, z * coeff);
        }
    }
    for (const auto& [key, val] : acc)
      for (const auto& [aa, pa] : pir[key.first])
        for (const auto& [bb, pb] : pie[key.second])
          coact.at(aa * bdim + bb, c) += pa * pb * val;
  }

  U.mos.coact = std::move(coact);
  validate_mos(U.mos);
  U.C = build_C(DR.R, DR.os, U.mos);
  return U;
}

RModule twisted_kernel_module(const DeformationRing& DR, const GModule& E) {
  const DGLA& g = *DR.g;
  const ArtinAlgebra& R = DR.R;
  MCElement taut = tautological_mc(DR);
  std::vector<int> e0 = E.E.of_degree(0), e1 = E.E.of_degree(1);
  int n0 = static_cast<int>(e0.size()), n1 = static_cast<int>(e1.size());
  int dR = R.dim();

  Matrix D(dR * n1, dR * n0);
  for (int c = 0; c < dR; ++c)
    for (int ei = 0; ei < n0; ++ei) {
      int colidx = c * n0 + ei;
      for (int fi = 0; fi < n1; ++fi) {
        const Scalar& dv = E.dE.at(e1[fi], e0[ei]);
        if (!dv.is_zero()) D.at(c * n1 + fi, colidx) += dv;
      }
      for (int al = 1; al < dR; ++al) {
        SparseVec ucol = col_to_sv(taut.u, al);
        if (ucol.empty()) continue;
        const SparseVec& tab = R.table[al][c];
        if (tab.empty()) continue;
        for (const auto& [r, uv] : ucol)
          for (int fi = 0; fi < n1; ++fi) {
            const Scalar& av = E.act[r].at(e1[fi], e0[ei]);
            if (av.is_zero()) continue;
            for (const auto& [cc, tv] : tab) D.at(cc * n1 + fi, colidx) += uv * av * tv;
          }
      }
    }

  Matrix K = kernel_basis(D);
  Subspace Ks = make_subspace(dR * n0, K);
  std::vector<Matrix> act;
  for (int i = 0; i < dR; ++i) {
    // x_i . (r (x) e) = (x_i r) (x) e
    Matrix M(dR * n0, dR * n0);
    for (int c = 0; c < dR; ++c) {
      const SparseVec& prod = R.table[i][c];
      for (const auto& [cc, tv] : prod)
        for (int ei = 0; ei < n0; ++ei) M.at(cc * n0 + ei, c * n0 + ei) = tv;
    }
    auto coords = coords_in(Ks, M * Ks.basis);
    if (!coords) throw std::logic_error("twisted_kernel_module: kernel is not stable");
    act.push_back(std::move(*coords));
  }
  return make_rmodule(R, std::move(act));
}

bool rmodule_iso_exists(const RModule& A, const RModule& B) {
  if (A.R != B.R || A.dim != B.dim) return false;
  int n = A.dim;
  if (n == 0) return true;
  int dR = A.R->dim();
  // solve f . A.act[i] = B.act[i] . f for all i
  Matrix sys(dR * n * n, n * n);
  for (int i = 0; i < dR; ++i)
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        int row = (i * n + r) * n + c;
        for (int t = 0; t < n; ++t) {
          sys.at(row, r * n + t) += A.act[i].at(t, c);
          sys.at(row, t * n + c) -= B.act[i].at(r, t);
        }
      }
  Matrix sol = kernel_basis(sys);
  if (sol.cols == 0) return false;
  auto unflatten_rank = [&](const Matrix& coeffs) {
    Matrix f(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        Scalar v;
        for (int j = 0; j < sol.cols; ++j) v += sol.at(r * n + c, j) * coeffs.at(j, 0);
        f.at(r, c) = v;
      }
    return rank(f) == n;
  };
  for (int j = 0; j < sol.cols; ++j) {
    Matrix coeffs(sol.cols, 1);
    coeffs.at(j, 0) = Scalar(1);
    if (unflatten_rank(coeffs)) return true;
  }
  {
    Matrix coeffs(sol.cols, 1);
    for (int j = 0; j < sol.cols; ++j) coeffs.at(j, 0) = Scalar(1);
    if (unflatten_rank(coeffs)) return true;
  }
  TestRng rng(0x5eedf00dULL);
  for (int tries = 0; tries < 64; ++tries) {
    Matrix coeffs(sol.cols, 1);
    for (int j = 0; j < sol.cols; ++j) coeffs.at(j, 0) = Scalar(rng.small_rational());
    if (unflatten_rank(coeffs)) return true;
  }
  return false;
}

}  // namespace forge
