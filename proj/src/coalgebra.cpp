#include "forge/coalgebra.hpp"

#include <stdexcept>
#include <utility>

namespace forge {

namespace {

Matrix kron(const Matrix& A, const Matrix& B) {
  Matrix out(A.rows * B.rows, A.cols * B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) {
      const Scalar& a = A.at(i, j);
      if (a.is_zero()) continue;
      for (int k = 0; k < B.rows; ++k)
        for (int l = 0; l < B.cols; ++l) {
          const Scalar& b = B.at(k, l);
          if (b.is_zero()) continue;
          out.at(i * B.rows + k, j * B.cols + l) = a * b;
        }
    }
  return out;
}

Subspace tensor_subspace(const Subspace& U, const Subspace& W) {
  return make_subspace(U.ambient * W.ambient, kron(U.basis, W.basis));
}

// Coaction of the augmented dual R^*: Delta(f_c) pairs with m (x) R through
// the multiplication table. Row layout (a * width + b) with a a V-coordinate
// (ideal index minus one) and b an R^*-coordinate.
Matrix dual_coaction(const ArtinAlgebra& R) {
  const int D = R.dim();
  const int vdim = D - 1;
  Matrix delta(vdim * D, D);
  for (int a = 1; a < D; ++a)
    for (int b = 0; b < D; ++b)
      for (const auto& [c, coeff] : R.table[a][b]) delta.at((a - 1) * D + b, c) = coeff;
  return delta;
}

// (id_V (x) f) on V (x) dom -> V (x) cod, flattened (a * dim + x).
Matrix id_tensor(int vdim, const Matrix& f) {
  Matrix out(vdim * f.rows, vdim * f.cols);
  for (int a = 0; a < vdim; ++a)
    for (int i = 0; i < f.rows; ++i)
      for (int j = 0; j < f.cols; ++j) out.at(a * f.rows + i, a * f.cols + j) = f.at(i, j);
  return out;
}

Matrix flatten(const Matrix& m) {
  Matrix v(m.rows * m.cols, 1);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) v.at(i * m.cols + j, 0) = m.at(i, j);
  return v;
}

Matrix unflatten(const Matrix& v, int rows, int cols) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m.at(i, j) = v.at(i * cols + j, 0);
  return m;
}

}  // namespace

void validate_mos(const MOSStructure& M) {
  if (M.os == nullptr) throw std::invalid_argument("comodule: missing base structure");
  if (M.n != M.os->n) throw std::invalid_argument("comodule: filtration length mismatch");
  if (static_cast<int>(M.B.size()) != M.n + 1)
    throw std::invalid_argument("comodule: wrong number of levels");
  for (int i = 0; i <= M.n; ++i) {
    if (M.B[i].ambient != M.bdim) throw std::invalid_argument("comodule: ambient mismatch");
    if (i > 0 && !subspace_leq(M.B[i - 1], M.B[i]))
      throw std::invalid_argument("comodule: filtration not nested");
  }
  if (!M.has_coact) return;
  if (M.B[M.n].dim() != M.bdim)
    throw std::invalid_argument("comodule: top level must be the whole space");
  const int vdim = M.os->vdim;
  if (M.coact.rows != vdim * M.bdim || M.coact.cols != M.bdim)
    throw std::invalid_argument("comodule: coaction has wrong shape");
  // coaction kills level 0
  if (M.B[0].dim() > 0 && !(M.coact * M.B[0].basis).is_zero())
    throw std::invalid_argument("comodule: coaction does not kill level 0");
  // Delta(B[i]) inside V[i] (x) B[i-1]
  for (int i = 1; i <= M.n; ++i) {
    Subspace target = tensor_subspace(M.os->V[i], M.B[i - 1]);
    if (!contains(target, M.coact * M.B[i].basis))
      throw std::invalid_argument("comodule: symbol map leaves its level");
  }
  // (comult (x) id) Delta = (id (x) Delta) Delta
  Matrix lhs(vdim * vdim * M.bdim, M.bdim), rhs(vdim * vdim * M.bdim, M.bdim);
  for (int c = 0; c < M.bdim; ++c)
    for (int a = 0; a < vdim; ++a)
      for (int b = 0; b < M.bdim; ++b) {
        const Scalar& x = M.coact.at(a * M.bdim + b, c);
        if (x.is_zero()) continue;
        for (int a1 = 0; a1 < vdim; ++a1)
          for (int a2 = 0; a2 < vdim; ++a2) {
            const Scalar& y = M.os->comult.at(a1 * vdim + a2, a);
            if (!y.is_zero()) lhs.at((a1 * vdim + a2) * M.bdim + b, c) = lhs.at((a1 * vdim + a2) * M.bdim + b, c) + x * y;
          }
        for (int a2 = 0; a2 < vdim; ++a2)
          for (int b2 = 0; b2 < M.bdim; ++b2) {
            const Scalar& y = M.coact.at(a2 * M.bdim + b2, b);
            if (!y.is_zero()) rhs.at((a * vdim + a2) * M.bdim + b2, c) = rhs.at((a * vdim + a2) * M.bdim + b2, c) + x * y;
          }
      }
  if (!(lhs - rhs).is_zero())
    throw std::invalid_argument("comodule: coassociativity square fails");
}

MOSStructure mos_of_dual(const ArtinAlgebra& R, const OSStructure& os) {
  const int D = R.dim();
  MOSStructure M;
  M.os = &os;
  M.n = os.n;
  M.bdim = D;
  Matrix unit_col(D, 1);
  unit_col.at(0, 0) = Scalar(1);
  M.B.resize(os.n + 1);
  M.B[0] = make_subspace(D, unit_col);
  for (int i = 1; i <= os.n; ++i) {
    // shift V[i] up by one coordinate and adjoin the unit functional
    Matrix cols(D, os.V[i].dim() + 1);
    cols.at(0, 0) = Scalar(1);
    for (int r = 0; r < os.vdim; ++r)
      for (int c = 0; c < os.V[i].dim(); ++c) cols.at(r + 1, c + 1) = os.V[i].basis.at(r, c);
    M.B[i] = make_subspace(D, cols);
  }
  M.has_coact = true;
  M.coact = dual_coaction(R);
  validate_mos(M);
  return M;
}

BModule build_B(const ArtinAlgebra& R, const OSStructure& os, const RModule& E) {
  const int D = R.dim();
  const int dE = E.dim;
  const int W = D * dE;
  // relations (r.f) (x) e - f (x) (r.e) over basis triples
  Matrix rels(W, (D - 1) * D * dE);
  int col = 0;
  for (int a = 1; a < D; ++a)
    for (int c = 0; c < D; ++c)
      for (int j = 0; j < dE; ++j, ++col) {
        for (int b = 0; b < D; ++b)
          for (const auto& [cc, x] : R.table[a][b])
            if (cc == c) rels.at(b * dE + j, col) = x;
        for (int i = 0; i < dE; ++i) {
          const Scalar& x = E.act[a].at(i, j);
          if (!x.is_zero()) rels.at(c * dE + i, col) = rels.at(c * dE + i, col) - x;
        }
      }
  Subspace U = make_subspace(W, rels);
  QuotientSplit qs = quotient_split(W, U);
  const int bdim = W - U.dim();

  const int vdim = os.vdim;
  // ambient coaction Delta_0 (x) id_E on W
  Matrix deltaW(vdim * W, W);
  for (int c = 0; c < D; ++c)
    for (int a = 1; a < D; ++a)
      for (int b = 0; b < D; ++b) {
        Scalar coeff(0);
        for (const auto& [cc, x] : R.table[a][b])
          if (cc == c) coeff = x;
        if (coeff.is_zero()) continue;
        for (int j = 0; j < dE; ++j)
          deltaW.at((a - 1) * W + (b * dE + j), c * dE + j) = coeff;
      }
  // the relation space must be stable, otherwise the induced coaction would
  // depend on the chosen splitting
  if (U.dim() > 0) {
    Subspace VU = tensor_subspace(full_subspace(vdim), U);
    if (!contains(VU, deltaW * U.basis))
      throw std::logic_error("tensor-over-R relations not stable under the coaction");
  }

  MOSStructure M;
  M.os = &os;
  M.n = os.n;
  M.bdim = bdim;
  M.B.resize(os.n + 1);
  for (int i = 0; i <= os.n; ++i) {
    const int nv = (i == 0) ? 0 : os.V[i].dim();
    Matrix cols(W, (nv + 1) * dE);
    for (int j = 0; j < dE; ++j) cols.at(0 * dE + j, j) = Scalar(1);
    for (int c = 0; c < nv; ++c)
      for (int r = 0; r < vdim; ++r) {
        const Scalar& x = os.V[i].basis.at(r, c);
        if (x.is_zero()) continue;
        for (int j = 0; j < dE; ++j) cols.at((r + 1) * dE + j, (c + 1) * dE + j) = x;
      }
    M.B[i] = make_subspace(bdim, qs.projection * cols);
  }
  M.has_coact = true;
  M.coact = id_tensor(vdim, qs.projection) * deltaW * qs.inclusion;
  validate_mos(M);
  return BModule{std::move(M), qs.projection, qs.inclusion};
}

Matrix b_of_map(const ArtinAlgebra& R, const BModule& B1, const BModule& B2, const Matrix& f) {
  const int D = R.dim();
  Matrix lifted(D * f.rows, D * f.cols);
  for (int a = 0; a < D; ++a)
    for (int i = 0; i < f.rows; ++i)
      for (int j = 0; j < f.cols; ++j) lifted.at(a * f.rows + i, a * f.cols + j) = f.at(i, j);
  return B2.proj * lifted * B1.incl;
}

std::vector<Matrix> hom_mos_basis(const MOSStructure& B1, const MOSStructure& B2) {
  if (!B1.has_coact || !B2.has_coact)
    throw std::invalid_argument("hom_mos_basis: both sides need a coaction");
  if (B1.os != B2.os && B1.os->vdim != B2.os->vdim)
    throw std::invalid_argument("hom_mos_basis: base structures differ");
  const int d1 = B1.bdim, d2 = B2.bdim, vdim = B1.os->vdim;
  const int unknowns = d2 * d1;  // phi(r, c) at r * d1 + c
  std::vector<std::vector<Scalar>> eqs;

  // filtration at every level, including level 0
  for (int i = 0; i <= B1.n; ++i) {
    QuotientSplit q = quotient_split(d2, B2.B[i]);
    const Matrix& inc = B1.B[i].basis;
    // rows of q.projection * phi * inc must vanish
    for (int r = 0; r < q.projection.rows; ++r)
      for (int c = 0; c < inc.cols; ++c) {
        std::vector<Scalar> eq(unknowns);
        for (int x = 0; x < d2; ++x) {
          const Scalar& p = q.projection.at(r, x);
          if (p.is_zero()) continue;
          for (int y = 0; y < d1; ++y) {
            const Scalar& v = inc.at(y, c);
            if (!v.is_zero()) eq[x * d1 + y] = eq[x * d1 + y] + p * v;
          }
        }
        eqs.push_back(std::move(eq));
      }
  }
  // coact_2 . phi = (id (x) phi) . coact_1
  for (int c = 0; c < d1; ++c)
    for (int a = 0; a < vdim; ++a)
      for (int b = 0; b < d2; ++b) {
        std::vector<Scalar> eq(unknowns);
        for (int y = 0; y < d2; ++y) {
          const Scalar& x = B2.coact.at(a * d2 + b, y);
          if (!x.is_zero()) eq[y * d1 + c] = eq[y * d1 + c] + x;
        }
        for (int y = 0; y < d1; ++y) {
          const Scalar& x = B1.coact.at(a * d1 + y, c);
          if (!x.is_zero()) eq[b * d1 + y] = eq[b * d1 + y] - x;
        }
        eqs.push_back(std::move(eq));
      }

  Matrix sys(static_cast<int>(eqs.size()), unknowns);
  for (int r = 0; r < sys.rows; ++r)
    for (int c = 0; c < unknowns; ++c) sys.at(r, c) = eqs[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  Matrix K = kernel_basis(sys);
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(K.cols));
  for (int k = 0; k < K.cols; ++k) out.push_back(unflatten(K.col(k), d2, d1));
  return out;
}

CModule build_C(const ArtinAlgebra& R, const OSStructure& os, const MOSStructure& B) {
  MOSStructure V0 = mos_of_dual(R, os);
  std::vector<Matrix> phis = hom_mos_basis(V0, B);
  const int nh = static_cast<int>(phis.size());
  const int D = R.dim();

  Matrix stacked(B.bdim * D, nh);
  for (int k = 0; k < nh; ++k) {
    Matrix f = flatten(phis[static_cast<std::size_t>(k)]);
    for (int r = 0; r < f.rows; ++r) stacked.at(r, k) = f.at(r, 0);
  }

  std::vector<Matrix> act;
  act.reserve(static_cast<std::size_t>(D));
  for (int a = 0; a < D; ++a) {
    // dual action on V_0: r_a . f_c = sum_b table[a][b]_c f_b
    Matrix rho(D, D);
    for (int b = 0; b < D; ++b)
      for (const auto& [c, coeff] : R.table[a][b]) rho.at(b, c) = coeff;
    Matrix img(B.bdim * D, nh);
    for (int k = 0; k < nh; ++k) {
      Matrix f = flatten(phis[static_cast<std::size_t>(k)] * rho);
      for (int r = 0; r < f.rows; ++r) img.at(r, k) = f.at(r, 0);
    }
    auto in_phis = solve(stacked, img);
    if (!in_phis) throw std::logic_error("module action leaves the Hom space");
    act.push_back(*in_phis);
  }
  CModule out;
  out.mod = make_rmodule(R, std::move(act));
  out.phis = std::move(phis);
  return out;
}

Matrix c_of_map(const CModule& C1, const CModule& C2, const Matrix& f) {
  if (C1.phis.empty() && C2.phis.empty()) return Matrix(0, 0);
  const int n1 = static_cast<int>(C1.phis.size());
  const int n2 = static_cast<int>(C2.phis.size());
  const int rows = n2 == 0 ? 0 : C2.phis[0].rows * C2.phis[0].cols;
  Matrix stacked(rows, n2), img(rows, n1);
  for (int k = 0; k < n2; ++k) {
    Matrix v = flatten(C2.phis[static_cast<std::size_t>(k)]);
    for (int r = 0; r < rows; ++r) stacked.at(r, k) = v.at(r, 0);
  }
  for (int k = 0; k < n1; ++k) {
    Matrix v = flatten(f * C1.phis[static_cast<std::size_t>(k)]);
    for (int r = 0; r < rows; ++r) img.at(r, k) = v.at(r, 0);
  }
  auto coords = solve(stacked, img);
  if (!coords) throw std::logic_error("induced map leaves the Hom space");
  return *coords;
}

Matrix unit_map(const ArtinAlgebra& R, const OSStructure& os, const RModule& E,
                const BModule& BE, const CModule& CBE) {
  (void)os;
  const int D = R.dim();
  const int dE = E.dim;
  const int nh = static_cast<int>(CBE.phis.size());
  const int rows = BE.mos.bdim * D;
  Matrix stacked(rows, nh);
  for (int k = 0; k < nh; ++k) {
    Matrix v = flatten(CBE.phis[static_cast<std::size_t>(k)]);
    for (int r = 0; r < rows; ++r) stacked.at(r, k) = v.at(r, 0);
  }
  Matrix out(nh, dE);
  for (int j = 0; j < dE; ++j) {
    // v -> v (x) e_j, then project to B(E)
    Matrix S(D * dE, D);
    for (int b = 0; b < D; ++b) S.at(b * dE + j, b) = Scalar(1);
    Matrix phi = BE.proj * S;
    auto coords = solve(stacked, flatten(phi));
    if (!coords) throw std::logic_error("unit does not land in the Hom space");
    for (int k = 0; k < nh; ++k) out.at(k, j) = coords->at(k, 0);
  }
  return out;
}

Matrix counit_map(const ArtinAlgebra& R, const OSStructure& os, const MOSStructure& D,
                  const CModule& CD, const BModule& BCD) {
  (void)os;
  const int Dm = R.dim();
  const int nh = static_cast<int>(CD.phis.size());
  const int W = Dm * nh;
  Matrix raw(D.bdim, W);
  for (int b = 0; b < Dm; ++b)
    for (int k = 0; k < nh; ++k)
      for (int r = 0; r < D.bdim; ++r) raw.at(r, b * nh + k) = CD.phis[static_cast<std::size_t>(k)].at(r, b);
  Matrix relations = kernel_basis(BCD.proj);
  if (!(raw * relations).is_zero())
    throw std::logic_error("counit assignment does not factor through the tensor product");
  return raw * BCD.incl;
}

namespace {

// j-fold comultiplication V -> V^{(x) j} by left iteration.
Matrix iterated_comult(const OSStructure& os, int j) {
  const int vdim = os.vdim;
  if (j == 1) return Matrix::identity(vdim);
  Matrix prev = iterated_comult(os, j - 1);  // V -> V^{(x) (j-1)}
  // apply comult to the first factor of the result of one comult step:
  // V -> V (x) V, then prev on the second factor? Keep it simple:
  // V -> V^{(x) j} = (comult (x) id^{(x) j-2}) . prev is awkward to index;
  // instead expand (id^{(x) j-2} (x) comult) . prev: apply comult to the last
  // factor of prev.
  const int prows = prev.rows;  // vdim^{j-1}
  Matrix out(prows * vdim, vdim);
  for (int c = 0; c < vdim; ++c)
    for (int r = 0; r < prows; ++r) {
      const Scalar& x = prev.at(r, c);
      if (x.is_zero()) continue;
      const int head = r / vdim;   // first j-2 factors
      const int last = r % vdim;   // last factor, to be split
      for (int a = 0; a < vdim; ++a)
        for (int b = 0; b < vdim; ++b) {
          const Scalar& y = os.comult.at(a * vdim + b, last);
          if (y.is_zero()) continue;
          const int row = (head * vdim + a) * vdim + b;
          out.at(row, c) = out.at(row, c) + x * y;
        }
    }
  return out;
}

// filtration of the j-fold tensor power in ambient coordinates of B^{(x) j}
std::vector<Subspace> tensor_levels_of(const MOSStructure& B, int j) {
  if (!B.has_coact) throw std::invalid_argument("tensor construction needs a coaction");
  const OSStructure& os = *B.os;
  const int vdim = os.vdim;
  const int bd = B.bdim;
  int N = 1;
  for (int t = 0; t < j; ++t) N *= bd;
  int VN = 1;
  for (int t = 0; t < j; ++t) VN *= vdim;

  std::vector<Subspace> levels(static_cast<std::size_t>(B.n) + 1);
  // level 0: (B[0])^{(x) j}
  Matrix l0 = Matrix::identity(1);
  for (int t = 0; t < j; ++t) l0 = kron(l0, B.B[0].basis);
  levels[0] = make_subspace(N, l0);
  if (j == 0) {
    for (int i = 1; i <= B.n; ++i) levels[static_cast<std::size_t>(i)] = full_subspace(1);
    return levels;
  }

  // the natural map: apply the coaction in every factor and collect the V's
  // in front: B^{(x) j} -> V^{(x) j} (x) B^{(x) j}
  Matrix F(VN * N, N);
  {
    // build by iterating factors: maintain map into V^{(x) t} (x) B^{(x) t}
    Matrix cur = Matrix::identity(1);  // V^0 (x) B^0
    int vt = 1, bt = 1;
    for (int t = 0; t < j; ++t) {
      // new = rearrange(cur (x) coact): rows ((v_old, v_new), (b_old, b_new))
      Matrix next(vt * vdim * bt * bd, cur.cols * bd);
      for (int c = 0; c < cur.cols; ++c)
        for (int r = 0; r < cur.rows; ++r) {
          const Scalar& x = cur.at(r, c);
          if (x.is_zero()) continue;
          const int vo = r / bt, bo = r % bt;
          for (int cc = 0; cc < bd; ++cc)
            for (int a = 0; a < vdim; ++a)
              for (int bb = 0; bb < bd; ++bb) {
                const Scalar& y = B.coact.at(a * bd + bb, cc);
                if (y.is_zero()) continue;
                const int row = ((vo * vdim + a) * bt + bo) * bd + bb;
                next.at(row, c * bd + cc) = next.at(row, c * bd + cc) + x * y;
              }
        }
      cur = std::move(next);
      vt *= vdim;
      bt *= bd;
    }
    F = std::move(cur);
  }

  Matrix dj = iterated_comult(os, j);  // V -> V^{(x) j}
  for (int i = 1; i <= B.n; ++i) {
    // target: dj(V[i]) (x) levels[i-1]
    Matrix target_cols = kron(dj * os.V[i].basis, levels[static_cast<std::size_t>(i) - 1].basis);
    Subspace target = make_subspace(VN * N, target_cols);
    QuotientSplit qt = quotient_split(VN * N, target);
    // restrict to B[i]^{(x) j}
    Matrix sub = Matrix::identity(1);
    for (int t = 0; t < j; ++t) sub = kron(sub, B.B[i].basis);
    Matrix restricted = qt.projection * F * sub;
    Matrix K = kernel_basis(restricted);
    levels[static_cast<std::size_t>(i)] = make_subspace(N, sub * K);
  }
  return levels;
}

MOSStructure repackage(const OSStructure& os, std::vector<Subspace> raw) {
  const Subspace& top = raw.back();
  MOSStructure out;
  out.os = &os;
  out.n = static_cast<int>(raw.size()) - 1;
  out.bdim = top.dim();
  out.has_coact = false;
  out.B.resize(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto coords = coords_in(top, raw[i].basis);
    if (!coords) throw std::logic_error("tensor filtration is not nested in its top level");
    out.B[i] = make_subspace(out.bdim, *coords);
  }
  return out;
}

}  // namespace

MOSStructure mos_tensor(const MOSStructure& B1, const MOSStructure& B2) {
  if (!B1.has_coact || !B2.has_coact)
    throw std::invalid_argument("mos_tensor needs coactions");
  if (B1.os != B2.os) throw std::invalid_argument("mos_tensor: different base structures");
  const OSStructure& os = *B1.os;
  const int vdim = os.vdim;
  const int N = B1.bdim * B2.bdim;

  std::vector<Subspace> levels(static_cast<std::size_t>(B1.n) + 1);
  levels[0] = tensor_subspace(B1.B[0], B2.B[0]);

  // natural map B1 (x) B2 -> (V (x) V) (x) (B1 (x) B2)
  Matrix F(vdim * vdim * N, N);
  for (int c1 = 0; c1 < B1.bdim; ++c1)
    for (int c2 = 0; c2 < B2.bdim; ++c2)
      for (int a1 = 0; a1 < vdim; ++a1)
        for (int b1 = 0; b1 < B1.bdim; ++b1) {
          const Scalar& x = B1.coact.at(a1 * B1.bdim + b1, c1);
          if (x.is_zero()) continue;
          for (int a2 = 0; a2 < vdim; ++a2)
            for (int b2 = 0; b2 < B2.bdim; ++b2) {
              const Scalar& y = B2.coact.at(a2 * B2.bdim + b2, c2);
              if (y.is_zero()) continue;
              const int row = (a1 * vdim + a2) * N + (b1 * B2.bdim + b2);
              F.at(row, c1 * B2.bdim + c2) = F.at(row, c1 * B2.bdim + c2) + x * y;
            }
        }

  for (int i = 1; i <= B1.n; ++i) {
    Matrix target_cols = kron(os.comult * os.V[i].basis, levels[static_cast<std::size_t>(i) - 1].basis);
    Subspace target = make_subspace(vdim * vdim * N, target_cols);
    QuotientSplit qt = quotient_split(vdim * vdim * N, target);
    Matrix sub = kron(B1.B[i].basis, B2.B[i].basis);
    Matrix K = kernel_basis(qt.projection * F * sub);
    levels[static_cast<std::size_t>(i)] = make_subspace(N, sub * K);
  }
  return repackage(os, std::move(levels));
}

MOSStructure mos_power(const MOSStructure& B, int j) {
  if (j < 0) throw std::invalid_argument("mos_power: negative exponent");
  return repackage(*B.os, tensor_levels_of(B, j));
}

SymMOS mos_sym(const MOSStructure& B, int j) {
  if (j < 0) throw std::invalid_argument("mos_sym: negative exponent");
  const int bd = B.bdim;
  int N = 1;
  for (int t = 0; t < j; ++t) N *= bd;

  Subspace inv;
  if (j <= 1) {
    inv = full_subspace(N);
  } else {
    std::vector<std::vector<Scalar>> eqs;
    // kernel of (swap_{t,t+1} - id) for all adjacent transpositions
    for (int t = 0; t + 1 < j; ++t) {
      int left = 1, right = 1;
      for (int s = 0; s < t; ++s) left *= bd;
      for (int s = t + 2; s < j; ++s) right *= bd;
      Matrix eq(N, N);
      for (int l = 0; l < left; ++l)
        for (int x = 0; x < bd; ++x)
          for (int y = 0; y < bd; ++y)
            for (int r = 0; r < right; ++r) {
              int from = ((l * bd + x) * bd + y) * right + r;
              int to = ((l * bd + y) * bd + x) * right + r;
              eq.at(to, from) = eq.at(to, from) + Scalar(1);
              eq.at(from, from) = eq.at(from, from) - Scalar(1);
            }
      for (int r = 0; r < N; ++r) {
        std::vector<Scalar> row(static_cast<std::size_t>(N));
        bool nz = false;
        for (int c = 0; c < N; ++c) {
          row[static_cast<std::size_t>(c)] = eq.at(r, c);
          nz = nz || !eq.at(r, c).is_zero();
        }
        if (nz) eqs.push_back(std::move(row));
      }
    }
    Matrix sys(static_cast<int>(eqs.size()), N);
    for (int r = 0; r < sys.rows; ++r)
      for (int c = 0; c < N; ++c) sys.at(r, c) = eqs[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    inv = make_subspace(N, kernel_basis(sys));
  }

  std::vector<Subspace> raw = tensor_levels_of(B, j);
  SymMOS out;
  out.n = B.n;
  out.invariants = inv;
  out.dim = inv.dim();
  out.levels.resize(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    Subspace cut = intersect(raw[i], inv);
    auto coords = coords_in(inv, cut.basis);
    if (!coords) throw std::logic_error("symmetric level escapes the invariant subspace");
    out.levels[i] = make_subspace(out.dim, *coords);
  }
  return out;
}

bool sym_comult_containment(const MOSStructure& B, int i, int j) {
  if (j < 0 || j > i) throw std::invalid_argument("sym_comult_containment: bad split");
  std::vector<Subspace> big = tensor_levels_of(B, i);
  SymMOS si = mos_sym(B, i);
  SymMOS sj = mos_sym(B, j);
  SymMOS sk = mos_sym(B, i - j);
  Subspace pairinv = tensor_subspace(sj.invariants, sk.invariants);
  for (int l = 0; l <= B.n; ++l) {
    Matrix level_ambient = si.invariants.basis * si.levels[static_cast<std::size_t>(l)].basis;
    Subspace target = intersect(pairinv, big[static_cast<std::size_t>(l)]);
    if (!contains(target, level_ambient)) return false;
  }
  return true;
}

}  // namespace forge
