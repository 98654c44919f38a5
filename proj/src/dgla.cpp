#include "forge/dgla.hpp"

#include <stdexcept>

namespace forge {

namespace {

// degree of a sparse vector if homogeneous; throws when mixed
int sv_degree(const GradedSpace& V, const SparseVec& v, int fallback) {
  int deg = fallback;
  bool seen = false;
  for (const auto& [k, c] : v) {
    (void)c;
    if (!seen) {
      deg = V.degree(k);
      seen = true;
    } else if (V.degree(k) != deg) {
      throw std::invalid_argument("dgla: inhomogeneous structure constant");
    }
  }
  return deg;
}

}  // namespace

SparseVec DGLA::br(const SparseVec& x, const SparseVec& y) const {
  SparseVec out;
  for (const auto& [a, ca] : x)
    for (const auto& [b, cb] : y) sv_axpy(out, ca * cb, bracket[a][b]);
  return out;
}

DGLA make_dgla(GradedSpace g, std::vector<std::vector<SparseVec>> bracket, Matrix delta) {
  DGLA L;
  L.g = std::move(g);
  L.bracket = std::move(bracket);
  L.delta = std::move(delta);
  int n = L.dim();
  if (static_cast<int>(L.bracket.size()) != n) throw std::invalid_argument("dgla: bracket shape");
  for (auto& row : L.bracket)
    if (static_cast<int>(row.size()) != n) throw std::invalid_argument("dgla: bracket shape");
  if (L.delta.rows != n || L.delta.cols != n) throw std::invalid_argument("dgla: delta shape");
  // degrees
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (!L.bracket[a][b].empty() &&
          sv_degree(L.g, L.bracket[a][b], 0) != L.g.degree(a) + L.g.degree(b))
        throw std::invalid_argument("dgla: bracket off degree");
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (!L.delta.at(r, c).is_zero() && L.g.degree(r) != L.g.degree(c) + 1)
        throw std::invalid_argument("dgla: delta off degree");
  // graded antisymmetry
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      SparseVec rhs = sv_scaled(L.bracket[b][a],
                                -sign_pow(static_cast<long>(L.g.degree(a)) * L.g.degree(b)));
      if (L.bracket[a][b] != rhs) throw std::invalid_argument("dgla: bracket not antisymmetric");
    }
  // graded Jacobi on basis triples
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        SparseVec lhs = L.br({{a, Scalar(1)}}, L.bracket[b][c]);
        SparseVec r1 = L.br(L.bracket[a][b], {{c, Scalar(1)}});
        SparseVec r2 = sv_scaled(L.br({{b, Scalar(1)}}, L.bracket[a][c]),
                                 sign_pow(static_cast<long>(L.g.degree(a)) * L.g.degree(b)));
        sv_axpy(r1, Scalar(1), r2);
        if (lhs != r1) throw std::invalid_argument("dgla: Jacobi identity fails");
      }
  // δ² = 0
  if (!(L.delta * L.delta).is_zero()) throw std::invalid_argument("dgla: delta not square-zero");
  // δ derivation of the bracket
  auto apply_delta = [&](const SparseVec& v) {
    SparseVec out;
    for (const auto& [k, ck] : v) sv_axpy(out, ck, col_to_sv(L.delta, k));
    return out;
  };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      SparseVec lhs = apply_delta(L.bracket[a][b]);
      SparseVec rhs = L.br(apply_delta({{a, Scalar(1)}}), {{b, Scalar(1)}});
      sv_axpy(rhs, sign_pow(L.g.degree(a)), L.br({{a, Scalar(1)}}, apply_delta({{b, Scalar(1)}})));
      if (lhs != rhs) throw std::invalid_argument("dgla: delta is not a bracket derivation");
    }
  return L;
}

DGLA abelian_dgla(GradedSpace g, Matrix delta) {
  int n = g.dim();
  return make_dgla(std::move(g), std::vector<std::vector<SparseVec>>(n, std::vector<SparseVec>(n)),
                   std::move(delta));
}

GModule make_gmodule(const DGLA& g, GradedSpace E, Matrix dE, std::vector<Matrix> act) {
  GModule M;
  M.E = std::move(E);
  M.dE = std::move(dE);
  M.act = std::move(act);
  int n = g.dim(), ne = M.dim();
  if (M.dE.rows != ne || M.dE.cols != ne) throw std::invalid_argument("gmodule: dE shape");
  if (static_cast<int>(M.act.size()) != n) throw std::invalid_argument("gmodule: action size");
  for (int a = 0; a < n; ++a) {
    const Matrix& m = M.act[a];
    if (m.rows != ne || m.cols != ne) throw std::invalid_argument("gmodule: action shape");
    for (int r = 0; r < ne; ++r)
      for (int c = 0; c < ne; ++c)
        if (!m.at(r, c).is_zero() && M.E.degree(r) != M.E.degree(c) + g.g.degree(a))
          throw std::invalid_argument("gmodule: action off degree");
  }
  for (int r = 0; r < ne; ++r)
    for (int c = 0; c < ne; ++c)
      if (!M.dE.at(r, c).is_zero() && M.E.degree(r) != M.E.degree(c) + 1)
        throw std::invalid_argument("gmodule: dE off degree");
  if (!(M.dE * M.dE).is_zero()) throw std::invalid_argument("gmodule: dE not square-zero");
  auto act_of = [&](const SparseVec& v) {
    Matrix out(ne, ne);
    for (const auto& [k, ck] : v) out = out + M.act[k].scaled(ck);
    return out;
  };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Matrix lhs = act_of(g.bracket[a][b]);
      Matrix rhs = M.act[a] * M.act[b] -
                   (M.act[b] * M.act[a])
                       .scaled(sign_pow(static_cast<long>(g.g.degree(a)) * g.g.degree(b)));
      if (!(lhs == rhs)) throw std::invalid_argument("gmodule: action axiom fails");
    }
  // differential compatibility
  for (int a = 0; a < n; ++a) {
    Matrix lhs = M.dE * M.act[a];
    Matrix rhs = act_of(col_to_sv(g.delta, a)) + (M.act[a] * M.dE).scaled(sign_pow(g.g.degree(a)));
    if (!(lhs == rhs)) throw std::invalid_argument("gmodule: dE incompatible with action");
  }
  return M;
}

GModule trivial_gmodule(const DGLA& g, GradedSpace E, Matrix dE) {
  int ne = E.dim();
  return make_gmodule(g, std::move(E), std::move(dE),
                      std::vector<Matrix>(g.dim(), Matrix(ne, ne)));
}

CochainComplex dgla_complex(const DGLA& g) {
  CochainComplex cx;
  if (g.dim() == 0) {
    cx.lo = 0;
    cx.dims = {0};
    return cx;
  }
  int lo = g.g.degree(0), hi = g.g.degree(g.dim() - 1);
  cx.lo = lo;
  for (int t = lo; t <= hi; ++t) cx.dims.push_back(static_cast<int>(g.g.of_degree(t).size()));
  for (int t = lo; t < hi; ++t) {
    std::vector<int> dom = g.g.of_degree(t);
    std::vector<int> cod = g.g.of_degree(t + 1);
    Matrix d(static_cast<int>(cod.size()), static_cast<int>(dom.size()));
    for (std::size_t c = 0; c < dom.size(); ++c)
      for (std::size_t r = 0; r < cod.size(); ++r) d.at(static_cast<int>(r), static_cast<int>(c)) =
          g.delta.at(cod[r], dom[c]);
    cx.d.push_back(std::move(d));
  }
  return cx;
}

int dgla_h_dim(const DGLA& g, int k) {
  CochainComplex cx = dgla_complex(g);
  if (!cx.in_range(k)) return 0;
  return cohomology_dim(cx, k);
}

SlotSplit dgla_h_split(const DGLA& g, int k) {
  CochainComplex cx = dgla_complex(g);
  if (!cx.in_range(k)) {
    SlotSplit s;
    s.t = k;
    s.B = zero_subspace(0);
    s.Z = zero_subspace(0);
    s.C = zero_subspace(0);
    s.pi = Matrix(0, 0);
    return s;
  }
  return slot_split(cx, k);
}

}  // namespace forge
