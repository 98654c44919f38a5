#include "forge/chain.hpp"

#include <stdexcept>

namespace forge {

Matrix CochainComplex::dmat(int t) const {
  if (!in_range(t)) return Matrix(dim(t + 1), 0);
  if (t + 1 > hi()) return Matrix(0, dim(t));
  return d[t - lo];
}

void CochainComplex::check_d2() const {
  for (int t = lo; t + 2 <= hi(); ++t) {
    Matrix comp = dmat(t + 1) * dmat(t);
    if (!comp.is_zero()) throw std::logic_error("cochain complex: d*d != 0");
  }
}

SlotSplit slot_split(const CochainComplex& cx, int t) {
  SlotSplit s;
  s.t = t;
  int n = cx.dim(t);
  Matrix din = cx.in_range(t - 1) ? cx.dmat(t - 1) : Matrix(n, 0);
  Matrix dout = cx.dmat(t);
  s.B = make_subspace(n, image_basis(din));
  s.Z = (dout.rows == 0) ? full_subspace(n) : make_subspace(n, kernel_basis(dout));
  s.C = complement_in(s.Z, s.B);
  // A = canonical complement of Z in the slot; assemble [B C A] and invert
  QuotientSplit qa = quotient_split(n, s.Z);
  Matrix S = s.B.basis.hcat(s.C.basis).hcat(qa.inclusion);
  if (S.rows != S.cols) throw std::logic_error("slot_split: decomposition mismatch");
  if (n == 0) {
    s.pi = Matrix(0, 0);
    return s;
  }
  Matrix Sinv = inverse(S);
  std::vector<int> crows;
  for (int r = s.B.dim(); r < s.B.dim() + s.C.dim(); ++r) crows.push_back(r);
  s.pi = Sinv.take_rows(crows);
  return s;
}

int cohomology_dim(const CochainComplex& cx, int t) { return slot_split(cx, t).h_dim(); }

Matrix cohomology_class(const CochainComplex& cx, const SlotSplit& s, const Matrix& cocycles) {
  if (!contains(s.Z, cocycles)) throw std::invalid_argument("cohomology_class: not a cocycle");
  (void)cx;
  return s.pi * cocycles;
}

std::optional<Matrix> canonical_preimage(const CochainComplex& cx, int t, const Matrix& y) {
  return solve(cx.dmat(t), y);
}

}  // namespace forge
