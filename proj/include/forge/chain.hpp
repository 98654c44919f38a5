#pragma once

// Cochain complexes over contiguous integer degree windows, with canonical
// homotopy data per slot: image B ⊆ kernel Z, a canonical complement C of B in
// Z (the computed model of cohomology), a canonical complement A of Z, and the
// projection onto C along B ⊕ A.

#include "forge/matrix.hpp"

#include <vector>

namespace forge {

struct CochainComplex {
  int lo = 0;              // degree of slot 0
  std::vector<int> dims;   // per slot
  std::vector<Matrix> d;   // d[k] : slot k -> slot k+1; size = slots - 1 (empty if <2 slots)

  int hi() const { return lo + static_cast<int>(dims.size()) - 1; }
  bool in_range(int t) const { return t >= lo && t <= hi(); }
  int dim(int t) const { return in_range(t) ? dims[t - lo] : 0; }
  // differential out of slot t; a 0 x dim(t) matrix if t+1 is out of range
  Matrix dmat(int t) const;
  void check_d2() const;  // throws if some composite is nonzero
};

struct SlotSplit {
  int t = 0;
  Subspace B;  // image of d into the slot (zero if t-1 out of range)
  Subspace Z;  // kernel of d out of the slot (everything if t+1 out of range)
  Subspace C;  // canonical complement of B in Z — the cohomology model
  Matrix pi;   // C.dim() x dim(t): C-coordinates of projection along B ⊕ A

  int h_dim() const { return C.dim(); }
};

SlotSplit slot_split(const CochainComplex& cx, int t);

int cohomology_dim(const CochainComplex& cx, int t);

// The C-class of a cocycle (columns must be in Z; throws otherwise).
Matrix cohomology_class(const CochainComplex& cx, const SlotSplit& s, const Matrix& cocycles);

// Canonical preimage: solves d x = y with the canonical particular solution
// (free coordinates zero in the echelon of d). nullopt if y is not exact.
std::optional<Matrix> canonical_preimage(const CochainComplex& cx, int t, const Matrix& y);

}  // namespace forge
