#pragma once

// Filtered comodules ("modular symbol structures") over the dual coalgebra of
// an artin local algebra, with the tensor/Hom adjunction between modules and
// comodules:
//
//   B : R-modules -> comodules,   B(E) = R^* (x)_R E
//   C : comodules -> R-modules,   C(B) = Hom_filtered-comodule(R^*, B)
//
// and the natural unit/counit maps making (B, C) an adjoint-style pair that
// restricts to an equivalence on free modules / cofree comodules.
//
// Conventions. For an algebra R with basis 0 = unit and 1..dim-1 spanning the
// maximal ideal, the coordinate space of the dual coalgebra V is the dual
// basis of the ideal part (indices shifted down by one); the augmented space
// V_0 = R^* keeps the unit functional at index 0. A comodule structure is a
// coaction Delta : B -> V (x) B with
//   * Delta(B[0]) = 0,
//   * Delta(B[i]) contained in V[i] (x) B[i-1],
//   * (comult (x) id) Delta = (id (x) Delta) Delta.
// Morphisms respect the filtration at every level including level 0; this is
// the strict reading of compatibility with augmentations.

#include "forge/artin.hpp"
#include "forge/matrix.hpp"

#include <vector>

namespace forge {

struct MOSStructure {
  const OSStructure* os = nullptr;
  int n = 0;     // filtration length; equals os->n
  int bdim = 0;  // ambient dimension
  std::vector<Subspace> B;  // B[0] <= ... <= B[n] = full
  bool has_coact = true;    // purely filtered instances carry no coaction
  Matrix coact;             // B -> V (x) B, row (a * bdim + b), col c
};

// Checks the comodule axioms above (nesting always; coaction axioms when
// declared). Throws std::invalid_argument on violation.
void validate_mos(const MOSStructure& M);

// The augmented dual R^* as a comodule over its own coalgebra: coaction dual
// to the multiplication m (x) R -> R.
MOSStructure mos_of_dual(const ArtinAlgebra& R, const OSStructure& os);

// B(E) = R^* (x)_R E presented as a quotient of the plain tensor product
// W = R^* (x) E by the span of (r.f) (x) e - f (x) (r.e), where
// (r.f)(x) = f(rx). proj/incl realize the canonical splitting of W.
struct BModule {
  MOSStructure mos;
  Matrix proj;  // W -> B(E), W indexed (a * dimE + e)
  Matrix incl;  // B(E) -> W, section of proj
};

BModule build_B(const ArtinAlgebra& R, const OSStructure& os, const RModule& E);

// Induced map B(E1) -> B(E2) of a module map f : E1 -> E2.
Matrix b_of_map(const ArtinAlgebra& R, const BModule& B1, const BModule& B2, const Matrix& f);

// Basis of the space of comodule maps B1 -> B2: matrices compatible with the
// filtrations and intertwining the coactions.
std::vector<Matrix> hom_mos_basis(const MOSStructure& B1, const MOSStructure& B2);

// C(B) = Hom(V_0, B) with R acting through the dual action on V_0. phis hold
// the chosen basis of the Hom space.
struct CModule {
  RModule mod;
  std::vector<Matrix> phis;  // each bdim x dim(R)
};

CModule build_C(const ArtinAlgebra& R, const OSStructure& os, const MOSStructure& B);

// Induced map C(B1) -> C(B2) of a comodule map f.
Matrix c_of_map(const CModule& C1, const CModule& C2, const Matrix& f);

// unit : E -> C(B(E)), e -> (v -> v (x) e).
Matrix unit_map(const ArtinAlgebra& R, const OSStructure& os, const RModule& E,
                const BModule& BE, const CModule& CBE);

// counit : B(C(D)) -> D, v (x) phi -> phi(v). BCD must be build_B of
// CD.mod. Throws if the defining assignment fails to kill the tensor-product
// relations (which would signal an inconsistent input pair).
Matrix counit_map(const ArtinAlgebra& R, const OSStructure& os, const MOSStructure& D,
                  const CModule& CD, const BModule& BCD);

// Tensor product over V of two comodules: the ambient space is B1 (x) B2 and
// level i is the preimage of V[i] (x) C[i-1] (embedded by comult (x)
// inclusion) under the product of the two coactions. The result is a filtered
// structure only; no coaction is declared on it.
MOSStructure mos_tensor(const MOSStructure& B1, const MOSStructure& B2);

// j-fold variant of the same construction inside B^{(x) j}.
MOSStructure mos_power(const MOSStructure& B, int j);

// Symmetric part: the filtration of mos_power intersected with the
// S_j-invariant subspace of B^{(x) j}, in coordinates of that subspace.
// @return levels plus the invariant-subspace inclusion into B^{(x) j}.
struct SymMOS {
  int n = 0;
  int dim = 0;        // dim of the invariant subspace
  Subspace invariants;  // inside B^{(x) j}
  std::vector<Subspace> levels;  // in invariant coordinates
};

SymMOS mos_sym(const MOSStructure& B, int j);

// The comultiplication containment sym^i -> sym^j (x) sym^{i-j}: every level
// of mos_sym(B, i) must land, inside B^{(x) i}, in the span of
// (level of mos_power(B, i)) intersected with invariants (x) invariants.
bool sym_comult_containment(const MOSStructure& B, int i, int j);

}  // namespace forge
