#pragma once

// Period-map machinery over a Calabi-Yau coefficient model: the interior-
// multiplication (Gauss-Manin) operator between the twisted and trivial
// modular Jacobi complexes of the tangent sections, the period contraction of
// degree-zero Jacobi words, the smoothing hypercocycle that lifts a word of
// tangent classes, the closed formula for the resulting period Taylor
// coefficient, and the contraction towers between module-coefficient Jacobi
// complexes (weak chain maps whose commutation defect is exact).
//
// Sign conventions (single source of truth, shared with the Jacobi
// differential normalization in jacobi.hpp):
//
//   * extraction: removing the factor at 0-indexed position j from a wedge
//     word with factor degrees d_1..d_i and applying an operator of the
//     factor to the module slot carries the sign
//     (-1)^{j + d_j + d_j (d_{j+1} + ... + d_i)}; both the action term of the
//     twisted differential and the interior/contraction operators here use
//     this one rule.
//   * interior multiplication: M = exp(M_1) where M_1 extracts one factor
//     with the sign above and contracts it into the coefficient; M is
//     arity-unitriangular (identity on the no-contraction part) and satisfies
//     the exact intertwining d_trivial . M = M . d_twisted.
//   * smoothing tower: level l of the hypercocycle consists of symmetric
//     words obtained by clustering the m inputs into m - l groups and merging
//     each group by the smoothing product #, one term of unit coefficient per
//     distinct merge tree; the ladder d̄(level l+1) = (pairwise bracket of
//     level l) is verified at run time and the assembled form weights level l
//     by (-1)^l.
//   * closed coefficient formula: sum over chain lengths j = 1..k with sign
//     (-1)^{j-1}, each ordered j-tuple contributing its left-nested # chain
//     star-multiplied into the remaining letters with weight (k-j)!/k!.
//
// The tower route (splitting_lift + star contraction) and the closed formula
// agree on harmonic classes bidegree by bidegree; the two implementations are
// independent and their agreement is a checked identity, not a construction.

#include "forge/cy.hpp"
#include "forge/jacobi.hpp"
#include "forge/models.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace forge {

// ---------------------------------------------------------------------------
// interior multiplication between twisted and trivial Jacobi complexes

struct GMOperator {
  const CYModel* mod = nullptr;
  const CYTangentComplex* tc = nullptr;
  int m = 1;
  JacComplex tw;               // modular complex with the Lie action
  JacComplex triv;             // same slots, zero action
  std::vector<OpCols> op;      // op[deg - lo]: one sparse column per slot
  int lo = 0, hi = 0;          // operator exists for degrees lo..hi+1
};

GMOperator gm_operator(const CYModel& mod, const CYTangentComplex& tc, int m,
                       int hi = 2);

// d_trivial . M = M . d_twisted across the whole window, exactly.
bool gm_chain_check(const GMOperator& M);

// On every slot generator with coefficient bidegree (p, q), every component
// of the image has coefficient bidegree (p', q') with p' >= p - m.
bool gm_hodge_shift(const GMOperator& M);

// ---------------------------------------------------------------------------
// period contraction of degree-zero words

// i-word of a degree-zero monomial applied to the volume form: the word's
// factors (all of tangent degree one) are contracted in as polyvectors.
SparseVec period_word_form(const CYModel& mod, const CYTangentComplex& tc,
                           const std::vector<int>& mono);

// Linear extension to a sparse degree-zero element of the plain complex.
SparseVec period_contract(const CYModel& mod, const CYTangentComplex& tc,
                          const JacComplex& J, const SparseVec& v);

// Harmonic classes of a d̄-closed form, split by bidegree: coordinates in the
// declared harmonic basis at each bidegree carrying a nonzero component.
// Throws when some component is not harmonic modulo the d̄-image.
std::map<std::pair<int, int>, std::vector<Scalar>> harmonic_split(
    const CYModel& m, const SparseVec& x);

// ---------------------------------------------------------------------------
// smoothing hypercocycle and the period Taylor coefficient

struct FormWord {
  Scalar coeff;
  std::vector<SparseVec> letters;  // even-bidegree algebra elements
};
using WordSum = std::vector<FormWord>;

struct Hypercocycle {
  int m = 0;
  std::vector<WordSum> rung;  // rung[l]: words of length m - l, l = 0..m-1
};

// Build the tower for harmonic (n-1,1) inputs; verifies the ladder
// d̄(rung[l+1]) = (pairwise # -> bracket of rung[l]) exactly and throws a
// runtime_error naming the first broken level otherwise.
Hypercocycle splitting_lift(const CYModel& m, const std::vector<SparseVec>& a);

// Star-contraction sum_l (-1)^l (star product of each word's letters).
SparseVec hypercocycle_form(const CYModel& m, const Hypercocycle& b);

// Closed chain formula for the same coefficient (independent route).
SparseVec period_coefficient_form(const CYModel& m, const std::vector<SparseVec>& a);

// Harmonic classes of the closed formula, by bidegree.
std::map<std::pair<int, int>, std::vector<Scalar>> period_coefficient(
    const CYModel& m, const std::vector<SparseVec>& a);

// Tower route and closed route agree on harmonic classes at every bidegree.
bool period_consistency_check(const CYModel& m, const std::vector<SparseVec>& a);

// ---------------------------------------------------------------------------
// contraction towers between module-coefficient Jacobi complexes

struct ContractionTower {
  const DGLA* g = nullptr;
  int m = 1;
  JacComplex from;           // J_m(g, F)
  JacComplex to;             // J_{max(m-1,1)}(g, T); for m = 1 only the
                             // arity-zero part of the target is ever hit
  std::vector<Matrix> map;   // map[deg - lo]: to.dim(deg+1) x from.dim(deg)
  int lo = 0, hi = 0;        // map exists for degrees lo..hi+1, checks lo..hi
};

// (v_1..v_k, w) -> sum_j +-(v_1..v^_j..v_k, i(v_j)w) with the extraction
// sign; a degree +1 map of complexes.
ContractionTower contraction_chain_map(const DGLA& g, const GModule& F,
                                       const GModule& T,
                                       const std::vector<Matrix>& table, int m);

// Anticommutation defect d.i + i.d per degree; zero means a strict chain map.
Matrix contraction_defect(const ContractionTower& t, int deg);
bool contraction_strict(const ContractionTower& t);
// Every defect column is exact in the target complex (weak chain map).
bool contraction_defect_exact(const ContractionTower& t);

// ---------------------------------------------------------------------------
// vanishing of the obstruction pairing

// For a bundle carrying a dgla, two modules and a contraction between them:
// the order-<= m obstruction classes span a subspace of H^2 of the algebra;
// each class acts on module cohomology through the contraction table, and the
// composite must vanish even when the contraction is nonzero on cochains.
struct VanishingReport {
  int m = 2;                     // highest obstruction order examined
  int ob_dim = 0;                // dimension of the obstruction span in H^2
  bool cochain_nonzero = false;  // some obstruction rep contracts nonzero
  bool composite_zero = false;   // all induced cohomology maps vanish
  std::vector<std::string> lines;
};

VanishingReport obstruction_pairing_check(const ModelBundle& b, int m);

}  // namespace forge
