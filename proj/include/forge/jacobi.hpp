#pragma once

// Truncated Jacobi complexes of finite differential graded Lie algebras and
// their modules; degree-zero cohomology with its tower of truncation symbols;
// the induced dual local-algebra ("deformation ring") structure; obstruction
// kernels; Maurer-Cartan elements with coefficients in a local algebra; and
// two-term pair complexes (an algebra mapping to a module by a derivation).
//
// Placement convention: a wedge word of arity i with factor degrees d_1..d_i
// and an optional module factor of degree d_e sits in total degree
// (d_1 + ... + d_i) - i + d_e.  Hence for g concentrated in degree 1 the
// degree-zero part of the truncation at m is spanned by words of arity <= m,
// and H^0(J_1) = H^1(g).
//
// Differential normalization: the differential is the sum of (1) the internal
// differential applied factorwise with Koszul passing signs in the factor
// degrees and a leading (-1)^{arity-1}, the module slot counting as a factor,
// (2) the module differential with sign (-1)^{D + i + 1} for wedge arity i and
// total wedge degree D, (3) the pairwise bracket contraction over unordered
// factor pairs moved to the front with no extra sign, and (4) the module
// action of the factor at 0-indexed position j with sign
// (-1)^{j + d_j + d_j (d_{j+1} + ... + d_i)}, so that a degree-one factor
// gives d(v x e) = -v(e) + internal terms. Equivalently: words of degree-d
// factors carry the signs of symmetric words of degree-(d-1) factors under
// the standard shift, the plain differential is the transported symmetric-word
// differential, and the module case is the one-module-factor summand of the
// plain complex of the square-zero extension by the down-shifted module.
// Unordered pairwise sums replace the symmetrized sums with factorial
// prefactors; d^2 = 0 and the arity-one normalizations pin every sign.

#include "forge/artin.hpp"
#include "forge/coalgebra.hpp"
#include "forge/dgla.hpp"
#include "forge/graded.hpp"
#include "forge/matrix.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace forge {

// ---------------------------------------------------------------------------
// complexes

struct JacSlot {
  int arity = 0;
  std::vector<int> mono;  // weakly increasing flat indices into g
  int e = -1;             // flat index into the module, -1 in the plain case
  bool operator==(const JacSlot&) const = default;
};

struct JacComplex {
  const DGLA* g = nullptr;
  const GModule* mod = nullptr;  // null for the plain complex
  int m = 1;                     // arity truncation
  int lo = 0;                    // slots exist for degrees lo..hi+1, maps lo..hi
  int hi = 0;
  std::vector<std::vector<JacSlot>> slots;     // slots[deg - lo], arity-major
  std::vector<std::vector<SparseVec>> d;       // d[deg - lo][col] sparse column

  int dim(int deg) const;
  const std::vector<JacSlot>& at(int deg) const;
  // number of leading slots of degree deg with arity <= k (truncation prefix)
  int trunc_dim(int deg, int k) const;
  int find_slot(int deg, int arity, const std::vector<int>& mono, int e) const;
  Matrix diff_dense(int deg) const;  // dim(deg+1) x dim(deg)
  // apply the differential to a sparse element of degree deg
  SparseVec apply_d(int deg, const SparseVec& v) const;
};

JacComplex jacobi_complex(const DGLA& g, int m, int hi = 2);
JacComplex modular_jacobi_complex(const DGLA& g, const GModule& E, int m, int hi = 2);

// exact check of d^2 = 0 across the whole window
bool jac_d2_zero(const JacComplex& J);

// ---------------------------------------------------------------------------
// degree-wise cohomology of a truncation

struct TruncCohomology {
  int deg = 0;
  int k = 0;    // arity truncation the computation was run at
  int dim = 0;  // cohomology dimension
  // columns: canonical cocycle representatives inside the truncated slot space
  Matrix zbasis;
  // pi . zbasis = identity and pi . d = 0; rows select cohomology coordinates
  Matrix pi;
};

TruncCohomology jac_cohomology(const JacComplex& J, int k, int deg);

// ---------------------------------------------------------------------------
// deformation ring

struct DeformationRing {
  const DGLA* g = nullptr;
  int m = 1;
  JacComplex J;                     // full complex at truncation m
  std::vector<TruncCohomology> h0;  // h0[k] = H^0(J_k), k = 0..m (h0[0] empty)
  std::vector<Subspace> V;          // V[k] = image of H^0(J_k) in V^m coords
  OSStructure os;                   // on V^m = H^0(J_m)
  ArtinAlgebra R;                   // the dual local algebra, basis 1, x1, ...

  int vdim() const { return h0[m].dim; }
};

// Requires H^0(g) = 0 and H^{<0}(J_m) = 0; throws otherwise. When with_table
// is false the symbol structure and dual algebra are left empty (large-model
// mode: only the complex, the cohomology tower and the filtration are built).
DeformationRing deformation_ring(const DGLA& g, int m, bool with_table = true);

// ---------------------------------------------------------------------------
// obstruction kernels inside sym^m H^1(g)

struct ObstructionKernels {
  // owned degree-one coordinate space (one basis vector per H^1 class); the
  // monomial space below points into it
  std::unique_ptr<GradedSpace> hspace;
  PowerSpace sym;        // degree-one wedge monomials = symmetric monomials
  Subspace direct_k;     // kernel of sym^m H^1 -> H^1(J_{m-1})
  Subspace inductive_k;  // kernel of the bracket-expansion map, intersected
                         // with (previous kernel) . H^1
  std::vector<Subspace> tower;  // tower[j-1] = K^j for j = 1..m
};

ObstructionKernels obstruction_kernel(const DGLA& g, int m);

// ---------------------------------------------------------------------------
// Maurer-Cartan elements with coefficients in a local algebra

struct MCElement {
  const DGLA* g = nullptr;
  const ArtinAlgebra* R = nullptr;
  Matrix u;  // (flat dim of g) x dim(R); unit column zero, rows in degree 1
};

MCElement make_mc(const DGLA& g, const ArtinAlgebra& R, Matrix u);

// coefficient-wise bracket [u, v] over R: result rows flat in g
Matrix bracket_over(const DGLA& g, const ArtinAlgebra& R, const Matrix& u, const Matrix& v);

// delta(u) + 1/2 [u,u] = 0 exactly
bool mc_check(const MCElement& u);

// the tautological element sum_c (arity-one part of the c-th cocycle that
// represents x_c) with coefficients the dual basis of the ring
MCElement tautological_mc(const DeformationRing& DR);

// truncated exponential sum_{i=1..m} (1/i!) u^{wedge i} as an element of
// J^0_m with coefficients in R: (dim J^0) x dim(R)
Matrix epsilon_element(const DeformationRing& DR, const MCElement& u);

// class of epsilon in H^0(J_m) tensor R: (dim V^m) x dim(R)
Matrix epsilon_class(const DeformationRing& DR, const MCElement& u);

// ---------------------------------------------------------------------------
// brute-force Maurer-Cartan classification oracle
//
// Expands a universal solution over a power-series truncation on dim H^1(g)
// variables, order by order; obstruction classes generate an ideal, the
// expansion continues over the quotient. The result packages the quotient
// algebra (the brute-force model of the deformation ring) and the per-order
// obstruction data.

struct MCExpansion {
  ArtinAlgebra ambient;          // power-series truncation on h1 variables
  Subspace ideal;                // saturated obstruction ideal inside it
  ArtinAlgebra quotient;         // ambient / ideal
  Matrix proj;                   // quotient coordinates of ambient basis
  Matrix u;                      // MC solution over the quotient
  std::vector<int> graded_dims;  // dim gr^k(quotient), k = 0..m
  // grade[k] = ambient basis indices of monomial degree k, ascending
  std::vector<std::vector<int>> grade;
  // omega[j], j = 0..m-2: obstruction classes at order j+2, as a matrix
  // (dim H^2(g)) x (number of degree-(j+2) ambient monomials), taken modulo
  // nothing (raw coefficients of the expansion failure in H^2-classes)
  std::vector<Matrix> omega;
};

MCExpansion mc_expand(const DGLA& g, int m);

// ---------------------------------------------------------------------------
// pair complexes: a DGLA g, a g-module h, and a derivation d: g -> h
// (degree 0), assembled into the cone algebra with h shifted up by one.

// the cone: degrees of h shifted +1, names prefixed "g." / "h.";
// bracket extends g's by [x, eta] = (-1)^{|x|} (x.eta) and [eta, eta'] = 0;
// differential is (delta_g + d) on the g part and -d_h on the h part, which
// makes the differential square to zero exactly when d is a chain map and
// makes it a bracket derivation exactly when d satisfies the derivation
// identity d[x,y] = x.d(y) - (-1)^{|x||y|} y.d(x). Throws (via the underlying
// validation) if any axiom fails.
DGLA pair_cone(const DGLA& g, const GModule& h, const Matrix& dmat);

struct PairRing {
  std::unique_ptr<DGLA> cone;  // owned; ring.g and ring.J.g point at it
  DeformationRing ring;
  std::vector<int> gidx;  // cone flat index of each g flat basis vector
  std::vector<int> hidx;  // cone flat index of each h flat basis vector
};

PairRing dgla_pair_ring(const DGLA& g, const GModule& h, const Matrix& dmat, int m);

// Independent degree-zero model: when g is concentrated in degree 0 and h in
// degree 0, H^0 of the pair complex at truncation m equals the cokernel of
// the contraction map g (x) S^{<=m-1}(h) -> S^{<=m}(h) sending
// x (x) Q to d(x).Q + x.(Q) with the action extended as a derivation.
// Returns the cokernel dimension for every truncation k = 1..m (the map is
// not homogeneous across symmetric levels, so truncations are compared).
std::vector<int> pair_coker_dims(const DGLA& g, const GModule& h, const Matrix& dmat, int m);

// the h-component of the Maurer-Cartan equation of the cone:
// delta_h(a) + u.(a) = d(u), with a in degree 0 of h and u in degree 1 of g
bool trivialization_check(const DGLA& g, const GModule& h, const Matrix& dmat,
                          const MCElement& u, const Matrix& a);

// the truncated exponential of the combined cone element (u, a), as an
// element of J^0 of the pair complex with coefficients in u's ring:
// (dim J^0(cone)) x dim(R). Its columns are closed when (u, a) satisfies
// the Maurer-Cartan and trivialization equations.
Matrix classifying_element(const PairRing& P, const MCElement& u, const Matrix& a);

// ---------------------------------------------------------------------------
// universal module

struct UniversalModule {
  JacComplex JE;                    // modular complex at truncation m
  std::vector<TruncCohomology> h0;  // H^0(J_k(g,E)), k = 0..m
  MOSStructure mos;                 // filtration + coaction over DR.os
  CModule C;                        // module of comodule maps over DR.R
};

UniversalModule universal_module(const DeformationRing& DR, const GModule& E);

// twisted-kernel oracle: kernel of (d_E + u-action) on R (x) E^0 -> R (x) E^1
// as a module over R, for E concentrated in degrees 0 and 1
RModule twisted_kernel_module(const DeformationRing& DR, const GModule& E);

// is there an invertible R-module map A -> B?
bool rmodule_iso_exists(const RModule& A, const RModule& B);

}  // namespace forge
