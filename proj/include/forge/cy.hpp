#pragma once

// Finite bigraded models of the calculus on a compact complex-geometry
// desk example: a graded-commutative bigraded algebra A^{p,q} (0 <= p,q <= n)
// with two anticommuting square-zero derivations ∂ (1,0) and ∂̄ (0,1), a
// distinguished volume element Φ in A^{n,0}, a frame of n odd contraction
// operators C_j of bidegree (-1,0), a smoothing operator G (0,0), a trace
// operator Λ (-1,-1), an optional adjoint ∂̄* (0,-1), a declared harmonic
// basis per bidegree, and an integration covector supported on A^{n,n}.
//
// Conventions:
//   wedge: x∧y = (-1)^{|x||y|} y∧x with |x| = p+q (total degree)
//   derivations: ∂(x∧y) = ∂x∧y + (-1)^{|x|} x∧∂y, same for ∂̄
//   contraction normalization: C_n ∘ ... ∘ C_1 (Φ) = 1
//   transported product:  a*b = P(P⁻¹(a) ∧ P⁻¹(b)) where
//     P(ω⊗e_S) = ω ∧ (C_{s_k} ∘ ... ∘ C_{s_1})(Φ), S = {s_1 < ... < s_k},
//     and ∧ on polyvectors is graded (frame slots odd, coefficients
//     by column degree q).
//   smoothing product:  a#b = √-1 ∂ Λ G ∂(a*b)
//   smoothing contract: c = √-1 ∂̄ ∂ Λ G (c) for every ∂- and ∂̄-closed
//     element of im∂ + im∂̄ + im(∂+∂̄); when ∂̄* is supplied,
//     (∂̄∂̄* + ∂̄*∂̄) G = id on all of im∂ + im∂̄ + im(∂+∂̄).
//   Lie operator of a polyvector v with coefficient degree q:
//     L_v = d ∘ i_v + (-1)^q i_v ∘ d,   d = ∂ + ∂̄.

#include "forge/dgla.hpp"
#include "forge/matrix.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace forge {

// ---- column-sparse linear operators ----------------------------------------

// A linear operator stored one sparse column per source flat.
using OpCols = std::vector<SparseVec>;

SparseVec op_apply(const OpCols& f, const SparseVec& x);
OpCols op_compose(const OpCols& f, const OpCols& g);  // x -> f(g(x))
OpCols op_zero(int dim);
Matrix op_dense(int rows, const OpCols& f);
OpCols op_from_dense(const Matrix& m);
bool op_is_zero(const OpCols& f);

// ---- model data ------------------------------------------------------------

// A tangent generator: a polyvector with one frame slot,
// t = Σ_j coeff[j] ⊗ e_j with coeff[j] in A^{0,q}.
struct CYTangent {
  std::string name;
  int q = 0;
  std::vector<SparseVec> coeff;  // one entry per frame direction
};

// Table models store the full wedge pair table; poly models (polynomial
// coefficients) compute products procedurally since their pair table
// would be quadratic in a large dimension.
enum class CYKind { table, poly };

struct CYModel {
  CYKind kind = CYKind::table;
  int poly_maxdeg = 0;             // poly models: coefficient degree cutoff
  int n = 1;
  std::vector<std::string> names;  // flat basis of A
  std::vector<int> p, q;           // bidegree per flat
  int unit = -1;                   // flat index of 1 in A^{0,0}
  std::vector<std::vector<SparseVec>> wedge;  // wedge[a][b] = x_a ∧ x_b (table kind)
  OpCols dpar, dbar;               // ∂, ∂̄
  OpCols lam;                      // Λ, bidegree (-1,-1)
  OpCols green;                    // G, bidegree (0,0)
  bool has_dbar_adj = false;
  OpCols dbar_adj;                 // optional ∂̄*, bidegree (0,-1)
  SparseVec phi;                   // volume element in A^{n,0}
  std::vector<OpCols> frame;       // n contraction operators C_j
  std::vector<CYTangent> tangent;  // tangent section generators
  std::vector<SparseVec> harmonic; // declared harmonic basis vectors
  SparseVec trace;                 // covector supported on A^{n,n}

  int dim() const { return (int)names.size(); }
};

int cy_find(const CYModel& m, const std::string& name);
std::vector<int> cy_flats(const CYModel& m, int pp, int qq);

// Bidegree of a homogeneous vector; false when zero or mixed.
bool cy_bidegree(const CYModel& m, const SparseVec& x, int& pp, int& qq);

SparseVec cy_mul(const CYModel& m, const SparseVec& x, const SparseVec& y);
SparseVec cy_d(const CYModel& m, const SparseVec& x);  // ∂ + ∂̄
Scalar cy_trace(const CYModel& m, const SparseVec& x);
// trace(x ∧ y) — the integration pairing
Scalar cy_pair(const CYModel& m, const SparseVec& x, const SparseVec& y);

// ---- polyvector transport --------------------------------------------------

// Polyvector term: (frame subset mask, coefficient flat index with p = 0).
using PVTerm = std::pair<int, int>;
using PVVec = std::map<PVTerm, Scalar>;

// Contract by the frame subset, lowest index applied first.
SparseVec cy_mask_contract(const CYModel& m, int mask, const SparseVec& x);
// i_v(x) = Σ coeff · ω ∧ (masked contraction of x)
SparseVec cy_pv_apply(const CYModel& m, const PVVec& v, const SparseVec& x);
// P(v) = i_v(Φ)
SparseVec cy_pv_realize(const CYModel& m, const PVVec& v);
// Solve P(v) = a for a homogeneous a; throws when a is not in the image.
PVVec cy_pv_invert(const CYModel& m, const SparseVec& a);
// Graded product of polyvectors.
PVVec cy_pv_mul(const CYModel& m, const PVVec& a, const PVVec& b);
// Coefficient column degree of a polyvector (throws when mixed).
int cy_pv_qdeg(const CYModel& m, const PVVec& v);
// The singleton-mask polyvector of a tangent generator.
PVVec cy_tangent_pv(const CYModel& m, const CYTangent& t);

// ---- products --------------------------------------------------------------

SparseVec cy_star(const CYModel& m, const SparseVec& a, const SparseVec& b);
// Left-nested chain a_1 * a_2 * ... (associative, so nesting is immaterial).
SparseVec cy_star_word(const CYModel& m, const std::vector<SparseVec>& as);
// a#b = √-1 ∂ Λ G ∂ (a*b).  Checks ∂(a#b) = 0 always, and
// ∂̄(a#b) = ∂(a*b) when both inputs are ∂̄-closed; throws on violation.
SparseVec cy_sharp(const CYModel& m, const SparseVec& a, const SparseVec& b);

// L_v applied to x for a polyvector v of pure coefficient degree.
SparseVec cy_lie_apply(const CYModel& m, const PVVec& v, const SparseVec& x);

// Compare ∂(i_vΦ * i_wΦ) with the operator bracket [L_v, i_w] applied to Φ.
// Requires i_vΦ and i_wΦ to be ∂-closed; returns both sides.
bool cy_tt_check(const CYModel& m, const PVVec& v, const PVVec& w,
                 SparseVec* boundary_side = nullptr,
                 SparseVec* bracket_side = nullptr);

// ---- harmonic structure ----------------------------------------------------

// Indices into m.harmonic with the given bidegree.
std::vector<int> cy_harmonic_at(const CYModel& m, int pp, int qq);
// Project a ∂̄-closed homogeneous vector to its declared-harmonic
// representative along im ∂̄.  Throws when x is not ∂̄-closed.
SparseVec cy_harmonic_project(const CYModel& m, const SparseVec& x);
// Coordinates of the projection in the declared harmonic basis at (pp,qq).
std::vector<Scalar> cy_harmonic_coords(const CYModel& m, const SparseVec& x,
                                       int pp, int qq);

// ---- validation ------------------------------------------------------------

struct CYCheck {
  std::vector<std::pair<std::string, bool>> items;
  bool sharp_ok = true;  // smoothing/adjoint contracts (soft: marks #-restricted)
  bool ok() const;       // all hard items pass
  std::string first_fail() const;
};

CYCheck cy_validate(const CYModel& m);

// ---- tangent complex -------------------------------------------------------

// The tangent sections as a DGLA (degree = coefficient column degree) with
// the ambient algebra as a module (graded by total degree, action = Lie).
struct CYTangentComplex {
  DGLA g;
  GModule mod;          // action by Lie operators
  GModule mod_trivial;  // same underlying complex, zero action
  std::vector<int> a2e, e2a;  // A flat index <-> module flat index
  std::vector<int> t2g, g2t;  // tangent index <-> DGLA flat index
  Matrix forms;                     // column r = i_{t_r}(Φ)
  std::vector<OpCols> contraction;  // i_{t_r} on A
};

CYTangentComplex cy_tangent_complex(const CYModel& m);

// ---- builders --------------------------------------------------------------

// Constant-coefficient exterior model: Λ(θ_1..θ_n, θ̄_1..θ̄_n), all
// differentials zero, declared harmonic basis = all flats, Φ = θ_1...θ_n.
// Tangent generators: e_j (q = 0) and θ̄_k ⊗ e_j (q = 1).
CYModel cy_torus(int n);

// Attach a 4-flat square block {x, ∂x, ∂̄x, ∂∂̄x} based at bidegree (pp,qq)
// to a model; cross products with existing flats vanish, frame contraction
// maps ∂x back to the block, and Λ/G/∂̄* tables satisfy both contracts.
void cy_attach_block(CYModel& m, int pp, int qq);

// Exterior model with `modes` additional wedge-active nilpotent sectors
// (u_i · Λ(θ,θ̄), u_i u_j = 0, ∂u_i = u_i θ_i, ∂̄u_i = u_i θ̄_i) and a
// twisted declared harmonic basis in bidegree (n-1,1); gives nonzero #.
CYModel cy_mode_model(int n, int modes);

// Polynomial-coefficient holomorphic model: coefficients in
// Q(i)[z_1..z_n] truncated above total degree maxdeg, ∂ = Σ θ_j ∂/∂z_j,
// ∂̄ = 0.  No smoothing data; used for bracket comparisons only.
CYModel cy_poly_torus(int n, int maxdeg);
// Flat index of the monomial z^expo · θ_S · θ̄_T in a poly torus.
int cy_poly_flat(const CYModel& m, int n, const std::vector<int>& expo,
                 int smask, int tmask);

}  // namespace forge
