#pragma once

// Finite-dimensional commutative local algebras with nilpotent maximal ideal,
// their filtered dual coalgebras ("symbol structures"), and modules over them.
// Everything is validated on construction by exhaustive basis checks.

#include "forge/matrix.hpp"

#include <string>
#include <vector>

namespace forge {

struct ArtinAlgebra {
  // basis 0 is the unit; 1..dim-1 span the maximal ideal
  std::vector<std::string> names;
  std::vector<std::vector<SparseVec>> table;  // table[i][j] = basis_i * basis_j
  int exponent = 0;                           // largest n with m^n != 0
  std::vector<Subspace> ideal_pow;            // ideal_pow[k] = m^k, k = 0..exponent+1

  int dim() const { return static_cast<int>(names.size()); }
  SparseVec mul(const SparseVec& x, const SparseVec& y) const;
  Matrix mult_by(int i) const;  // left-multiplication matrix of basis i
};

// Validates: unit, commutativity, associativity, m nilpotent. Throws on
// violation. check_assoc_limit bounds the exhaustive associativity loop; above
// it a deterministic sample of triples is checked instead.
ArtinAlgebra make_artin(std::vector<std::string> names,
                        std::vector<std::vector<SparseVec>> table, int check_assoc_limit = 64);

// The base field as an artin algebra, and truncated polynomial rings
// k[t1..tk]/m^(n+1) used as oracles.
ArtinAlgebra artin_base_field();
ArtinAlgebra artin_power_series(int vars, int order);

struct OSStructure {
  int n = 0;     // exponent
  int vdim = 0;  // dimension of the coordinate space V = V^n
  std::vector<Subspace> V;  // V[0] = 0 <= V[1] <= ... <= V[n] = full
  Matrix comult;            // V -> V (x) V, entry ((a,b), c) at row a*vdim+b
};

// Validation: filtration nesting, cocommutativity, coassociativity, and the
// symbol condition comult(V[i]) ⊆ V[i-1] (x) V[i-1]. Throws on violation.
void validate_os(const OSStructure& os);

// Dualities between the two presentations.
OSStructure dual_os(const ArtinAlgebra& R);
ArtinAlgebra dual_artin(const OSStructure& os, const std::vector<std::string>& names,
                        int check_assoc_limit = 64);

// Quotient of an artin algebra by an ideal given as a subspace of the
// coefficient space (must avoid the unit coordinate and be closed under
// multiplication by every basis element; throws otherwise). Returns the
// quotient algebra (unit first, names inherited from the complement
// coordinates) together with the projection matrix (quotient dim x dim).
std::pair<ArtinAlgebra, Matrix> quotient_algebra(const ArtinAlgebra& A, const Subspace& ideal);

struct RModule {
  const ArtinAlgebra* R = nullptr;
  int dim = 0;
  std::vector<Matrix> act;  // per R-basis element
};

RModule make_rmodule(const ArtinAlgebra& R, std::vector<Matrix> act);
RModule free_rmodule(const ArtinAlgebra& R, int rank);

// Canonical freeness test: lift a residue basis along the canonical complement
// of m*M and test bijectivity of the induced map R^rank -> M.
bool is_free_rmodule(const RModule& M, int rank);

// A morphism of R-modules is a matrix commuting with every action matrix.
bool is_rmodule_map(const RModule& A, const RModule& B, const Matrix& f);

}  // namespace forge
