#pragma once

// Differential graded Lie algebras over Q(i) with structure-constant brackets,
// and graded modules over them. Conventions:
//   [x,y] = -(-1)^{|x||y|} [y,x]
//   [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|} [y,[x,z]]
//   δ[x,y] = [δx,y] + (-1)^{|x|} [x,δy],  δ² = 0, |δ| = +1
//   action: [v,w]·e = v·(w·e) - (-1)^{|v||w|} w·(v·e)
//           d_E(v·e) = δ(v)·e + (-1)^{|v|} v·d_E(e)
// All axioms are checked exhaustively on basis elements at construction.

#include "forge/chain.hpp"
#include "forge/graded.hpp"

#include <vector>

namespace forge {

struct DGLA {
  GradedSpace g;
  std::vector<std::vector<SparseVec>> bracket;  // bracket[a][b] = [x_a, x_b]
  Matrix delta;                                 // degree +1

  int dim() const { return g.dim(); }
  SparseVec br(const SparseVec& x, const SparseVec& y) const;
};

DGLA make_dgla(GradedSpace g, std::vector<std::vector<SparseVec>> bracket, Matrix delta);
DGLA abelian_dgla(GradedSpace g, Matrix delta);

struct GModule {
  GradedSpace E;
  Matrix dE;                 // degree +1
  std::vector<Matrix> act;   // per DGLA basis element: E -> E of that degree

  int dim() const { return E.dim(); }
};

GModule make_gmodule(const DGLA& g, GradedSpace E, Matrix dE, std::vector<Matrix> act);
GModule trivial_gmodule(const DGLA& g, GradedSpace E, Matrix dE);

// The complex (g, δ) over its full degree range.
CochainComplex dgla_complex(const DGLA& g);

// dim H^k(g, δ)
int dgla_h_dim(const DGLA& g, int k);

// Subspace of ker δ ∩ g^k projecting onto a canonical copy of H^k (the slot
// split's C), as a subspace of the flat coordinates of g.
SlotSplit dgla_h_split(const DGLA& g, int k);

}  // namespace forge
