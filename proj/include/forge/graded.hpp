#pragma once

// Graded vector spaces and their signed exterior / symmetric powers.
//
// Sign conventions (fixed once, used everywhere):
//   * adjacent swap of factors of degrees d1, d2 contributes
//       exterior  kind: (-1)^(1 + d1*d2)
//       symmetric kind: (-1)^(d1*d2)
//   * a repeated factor of degree d vanishes exactly when its self-swap sign
//     is -1 (exterior: even d; symmetric: odd d).
//   * an operator of degree |f| moving past a factor of degree d picks up the
//     pure Koszul sign (-1)^(|f|*d), independent of the power kind.
//
// The flat basis order of a graded space is (degree ascending, name
// ascending); monomials are weakly increasing sequences of flat indices in
// lexicographic order. All enumeration is deterministic.

#include "forge/matrix.hpp"

#include <string>
#include <tuple>
#include <vector>

namespace forge {

struct GradedSpace {
  std::vector<int> degrees;        // per flat index, non-decreasing
  std::vector<std::string> names;  // per flat index

  static GradedSpace make(std::vector<std::pair<int, std::string>> basis);

  int dim() const { return static_cast<int>(degrees.size()); }
  int degree(int k) const { return degrees[k]; }
  std::vector<int> of_degree(int d) const;
  int find(const std::string& name) const;  // -1 if absent
  bool operator==(const GradedSpace& o) const = default;
};

enum class PowerKind { exterior, symmetric };

int swap_sign_int(PowerKind k, int d1, int d2);
bool repeat_vanishes(PowerKind k, int d);

// A signed word: coeff * (monomial given by flat indices). coeff 0 means the
// word normalized to zero.
struct Word {
  Scalar coeff;
  std::vector<int> idx;
};

Word canonicalize(const GradedSpace& V, PowerKind kind, std::vector<int> word,
                  Scalar coeff = Scalar(1));

// Sign of realizing the permuted word (x_{perm[0]}, ..., x_{perm[k-1]}) from
// (x_0, ..., x_{k-1}) by adjacent swaps; degrees[t] is the degree of x_t.
Scalar power_sign(PowerKind kind, const std::vector<int>& perm, const std::vector<int>& degrees);

// The exterior-convention permutation sign (the default convention).
inline Scalar koszul_sign(const std::vector<int>& perm, const std::vector<int>& degrees) {
  return power_sign(PowerKind::exterior, perm, degrees);
}

struct PowerSpace {
  const GradedSpace* V = nullptr;
  int arity = 0;
  PowerKind kind = PowerKind::exterior;
  std::vector<std::vector<int>> monos;  // lexicographic order
  std::vector<int> mono_degree;         // sum of factor degrees

  int dim() const { return static_cast<int>(monos.size()); }
  int find(const std::vector<int>& m) const;  // -1 if absent
};

PowerSpace power_space(const GradedSpace& V, PowerKind kind, int arity);

// Only monomials whose total internal degree lies in [min_total, max_total].
PowerSpace power_space_window(const GradedSpace& V, PowerKind kind, int arity, int min_total,
                              int max_total);

// Generating-function dimension count, for cross-checking enumeration.
long power_dim_formula(const GradedSpace& V, PowerKind kind, int arity);

struct GradedMap {
  const GradedSpace* dom = nullptr;
  const GradedSpace* cod = nullptr;
  int degree = 0;
  Matrix mat;  // cod.dim() x dom.dim(), supported on matching degrees
};

GradedMap make_graded_map(const GradedSpace& dom, const GradedSpace& cod, int degree, Matrix mat);
GradedMap zero_graded_map(const GradedSpace& dom, const GradedSpace& cod, int degree);

// Leibniz extension of an endomorphism f : V -> V as one-factor-at-a-time
// action on a power of V, with pure Koszul passing signs. Throws if a produced
// monomial is missing from cod_power (window too small).
Matrix derivation_extension(const GradedMap& f, const PowerSpace& dom_power,
                            const PowerSpace& cod_power);

// Product of two elements, by concatenation and normalization.
SparseVec power_multiply(const PowerSpace& A, const SparseVec& a, const PowerSpace& B,
                         const SparseVec& b, const PowerSpace& AB);

// Splitting of each monomial of P into an (arity of P1, arity of P2) pair,
// summed over position subsets with Koszul signs: the comultiplication
// component. Entries whose halves fall outside windowed factor spaces are
// dropped when drop_missing is set, otherwise this throws.
// Result: per monomial index of P, a list of (index in P1, index in P2, coeff).
std::vector<std::vector<std::tuple<int, int, Scalar>>> unshuffle(const PowerSpace& P,
                                                                 const PowerSpace& P1,
                                                                 const PowerSpace& P2,
                                                                 bool drop_missing = false);

}  // namespace forge
