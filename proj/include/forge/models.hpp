#pragma once

// Model bundles: a named package of algebraic data — a differential graded
// Lie algebra with optional graded modules, contraction pairings between
// modules, an optional two-term pair (a derivation from the algebra into a
// distinguished module), and an optional Calabi-Yau-type wedge model — plus
// the built-in regression corpus and the bundle-level validation report.
//
// Bundles store raw tables so that deliberately broken fixtures can be
// loaded and inspected; bundle_check runs every constructor and identity
// check and reports item-by-item instead of throwing.
//
// Contraction conventions (pairing i(v): E_from -> E_to per algebra basis
// vector v of degree |v|):
//   * degree:        i(v) raises the module grading by |v| - 0 on the from
//                    side and lands in the to side shifted by |v| - 1 in
//                    homological bookkeeping; as a matrix it has pure degree
//                    |v| with respect to the module gradings.
//   * differential:  d_to(i(v) w) = i(delta v) w + (-1)^{|v|} i(v) d_from(w)
//   * bracket:       i([x,y]) = L_x i(y) - (-1)^{|x||y|} L_y i(x), with the
//                    Lie action L taken on the target module; the two-slot
//                    contraction term of the general identity is identically
//                    zero for every bundle this format carries.

#include "forge/cy.hpp"
#include "forge/dgla.hpp"

#include <string>
#include <vector>

namespace forge {

struct RawDGLA {
  GradedSpace g;
  std::vector<std::vector<SparseVec>> bracket;  // bracket[a][b]
  Matrix delta;
};

struct RawModule {
  std::string name;
  GradedSpace E;
  Matrix dE;
  std::vector<Matrix> act;  // per algebra flat index
};

struct RawContraction {
  std::string from, to;       // module names
  std::vector<Matrix> table;  // table[v]: E_from -> E_to, per algebra flat v
};

struct RawPair {
  std::string module;  // name of the target module
  Matrix d;            // derivation: algebra coordinates -> module coordinates
};

struct ModelBundle {
  std::string name;

  bool has_dgla = false;
  RawDGLA dgla;
  std::vector<RawModule> modules;
  std::vector<RawContraction> contractions;
  bool has_pair = false;
  RawPair pair;

  bool has_cy = false;
  CYModel cy;

  const RawModule* find_module(const std::string& n) const;
};

// Bundle validation: construct-and-check every part, one labelled item per
// identity. Items (in order): "bundle-structure" (cross references and table
// shapes), "algebra-axioms", one "module-<name>" per module, per contraction
// "contraction-<from>-<to>-{degree,differential,bracket}", "pair-derivation",
// then every Calabi-Yau validation item. ok() requires every hard item;
// the two soft smoothing items only clear sharp_ok, as in CYCheck.
struct BundleCheck {
  std::vector<std::pair<std::string, bool>> items;
  bool sharp_ok = true;

  bool ok() const;
  std::string first_fail() const;  // "" when everything passed
};

BundleCheck bundle_check(const ModelBundle& b);

// Checked constructors for the algebra side (throw on axiom violation).
DGLA bundle_dgla(const ModelBundle& b);
GModule bundle_module(const ModelBundle& b, const DGLA& g, const std::string& name);

// ---------------------------------------------------------------------------
// built-in corpus

ModelBundle model_abelian3();     // three commuting degree-one generators
ModelBundle model_obstructed2();  // two degree-one generators bracketing onto
                                  // a degree-two class: the minimal obstructed
                                  // algebra
ModelBundle model_torus3();       // constant-coefficient threefold
ModelBundle model_k3();           // constant-coefficient surface
ModelBundle model_blockcy(int which);  // threefold with attached square
                                       // blocks; which = 1, 2, 3
ModelBundle model_modecy();       // threefold with two nilpotent mode sectors
ModelBundle model_clemens();      // obstructed algebra with a pair of graded
                                  // modules and a contraction pairing
ModelBundle model_pairdemo();     // abelian algebra with a module derivation
ModelBundle model_broken();       // deliberately inconsistent wedge fixture

// Every well-formed corpus bundle above, in a fixed order (broken excluded).
std::vector<ModelBundle> model_corpus();

}  // namespace forge
